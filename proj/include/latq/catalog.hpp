// Copyright 2026 The latq Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latq/identify.hpp"
#include "latq/linalg.hpp"
#include "latq/lll.hpp"
#include "latq/rational.hpp"

namespace latq {

/// A lattice in exact textbook coordinates: rows of `basis` divided by
/// `denominator`, with inner products taken through `ambient_gram`
/// (identity when empty).
struct RationalLattice {
  IntRows basis;
  std::int64_t denominator = 1;
  RationalMatrix ambient_gram;

  std::size_t rank() const { return basis.size(); }
  std::size_t ambient_dim() const { return basis.empty() ? 0 : basis.front().size(); }
};

/// Exact Gram matrix of the stored basis.
inline RationalMatrix exact_gram(const RationalLattice& lat) {
  const std::size_t n = lat.rank();
  const std::size_t m = lat.ambient_dim();
  RationalMatrix b(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) b(i, j) = Rational(lat.basis[i][j], lat.denominator);
  if (lat.ambient_gram.rows() == 0) return b * b.transposed();
  return b * lat.ambient_gram * b.transposed();
}

/// Where a reference NSM value comes from.
enum class Provenance { kExact, kPublished, kEstimated };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kExact: return "exact";
    case Provenance::kPublished: return "published";
    case Provenance::kEstimated: return "estimated";
  }
  return "unknown";
}

struct ReferenceNsm {
  double value = 0.0;
  Provenance provenance = Provenance::kPublished;
};

struct CatalogEntry {
  std::string name;
  std::size_t dim = 0;
  RationalLattice exact;
  GeneratorMatrix generator;  // lower-triangular, same Gram as `exact`
  std::optional<ReferenceNsm> nsm;
  std::vector<Shell> theta_prefix;  // unit volume, nonzero shells only
};

namespace detail {

inline IntRows unit_rows(std::size_t m) {
  IntRows r(m, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) r[i][i] = 1;
  return r;
}

inline std::vector<std::int64_t> scaled(std::vector<std::int64_t> v, std::int64_t c) {
  for (auto& x : v) x *= c;
  return v;
}

inline std::vector<std::int64_t> difference_vector(std::size_t m, std::size_t i, std::size_t j, std::int64_t c = 1) {
  std::vector<std::int64_t> v(m, 0);
  v[i] = c;
  v[j] = -c;
  return v;
}

// Roots e_i - e_{i+1} of A_{m-1} plus e_0 + e_1: spans D_m.
inline IntRows d_generators(std::size_t m, std::int64_t c) {
  IntRows g;
  for (std::size_t i = 0; i + 1 < m; ++i) g.push_back(difference_vector(m, i, i + 1, c));
  std::vector<std::int64_t> v(m, 0);
  v[0] = c;
  v[1] = c;
  g.push_back(v);
  return g;
}

// {x in Z^m : C x = 0 mod q} for prime q, spanned by q Z^m and the lifted
// kernel of C over F_q.
inline IntRows congruence_lattice(const IntRows& conditions, std::size_t m, std::int64_t q) {
  IntRows c = conditions;
  for (auto& row : c)
    for (auto& v : row) v = ((v % q) + q) % q;
  auto inv_mod = [q](std::int64_t a) {
    std::int64_t r = 1;
    for (std::int64_t e = q - 2, b = a; e > 0; e >>= 1, b = b * b % q)
      if (e & 1) r = r * b % q;
    return r;
  };
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < m && r < c.size(); ++col) {
    std::size_t p = r;
    while (p < c.size() && c[p][col] == 0) ++p;
    if (p == c.size()) continue;
    std::swap(c[r], c[p]);
    const std::int64_t inv = inv_mod(c[r][col]);
    for (auto& v : c[r]) v = v * inv % q;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i == r || c[i][col] == 0) continue;
      const std::int64_t f = c[i][col];
      for (std::size_t k = 0; k < m; ++k) c[i][k] = ((c[i][k] - f * c[r][k]) % q + q) % q;
    }
    pivot_col.push_back(col);
    ++r;
  }
  IntRows gens;
  for (std::size_t f = 0; f < m; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), f) != pivot_col.end()) continue;
    std::vector<std::int64_t> v(m, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = (q - c[i][f]) % q;
    gens.push_back(v);
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::int64_t> v(m, 0);
    v[i] = q;
    gens.push_back(v);
  }
  return gens;
}

inline RationalMatrix scalar_identity(std::size_t m, const Rational& c) {
  RationalMatrix g(m, m);
  for (std::size_t i = 0; i < m; ++i) g(i, i) = c;
  return g;
}

}  // namespace detail

inline RationalLattice cubic_lattice(std::size_t n) { return {detail::unit_rows(n), 1, {}}; }

/// A_n: zero-sum vectors of Z^{n+1}.
inline RationalLattice a_lattice(std::size_t n) {
  IntRows b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(detail::difference_vector(n + 1, i, i + 1));
  return {b, 1, {}};
}

/// A_n^r: A_n extended by the glue class [(n+1)/r]; r = n + 1 gives A_n^*.
inline RationalLattice a_glued_lattice(std::size_t n, std::size_t r) {
  const std::size_t m = n + 1;
  if (r == 0 || m % r != 0) throw InvalidArgument("A_n^r needs r dividing n + 1");
  const auto d = static_cast<std::int64_t>(m);
  const std::size_t i = m / r;
  IntRows g;
  for (std::size_t k = 0; k < n; ++k) g.push_back(detail::difference_vector(m, k, k + 1, d));
  std::vector<std::int64_t> glue(m);
  for (std::size_t k = 0; k < m; ++k)
    glue[k] = k < m - i ? static_cast<std::int64_t>(i) : -static_cast<std::int64_t>(m - i);
  g.push_back(glue);
  return {hermite_basis(g), d, {}};
}

inline RationalLattice d_lattice(std::size_t n) { return {hermite_basis(detail::d_generators(n, 1)), 1, {}}; }

/// D_n^* = Z^n + (1/2, ..., 1/2).
inline RationalLattice d_dual_lattice(std::size_t n) {
  IntRows g;
  for (auto& r : detail::unit_rows(n)) g.push_back(detail::scaled(r, 2));
  g.push_back(std::vector<std::int64_t>(n, 1));
  return {hermite_basis(g), 2, {}};
}

/// D_n^+ = D_n + (1/2, ..., 1/2), n even.
inline RationalLattice d_plus_lattice(std::size_t n) {
  if (n % 2 != 0) throw InvalidArgument("D_n^+ is a lattice only for even n");
  IntRows g = detail::d_generators(n, 2);
  g.push_back(std::vector<std::int64_t>(n, 1));
  return {hermite_basis(g), 2, {}};
}

/// Coxeter-Todd lattice as an Eisenstein lattice: (x_1..x_6) in E^6 with
/// all x_i congruent mod theta = sqrt(-3) and sum x_i = 0 mod 3. Coordinates
/// are (a_k, b_k) for x_k = a_k + b_k w, so the ambient Gram has blocks
/// [[1, -1/2], [-1/2, 1]].
inline RationalLattice coxeter_todd_lattice() {
  constexpr std::size_t m = 12;
  IntRows cond;
  for (std::size_t k = 1; k < 6; ++k) {
    std::vector<std::int64_t> c(m, 0);
    c[2 * k] = 1;
    c[2 * k + 1] = 1;
    c[0] = -1;
    c[1] = -1;
    cond.push_back(c);
  }
  std::vector<std::int64_t> sa(m, 0), sb(m, 0);
  for (std::size_t k = 0; k < 6; ++k) {
    sa[2 * k] = 1;
    sb[2 * k + 1] = 1;
  }
  cond.push_back(sa);
  cond.push_back(sb);
  RationalMatrix q(m, m);
  for (std::size_t k = 0; k < 6; ++k) {
    q(2 * k, 2 * k) = 1;
    q(2 * k + 1, 2 * k + 1) = 1;
    q(2 * k, 2 * k + 1) = Rational(-1, 2);
    q(2 * k + 1, 2 * k) = Rational(-1, 2);
  }
  return {hermite_basis(detail::congruence_lattice(cond, m, 3)), 1, q};
}

/// Barnes-Wall lattice: x in Z^16 with x mod 2 in the first-order Reed-Muller
/// code of length 16 and sum x = 0 mod 4, scaled by 1/sqrt(2) through the
/// ambient Gram.
inline RationalLattice barnes_wall_lattice() {
  constexpr std::size_t m = 16;
  IntRows g;
  g.push_back(std::vector<std::int64_t>(m, 1));
  for (std::size_t bit = 0; bit < 4; ++bit) {
    std::vector<std::int64_t> c(m);
    for (std::size_t p = 0; p < m; ++p) c[p] = (p >> bit) & 1u;
    g.push_back(c);
  }
  for (auto& r : detail::d_generators(m, 2)) g.push_back(r);
  return {hermite_basis(g), 1, detail::scalar_identity(m, Rational(1, 2))};
}

/// Orthogonal projection of `lat` onto the complement of its vector `v`
/// (integer ambient coordinates, before the lattice denominator).
inline RationalLattice projection_along(const RationalLattice& lat, const std::vector<std::int64_t>& v) {
  const std::size_t n = lat.rank();
  const std::size_t m = lat.ambient_dim();
  RationalMatrix vr(m, 1);
  for (std::size_t c = 0; c < m; ++c) vr(c, 0) = v[c];
  RationalMatrix b(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < m; ++c) b(i, c) = lat.basis[i][c];
  const bool plain = lat.ambient_gram.rows() == 0;
  const RationalMatrix w = plain ? b * vr : b * lat.ambient_gram * vr;
  const Rational vv = (plain ? vr.transposed() * vr : vr.transposed() * lat.ambient_gram * vr)(0, 0);
  if (vv == 0) throw InvalidArgument("projection_along: zero vector");
  std::vector<Rational> t(n);
  BigInt den = 1;
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = w(i, 0) / vv;
    den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(t[i]));
  }
  const auto d = static_cast<std::int64_t>(den);
  IntRows gens;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ti = static_cast<std::int64_t>(Rational(t[i] * d).convert_to<BigInt>());
    std::vector<std::int64_t> x(m);
    for (std::size_t c = 0; c < m; ++c) x[c] = detail::checked_sub_mul(lat.basis[i][c] * d, ti, v[c]);
    gens.push_back(std::move(x));
  }
  return {hermite_basis(gens), lat.denominator * d, lat.ambient_gram};
}

/// Dual of the 15-dimensional laminated lattice, realized as the projection
/// of the Barnes-Wall lattice along one of its minimal vectors.
inline RationalLattice lambda15_dual_lattice() {
  std::vector<std::int64_t> v(16, 0);
  v[0] = 2;
  v[1] = 2;
  return projection_along(barnes_wall_lattice(), v);
}

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline GeneratorMatrix generator_of(const RationalLattice& lat) {
  return GeneratorMatrix(cholesky(GramMatrix(exact_gram(lat).to_matrix())));
}

inline CatalogEntry make_entry(std::string name, RationalLattice lat, std::optional<ReferenceNsm> nsm,
                               std::vector<Shell> theta) {
  GeneratorMatrix g = generator_of(lat);
  const std::size_t n = g.dim();
  return {std::move(name), n, std::move(lat), std::move(g), nsm, std::move(theta)};
}

}  // namespace detail

/// Names accepted by get_lattice; parametric families take a dimension.
inline std::vector<std::string> catalog_names() {
  return {"Z", "A", "A*", "D", "D*", "D+", "hexagonal", "E8", "K12", "A11^3", "Lambda15*", "Lambda16"};
}

inline bool catalog_name_is_parametric(const std::string& name) {
  const std::string k = detail::lower(name);
  return k == "z" || k == "a" || k == "a*" || k == "d" || k == "d*" || k == "d+";
}

/// Reference lattice by name. Parametric families (Z, A, A*, D, D*, D+)
/// need `n`; the fixed lattices ignore it.
inline CatalogEntry get_lattice(const std::string& name, std::size_t n = 0) {
  using P = Provenance;
  const std::string k = detail::lower(name);
  const double sqrt2 = std::sqrt(2.0);
  if (catalog_name_is_parametric(name) && n < 1) throw InvalidArgument(name + " needs a dimension");
  if (k == "z" || k == "zn" || k == "cubic") {
    return detail::make_entry("Z" + std::to_string(n), cubic_lattice(n), ReferenceNsm{1.0 / 12.0, P::kExact},
                              {{1.0, 2 * n}});
  }
  if (k == "a") return detail::make_entry("A" + std::to_string(n), a_lattice(n), std::nullopt, {});
  if (k == "a*") return detail::make_entry("A" + std::to_string(n) + "*", a_glued_lattice(n, n + 1), std::nullopt, {});
  if (k == "d") {
    if (n < 2) throw InvalidArgument("D_n needs n >= 2");
    return detail::make_entry("D" + std::to_string(n), d_lattice(n), std::nullopt, {});
  }
  if (k == "d*") return detail::make_entry("D" + std::to_string(n) + "*", d_dual_lattice(n), std::nullopt, {});
  if (k == "d+") {
    if (n == 10)
      return detail::make_entry("D10+", d_plus_lattice(10), ReferenceNsm{0.070813818, P::kPublished},
                                {{2.0, 180}, {2.5, 512}, {4.0, 3380}, {4.5, 5120}});
    return detail::make_entry("D" + std::to_string(n) + "+", d_plus_lattice(n), std::nullopt, {});
  }
  if (k == "hexagonal" || k == "a2") {
    return detail::make_entry("hexagonal", a_lattice(2),
                              ReferenceNsm{5.0 / (36.0 * std::sqrt(3.0)), P::kExact}, {{2.0 / std::sqrt(3.0), 6}});
  }
  if (k == "e8") {
    return detail::make_entry("E8", d_plus_lattice(8), ReferenceNsm{929.0 / 12960.0, P::kExact}, {{2.0, 240}});
  }
  if (k == "k12") {
    return detail::make_entry("K12", coxeter_todd_lattice(), ReferenceNsm{0.0701, P::kPublished},
                              {{4.0 / std::sqrt(3.0), 756}});
  }
  if (k == "a11^3" || k == "a11_3" || k == "a3_11") {
    const double alpha = std::pow(2.0, 9.0 / 11.0) * std::pow(3.0, -10.0 / 11.0);
    return detail::make_entry("A11^3", a_glued_lattice(11, 3), ReferenceNsm{0.070426259, P::kPublished},
                              {{3 * alpha, 132}, {4 * alpha, 990}, {6 * alpha, 2970}});
  }
  if (k == "lambda15*" || k == "lambda15dual") {
    const double beta = std::pow(2.0, -12.0 / 5.0);
    return detail::make_entry("Lambda15*", lambda15_dual_lattice(), ReferenceNsm{0.0688717, P::kEstimated},
                              {{12 * beta, 280}, {15 * beta, 2048}, {16 * beta, 1710}});
  }
  if (k == "lambda16" || k == "bw16" || k == "barnes-wall") {
    return detail::make_entry("Lambda16", barnes_wall_lattice(), ReferenceNsm{0.068297622, P::kPublished},
                              {{2 * sqrt2, 4320}, {3 * sqrt2, 61440}});
  }
  std::string names;
  for (const auto& s : catalog_names()) names += (names.empty() ? "" : ", ") + s;
  throw InvalidArgument("unknown lattice '" + name + "'; available: " + names);
}

/// Checks B2 = c U B1 R with U unimodular and R orthogonal (R R^T = I when
/// square, R R^T R = R otherwise), all within 1e-9.
inline bool verify_equivalence_witness(const Matrix& b1, const Matrix& b2, double c, const UnimodularMatrix& u,
                                       const Matrix& r) {
  constexpr double kTol = 1e-9;
  if (u.n != b1.rows() || b1.rows() != b2.rows() || r.rows() != b1.cols() || r.cols() != b2.cols()) return false;
  if (!is_unimodular(u)) return false;
  const Matrix rrt = r * r.transposed();
  if (r.square()) {
    if (frobenius_norm(rrt - Matrix::identity(r.rows())) > kTol) return false;
  } else if (frobenius_norm(rrt * r - r) > kTol) {
    return false;
  }
  const Matrix image = c * (u.to_matrix() * b1 * r);
  return frobenius_norm(image - b2) <= kTol * std::max(1.0, frobenius_norm(b2));
}

}  // namespace latq
