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
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <variant>
#include <vector>

#include "latq/clp.hpp"
#include "latq/enumerate.hpp"
#include "latq/rational.hpp"
#include "latq/theta.hpp"

namespace latq {

/// Integer vectors whose squared norms are numerically close. Only one of
/// each +-u pair is stored; the first nonzero coordinate is positive.
struct ShellGroup {
  std::vector<IntegerCoords> members;
  double min_norm = 0.0;
  double max_norm = 0.0;

  std::uint64_t point_count() const { return 2 * members.size(); }
  double spread() const { return (max_norm - min_norm) / (0.5 * (max_norm + min_norm)); }
};

inline constexpr double kDefaultRelGap = 0.05;

namespace detail {

inline bool canonical_sign(std::span<const std::int64_t> u) {
  for (std::int64_t v : u)
    if (v != 0) return v > 0;
  return false;
}

}  // namespace detail

/// Splits the nonzero lattice vectors with |uB|^2 <= r2_max into groups
/// wherever consecutive sorted norms differ by more than `rel_gap`
/// relative to the smaller one.
inline std::vector<ShellGroup> group_shells(const GeneratorMatrix& b, double r2_max, double rel_gap = kDefaultRelGap,
                                            std::size_t cap = kDefaultPointCap) {
  if (!(rel_gap > 0.0 && rel_gap < 1.0)) throw InvalidArgument("rel_gap must lie in (0, 1)");
  struct Entry {
    double norm;
    IntegerCoords u;
  };
  std::vector<Entry> entries;
  enumerate_ball(
      b.matrix(), r2_max,
      [&](std::span<const std::int64_t> u, double d) {
        if (detail::canonical_sign(u)) entries.push_back({d, IntegerCoords(u.begin(), u.end())});
      },
      cap);
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& c) { return a.norm < c.norm; });
  std::vector<ShellGroup> groups;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == 0 || (entries[i].norm - entries[i - 1].norm) > rel_gap * entries[i - 1].norm) {
      groups.push_back({{}, entries[i].norm, entries[i].norm});
    }
    groups.back().members.push_back(std::move(entries[i].u));
    groups.back().max_norm = entries[i].norm;
  }
  return groups;
}

/// Linear equations over the entries of a symmetric A with A[0][0] = 1
/// fixed. Unknown k corresponds to A[i][j], i >= j, in row-major order of the
/// lower triangle with (0, 0) skipped.
struct LinearSystem {
  std::size_t dim = 0;
  std::size_t unknowns = 0;
  std::vector<std::vector<std::int64_t>> coefficients;
  std::vector<std::int64_t> rhs;

  std::size_t equations() const { return coefficients.size(); }
};

inline std::size_t unknown_index(std::size_t i, std::size_t j) {
  if (j > i) std::swap(i, j);
  return i * (i + 1) / 2 + j - 1;
}

namespace detail {

// Coefficients of u A u^T in the lower-triangle unknowns; element 0 is the
// coefficient of the fixed A[0][0].
inline std::vector<std::int64_t> quadratic_form_row(std::span<const std::int64_t> u, bool negate) {
  const std::size_t n = u.size();
  std::vector<std::int64_t> row(n * (n + 1) / 2, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const std::int64_t ui = negate ? -u[i] : u[i];
      const std::int64_t uj = negate ? -u[j] : u[j];
      row[i * (i + 1) / 2 + j] = (i == j ? 1 : 2) * ui * uj;
    }
  return row;
}

}  // namespace detail

/// One equation q(p_0) = q(p_k) for every further point p_k of each group,
/// where the points are the stored representatives and their negations.
/// A group of M representatives (2M points) yields 2M - 1 equations.
inline LinearSystem build_equations(const std::vector<ShellGroup>& groups, std::size_t n) {
  if (n < 1) throw InvalidArgument("build_equations: dimension must be positive");
  LinearSystem sys;
  sys.dim = n;
  sys.unknowns = n * (n + 1) / 2 - 1;
  for (const auto& g : groups) {
    if (g.members.empty()) continue;
    const auto first = detail::quadratic_form_row(g.members.front(), false);
    for (std::size_t k = 0; k < 2 * g.members.size(); ++k) {
      if (k == 0) continue;
      const auto other = detail::quadratic_form_row(g.members[k / 2], k % 2 == 1);
      std::vector<std::int64_t> row(sys.unknowns);
      for (std::size_t c = 1; c < first.size(); ++c) row[c - 1] = first[c] - other[c];
      sys.coefficients.push_back(std::move(row));
      sys.rhs.push_back(other[0] - first[0]);
    }
  }
  return sys;
}

/// Exact symmetric positive-definite rational Gram matrix with A[0][0] = 1.
class ExactGram {
 public:
  explicit ExactGram(RationalMatrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() == 0) throw InvalidArgument("exact Gram must be square");
    for (std::size_t i = 0; i < a_.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (a_(i, j) != a_(j, i)) throw InvalidArgument("exact Gram must be symmetric");
    if (!positive_definite(a_)) throw NotGramError();
  }

  /// Rescales so that A[0][0] = 1.
  static ExactGram normalized(RationalMatrix a) {
    if (a.rows() == 0 || a(0, 0) <= 0) throw NotGramError();
    const Rational s = a(0, 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) /= s;
    return ExactGram(std::move(a));
  }

  std::size_t dim() const noexcept { return a_.rows(); }
  const RationalMatrix& matrix() const noexcept { return a_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_(i, j); }

  /// Lower-triangular floating generator of the same lattice.
  GeneratorMatrix generator() const { return GeneratorMatrix(cholesky(GramMatrix(a_.to_matrix()))); }

  friend bool operator==(const ExactGram&, const ExactGram&) = default;

 private:
  RationalMatrix a_;
};

struct UniqueSolution {
  ExactGram gram;
};

struct FamilySolution {
  std::vector<Rational> particular;              // free unknowns set to zero
  std::vector<std::vector<Rational>> nullspace;  // one vector per free unknown
  std::size_t free_dimension = 0;
};

struct Inconsistent {};

using IdentifyOutcome = std::variant<UniqueSolution, FamilySolution, Inconsistent>;

/// Assembles A from the unknown vector with A[0][0] = 1.
inline RationalMatrix gram_from_unknowns(std::size_t n, const std::vector<Rational>& x) {
  RationalMatrix a(n, n);
  a(0, 0) = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      if (i == 0 && j == 0) continue;
      a(i, j) = x[unknown_index(i, j)];
      a(j, i) = a(i, j);
    }
  return a;
}

/// Exact Gauss-Jordan elimination over the rationals, one equation at a
/// time. Identical integer rows are eliminated once.
inline IdentifyOutcome solve_exact(const LinearSystem& sys) {
  const std::size_t m = sys.unknowns;
  std::vector<std::vector<Rational>> pivots;
  std::vector<std::size_t> pivot_cols;
  std::set<std::vector<std::int64_t>> seen;

  for (std::size_t e = 0; e < sys.equations(); ++e) {
    std::vector<std::int64_t> key = sys.coefficients[e];
    key.push_back(sys.rhs[e]);
    if (!seen.insert(key).second) continue;

    std::vector<Rational> row(m + 1);
    for (std::size_t c = 0; c < m; ++c) row[c] = sys.coefficients[e][c];
    row[m] = sys.rhs[e];
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      const Rational f = row[pivot_cols[p]];
      if (f == 0) continue;
      for (std::size_t c = 0; c <= m; ++c)
        if (pivots[p][c] != 0) row[c] -= f * pivots[p][c];
    }
    std::size_t lead = 0;
    while (lead < m && row[lead] == 0) ++lead;
    if (lead == m) {
      if (row[m] != 0) return Inconsistent{};
      continue;
    }
    const Rational inv = 1 / row[lead];
    for (std::size_t c = 0; c <= m; ++c)
      if (row[c] != 0) row[c] *= inv;
    for (auto& p : pivots) {
      const Rational f = p[lead];
      if (f == 0) continue;
      for (std::size_t c = 0; c <= m; ++c)
        if (row[c] != 0) p[c] -= f * row[c];
    }
    pivots.push_back(std::move(row));
    pivot_cols.push_back(lead);
  }

  std::vector<Rational> particular(m);
  std::vector<bool> is_pivot(m, false);
  for (std::size_t p = 0; p < pivots.size(); ++p) {
    particular[pivot_cols[p]] = pivots[p][m];
    is_pivot[pivot_cols[p]] = true;
  }
  if (pivots.size() == m) return UniqueSolution{ExactGram(gram_from_unknowns(sys.dim, particular))};

  FamilySolution fam;
  fam.particular = particular;
  for (std::size_t f = 0; f < m; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(m);
    v[f] = 1;
    for (std::size_t p = 0; p < pivots.size(); ++p) v[pivot_cols[p]] = -pivots[p][f];
    fam.nullspace.push_back(std::move(v));
  }
  fam.free_dimension = fam.nullspace.size();
  return fam;
}

/// Comparison of one exact shell with the numerical theta image.
struct ShellMatch {
  double exact_norm = 0.0;
  std::uint64_t exact_count = 0;
  bool matched = false;
  double numerical_norm = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t numerical_count = 0;
};

struct MatchReport {
  std::vector<ShellMatch> shells;
  bool all_match = false;
};

/// Exact shells of the lattice with Gram `a` rescaled to unit determinant:
/// norms are grouped by their exact rational value.
inline std::vector<Shell> exact_shells(const RationalMatrix& a, double r2_max, std::size_t cap = kDefaultPointCap) {
  const std::size_t n = a.rows();
  BigInt den = 1;
  for (std::size_t i = 0; i < n * n; ++i) {
    const BigInt d = boost::multiprecision::denominator(a(i / n, i % n));
    den = den / boost::multiprecision::gcd(den, d) * d;
  }
  std::vector<std::int64_t> num(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational scaled = a(i, j) * den;
      const BigInt v = boost::multiprecision::numerator(scaled);
      if (boost::multiprecision::abs(v) > BigInt(std::numeric_limits<std::int32_t>::max()))
        throw Error("exact Gram entries too large for shell enumeration");
      num[i * n + j] = static_cast<std::int64_t>(v);
    }
  const double det = static_cast<double>(determinant(a));
  const double unit = std::pow(det, -1.0 / static_cast<double>(n)) / static_cast<double>(den);
  const GeneratorMatrix l(cholesky(GramMatrix(a.to_matrix())));
  const double search = r2_max / std::pow(det, -1.0 / static_cast<double>(n));

  std::map<__int128, std::uint64_t> counts;
  enumerate_ball(
      l.matrix(), search * (1.0 + 1e-9),
      [&](std::span<const std::int64_t> u, double) {
        __int128 q = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (u[i] == 0) continue;
          __int128 s = 0;
          for (std::size_t j = 0; j < n; ++j) s += static_cast<__int128>(num[i * n + j]) * u[j];
          q += s * u[i];
        }
        ++counts[q];
      },
      cap);
  std::vector<Shell> shells;
  for (const auto& [q, c] : counts) {
    const double norm = static_cast<double>(q) * unit;
    if (norm <= r2_max * (1.0 + 1e-12)) shells.push_back({norm, c});
  }
  return shells;
}

/// Numerical steps of B at unit volume: groups of sorted squared norms split
/// at relative gaps larger than `rel_gap`.
inline std::vector<Shell> numerical_steps(const GeneratorMatrix& b, double r2_max, double rel_gap,
                                          std::size_t cap = kDefaultPointCap) {
  const GeneratorMatrix unit = normalize_volume(b);
  const std::vector<double> norms = ball_norms(unit, r2_max, cap);
  std::vector<Shell> steps;
  double sum = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (i == 0 || norms[i] - norms[i - 1] > rel_gap * std::max(norms[i - 1], 1e-300)) {
      if (!steps.empty()) steps.back().squared_norm = sum / static_cast<double>(steps.back().count);
      steps.push_back({norms[i], 0});
      sum = 0.0;
    }
    ++steps.back().count;
    sum += norms[i];
  }
  if (!steps.empty()) steps.back().squared_norm = sum / static_cast<double>(steps.back().count);
  return steps;
}

/// Checks that every exact shell up to r2_max (unit determinant) appears as a
/// numerical step of the same height within `tol` in squared norm.
inline MatchReport verify_theta(const ExactGram& exact, const GeneratorMatrix& numerical, double r2_max, double tol,
                                double rel_gap = kDefaultRelGap) {
  if (exact.dim() != numerical.dim()) throw InvalidArgument("verify_theta: dimension mismatch");
  MatchReport report;
  const std::vector<Shell> ex = exact_shells(exact.matrix(), r2_max);
  // Search a little past r2_max so the last numerical step is complete.
  const std::vector<Shell> num = numerical_steps(numerical, r2_max * (1.0 + 2.0 * rel_gap) + tol, rel_gap);
  report.all_match = true;
  for (const auto& s : ex) {
    ShellMatch m{s.squared_norm, s.count};
    for (const auto& t : num) {
      if (std::abs(t.squared_norm - s.squared_norm) <= tol) {
        m.numerical_norm = t.squared_norm;
        m.numerical_count = t.count;
        m.matched = t.count == s.count;
        break;
      }
    }
    report.all_match = report.all_match && m.matched;
    report.shells.push_back(m);
  }
  return report;
}

/// Full identification pipeline: group, build, solve, with one escalation of
/// the radius by 50% when the first solve leaves free parameters.
struct IdentifyReport {
  IdentifyOutcome outcome = Inconsistent{};
  double r2_used = 0.0;
  bool escalated = false;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::vector<std::size_t> group_sizes;
};

inline IdentifyReport identify(const GeneratorMatrix& b, double r2_max, double rel_gap = kDefaultRelGap) {
  IdentifyReport rep;
  double r2 = r2_max;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto groups = group_shells(b, r2, rel_gap);
    const LinearSystem sys = build_equations(groups, b.dim());
    rep.outcome = solve_exact(sys);
    rep.r2_used = r2;
    rep.escalated = attempt > 0;
    rep.equations = sys.equations();
    rep.unknowns = sys.unknowns;
    rep.group_sizes.clear();
    for (const auto& g : groups) rep.group_sizes.push_back(g.members.size());
    if (!std::holds_alternative<FamilySolution>(rep.outcome)) break;
    r2 *= 1.5;
  }
  return rep;
}

}  // namespace latq
