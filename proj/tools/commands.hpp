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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latq/catalog.hpp"
#include "latq/estimator.hpp"
#include "latq/identify.hpp"
#include "latq/io.hpp"
#include "latq/optimizer.hpp"
#include "latq/theta.hpp"

namespace latq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Post-training estimation budget per run.
inline constexpr std::uint64_t kDefaultEstimateSamples = 1'000'000;

struct TrainArgs {
  std::size_t dim = 0;
  std::string profile = "fast";
  std::optional<double> mu0;
  std::optional<double> nu;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> red_interval;
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  unsigned workers = 1;
  std::uint64_t samples = kDefaultEstimateSamples;
  std::string out = ".";
};

struct EstimateArgs {
  std::string in;
  std::uint64_t samples = kDefaultEstimateSamples;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool json = false;
};

struct ThetaArgs {
  std::string in;
  double r2max = kDefaultThetaR2;
  std::string out;
};

struct IdentifyArgs {
  std::string in;
  double r2max = 3.0;
  double rel_gap = kDefaultRelGap;
  std::string out;
};

struct CatalogArgs {
  bool list = false;
  std::string name;
  std::size_t dim = 0;
  std::string out;
};

/// Stream used for the post-training estimate of run r; disjoint from the
/// training streams 0..R-1 and from each other.
inline std::uint64_t estimate_stream_base(std::size_t run) { return (static_cast<std::uint64_t>(run) + 1) << 32; }

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t stream = 0;
  bool aborted = false;
  std::uint64_t abort_step = 0;
  std::string error;
  std::optional<GeneratorMatrix> basis;
  NsmEstimate estimate;
};

inline RunRecord train_one(const TrainArgs& a, const TrainConfig& cfg, std::size_t r) {
  RunRecord rec;
  rec.run = r;
  rec.stream = r;
  try {
    RngStream stream(a.seed, r);
    GeneratorMatrix b = train(a.dim, cfg, stream);
    rec.estimate = estimate_nsm_sharded(b, a.samples, a.seed, estimate_stream_base(r), 1);
    rec.basis = std::move(b);
  } catch (const StepTooLargeError& e) {
    rec.aborted = true;
    rec.abort_step = e.step();
    rec.error = e.what();
  } catch (const Error& e) {
    rec.aborted = true;
    rec.error = e.what();
  }
  return rec;
}

inline std::string run_file_name(std::size_t r) {
  std::ostringstream os;
  os << "run_" << std::setw(3) << std::setfill('0') << r << ".json";
  return os.str();
}

inline TrainConfig train_config(const TrainArgs& a) {
  TrainConfig cfg = *TrainConfig::profile_named(a.profile);
  if (a.mu0) cfg.mu0 = *a.mu0;
  if (a.nu) cfg.nu = *a.nu;
  if (a.steps) cfg.steps = *a.steps;
  if (a.red_interval) cfg.reduction_interval = *a.red_interval;
  cfg.seed = a.seed;
  cfg.validate();
  return cfg;
}

inline int cmd_train(const TrainArgs& a, const TrainConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<RunRecord> records(a.runs);
  {
    const unsigned workers = std::max(1u, std::min<unsigned>(a.workers, static_cast<unsigned>(a.runs)));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < a.runs; r += workers) records[r] = train_one(a, cfg, r);
      });
  }

  nlohmann::json runs = nlohmann::json::array();
  std::optional<std::size_t> best;
  for (const auto& rec : records) {
    nlohmann::json j{{"run", rec.run},       {"seed", a.seed},           {"stream", rec.stream},
                     {"profile", cfg.profile}, {"aborted", rec.aborted}};
    if (rec.aborted) {
      j["abort_step"] = rec.abort_step;
      j["error"] = rec.error;
      err << "run " << rec.run << " aborted: " << rec.error << "\n";
    } else {
      const std::string file = run_file_name(rec.run);
      write_lattice(dir / file, "run " + std::to_string(rec.run), rec.basis->matrix());
      j["g_hat"] = rec.estimate.g_hat;
      j["sigma_hat"] = rec.estimate.sigma_hat();
      j["samples"] = rec.estimate.samples;
      j["estimate_stream_base"] = estimate_stream_base(rec.run);
      j["path"] = file;
      if (!best || rec.estimate.g_hat < records[*best].estimate.g_hat) best = rec.run;
    }
    runs.push_back(std::move(j));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json manifest{{"dim", a.dim},
                          {"profile", cfg.profile},
                          {"mu0", cfg.mu0},
                          {"nu", cfg.nu},
                          {"steps", cfg.steps},
                          {"red_interval", cfg.reduction_interval},
                          {"seed", a.seed},
                          {"runs", runs},
                          {"best_run", best ? nlohmann::json(*best) : nlohmann::json(nullptr)},
                          {"wall_time_s", wall}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  if (!best) {
    err << "all runs aborted\n";
    return kExitFailure;
  }
  const auto& b = records[*best].estimate;
  out << "best run " << *best << ": g_hat = " << format_double(b.g_hat) << ", sigma_hat = " << format_double(b.sigma_hat())
      << " (" << b.samples << " samples)\n";
  return kExitOk;
}

inline nlohmann::json estimate_json(const NsmEstimate& e) {
  return {{"g_hat", e.g_hat}, {"sigma_hat", e.sigma_hat()}, {"samples", e.samples}};
}

inline int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const LatticeFile lat = read_lattice(a.in);
  const NsmEstimate e = estimate_nsm_sharded(lat.basis, a.samples, a.seed, 0, a.workers);
  if (a.json) {
    out << estimate_json(e).dump(2) << "\n";
  } else {
    out << "g_hat = " << format_double(e.g_hat) << "\nsigma_hat = " << format_double(e.sigma_hat())
        << "\nsamples = " << e.samples << "\n";
  }
  return kExitOk;
}

inline int cmd_theta(const ThetaArgs& a, std::ostream& out) {
  const LatticeFile lat = read_lattice(a.in);
  const auto steps = theta_image(normalize_volume(lat.basis), a.r2max);
  write_text(a.out, theta_csv(steps));
  out << steps.size() << " steps, " << (steps.empty() ? 0 : steps.back().cumulative) << " points up to r2 = "
      << format_double(a.r2max) << "\n";
  return kExitOk;
}

inline int cmd_identify(const IdentifyArgs& a, std::ostream& out) {
  const LatticeFile lat = read_lattice(a.in);
  const GeneratorMatrix b = normalize_volume(lat.basis);
  const IdentifyReport rep = identify(b, a.r2max, a.rel_gap);
  nlohmann::json j{{"n", b.dim()},
                   {"r2max", a.r2max},
                   {"r2_used", rep.r2_used},
                   {"rel_gap", a.rel_gap},
                   {"escalated", rep.escalated},
                   {"equations", rep.equations},
                   {"unknowns", rep.unknowns},
                   {"group_sizes", rep.group_sizes}};
  if (const auto* u = std::get_if<UniqueSolution>(&rep.outcome)) {
    j["status"] = "unique";
    j["gram"] = rational_matrix_json(u->gram.matrix());
    j["gram_float"] = float_matrix_json(u->gram.matrix().to_matrix());
    const MatchReport m = verify_theta(u->gram, b, a.r2max, 0.05, a.rel_gap);
    j["match"] = match_report_json(m);
    out << "unique solution; theta " << (m.all_match ? "matches" : "does not match") << "\n";
  } else if (const auto* f = std::get_if<FamilySolution>(&rep.outcome)) {
    j["status"] = "family";
    j["free_dimension"] = f->free_dimension;
    nlohmann::json part = nlohmann::json::array();
    for (const auto& q : f->particular) part.push_back(rational_json(q));
    nlohmann::json null = nlohmann::json::array();
    for (const auto& v : f->nullspace) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& q : v) row.push_back(rational_json(q));
      null.push_back(std::move(row));
    }
    j["particular"] = std::move(part);
    j["nullspace"] = std::move(null);
    out << "family of solutions with " << f->free_dimension << " free parameter(s)\n";
  } else {
    j["status"] = "inconsistent";
    out << "no solution\n";
  }
  write_text(a.out, j.dump(2) + "\n");
  return kExitOk;
}

inline int cmd_catalog(const CatalogArgs& a, std::ostream& out) {
  if (a.list) {
    for (const auto& name : catalog_names()) {
      out << name;
      if (catalog_name_is_parametric(name)) out << " (needs --dim)";
      out << "\n";
    }
    return kExitOk;
  }
  const CatalogEntry e = get_lattice(a.name, a.dim);
  write_lattice(a.out, e.name, e.generator.matrix());
  out << e.name << " (n = " << e.dim << ")";
  if (e.nsm) out << ": NSM " << format_double(e.nsm->value) << " [" << to_string(e.nsm->provenance) << "]";
  out << "\n";
  return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice quantizer design and analysis", "latq"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Optimize lattice generators by stochastic gradient descent");
  train_cmd->add_option("--dim", ta.dim, "Lattice dimension")->required()->check(CLI::PositiveNumber);
  train_cmd->add_option("--profile", ta.profile, "Parameter profile")->check(CLI::IsMember({"fast", "medium", "slow"}));
  train_cmd->add_option("--mu0", ta.mu0, "Initial step size");
  train_cmd->add_option("--nu", ta.nu, "Initial to final step size ratio");
  train_cmd->add_option("--steps", ta.steps, "Number of iterations");
  train_cmd->add_option("--red-interval", ta.red_interval, "Iterations between reductions");
  train_cmd->add_option("--seed", ta.seed, "Random seed");
  train_cmd->add_option("--runs", ta.runs, "Independent runs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--workers", ta.workers, "Parallel runs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--samples", ta.samples, "Estimation samples per run")->check(CLI::Range(2ull, ~0ull));
  train_cmd->add_option("--out", ta.out, "Output directory");

  EstimateArgs ea;
  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of the normalized second moment");
  est_cmd->add_option("--in", ea.in, "Lattice file")->required();
  est_cmd->add_option("--samples", ea.samples, "Number of samples")->check(CLI::Range(2ull, ~0ull));
  est_cmd->add_option("--seed", ea.seed, "Random seed");
  est_cmd->add_option("--workers", ea.workers, "Parallel shards")->check(CLI::PositiveNumber);
  est_cmd->add_flag("--json", ea.json, "Print JSON");

  ThetaArgs tha;
  auto* theta_cmd = app.add_subcommand("theta", "Theta image at unit volume as CSV");
  theta_cmd->add_option("--in", tha.in, "Lattice file")->required();
  theta_cmd->add_option("--r2max", tha.r2max, "Largest squared norm")->check(CLI::PositiveNumber);
  theta_cmd->add_option("--out", tha.out, "CSV output")->required();

  IdentifyArgs ia;
  auto* id_cmd = app.add_subcommand("identify", "Recover an exact rational Gram matrix");
  id_cmd->add_option("--in", ia.in, "Lattice file")->required();
  id_cmd->add_option("--r2max", ia.r2max, "Largest squared norm at unit volume")->check(CLI::PositiveNumber);
  id_cmd->add_option("--rel-gap", ia.rel_gap, "Relative gap that splits shells")->check(CLI::Range(0.0, 1.0));
  id_cmd->add_option("--out", ia.out, "JSON output")->required();

  CatalogArgs ca;
  auto* cat_cmd = app.add_subcommand("catalog", "Reference lattices");
  auto* list_opt = cat_cmd->add_flag("--list", ca.list, "List available names");
  auto* name_opt = cat_cmd->add_option("--name", ca.name, "Lattice name");
  cat_cmd->add_option("--dim", ca.dim, "Dimension for parametric families");
  auto* out_opt = cat_cmd->add_option("--out", ca.out, "Lattice file");
  list_opt->excludes(name_opt);
  name_opt->needs(out_opt);

  std::optional<TrainConfig> cfg;
  try {
    app.parse(argc, argv);
    if (cat_cmd->parsed() && !ca.list && ca.name.empty()) throw CLI::ValidationError("catalog", "needs --list or --name");
    if (train_cmd->parsed()) {
      try {
        cfg = train_config(ta);
      } catch (const InvalidArgument& e) {
        throw CLI::ValidationError("train", e.what());
      }
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(ta, *cfg, out, err);
    if (est_cmd->parsed()) return cmd_estimate(ea, out);
    if (theta_cmd->parsed()) return cmd_theta(tha, out);
    if (id_cmd->parsed()) return cmd_identify(ia, out);
    return cmd_catalog(ca, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace latq::cli
