// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The mudet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// mudet: on-off random access multiuser detection experiments.
//
//   mudet simulate  --config FILE [--seed S] [--workers N] [--out CSV] [--json FILE]
//   mudet bounds    --users N... --activity L... --snr-db D... [--mar --delta --constant]
//   mudet calibrate --pfa P --m M [--mode approx|exact]
//   mudet profile   --users N --activity L --snr-db D [--kind K --leakage T]
//   mudet capacity  --users N... (--activity L | --active-users K) --snr-db D [--m M --delta d]
//
// Exit codes: 0 success, 2 invalid input or config, 3 numeric failure.

#include "mudet/config.hpp"
#include "mudet/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct SnrOptions {
  std::vector<double> snr_db;
  std::vector<double> snr;

  void add(CLI::App* app, bool many) {
    auto* a = app->add_option("--snr-db", snr_db, "Total SNR in dB");
    auto* b = app->add_option("--snr", snr, "Total SNR, linear");
    a->excludes(b);
    if (!many) {
      a->expected(1);
      b->expected(1);
    }
  }

  [[nodiscard]] std::vector<double> linear() const {
    std::vector<double> out = snr;
    for (double d : snr_db) out.push_back(mudet::db_to_linear(d));
    if (out.empty()) throw std::invalid_argument("one of --snr or --snr-db is required");
    return out;
  }
};

int run_simulate(const std::string& config, std::optional<std::uint64_t> seed, std::size_t workers,
                 const std::string& out_path, const std::string& json_path, double crossing) {
  auto spec = mudet::load_experiment(config);
  if (seed) spec.master_seed = *seed;
  const auto result = mudet::run_experiment(spec, workers);

  if (out_path.empty() || out_path == "-") {
    mudet::write_csv(std::cout, result);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
    mudet::write_csv(out, result);
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + json_path + "'");
    out << mudet::to_json(result).dump(2) << '\n';
  }
  if (crossing > 0.0) {
    try {
      std::cerr << "crossing p_md=" << crossing << " at m=" << mudet::find_crossing(result, crossing) << '\n';
    } catch (const mudet::numeric_error& e) {
      std::cerr << e.what() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-off random access multiuser detection simulator"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment described by a config file");
  std::string config_path, out_path, json_path;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  double crossing = 0.0;
  sim->add_option("--config", config_path, "Experiment file (INI)")->required();
  sim->add_option("--seed", seed, "Override the master seed");
  sim->add_option("--workers", workers, "Worker threads (default: MUDET_WORKERS or hardware threads)");
  sim->add_option("--out", out_path, "CSV output path (default stdout)");
  sim->add_option("--json", json_path, "Also write a JSON mirror of the CSV");
  sim->add_option("--crossing", crossing, "Report the m where p_md crosses this rate (stderr)");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Evaluate the measurement scaling laws on a parameter grid");
  std::vector<double> b_users, b_activity;
  double b_mar = 1.0, b_delta = 0.0, b_constant = 1.0;
  SnrOptions b_snr;
  bnd->add_option("--users", b_users, "Number of users n")->required();
  bnd->add_option("--activity", b_activity, "Activity probability")->required();
  b_snr.add(bnd, true);
  bnd->add_option("--mar", b_mar, "Minimum-to-average power ratio");
  bnd->add_option("--delta", b_delta, "Slack delta");
  bnd->add_option("--constant", b_constant, "Unstated constant C of the ML-sufficient and OMP laws");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Correlation threshold for a target false-alarm probability");
  double c_pfa = 1e-3;
  std::size_t c_m = 0;
  std::string c_mode = "approx";
  cal->add_option("--pfa", c_pfa, "False-alarm probability")->required();
  cal->add_option("--m", c_m, "Degrees of freedom")->required();
  cal->add_option("--mode", c_mode, "approx | exact")->check(CLI::IsMember({"approx", "exact"}));

  // profile
  auto* prof = app.add_subcommand("profile", "Emit a power profile as CSV");
  std::size_t p_users = 0;
  double p_activity = 0.0, p_leakage = 0.0;
  std::string p_kind = "constant";
  SnrOptions p_snr;
  prof->add_option("--users", p_users, "Number of users n")->required();
  prof->add_option("--activity", p_activity, "Activity probability")->required();
  p_snr.add(prof, false);
  prof->add_option("--kind", p_kind, "constant | exponential | robust")
      ->check(CLI::IsMember({"constant", "exponential", "robust"}));
  prof->add_option("--leakage", p_leakage, "Leakage fraction for the robust profile");

  // capacity
  auto* cap = app.add_subcommand("capacity", "Sum rate versus coordinated capacity on a grid of n");
  std::vector<double> k_users;
  std::optional<double> k_activity, k_active, k_m;
  double k_delta = 0.0;
  SnrOptions k_snr;
  cap->add_option("--users", k_users, "Number of users n")->required();
  auto* act_opt = cap->add_option("--activity", k_activity, "Activity probability (fixed)");
  auto* cnt_opt = cap->add_option("--active-users", k_active, "Expected active users k (activity = k/n)");
  act_opt->excludes(cnt_opt);
  k_snr.add(cap, false);
  cap->add_option("--m", k_m, "Degrees of freedom (default: shaped SeqOMP sufficient m)");
  cap->add_option("--delta", k_delta, "Slack delta used for the default m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*sim) return run_simulate(config_path, seed, workers, out_path, json_path, crossing);

    if (*bnd) {
      std::cout << mudet::kBoundsHeader << '\n';
      for (double n : b_users)
        for (double lam : b_activity)
          for (double snr : b_snr.linear())
            mudet::write_bounds_rows(std::cout, {n, lam, snr, b_mar, b_delta, b_constant});
      return 0;
    }

    if (*cal) {
      const auto mode = c_mode == "exact" ? mudet::ThresholdMode::exact : mudet::ThresholdMode::approx;
      const double mu = mudet::threshold_from_pfa(c_pfa, c_m, mode);
      std::cout << mudet::format_double(mu) << '\n';
      return 0;
    }

    if (*prof) {
      const std::map<std::string, mudet::ProfileKind> kinds = {{"constant", mudet::ProfileKind::constant},
                                                               {"exponential", mudet::ProfileKind::exponential},
                                                               {"robust", mudet::ProfileKind::robust}};
      const auto profile =
          mudet::make_profile({kinds.at(p_kind), p_leakage}, p_users, p_activity, p_snr.linear().front());
      mudet::write_profile_csv(std::cout, profile);
      return 0;
    }

    if (*cap) {
      if (!k_activity && !k_active) throw std::invalid_argument("one of --activity or --active-users is required");
      const double snr = k_snr.linear().front();
      std::cout << mudet::kCapacityHeader << '\n';
      for (double n : k_users) {
        const double lam = k_activity ? *k_activity : *k_active / n;
        const double m = k_m ? *k_m : std::ceil(mudet::bounds::seqomp_shaped_m(lam, n, snr, k_delta));
        mudet::write_capacity_row(std::cout, n, lam, snr, m);
      }
      return 0;
    }
  } catch (const mudet::numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
