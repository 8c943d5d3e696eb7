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

#pragma once

// Experiment files are INI documents with three sections:
//
//   [experiment]  users, activity, snr | snr_db, activity_model,
//                 active_count, noise, pfa, threshold_mode,
//                 m | m_range, trials, seed
//   [profile]     kind, leakage
//   [detector]    kind, order, stop, count, max_iterations, penalty,
//                 support_epsilon
//
// Unknown sections or keys are rejected.

#include "mudet/montecarlo.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace mudet {

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw config_error("config: '" + key + "' expects a nonnegative integer, got '" + text + "'");
  return v;
}

inline double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    throw config_error("config: '" + key + "' expects a real number, got '" + text + "'");
  return v;
}

inline bool parse_flag(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  throw config_error("config: '" + key + "' expects true/false, got '" + text + "'");
}

template <typename Enum>
Enum parse_choice(const std::string& key, const std::string& text, const std::map<std::string, Enum>& choices) {
  const auto it = choices.find(trim(text));
  if (it != choices.end()) return it->second;
  std::string allowed;
  for (const auto& [name, _] : choices) allowed += (allowed.empty() ? "" : ", ") + name;
  throw config_error("config: '" + key + "' must be one of {" + allowed + "}, got '" + text + "'");
}

inline std::vector<std::size_t> parse_m_list(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_unsigned(key, item));
  if (out.empty()) throw config_error("config: '" + key + "' is empty");
  return out;
}

// start:stop:step, stop inclusive
inline std::vector<std::size_t> parse_m_range(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw config_error("config: '" + key + "' expects start:stop:step");
  const auto start = parse_unsigned(key, parts[0]);
  const auto stop = parse_unsigned(key, parts[1]);
  const auto step = parse_unsigned(key, parts[2]);
  if (step == 0 || stop < start) throw config_error("config: '" + key + "' needs step > 0 and stop >= start");
  std::vector<std::size_t> out;
  for (auto m = start; m <= stop; m += step) out.push_back(static_cast<std::size_t>(m));
  return out;
}

}  // namespace detail

inline ExperimentSpec parse_experiment(std::istream& in) {
  using boost::property_tree::ptree;
  ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }

  static const std::map<std::string, std::set<std::string>> schema = {
      {"experiment",
       {"users", "activity", "snr", "snr_db", "activity_model", "active_count", "noise", "pfa", "threshold_mode", "m",
        "m_range", "trials", "seed"}},
      {"profile", {"kind", "leakage"}},
      {"detector", {"kind", "order", "stop", "count", "max_iterations", "penalty", "support_epsilon"}},
  };
  for (const auto& [section, body] : tree) {
    const auto it = schema.find(section);
    if (it == schema.end()) {
      throw config_error("config: unknown section or top-level key '" + section + "'");
    }
    for (const auto& [key, _] : body)
      if (!it->second.contains(key)) throw config_error("config: unknown key '" + key + "' in [" + section + "]");
  }

  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    const auto sec = tree.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(ptree::path_type(key, '\0'));
    return v ? std::optional<std::string>(*v) : std::nullopt;
  };

  ExperimentSpec spec;
  if (auto v = get("experiment", "users")) spec.n = detail::parse_unsigned("users", *v);
  if (auto v = get("experiment", "activity")) spec.activity = detail::parse_real("activity", *v);
  const auto snr = get("experiment", "snr");
  const auto snr_db = get("experiment", "snr_db");
  if (snr && snr_db) throw config_error("config: give only one of 'snr' and 'snr_db'");
  if (snr) spec.snr = detail::parse_real("snr", *snr);
  if (snr_db) spec.snr = db_to_linear(detail::parse_real("snr_db", *snr_db));
  if (auto v = get("experiment", "activity_model"))
    spec.activity_kind = detail::parse_choice<ActivityKind>(
        "activity_model", *v, {{"bernoulli", ActivityKind::bernoulli}, {"fixed_count", ActivityKind::fixed_count}});
  if (auto v = get("experiment", "active_count")) spec.active_count = detail::parse_unsigned("active_count", *v);
  if (auto v = get("experiment", "noise")) spec.noise = detail::parse_flag("noise", *v);
  if (auto v = get("experiment", "pfa")) spec.pfa = detail::parse_real("pfa", *v);
  if (auto v = get("experiment", "threshold_mode"))
    spec.threshold_mode = detail::parse_choice<ThresholdMode>(
        "threshold_mode", *v, {{"approx", ThresholdMode::approx}, {"exact", ThresholdMode::exact}});
  const auto m_list = get("experiment", "m");
  const auto m_range = get("experiment", "m_range");
  if (m_list && m_range) throw config_error("config: give only one of 'm' and 'm_range'");
  if (!m_list && !m_range) throw config_error("config: [experiment] needs 'm' or 'm_range'");
  spec.m_values = m_list ? detail::parse_m_list("m", *m_list) : detail::parse_m_range("m_range", *m_range);
  if (auto v = get("experiment", "trials")) spec.trials = detail::parse_unsigned("trials", *v);
  if (auto v = get("experiment", "seed")) spec.master_seed = detail::parse_unsigned("seed", *v);

  if (auto v = get("profile", "kind"))
    spec.profile.kind = detail::parse_choice<ProfileKind>(
        "kind", *v,
        {{"constant", ProfileKind::constant}, {"exponential", ProfileKind::exponential}, {"robust", ProfileKind::robust}});
  if (auto v = get("profile", "leakage")) spec.profile.leakage = detail::parse_real("leakage", *v);

  auto& d = spec.detector;
  if (auto v = get("detector", "kind"))
    d.kind = detail::parse_choice<DetectorKind>("kind", *v,
                                                {{"sud", DetectorKind::sud},
                                                 {"seqomp", DetectorKind::seqomp},
                                                 {"omp", DetectorKind::omp},
                                                 {"lasso", DetectorKind::lasso},
                                                 {"ml", DetectorKind::ml}});
  if (auto v = get("detector", "order"))
    d.order = detail::parse_choice<DetectionOrder>("order", *v,
                                                   {{"descending", DetectionOrder::descending_power},
                                                    {"identity", DetectionOrder::identity},
                                                    {"ascending", DetectionOrder::ascending_power}});
  if (auto v = get("detector", "stop"))
    d.omp_stop = detail::parse_choice<OmpStopKind>("stop", *v,
                                                   {{"threshold", OmpStopKind::threshold},
                                                    {"known_count", OmpStopKind::known_count},
                                                    {"max_iterations", OmpStopKind::max_iterations}});
  if (auto v = get("detector", "count")) d.count = detail::parse_unsigned("count", *v);
  if (auto v = get("detector", "max_iterations")) d.max_iterations = detail::parse_unsigned("max_iterations", *v);
  if (auto v = get("detector", "penalty")) d.penalty = detail::parse_real("penalty", *v);
  if (auto v = get("detector", "support_epsilon")) d.support_epsilon = detail::parse_real("support_epsilon", *v);

  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return spec;
}

inline ExperimentSpec parse_experiment(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment(in);
}

inline ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  return parse_experiment(in);
}

}  // namespace mudet
