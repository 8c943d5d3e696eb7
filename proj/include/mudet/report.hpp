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

#include "mudet/bounds.hpp"
#include "mudet/montecarlo.hpp"
#include "mudet/power.hpp"

#include <json.hpp>

#include <charconv>
#include <ostream>
#include <numbers>
#include <span>
#include <string>

namespace mudet {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline constexpr const char* kCsvHeader = "m,p_md,p_md_ci,p_fa,p_fa_ci,exact_rate,trials";

/// One row per m. Absent rates are written as empty fields. Timing is left
/// out so identical specs give identical bytes.
inline void write_csv(std::ostream& out, const AggregateResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.m << ',';
    if (r.p_md) out << format_double(r.p_md->rate);
    out << ',';
    if (r.p_md) out << format_double(r.p_md->half_width);
    out << ',';
    if (r.p_fa) out << format_double(r.p_fa->rate);
    out << ',';
    if (r.p_fa) out << format_double(r.p_fa->half_width);
    out << ',' << format_double(r.exact_rate.rate) << ',' << r.trials << '\n';
  }
}

inline nlohmann::json to_json(const AggregateResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    nlohmann::json row;
    row["m"] = r.m;
    row["p_md"] = r.p_md ? nlohmann::json(r.p_md->rate) : nlohmann::json(nullptr);
    row["p_md_ci"] = r.p_md ? nlohmann::json(r.p_md->half_width) : nlohmann::json(nullptr);
    row["p_fa"] = r.p_fa ? nlohmann::json(r.p_fa->rate) : nlohmann::json(nullptr);
    row["p_fa_ci"] = r.p_fa ? nlohmann::json(r.p_fa->half_width) : nlohmann::json(nullptr);
    row["exact_rate"] = r.exact_rate.rate;
    row["trials"] = r.trials;
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"rows", std::move(rows)}};
}

/// index,p with one-based user indices in detection order.
inline void write_profile_csv(std::ostream& out, const PowerProfile& profile) {
  out << "index,p\n";
  const auto p = profile.powers();
  for (std::size_t j = 0; j < p.size(); ++j) out << (j + 1) << ',' << format_double(p[j]) << '\n';
}

inline constexpr const char* kBoundsHeader = "n,activity,snr,mar,delta,constant,law,form,m";

inline void write_bounds_rows(std::ostream& out, const bounds::ScalingInputs& in) {
  for (const auto& v : bounds::evaluate_all(in)) {
    out << format_double(in.n) << ',' << format_double(in.activity) << ',' << format_double(in.snr) << ','
        << format_double(in.mar) << ',' << format_double(in.delta) << ',' << format_double(in.constant) << ','
        << v.law << ',' << (v.form == bounds::Form::full ? "full" : "leading") << ',' << format_double(v.m) << '\n';
  }
}

inline constexpr const char* kCapacityHeader = "n,activity,snr,m,rate_nats,rate_bits,capacity_nats,capacity_bits,ratio";

inline void write_capacity_row(std::ostream& out, double n, double activity, double snr, double m) {
  const auto r = bounds::sum_rate_ratio(n, activity, snr, m);
  out << format_double(n) << ',' << format_double(activity) << ',' << format_double(snr) << ',' << format_double(m)
      << ',' << format_double(r.rate) << ',' << format_double(r.rate / std::numbers::ln2) << ','
      << format_double(r.capacity) << ',' << format_double(r.capacity / std::numbers::ln2) << ','
      << format_double(r.ratio) << '\n';
}

}  // namespace mudet
