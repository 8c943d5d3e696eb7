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

#include <cstdint>
#include <random>

namespace mudet {

// Purpose tags that separate independent random streams drawn from one seed.
enum class Stream : std::uint64_t {
  codebook = 0x636f6465ULL,
  activity = 0x61637476ULL,
  phase = 0x70686173ULL,
  noise = 0x6e6f6973ULL,
  support = 0x73757070ULL,
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Hash an ordered tuple of 64-bit words into a seed. Every draw in the
/// library is keyed this way, so results never depend on evaluation order.
template <typename... Words>
constexpr std::uint64_t derive_seed(std::uint64_t master, Words... words) noexcept {
  std::uint64_t h = detail::splitmix64(master);
  ((h = detail::splitmix64(h ^ static_cast<std::uint64_t>(words))), ...);
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace mudet
