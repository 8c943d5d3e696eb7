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

#include "mudet/types.hpp"

#include <cstddef>

namespace mudet::detail {

/// Orthonormal basis of the span of accepted codewords, grown by two-pass
/// Gram-Schmidt. project() applies the projector onto the orthogonal
/// complement of that span.
class OrthoBasis {
 public:
  explicit OrthoBasis(std::size_t dim) : q_(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) {}

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(q_.rows()); }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] bool full() const noexcept { return count_ == dim(); }
  [[nodiscard]] auto columns() const { return q_.leftCols(static_cast<Eigen::Index>(count_)); }

  [[nodiscard]] CVector project(const CVector& v) const {
    if (count_ == 0) return v;
    const auto q = columns();
    CVector r = v - q * (q.adjoint() * v);
    return r - q * (q.adjoint() * r);
  }

  /// Adds the direction of `v` outside the current span. Returns the new
  /// unit column, or an empty vector when `v` is numerically inside the span.
  CVector insert(const CVector& v, double rel_tol = 1e-12) {
    if (full()) return {};
    const double scale = v.norm();
    if (scale == 0.0) return {};
    CVector r = project(v);
    const double len = r.norm();
    if (len <= rel_tol * scale) return {};
    r /= len;
    q_.col(static_cast<Eigen::Index>(count_++)) = r;
    return r;
  }

 private:
  CMatrix q_;
  std::size_t count_ = 0;
};

}  // namespace mudet::detail
