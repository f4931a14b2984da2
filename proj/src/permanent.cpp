// Copyright 2026 The lopsim Authors
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

#include "lopsim/permanent.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lopsim {

std::complex<double> permanent(const Eigen::MatrixXcd &m) {
    if (m.rows() != m.cols()) {
        throw std::domain_error("permanent of a non-square matrix");
    }
    const auto n = static_cast<int>(m.rows());
    if (n == 0) {
        return {1.0, 0.0};
    }
    if (n > 30) {
        throw std::domain_error("permanent dimension too large");
    }

    // perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij
    std::vector<std::complex<double>> row_sums(n, {0.0, 0.0});
    std::complex<double> total{0.0, 0.0};
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        std::uint64_t next = k ^ (k >> 1);
        std::uint64_t flipped = next ^ gray;
        int col = std::countr_zero(flipped);
        bool added = (next & flipped) != 0;
        gray = next;
        for (int i = 0; i < n; ++i) {
            row_sums[i] += added ? m(i, col) : -m(i, col);
        }
        std::complex<double> prod = row_sums[0];
        for (int i = 1; i < n; ++i) {
            prod *= row_sums[i];
        }
        total += (std::popcount(gray) & 1) ? -prod : prod;
    }
    return (n & 1) ? -total : total;
}

}  // namespace lopsim
