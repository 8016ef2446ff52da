// Copyright 2026 The qoffload developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * DIRECT (DIviding RECTangles) derivative-free global minimizer over a box.
 */

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace qoffload::direct {

struct OptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidBounds : OptError {
    using OptError::OptError;
};

/// Search cell in the unit hypercube. Side lengths are powers of 1/3.
struct HyperRect {
    std::vector<double> center;
    std::vector<double> sides;
    double value = 0;

    /// Half-diagonal, the cell's size measure for the selection rule.
    double diameter() const;
};

struct OptProblem {
    std::function<double(const std::vector<double> &)> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    int budget = 500;
    double ftol_rel = 1e-4;
    double eps = 1e-4; // potential-optimality slack
};

struct OptResult {
    std::vector<double> point;
    double value = 0;
    int evaluations = 0;
};

/// Indices of potentially optimal rects: the lower-right convex hull of
/// (diameter, value) points that can improve on f_min by at least
/// eps*|f_min| for some K > 0. Ties on equal (diameter, value) keep the
/// lowest index.
std::vector<std::size_t> potentially_optimal(const std::vector<HyperRect> &rects, double f_min,
                                             double eps);

/// One DIRECT division of `rect` along its longest dimensions `dims`,
/// sampling center +- side/3 with `f`. Returns 2*|dims|+1 rects: the shrunk
/// parent first, then child pairs in split order (best sampled dimension
/// split first).
std::vector<HyperRect> trisect(const HyperRect &rect, const std::vector<int> &dims,
                               const std::function<double(const std::vector<double> &)> &f);

OptResult minimize(const OptProblem &problem);

} // namespace qoffload::direct
