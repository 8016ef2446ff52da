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

#include "qoffload/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qoffload::direct {

namespace {

// Cells with every side at the floor are never divided further.
const double kSideFloor = std::pow(3.0, -40);

} // namespace

double HyperRect::diameter() const {
    double s = 0;
    for (double side : sides)
        s += side * side;
    return 0.5 * std::sqrt(s);
}

std::vector<std::size_t> potentially_optimal(const std::vector<HyperRect> &rects, double f_min,
                                             double eps) {
    const std::size_t n = rects.size();
    std::vector<double> diam(n);
    for (std::size_t i = 0; i < n; ++i)
        diam[i] = rects[i].diameter();

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        double di = diam[i], vi = rects[i].value;
        // Feasible K interval such that vi - K*di <= vj - K*dj for all j.
        double lo = 0, hi = std::numeric_limits<double>::infinity();
        bool dominated = false;
        for (std::size_t j = 0; j < n && !dominated; ++j) {
            if (j == i)
                continue;
            double dj = diam[j], vj = rects[j].value;
            if (dj < di) {
                lo = std::max(lo, (vi - vj) / (di - dj));
            } else if (dj > di) {
                hi = std::min(hi, (vj - vi) / (dj - di));
            } else if (vj < vi || (vj == vi && j < i)) {
                dominated = true;
            }
        }
        if (dominated || lo > hi)
            continue;
        // Sufficient-decrease condition against the incumbent.
        if (di > 0) {
            double need = (vi - (f_min - eps * std::abs(f_min))) / di;
            if (need > hi)
                continue;
        } else if (vi > f_min - eps * std::abs(f_min)) {
            continue;
        }
        out.push_back(i);
    }
    return out;
}

std::vector<HyperRect> trisect(const HyperRect &rect, const std::vector<int> &dims,
                               const std::function<double(const std::vector<double> &)> &f) {
    struct Sample {
        int dim;
        double w;
        HyperRect plus, minus;
    };
    std::vector<Sample> samples;
    samples.reserve(dims.size());
    for (int k : dims) {
        double delta = rect.sides[k] / 3;
        HyperRect plus{rect.center, rect.sides, 0};
        plus.center[k] += delta;
        plus.value = f(plus.center);
        HyperRect minus{rect.center, rect.sides, 0};
        minus.center[k] -= delta;
        minus.value = f(minus.center);
        samples.push_back({k, std::min(plus.value, minus.value), std::move(plus),
                           std::move(minus)});
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const Sample &a, const Sample &b) { return a.w < b.w; });

    std::vector<HyperRect> out;
    out.reserve(2 * dims.size() + 1);
    HyperRect parent = rect;
    std::vector<std::pair<HyperRect, HyperRect>> pairs;
    for (auto &s : samples) {
        parent.sides[s.dim] /= 3;
        pairs.emplace_back(std::move(s.plus), std::move(s.minus));
    }
    // Children split later inherit the reduced sides of earlier splits.
    for (std::size_t m = 0; m < samples.size(); ++m) {
        int k = samples[m].dim;
        for (auto *child : {&pairs[m].first, &pairs[m].second}) {
            for (std::size_t p = 0; p <= m; ++p)
                child->sides[samples[p].dim] = rect.sides[samples[p].dim] / 3;
            (void)k;
        }
    }
    out.push_back(std::move(parent));
    for (auto &[plus, minus] : pairs) {
        out.push_back(std::move(plus));
        out.push_back(std::move(minus));
    }
    return out;
}

OptResult minimize(const OptProblem &problem) {
    const std::size_t d = problem.lower.size();
    if (d == 0 || problem.upper.size() != d)
        throw InvalidBounds("bounds must be non-empty and of equal dimension");
    for (std::size_t k = 0; k < d; ++k)
        if (!(problem.lower[k] < problem.upper[k]))
            throw InvalidBounds("lower bound must be strictly below upper bound");
    if (problem.budget < 1)
        throw OptError("evaluation budget must be at least 1");

    int evals = 0;
    auto to_box = [&](const std::vector<double> &unit) {
        std::vector<double> x(d);
        for (std::size_t k = 0; k < d; ++k)
            x[k] = problem.lower[k] + unit[k] * (problem.upper[k] - problem.lower[k]);
        return x;
    };
    auto eval = [&](const std::vector<double> &unit) {
        ++evals;
        return problem.objective(to_box(unit));
    };

    std::vector<HyperRect> rects;
    rects.push_back({std::vector<double>(d, 0.5), std::vector<double>(d, 1.0), 0});
    rects[0].value = eval(rects[0].center);

    double best = rects[0].value;
    std::vector<double> best_unit = rects[0].center;

    while (evals < problem.budget) {
        double sweep_start_best = best;
        auto selected = potentially_optimal(rects, best, problem.eps);
        bool divided = false;
        for (std::size_t idx : selected) {
            double longest = *std::max_element(rects[idx].sides.begin(), rects[idx].sides.end());
            if (longest <= kSideFloor)
                continue; // resolution floor reached
            std::vector<int> dims;
            for (std::size_t k = 0; k < d; ++k)
                if (rects[idx].sides[k] == longest)
                    dims.push_back(static_cast<int>(k));
            if (evals + 2 * static_cast<int>(dims.size()) > problem.budget)
                return {to_box(best_unit), best, evals};

            auto pieces = trisect(rects[idx], dims, eval);
            for (const auto &r : pieces) {
                if (r.value < best) {
                    best = r.value;
                    best_unit = r.center;
                }
            }
            rects[idx] = std::move(pieces[0]);
            for (std::size_t p = 1; p < pieces.size(); ++p)
                rects.push_back(std::move(pieces[p]));
            divided = true;
        }
        if (!divided)
            break;
        double improvement = sweep_start_best - best;
        if (problem.ftol_rel > 0 &&
            improvement < problem.ftol_rel * std::max(std::abs(best), 1e-12))
            break;
    }
    return {to_box(best_unit), best, evals};
}

} // namespace qoffload::direct
