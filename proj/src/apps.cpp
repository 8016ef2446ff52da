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

#include "qoffload/apps.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>

#include <json.hpp>

#include "qoffload/direct.hpp"

namespace qoffload::apps {

using json = nlohmann::json;
using qasm::GateKind;

observable::PauliSum default_hamiltonian() {
    return observable::parse_pauli_sum("1.0 XXII\n"
                                       "1.0 YYII\n"
                                       "1.0 ZZII\n"
                                       "1.0 IIXX\n"
                                       "1.0 IIYY\n"
                                       "1.0 IIZZ\n"
                                       "1.0 IXXI\n"
                                       "1.0 IYYI\n"
                                       "1.0 IZZI\n");
}

observable::PauliSum load_hamiltonian(const RunConfig &config) {
    if (config.hamiltonian_path.empty())
        return default_hamiltonian();
    return observable::load_pauli_sum_file(config.hamiltonian_path);
}

qasm::Circuit ansatz_circuit(double theta0, double theta1) {
    const double half_pi = M_PI / 2;
    qasm::Circuit c;
    c.n_qubits = 4;
    c.n_clbits = 4;
    c.source_name = "ansatz";
    c.ops = {
        {GateKind::Rx, {half_pi}, {0}, -1},  {GateKind::Ry, {half_pi}, {1}, -1},
        {GateKind::Rx, {half_pi}, {2}, -1},  {GateKind::Ry, {half_pi}, {3}, -1},
        {GateKind::Cx, {}, {0, 1}, -1},      {GateKind::Cx, {}, {2, 3}, -1},
        {GateKind::Rz, {theta0}, {0}, -1},   {GateKind::Rz, {theta1}, {2}, -1},
        {GateKind::Cx, {}, {0, 1}, -1},      {GateKind::Cx, {}, {2, 3}, -1},
        {GateKind::Rx, {half_pi}, {0}, -1},  {GateKind::Ry, {-half_pi}, {1}, -1},
        {GateKind::Rx, {half_pi}, {2}, -1},  {GateKind::Ry, {-half_pi}, {3}, -1},
    };
    return c;
}

namespace {

std::uint64_t total_counts(const sim::Counts &counts) {
    std::uint64_t total = 0;
    for (const auto &[key, count] : counts)
        total += count;
    return total;
}

double group_energy(const observable::PauliSum &h, const observable::MeasurementGroup &group,
                    const sim::Counts &counts) {
    std::uint64_t shots = total_counts(counts);
    double e = 0;
    for (std::size_t k : group.members)
        e += h.terms[k].coeff * observable::estimate_term(counts, h.terms[k], shots);
    return e;
}

rt::RuntimeConfig runtime_config(const RunConfig &config) {
    rt::RuntimeConfig rc;
    rc.backends = config.backends;
    rc.qasm_dir = config.qasm_dir;
    rc.poll_ms = config.poll_ms;
    rc.workers = config.workers;
    return rc;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

CoinFlipReport cmd_coin_flip(const RunConfig &config) {
    rt::Runtime runtime(runtime_config(config));
    int counts_handle = runtime.register_handle("coin_flip_counts");
    rt::QpuTaskSpec spec;
    spec.kernel_name = "coin_flip";
    spec.shots = config.shots;
    spec.result_handle = counts_handle;
    runtime.spawn_qpu_task(spec, {{counts_handle, rt::Mode::Out}});

    CoinFlipReport report{};
    runtime.spawn_host_task({{counts_handle, rt::Mode::In}}, [&] {
        report.counts = runtime.get<sim::Counts>(counts_handle);
        double zeros = 0;
        auto it = report.counts.find("0");
        if (it != report.counts.end())
            zeros = static_cast<double>(it->second);
        double half = static_cast<double>(config.shots) / 2;
        report.z_score = std::abs(zeros - half) / std::sqrt(static_cast<double>(config.shots) / 4);
    });
    runtime.taskwait();
    return report;
}

std::string coin_flip_json(const CoinFlipReport &report) {
    json counts = json::object();
    for (const auto &[key, count] : report.counts)
        counts[key] = count;
    return json{{"counts", counts}, {"z_score", report.z_score}}.dump(2);
}

LandscapeResult cmd_landscape(const RunConfig &config) {
    const auto h = load_hamiltonian(config);
    const auto groups = observable::group_terms(h);
    std::vector<std::string> extensions;
    extensions.reserve(groups.size());
    for (const auto &g : groups)
        extensions.push_back(observable::basis_extension(g, h.n_qubits));

    const int n = config.grid;
    LandscapeResult result;
    result.rows.resize(static_cast<std::size_t>(n) * n);

    auto start = std::chrono::steady_clock::now();
    rt::Runtime runtime(runtime_config(config));

    std::vector<int> energy_handles(result.rows.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int point = i * n + j;
            double theta0 = 2 * M_PI * i / n;
            double theta1 = 2 * M_PI * j / n;
            result.rows[point] = {theta0, theta1, 0};
            int e_handle = runtime.register_handle("E_" + std::to_string(point));
            energy_handles[point] = e_handle;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                int c_handle = runtime.register_handle(
                    "counts_" + std::to_string(point) + "_" + std::to_string(g));
                rt::QpuTaskSpec spec;
                spec.kernel_name = "ansatz";
                spec.shots = config.shots;
                spec.params = std::vector<double>{theta0, theta1};
                spec.extension = extensions[g];
                spec.result_handle = c_handle;
                int task = runtime.spawn_qpu_task(spec, {{c_handle, rt::Mode::Out}});
                result.qpu_task_point[task] = point;
                runtime.spawn_host_task(
                    {{c_handle, rt::Mode::In}, {e_handle, rt::Mode::Accumulate}},
                    [&runtime, &h, &groups, c_handle, e_handle, g] {
                        auto counts = runtime.get<sim::Counts>(c_handle);
                        double eg = group_energy(h, groups[g], counts);
                        runtime.update<std::map<int, double>>(
                            e_handle, [&](std::map<int, double> &m) {
                                m[static_cast<int>(g)] = eg;
                            });
                    });
            }
            if (!config.parallel)
                runtime.taskwait();
        }
    }
    runtime.taskwait();

    for (std::size_t p = 0; p < result.rows.size(); ++p) {
        auto parts = runtime.get<std::map<int, double>>(energy_handles[p]);
        double e = 0;
        for (const auto &[g, eg] : parts)
            e += eg;
        result.rows[p].energy = e;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.events = runtime.events();
    return result;
}

std::string landscape_csv(const LandscapeResult &result) {
    std::string out = "theta0,theta1,energy\n";
    for (const auto &row : result.rows)
        out += fmt17(row.theta0) + "," + fmt17(row.theta1) + "," + fmt17(row.energy) + "\n";
    return out;
}

VqeReport cmd_vqe(const RunConfig &config) {
    const auto h = load_hamiltonian(config);
    const auto groups = observable::group_terms(h);
    std::vector<std::string> extensions;
    for (const auto &g : groups)
        extensions.push_back(observable::basis_extension(g, h.n_qubits));

    direct::OptProblem problem;
    problem.lower = {0, 0};
    problem.upper = {2 * M_PI, 2 * M_PI};
    problem.budget = config.budget;
    problem.ftol_rel = config.ftol_rel;

    std::unique_ptr<rt::Runtime> runtime;
    if (config.shots == 0) {
        problem.objective = [&](const std::vector<double> &theta) {
            return observable::exact_energy(ansatz_circuit(theta[0], theta[1]), h);
        };
    } else {
        runtime = std::make_unique<rt::Runtime>(runtime_config(config));
        problem.objective = [&](const std::vector<double> &theta) {
            std::vector<int> handles;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                int c_handle = runtime->register_handle("vqe_counts_" + std::to_string(g));
                rt::QpuTaskSpec spec;
                spec.kernel_name = "ansatz";
                spec.shots = config.shots;
                spec.params = theta;
                spec.extension = extensions[g];
                spec.result_handle = c_handle;
                runtime->spawn_qpu_task(spec, {{c_handle, rt::Mode::Out}});
                handles.push_back(c_handle);
            }
            runtime->taskwait();
            double e = 0;
            for (std::size_t g = 0; g < groups.size(); ++g)
                e += group_energy(h, groups[g], runtime->get<sim::Counts>(handles[g]));
            return e;
        };
    }

    auto opt = direct::minimize(problem);
    VqeReport report;
    report.best_theta = opt.point;
    report.best_energy = opt.value;
    report.evaluations = opt.evaluations;
    report.exact_energy_at_best =
        observable::exact_energy(ansatz_circuit(opt.point[0], opt.point[1]), h);
    return report;
}

std::string vqe_json(const VqeReport &report) {
    return json{{"best_theta", report.best_theta},
                {"best_energy", report.best_energy},
                {"evaluations", report.evaluations},
                {"exact_energy_at_best", report.exact_energy_at_best}}
        .dump(2);
}

} // namespace qoffload::apps
