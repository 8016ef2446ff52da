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
 * End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
 * the process exits nonzero if any criterion fails.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qoffload/apps.hpp"
#include "qoffload/backend.hpp"
#include "qoffload/direct.hpp"
#include "qoffload/net.hpp"
#include "qoffload/observable.hpp"
#include "qoffload/qasm.hpp"
#include "qoffload/runtime.hpp"
#include "qoffload/sim.hpp"
#include "qoffload/transpile.hpp"
#include "test_util.hpp"

using namespace qoffload;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string &what, const std::string &detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++g_failures;
}

std::string repo_qasm_dir() { return std::string(QOFFLOAD_REPO_DIR) + "/qasm"; }

std::unique_ptr<backend::BackendServer> spawn_backend(backend::BackendConfig c = {}) {
    c.port = 0;
    auto server = std::make_unique<backend::BackendServer>(c);
    server->start();
    return server;
}

std::string address_of(const backend::BackendServer &server) {
    return "127.0.0.1:" + std::to_string(server.port());
}

json request(net::TcpConn &conn, const json &req) {
    if (!conn.send_line(req.dump()))
        throw std::runtime_error("send failed");
    std::string line;
    if (conn.recv_line(line) != net::TcpConn::RecvStatus::Ok)
        throw std::runtime_error("recv failed");
    return json::parse(line);
}

qasm::Circuit with_measure_all(qasm::Circuit c) {
    c.n_clbits = c.n_qubits;
    for (int q = 0; q < c.n_qubits; ++q)
        c.ops.push_back({qasm::GateKind::Measure, {}, {q}, q});
    return c;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- criterion 1

void criterion_1_coin_flip() {
    auto server = spawn_backend();
    apps::RunConfig config;
    config.backends = {address_of(*server)};
    config.shots = 100000;
    config.qasm_dir = repo_qasm_dir();
    config.poll_ms = 5;

    auto start = Clock::now();
    auto rep = apps::cmd_coin_flip(config);
    double wall = seconds_since(start);
    server->stop();

    bool keys_ok = rep.counts.size() == 2 && rep.counts.count("0") && rep.counts.count("1");
    bool range_ok = keys_ok;
    for (const auto &[key, n] : rep.counts)
        range_ok = range_ok && n >= 49368 && n <= 50632;
    report(1, keys_ok && range_ok && wall < 5.0, "coin flip counts within 4 sigma, < 5 s",
           keys_ok ? "0:" + std::to_string(rep.counts.at("0")) +
                         " 1:" + std::to_string(rep.counts.at("1")) +
                         " wall=" + std::to_string(wall) + "s"
                   : "unexpected key set");
}

// ---------------------------------------------------------------- criterion 2

void criterion_2_simulator() {
    std::vector<qasm::Circuit> suite;

    qasm::Circuit bell;
    bell.n_qubits = 2;
    bell.ops = {{qasm::GateKind::H, {}, {0}, -1}, {qasm::GateKind::Cx, {}, {0, 1}, -1}};
    suite.push_back(bell);

    for (int n : {3, 4}) {
        qasm::Circuit ghz;
        ghz.n_qubits = n;
        ghz.ops = {{qasm::GateKind::H, {}, {0}, -1}};
        for (int q = 0; q + 1 < n; ++q)
            ghz.ops.push_back({qasm::GateKind::Cx, {}, {q, q + 1}, -1});
        suite.push_back(ghz);
    }

    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    for (int i = 0; i < 5; ++i)
        suite.push_back(apps::ansatz_circuit(angle(rng), angle(rng)));
    while (suite.size() < 20)
        suite.push_back(testutil::random_circuit(rng, 4, 15));

    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        // norm preserved after every gate
        auto state = sim::StateVector::zero(suite[i].n_qubits);
        for (const auto &op : suite[i].ops) {
            sim::apply_gate(state, op);
            if (std::abs(state.norm_sq() - 1.0) >= 1e-10) {
                ok = false;
                detail = "norm drift on circuit " + std::to_string(i);
            }
        }

        auto mc = with_measure_all(suite[i]);
        auto probs = sim::exact_probabilities(mc);
        auto counts = sim::sample_counts(mc, 100000, 9000 + i);
        std::map<std::string, double> freq;
        for (const auto &[k, n] : counts)
            freq[k] = n / 100000.0;
        double tv = 0;
        for (const auto &[k, p] : probs)
            tv += std::abs(p - (freq.count(k) ? freq[k] : 0.0));
        for (const auto &[k, f] : freq)
            if (!probs.count(k))
                tv += f;
        tv /= 2;
        if (tv >= 0.01) {
            ok = false;
            detail = "TV=" + std::to_string(tv) + " on circuit " + std::to_string(i);
        }
    }
    report(2, ok, "sampled vs exact TV < 0.01 on 20 circuits; norm preserved", detail);
}

// ---------------------------------------------------------------- criterion 3

void criterion_3_transpiler() {
    std::mt19937_64 rng(777);
    bool ok = true;
    std::string detail;
    auto native = transpile::GateSet::native();
    for (int trial = 0; trial < 200 && ok; ++trial) {
        auto c = testutil::random_circuit(rng, 3, 20);
        auto lowered = transpile::transpile(c);
        for (const auto &op : lowered.ops)
            if (op.kind != qasm::GateKind::Measure && op.kind != qasm::GateKind::Barrier &&
                !native.contains(op.kind)) {
                ok = false;
                detail = "non-native gate survived";
            }
        if (!transpile::equivalent_up_to_phase(transpile::unitary_of(lowered),
                                               transpile::unitary_of(c), 1e-9)) {
            ok = false;
            detail = "unitary mismatch at trial " + std::to_string(trial);
        }
        auto again = transpile::transpile(lowered);
        for (const auto &op : again.ops)
            if (!native.contains(op.kind)) {
                ok = false;
                detail = "idempotence violated";
            }
    }
    report(3, ok, "200 random circuits equivalent up to phase within 1e-9; idempotent",
           detail);
}

// ---------------------------------------------------------------- criterion 4

void criterion_4_protocol() {
    backend::BackendConfig bc;
    bc.inject_latency_ms = 2;
    auto server = spawn_backend(bc);
    const std::string coin = "qreg q[1]; creg c[1]; h q[0]; measure q[0] -> c[0];";

    std::atomic<bool> submit_ok{true};

    // 50 jobs from 8 concurrent connections
    std::vector<std::thread> threads;
    std::atomic<int> remaining{50};
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&] {
            auto conn = net::TcpConn::connect("127.0.0.1", server->port());
            while (remaining.fetch_sub(1) > 0) {
                auto resp = request(conn, {{"type", "submit"}, {"shots", 20}, {"qasm", coin}});
                if (resp["type"] != "job_id")
                    submit_ok = false;
            }
        });
    for (auto &t : threads)
        t.join();
    bool ok = submit_ok.load();
    std::string detail;

    auto conn = net::TcpConn::connect("127.0.0.1", server->port());
    for (std::uint64_t id = 1; id <= 50; ++id) {
        for (int i = 0; i < 5000; ++i) {
            auto s = request(conn, {{"type", "status"}, {"id", id}});
            if (s["status"] == "completed")
                break;
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
    }

    auto times = server->job_times();
    if (times.size() != 50) {
        ok = false;
        detail = "expected 50 jobs, saw " + std::to_string(times.size());
    }
    std::sort(times.begin(), times.end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i].id != i + 1) {
            ok = false;
            detail = "ids not contiguous";
        }
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i].finished_at > times[i + 1].started_at) {
            ok = false;
            detail = "FIFO violated between " + std::to_string(times[i].id) + " and " +
                     std::to_string(times[i + 1].id);
        }

    // error paths
    if (request(conn, {{"type", "status"}, {"id", 100000}})["code"] != "UnknownJob")
        ok = false, detail = "UnknownJob path";
    auto failing =
        request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", "garbage"}});
    std::uint64_t fid = failing["id"];
    auto inflight =
        request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", coin}});
    auto not_done = request(conn, {{"type", "result"}, {"id", inflight["id"].get<std::uint64_t>()}});
    if (not_done["type"] == "error" && not_done["code"] != "NotCompleted" &&
        not_done["code"] != "UnknownJob") {
        ok = false;
        detail = "NotCompleted path";
    }
    for (int i = 0; i < 5000; ++i) {
        if (request(conn, {{"type", "status"}, {"id", fid}})["status"] == "failed")
            break;
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    if (request(conn, {{"type", "result"}, {"id", fid}})["code"] != "JobFailed")
        ok = false, detail = "JobFailed path";

    // malformed-line resilience
    conn.send_line("%%% not json %%%");
    std::string line;
    if (conn.recv_line(line) != net::TcpConn::RecvStatus::Ok ||
        json::parse(line)["code"] != "MalformedRequest") {
        ok = false;
        detail = "malformed line handling";
    }
    if (request(conn, {{"type", "status"}, {"id", 1}})["type"] != "status") {
        ok = false;
        detail = "connection unusable after malformed line";
    }

    server->stop();
    report(4, ok, "FIFO over 50 jobs from 8 connections; error paths exercised", detail);
}

// ---------------------------------------------------------------- criterion 5

std::vector<long> run_random_dag(std::uint64_t seed, int workers) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ntasks(1, 50);
    std::uniform_int_distribution<int> nhandles(1, 8);
    std::uniform_int_distribution<int> naccess(1, 3);
    std::uniform_int_distribution<int> mode_pick(0, 3);

    rt::RuntimeConfig rc;
    rc.workers = workers;
    rt::Runtime runtime(rc);

    int handles = nhandles(rng);
    std::vector<int> hs;
    for (int i = 0; i < handles; ++i) {
        int h = runtime.register_handle("h" + std::to_string(i));
        runtime.put<long>(h, 1);
        hs.push_back(h);
    }

    int tasks = ntasks(rng);
    std::uniform_int_distribution<int> hpick(0, handles - 1);
    for (int t = 0; t < tasks; ++t) {
        std::vector<rt::Access> accesses;
        std::vector<int> used;
        int n = naccess(rng);
        for (int a = 0; a < n; ++a) {
            int h = hs[hpick(rng)];
            if (std::find(used.begin(), used.end(), h) != used.end())
                continue;
            used.push_back(h);
            accesses.push_back({h, static_cast<rt::Mode>(mode_pick(rng))});
        }
        if (accesses.empty())
            accesses.push_back({hs[0], rt::Mode::In});
        runtime.spawn_host_task(accesses, [&runtime, accesses, t] {
            long val = t + 1;
            for (const auto &acc : accesses)
                if (acc.mode == rt::Mode::In || acc.mode == rt::Mode::InOut)
                    val = val * 17 + runtime.get<long>(acc.handle);
            for (const auto &acc : accesses) {
                if (acc.mode == rt::Mode::Out)
                    runtime.put<long>(acc.handle, val);
                else if (acc.mode == rt::Mode::InOut)
                    runtime.put<long>(acc.handle, runtime.get<long>(acc.handle) * 31 + val);
                else if (acc.mode == rt::Mode::Accumulate)
                    runtime.update<long>(acc.handle,
                                         [t](long &cur) { cur += 1000003L * (t + 1); });
            }
        });
    }
    runtime.taskwait();

    std::vector<long> out;
    for (int h : hs)
        out.push_back(runtime.get<long>(h));
    return out;
}

void criterion_5_dataflow() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto serial = run_random_dag(seed, 1);
        auto parallel = run_random_dag(seed, 8);
        if (serial != parallel) {
            ok = false;
            detail = "divergence at seed " + std::to_string(seed);
            break;
        }
    }
    report(5, ok, "100 random DAGs: 1-worker and 8-worker runs identical", detail);
}

// ---------------------------------------------------------------- criterion 6

void criterion_6_async_offload() {
    backend::BackendConfig bc;
    bc.inject_latency_ms = 50;

    auto run_mode = [&](bool parallel) {
        auto s1 = spawn_backend(bc);
        auto s2 = spawn_backend(bc);
        apps::RunConfig config;
        config.backends = {address_of(*s1), address_of(*s2)};
        config.shots = 256;
        config.qasm_dir = repo_qasm_dir();
        config.grid = 4;
        config.parallel = parallel;
        config.poll_ms = 5;
        auto result = apps::cmd_landscape(config);
        s1->stop();
        s2->stop();
        return result;
    };

    auto par = run_mode(true);
    auto seq = run_mode(false);

    bool ok = true;
    std::string detail;
    auto h = apps::default_hamiltonian();
    if (observable::group_terms(h).size() != 3) {
        ok = false;
        detail = "expected 3 measurement groups";
    }
    if (!(par.wall_seconds < seq.wall_seconds)) {
        ok = false;
        detail = "parallel " + std::to_string(par.wall_seconds) + "s not faster than sequential " +
                 std::to_string(seq.wall_seconds) + "s";
    }
    // identical energies regardless of mode
    for (std::size_t i = 0; i < par.rows.size(); ++i)
        if (par.rows[i].energy != seq.rows[i].energy) {
            ok = false;
            detail = "mode changed energies at row " + std::to_string(i);
        }

    // a host task finished while some QPU job was in flight
    bool overlap = false;
    std::vector<std::pair<Clock::time_point, Clock::time_point>> windows;
    std::map<std::uint64_t, Clock::time_point> submitted;
    for (const auto &e : par.events) {
        if (e.kind == rt::Runtime::Event::Kind::JobSubmitted)
            submitted[e.job_id] = e.time;
        if (e.kind == rt::Runtime::Event::Kind::ResultFetched && submitted.count(e.job_id))
            windows.push_back({submitted[e.job_id], e.time});
    }
    for (const auto &e : par.events) {
        if (e.kind != rt::Runtime::Event::Kind::TaskFinished)
            continue;
        if (par.qpu_task_point.count(e.task_id))
            continue; // qpu task, not a host task
        for (const auto &[a, b] : windows)
            if (e.time > a && e.time < b)
                overlap = true;
    }
    if (!overlap) {
        ok = false;
        detail = "no host task completed during an in-flight job";
    }

    report(6, ok, "parallel landscape beats sequential with 50 ms injected latency",
           "par=" + std::to_string(par.wall_seconds) + "s seq=" +
               std::to_string(seq.wall_seconds) + "s" + (detail.empty() ? "" : "; " + detail));
}

// ---------------------------------------------------------------- criterion 7

/// Independent dense-matrix oracle for <psi|H|psi>, built from Kronecker
/// products without reusing the library's Pauli machinery.
double dense_energy(const sim::StateVector &state, const observable::PauliSum &h) {
    using cd = std::complex<double>;
    const std::size_t dim = state.amps.size();
    std::vector<cd> acc(dim, 0.0);
    for (const auto &term : h.terms) {
        // apply the term to the state, qubit by qubit
        std::vector<cd> v = state.amps;
        for (int q = 0; q < h.n_qubits; ++q) {
            char p = term.paulis[q];
            if (p == 'I')
                continue;
            std::vector<cd> w(dim, 0.0);
            const std::size_t bit = 1ull << q;
            for (std::size_t i = 0; i < dim; ++i) {
                if (p == 'X')
                    w[i ^ bit] += v[i];
                else if (p == 'Y')
                    w[i ^ bit] += ((i & bit) ? cd(0, -1) : cd(0, 1)) * v[i];
                else // Z
                    w[i] += ((i & bit) ? -1.0 : 1.0) * v[i];
            }
            v = std::move(w);
        }
        for (std::size_t i = 0; i < dim; ++i)
            acc[i] += term.coeff * v[i];
    }
    cd e = 0;
    for (std::size_t i = 0; i < dim; ++i)
        e += std::conj(state.amps[i]) * acc[i];
    return e.real();
}

void criterion_7_estimation() {
    auto h = apps::default_hamiltonian();
    auto groups = observable::group_terms(h);
    double coeff_sum = 0;
    for (const auto &t : h.terms)
        coeff_sum += std::abs(t.coeff);
    const std::uint64_t shots = 1'000'000;
    const double bound = 5 * coeff_sum / std::sqrt(double(shots));

    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
        double t0 = angle(rng), t1 = angle(rng);
        auto circuit = apps::ansatz_circuit(t0, t1);

        // validate the library oracle against the independent dense oracle
        auto state = sim::run_statevector(circuit);
        double exact = observable::exact_energy(circuit, h);
        if (std::abs(exact - dense_energy(state, h)) > 1e-9) {
            ok = false;
            detail = "exact oracle disagrees with dense brute force";
        }

        std::vector<sim::Counts> per_group;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            auto src = qasm::append_extension(qasm::serialize(circuit),
                                              observable::basis_extension(groups[g], 4));
            per_group.push_back(
                sim::sample_counts(qasm::parse(src), shots, 50000 + 10 * trial + g));
        }
        double est = observable::estimate_energy(h, groups, per_group);
        worst = std::max(worst, std::abs(est - exact));
        if (std::abs(est - exact) >= bound) {
            ok = false;
            detail = "deviation " + std::to_string(std::abs(est - exact)) + " at trial " +
                     std::to_string(trial);
        }
    }
    report(7, ok, "10^6-shot estimates within 5*sum|c|/10^3 of exact at 10 random angles",
           detail.empty() ? "worst=" + std::to_string(worst) + " bound=" + std::to_string(bound)
                          : detail);
}

// ---------------------------------------------------------------- criterion 8

double grid_oracle_minimum(const observable::PauliSum &h, int n) {
    double best = 1e300;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double e = observable::exact_energy(
                apps::ansatz_circuit(2 * M_PI * i / n, 2 * M_PI * j / n), h);
            best = std::min(best, e);
        }
    return best;
}

void criterion_8_vqe() {
    auto start = Clock::now();
    auto h = apps::default_hamiltonian();
    double oracle_min = grid_oracle_minimum(h, 256);

    apps::RunConfig config;
    config.qasm_dir = repo_qasm_dir();
    config.budget = 300;
    config.ftol_rel = 0; // run the budget out for the tightest incumbent

    bool ok = true;
    std::string detail;

    config.shots = 0; // exact objective
    auto exact_rep = apps::cmd_vqe(config);
    double exact_gap = std::abs(exact_rep.best_energy - oracle_min) / std::abs(oracle_min);
    if (exact_gap >= 0.01) {
        ok = false;
        detail = "exact-objective gap " + std::to_string(exact_gap);
    }

    auto server = spawn_backend();
    config.backends = {address_of(*server)};
    config.shots = 10000;
    config.poll_ms = 2;
    auto noisy_rep = apps::cmd_vqe(config);
    server->stop();
    double noisy_gap =
        std::abs(noisy_rep.exact_energy_at_best - oracle_min) / std::abs(oracle_min);
    if (noisy_gap >= 0.02) {
        ok = false;
        detail += std::string(detail.empty() ? "" : "; ") + "10k-shot gap " +
                  std::to_string(noisy_gap);
    }

    double wall = seconds_since(start);
    if (wall >= 120) {
        ok = false;
        detail += std::string(detail.empty() ? "" : "; ") + "took " + std::to_string(wall) + "s";
    }
    report(8, ok, "VQE within 1% (exact) / 2% (10k shots) of the grid-oracle minimum, < 2 min",
           "oracle=" + std::to_string(oracle_min) + " exact=" +
               std::to_string(exact_rep.best_energy) + " noisy_at_best=" +
               std::to_string(noisy_rep.exact_energy_at_best) + " wall=" +
               std::to_string(wall) + "s" + (detail.empty() ? "" : "; " + detail));
}

// ---------------------------------------------------------------- criterion 9

void criterion_9_landscape() {
    auto start = Clock::now();
    auto server = spawn_backend();
    apps::RunConfig config;
    config.backends = {address_of(*server)};
    config.shots = 10000;
    config.qasm_dir = repo_qasm_dir();
    config.grid = 32;
    config.parallel = true;
    config.poll_ms = 5;

    auto result = apps::cmd_landscape(config);
    server->stop();
    double wall = seconds_since(start);

    auto h = apps::default_hamiltonian();
    double coeff_sum = 0;
    for (const auto &t : h.terms)
        coeff_sum += std::abs(t.coeff);
    double sigma = coeff_sum / std::sqrt(double(config.shots));

    bool ok = result.rows.size() == 1024;
    std::string detail = ok ? "" : "row count " + std::to_string(result.rows.size());
    double worst = 0;
    for (const auto &row : result.rows) {
        double exact =
            observable::exact_energy(apps::ansatz_circuit(row.theta0, row.theta1), h);
        double dev = std::abs(row.energy - exact);
        worst = std::max(worst, dev);
        if (dev >= 5 * sigma) {
            ok = false;
            detail = "deviation " + std::to_string(dev) + " at (" + std::to_string(row.theta0) +
                     ", " + std::to_string(row.theta1) + ")";
        }
    }
    if (wall >= 600) {
        ok = false;
        detail = "took " + std::to_string(wall) + "s";
    }
    report(9, ok, "32x32 landscape: 1024 rows within 5 sigma of the oracle, < 10 min",
           detail.empty() ? "worst=" + std::to_string(worst) + " 5sigma=" +
                                std::to_string(5 * sigma) + " wall=" + std::to_string(wall) + "s"
                          : detail);
}

// --------------------------------------------------------------- criterion 10

std::function<double(const std::vector<double> &)> random_objective(std::mt19937_64 &rng,
                                                                    int dims) {
    std::uniform_real_distribution<double> amp(-1, 1);
    std::uniform_real_distribution<double> freq(0.5, 4.0);
    std::uniform_real_distribution<double> phase(0, 2 * M_PI);
    std::vector<double> a(3 * dims), w(3 * dims), p(3 * dims);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = amp(rng);
        w[i] = freq(rng);
        p[i] = phase(rng);
    }
    return [a, w, p, dims](const std::vector<double> &x) {
        double v = 0;
        for (int d = 0; d < dims; ++d)
            for (int k = 0; k < 3; ++k)
                v += a[3 * d + k] * std::cos(w[3 * d + k] * x[d] + p[3 * d + k]);
        return v;
    };
}

void criterion_10_direct() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(123456);
    for (int trial = 0; trial < 50 && ok; ++trial) {
        int dims = 1 + trial % 3;
        auto obj = random_objective(rng, dims);

        std::vector<std::vector<double>> trace;
        direct::OptProblem p;
        p.objective = [&](const std::vector<double> &x) {
            trace.push_back(x);
            return obj(x);
        };
        p.lower.assign(dims, -2.0);
        p.upper.assign(dims, 1.5);
        p.budget = 150;
        p.ftol_rel = 0;
        auto r = direct::minimize(p);

        if (r.evaluations > p.budget || static_cast<int>(trace.size()) != r.evaluations) {
            ok = false;
            detail = "budget violated at trial " + std::to_string(trial);
        }
        double best = 1e300;
        for (const auto &x : trace)
            best = std::min(best, obj(x));
        if (std::abs(r.value - best) > 1e-12) {
            ok = false;
            detail = "incumbent not the trace minimum at trial " + std::to_string(trial);
        }

        std::vector<std::vector<double>> trace2;
        direct::OptProblem q = p;
        q.objective = [&](const std::vector<double> &x) {
            trace2.push_back(x);
            return obj(x);
        };
        auto r2 = direct::minimize(q);
        if (r2.value != r.value || trace2 != trace) {
            ok = false;
            detail = "nondeterministic at trial " + std::to_string(trial);
        }

        // cover invariant, replayed through the public division primitives
        auto f = [&](const std::vector<double> &x) { return obj(x); };
        std::vector<direct::HyperRect> rects;
        direct::HyperRect root;
        root.center.assign(dims, 0.5);
        root.sides.assign(dims, 1.0);
        root.value = f(root.center);
        rects.push_back(root);
        double f_min = root.value;
        for (int iter = 0; iter < 8; ++iter) {
            auto chosen = direct::potentially_optimal(rects, f_min, 1e-4);
            std::vector<direct::HyperRect> next;
            std::vector<bool> divided(rects.size(), false);
            for (std::size_t idx : chosen) {
                const auto &rect = rects[idx];
                double longest = *std::max_element(rect.sides.begin(), rect.sides.end());
                std::vector<int> dims_to_split;
                for (std::size_t d = 0; d < rect.sides.size(); ++d)
                    if (rect.sides[d] >= longest - 1e-15)
                        dims_to_split.push_back(static_cast<int>(d));
                for (auto &piece : direct::trisect(rect, dims_to_split, f)) {
                    f_min = std::min(f_min, piece.value);
                    next.push_back(piece);
                }
                divided[idx] = true;
            }
            for (std::size_t i = 0; i < rects.size(); ++i)
                if (!divided[i])
                    next.push_back(rects[i]);
            rects = std::move(next);
            double volume = 0;
            for (const auto &rect : rects) {
                double v = 1;
                for (double s : rect.sides)
                    v *= s;
                volume += v;
            }
            if (std::abs(volume - 1.0) >= 1e-9) {
                ok = false;
                detail = "cover broken at trial " + std::to_string(trial);
            }
        }
    }
    report(10, ok, "DIRECT: budget, trace-minimum incumbent, determinism, unit cover",
           detail);
}

} // namespace

int main() {
    criterion_1_coin_flip();
    criterion_2_simulator();
    criterion_3_transpiler();
    criterion_4_protocol();
    criterion_5_dataflow();
    criterion_6_async_offload();
    criterion_7_estimation();
    criterion_8_vqe();
    criterion_9_landscape();
    criterion_10_direct();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
}
