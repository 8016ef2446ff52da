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

#include <algorithm>
#include <chrono>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "qoffload/backend.hpp"
#include "qoffload/net.hpp"

using namespace qoffload;
using json = nlohmann::json;

namespace {

const char *kCoinFlip = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\n"
                        "h q[0];\nmeasure q[0] -> c[0];\n";

json request(net::TcpConn &conn, const json &req) {
    REQUIRE(conn.send_line(req.dump()));
    std::string line;
    REQUIRE(conn.recv_line(line) == net::TcpConn::RecvStatus::Ok);
    return json::parse(line);
}

json wait_done(net::TcpConn &conn, std::uint64_t id) {
    for (int i = 0; i < 2000; ++i) {
        auto status = request(conn, {{"type", "status"}, {"id", id}});
        REQUIRE(status["type"] == "status");
        std::string s = status["status"];
        if (s == "completed" || s == "failed")
            return status;
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    FAIL("job never finished");
    return {};
}

struct ServerFixture {
    backend::BackendConfig config;
    std::unique_ptr<backend::BackendServer> server;

    explicit ServerFixture(backend::BackendConfig c = {}) : config(c) {
        config.port = 0;
        server = std::make_unique<backend::BackendServer>(config);
        server->start();
    }
    net::TcpConn connect() { return net::TcpConn::connect("127.0.0.1", server->port()); }
};

} // namespace

TEST_CASE("submit, status, result lifecycle") {
    ServerFixture f;
    auto conn = f.connect();

    auto resp = request(conn, {{"type", "submit"}, {"shots", 1000}, {"qasm", kCoinFlip}});
    REQUIRE(resp["type"] == "job_id");
    CHECK(resp["id"] == 1);

    auto done = wait_done(conn, 1);
    CHECK(done["status"] == "completed");

    auto result = request(conn, {{"type", "result"}, {"id", 1}});
    REQUIRE(result["type"] == "result");
    std::uint64_t total = 0;
    for (const auto &[key, n] : result["counts"].items()) {
        CHECK((key == "0" || key == "1"));
        total += n.get<std::uint64_t>();
    }
    CHECK(total == 1000);

    // a completed status never regresses
    auto again = request(conn, {{"type", "status"}, {"id", 1}});
    CHECK(again["status"] == "completed");
}

TEST_CASE("validation errors") {
    ServerFixture f;
    auto conn = f.connect();

    auto zero = request(conn, {{"type", "submit"}, {"shots", 0}, {"qasm", kCoinFlip}});
    CHECK(zero["type"] == "error");
    CHECK(zero["code"] == "ShotsOutOfRange");

    auto unknown = request(conn, {{"type", "status"}, {"id", 9999}});
    CHECK(unknown["code"] == "UnknownJob");
    auto unknown2 = request(conn, {{"type", "result"}, {"id", 9999}});
    CHECK(unknown2["code"] == "UnknownJob");

    auto badtype = request(conn, {{"type", "frobnicate"}});
    CHECK(badtype["code"] == "MalformedRequest");

    auto nofield = request(conn, {{"type", "submit"}, {"qasm", kCoinFlip}});
    CHECK(nofield["code"] == "MalformedRequest");
}

TEST_CASE("malformed and oversized lines do not kill the connection") {
    backend::BackendConfig c;
    c.max_line_bytes = 1024;
    ServerFixture f(c);
    auto conn = f.connect();

    REQUIRE(conn.send_line("this is not json"));
    std::string line;
    REQUIRE(conn.recv_line(line) == net::TcpConn::RecvStatus::Ok);
    CHECK(json::parse(line)["code"] == "MalformedRequest");

    REQUIRE(conn.send_line(std::string(4096, 'x')));
    REQUIRE(conn.recv_line(line) == net::TcpConn::RecvStatus::Ok);
    CHECK(json::parse(line)["code"] == "PayloadTooLarge");

    // still usable afterwards
    auto resp = request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", kCoinFlip}});
    CHECK(resp["type"] == "job_id");
}

TEST_CASE("abrupt disconnects leave the server healthy") {
    ServerFixture f;
    {
        auto doomed = f.connect();
        REQUIRE(doomed.send_line("{\"type\":")); // half a request, then slam shut
    }
    auto conn = f.connect();
    auto resp = request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", kCoinFlip}});
    CHECK(resp["type"] == "job_id");
}

TEST_CASE("NotCompleted while a job is in flight") {
    backend::BackendConfig c;
    c.inject_latency_ms = 300;
    ServerFixture f(c);
    auto conn = f.connect();

    auto id = request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", kCoinFlip}})["id"]
                  .get<std::uint64_t>();
    auto early = request(conn, {{"type", "result"}, {"id", id}});
    CHECK(early["type"] == "error");
    CHECK(early["code"] == "NotCompleted");
    wait_done(conn, id);
}

TEST_CASE("failed jobs carry the parser message") {
    ServerFixture f;
    auto conn = f.connect();

    auto id = request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", "garbage"}})["id"]
                  .get<std::uint64_t>();
    auto done = wait_done(conn, id);
    CHECK(done["status"] == "failed");
    auto result = request(conn, {{"type", "result"}, {"id", id}});
    CHECK(result["code"] == "JobFailed");
    CHECK(result["message"].get<std::string>().find("SyntaxError") != std::string::npos);
}

TEST_CASE("qubit cap is enforced per job") {
    ServerFixture f;
    auto conn = f.connect();
    std::string big = "qreg q[30]; creg c[1]; measure q[0] -> c[0];";
    auto id = request(conn, {{"type", "submit"}, {"shots", 10}, {"qasm", big}})["id"]
                  .get<std::uint64_t>();
    wait_done(conn, id);
    auto result = request(conn, {{"type", "result"}, {"id", id}});
    CHECK(result["code"] == "JobFailed");
    CHECK(result["message"].get<std::string>().find("qubit cap") != std::string::npos);
}

TEST_CASE("FIFO ordering and contiguous ids under concurrency") {
    backend::BackendConfig c;
    c.inject_latency_ms = 1;
    ServerFixture f(c);

    const int kThreads = 4, kPerThread = 5;
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t)
        threads.emplace_back([&f] {
            auto conn = f.connect();
            for (int i = 0; i < kPerThread; ++i) {
                auto resp =
                    request(conn, {{"type", "submit"}, {"shots", 50}, {"qasm", kCoinFlip}});
                REQUIRE(resp["type"] == "job_id");
            }
        });
    for (auto &t : threads)
        t.join();

    auto conn = f.connect();
    for (std::uint64_t id = 1; id <= kThreads * kPerThread; ++id)
        wait_done(conn, id);

    auto times = f.server->job_times();
    REQUIRE(times.size() == kThreads * kPerThread);
    std::sort(times.begin(), times.end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(times[i].id == i + 1); // one contiguous range
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        CHECK(times[i].finished_at <= times[i + 1].started_at); // strict FIFO
}

TEST_CASE("identical submissions are reproducible across servers") {
    ServerFixture a, b;
    auto ca = a.connect(), cb = b.connect();
    for (auto *conn : {&ca, &cb})
        request(*conn, {{"type", "submit"}, {"shots", 2000}, {"qasm", kCoinFlip}});
    wait_done(ca, 1);
    wait_done(cb, 1);
    auto ra = request(ca, {{"type", "result"}, {"id", 1}});
    auto rb = request(cb, {{"type", "result"}, {"id", 1}});
    CHECK(ra["counts"] == rb["counts"]);
}

TEST_CASE("transpile flag lowers circuits without changing totals") {
    backend::BackendConfig c;
    c.transpile = true;
    ServerFixture f(c);
    auto conn = f.connect();
    auto id = request(conn, {{"type", "submit"}, {"shots", 500}, {"qasm", kCoinFlip}})["id"]
                  .get<std::uint64_t>();
    auto done = wait_done(conn, id);
    REQUIRE(done["status"] == "completed");
    auto result = request(conn, {{"type", "result"}, {"id", id}});
    std::uint64_t total = 0;
    for (const auto &[key, n] : result["counts"].items())
        total += n.get<std::uint64_t>();
    CHECK(total == 500);
}
