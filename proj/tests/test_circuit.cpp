// Copyright 2026 The vqelab Authors.

// Licensed under the Apache License, Version 2.0 (the License);
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an AS IS BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include <vqelab/circuit.hpp>

#include "test_helpers.hpp"

using namespace vqelab;
using Catch::Approx;

TEST_CASE("efficient_su2 layout", "[circuit]") {
    SECTION("4 qubits, 1 layer") {
        const auto c = efficient_su2(4, 1);
        CHECK(c.n_params() == 16);
        CHECK(c.cnot_count() == 3);
    }
    SECTION("2 qubits, 3 layers") {
        const auto c = efficient_su2(2, 3);
        CHECK(c.n_params() == 16);
        CHECK(c.cnot_count() == 3);
    }
    SECTION("1 qubit, 2 layers") {
        const auto c = efficient_su2(1, 2);
        CHECK(c.n_params() == 6);
        CHECK(c.cnot_count() == 0);
    }
    SECTION("emission order: RX block, RY block, CNOT chain") {
        const auto c = efficient_su2(3, 1);
        const auto &g = c.gates();
        REQUIRE(g.size() == 3 + 3 + 2 + 3 + 3);
        for (std::size_t q = 0; q < 3; ++q) {
            CHECK(g[q].kind == GateKind::RX);
            CHECK(g[q].target == q);
            CHECK(*g[q].param_index == q);
            CHECK(g[3 + q].kind == GateKind::RY);
            CHECK(*g[3 + q].param_index == 3 + q);
        }
        CHECK(g[6].kind == GateKind::CNOT);
        CHECK(*g[6].control == 0);
        CHECK(g[6].target == 1);
        CHECK(*g[7].control == 1);
        CHECK(g[7].target == 2);
        CHECK(*g[13].param_index == 11);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(efficient_su2(0, 1), InvalidArgument);
        CHECK_THROWS_AS(efficient_su2(2, 0), InvalidArgument);
    }
}

TEST_CASE("Circuit invariants", "[circuit]") {
    CHECK_THROWS_AS(Circuit(2, {Gate::rx(0, 1)}), InvalidArgument);
    CHECK_THROWS_AS(Circuit(2, {Gate::rx(0, 0), Gate::ry(1, 0)}), InvalidArgument);
    CHECK_THROWS_AS(Circuit(2, {Gate::cnot(1, 1)}), InvalidArgument);
    CHECK_THROWS_AS(Circuit(2, {Gate::rx(2, 0)}), InvalidArgument);
    CHECK_THROWS_AS(Circuit(2, {Gate{GateKind::RX, 0, 1, 0}}), InvalidArgument);
    CHECK_NOTHROW(Circuit(2, {Gate::ry(1, 1), Gate::rx(0, 0)}));
}

TEST_CASE("run", "[circuit]") {
    SECTION("zero parameters give |000>") {
        const auto c = efficient_su2(3, 1);
        const auto s = run(c, ParameterVector::Zero(12));
        CHECK(std::abs(s[0] - Complex{1.0}) < 1e-15);
        CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-15);
    }
    SECTION("RY(pi)|0> = |1>") {
        const Circuit c{1, {Gate::ry(0, 0)}};
        ParameterVector p(1);
        p << std::numbers::pi;
        const auto s = run(c, p);
        CHECK(std::abs(s[0]) < 1e-15);
        CHECK(std::abs(std::abs(s[1]) - 1.0) < 1e-15);
    }
    SECTION("CNOT copies the control into the target") {
        const Circuit c{2, {Gate::ry(0, 0), Gate::cnot(0, 1)}};
        ParameterVector p(1);
        p << std::numbers::pi;
        const auto s = run(c, p);
        CHECK(std::abs(std::abs(s[3]) - 1.0) < 1e-15);
    }
    SECTION("length mismatch") {
        CHECK_THROWS_AS(run(efficient_su2(2, 1), ParameterVector::Zero(3)), InvalidArgument);
        ParameterVector bad = ParameterVector::Zero(8);
        bad(0) = std::nan("");
        CHECK_THROWS_AS(run(efficient_su2(2, 1), bad), InvalidArgument);
    }
}

TEST_CASE("run preserves the norm", "[circuit][property]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        const auto c = test::random_circuit(n, 5 + rng() % 25, rng);
        const auto p = test::random_params(c.n_params(), rng);
        CHECK(std::abs(run(c, p).amplitudes().norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("run is 2 pi periodic up to global phase", "[circuit][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        const auto c = test::random_circuit(n, 12, rng);
        if (c.n_params() == 0) {
            continue;
        }
        const auto p = test::random_params(c.n_params(), rng);
        ParameterVector q = p;
        q(static_cast<Eigen::Index>(rng() % c.n_params())) += 2.0 * std::numbers::pi;
        const double overlap = std::abs(run(c, p).amplitudes().dot(run(c, q).amplitudes()));
        CHECK(std::abs(overlap - 1.0) < 1e-10);
    }
}

TEST_CASE("run is deterministic", "[circuit]") {
    std::mt19937_64 rng(1);
    const auto c = test::random_circuit(4, 20, rng);
    const auto p = test::random_params(c.n_params(), rng);
    const auto a = run(c, p).amplitudes();
    const auto b = run(c, p).amplitudes();
    CHECK(std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())) == 0);
}

TEST_CASE("grad_parameter_shift", "[circuit]") {
    const Circuit c{1, {Gate::ry(0, 0)}};
    const auto z = parse_hamiltonian("1.0 Z0");
    SECTION("zero slope of cos at 0") {
        CHECK(grad_parameter_shift(c, ParameterVector::Zero(1), z)(0) == Approx(0.0).margin(1e-15));
    }
    SECTION("d cos / d theta at pi/2 is -1") {
        ParameterVector p(1);
        p << std::numbers::pi / 2.0;
        CHECK(grad_parameter_shift(c, p, z)(0) == Approx(-1.0).margin(1e-14));
    }
    SECTION("length mismatch") {
        CHECK_THROWS_AS(grad_parameter_shift(c, ParameterVector::Zero(2), z), InvalidArgument);
    }
}

TEST_CASE("parameter shift matches central finite differences", "[circuit][property]") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        const auto c = test::random_circuit(n, 6 + rng() % 20, rng);
        const auto h = test::random_hamiltonian(n, 1 + rng() % 5, 2, rng);
        const auto p = test::random_params(c.n_params(), rng);
        const auto g = grad_parameter_shift(c, p, h);
        const auto fd = test::fd_gradient([&](const ParameterVector &x) { return energy(c, x, h); }, p);
        CHECK((g - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
}
