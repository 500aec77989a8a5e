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
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "pauli.hpp"
#include "statevector.hpp"

namespace vqelab {

enum class GateKind : std::uint8_t { RX, RY, RZ, CNOT };

/// Rotations R_P(phi) = exp(-i phi P / 2) carry a parameter index; CNOT
/// carries a control.
struct Gate {
    GateKind kind;
    std::size_t target;
    std::optional<std::size_t> control;
    std::optional<std::size_t> param_index;

    static Gate rx(std::size_t target, std::size_t param) {
        return {GateKind::RX, target, std::nullopt, param};
    }
    static Gate ry(std::size_t target, std::size_t param) {
        return {GateKind::RY, target, std::nullopt, param};
    }
    static Gate rz(std::size_t target, std::size_t param) {
        return {GateKind::RZ, target, std::nullopt, param};
    }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control, std::nullopt};
    }

    [[nodiscard]] bool is_rotation() const noexcept {
        return kind != GateKind::CNOT;
    }
};

/// Ordered gate list acting on |0...0>. Every parameter index in
/// [0, n_params) is used by exactly one rotation.
class Circuit {
  public:
    Circuit(std::size_t n_qubits, std::vector<Gate> gates)
        : n_qubits_{n_qubits}, gates_{std::move(gates)} {
        VQELAB_REQUIRE(n_qubits_ >= 1, "Circuit: need at least one qubit");
        for (const auto &g : gates_) {
            VQELAB_REQUIRE(g.target < n_qubits_, "Circuit: target qubit out of range");
            if (g.is_rotation()) {
                VQELAB_REQUIRE(g.param_index.has_value() && !g.control.has_value(),
                               "Circuit: rotation needs a parameter and no control");
                ++n_params_;
            } else {
                VQELAB_REQUIRE(g.control.has_value() && !g.param_index.has_value(),
                               "Circuit: CNOT needs a control and no parameter");
                VQELAB_REQUIRE(*g.control < n_qubits_ && *g.control != g.target,
                               "Circuit: invalid CNOT control");
            }
        }
        gate_of_param_.assign(n_params_, 0);
        std::vector<bool> used(n_params_, false);
        for (std::size_t gi = 0; gi < gates_.size(); ++gi) {
            const auto &g = gates_[gi];
            if (!g.is_rotation()) {
                continue;
            }
            const auto p = *g.param_index;
            VQELAB_REQUIRE(p < n_params_ && !used[p],
                           "Circuit: parameter indices must be a permutation of [0, n_params)");
            used[p] = true;
            gate_of_param_[p] = gi;
        }
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_params() const noexcept { return n_params_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] const Gate &gate_for_param(std::size_t p) const {
        return gates_.at(gate_of_param_.at(p));
    }
    [[nodiscard]] std::size_t cnot_count() const noexcept {
        std::size_t c = 0;
        for (const auto &g : gates_) {
            c += g.is_rotation() ? 0 : 1;
        }
        return c;
    }

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
    std::size_t n_params_{0};
    std::vector<std::size_t> gate_of_param_;
};

/**
 * EfficientSU2-style ansatz. Each of `layers` blocks is an RX layer, an RY
 * layer and a CNOT chain (i -> i+1); a final RX and RY layer closes the
 * circuit. Parameters are numbered in emission order, so
 * n_params = 2 n (layers + 1).
 */
inline Circuit efficient_su2(std::size_t n, std::size_t layers) {
    VQELAB_REQUIRE(n >= 1, "efficient_su2: n must be positive");
    VQELAB_REQUIRE(layers >= 1, "efficient_su2: layers must be positive");
    std::vector<Gate> gates;
    std::size_t p = 0;
    auto rotation_layers = [&] {
        for (std::size_t q = 0; q < n; ++q) {
            gates.push_back(Gate::rx(q, p++));
        }
        for (std::size_t q = 0; q < n; ++q) {
            gates.push_back(Gate::ry(q, p++));
        }
    };
    for (std::size_t b = 0; b < layers; ++b) {
        rotation_layers();
        for (std::size_t q = 0; q + 1 < n; ++q) {
            gates.push_back(Gate::cnot(q, q + 1));
        }
    }
    rotation_layers();
    return {n, std::move(gates)};
}

namespace detail {

inline void apply_single_qubit(ComplexVector &psi, std::size_t target,
                               const Eigen::Matrix2cd &u) {
    const auto stride = std::size_t{1} << target;
    const auto dim = static_cast<std::size_t>(psi.size());
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const auto i0 = static_cast<Eigen::Index>(base + off);
            const auto i1 = static_cast<Eigen::Index>(base + off + stride);
            const Complex a0 = psi(i0);
            const Complex a1 = psi(i1);
            psi(i0) = u(0, 0) * a0 + u(0, 1) * a1;
            psi(i1) = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }
}

inline void apply_cnot(ComplexVector &psi, std::size_t control, std::size_t target) {
    const auto cbit = std::size_t{1} << control;
    const auto tbit = std::size_t{1} << target;
    const auto dim = static_cast<std::size_t>(psi.size());
    for (std::size_t j = 0; j < dim; ++j) {
        if ((j & cbit) != 0 && (j & tbit) == 0) {
            std::swap(psi(static_cast<Eigen::Index>(j)),
                      psi(static_cast<Eigen::Index>(j | tbit)));
        }
    }
}

inline Eigen::Matrix2cd rotation_matrix(GateKind kind, double phi) {
    const double c = std::cos(phi / 2.0);
    const double s = std::sin(phi / 2.0);
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd u;
    switch (kind) {
    case GateKind::RX:
        u << c, -i * s, -i * s, c;
        break;
    case GateKind::RY:
        u << c, -s, s, c;
        break;
    case GateKind::RZ:
        u << std::exp(-i * (phi / 2.0)), 0.0, 0.0, std::exp(i * (phi / 2.0));
        break;
    default:
        throw InvalidArgument("rotation_matrix: not a rotation gate");
    }
    return u;
}

inline void check_params(const Circuit &circuit, const ParameterVector &params) {
    VQELAB_REQUIRE(static_cast<std::size_t>(params.size()) == circuit.n_params(),
                   "parameter vector length " + std::to_string(params.size()) +
                       " does not match circuit n_params " +
                       std::to_string(circuit.n_params()));
    VQELAB_REQUIRE(params.allFinite(), "parameter vector has non-finite entries");
}

} // namespace detail

/// Applies the circuit to |0...0>.
inline Statevector run(const Circuit &circuit, const ParameterVector &params) {
    detail::check_params(circuit, params);
    Statevector state{circuit.n_qubits()};
    auto &psi = state.mutable_amplitudes();
    for (const auto &g : circuit.gates()) {
        if (g.is_rotation()) {
            detail::apply_single_qubit(
                psi, g.target,
                detail::rotation_matrix(g.kind, params(static_cast<Eigen::Index>(*g.param_index))));
        } else {
            detail::apply_cnot(psi, *g.control, g.target);
        }
    }
    return state;
}

inline constexpr double half_pi = std::numbers::pi / 2.0;

/**
 * States at theta +/- (pi/2) e_i for every parameter i. Gradient, metric and
 * reduced-density derivatives at one theta are all built from this table.
 */
struct ShiftedStates {
    std::vector<Statevector> plus;
    std::vector<Statevector> minus;

    [[nodiscard]] std::size_t n_params() const noexcept { return plus.size(); }
};

inline ShiftedStates shifted_states(const Circuit &circuit, const ParameterVector &params) {
    detail::check_params(circuit, params);
    ShiftedStates out;
    out.plus.reserve(circuit.n_params());
    out.minus.reserve(circuit.n_params());
    ParameterVector shifted = params;
    for (std::size_t i = 0; i < circuit.n_params(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        shifted(ii) = params(ii) + half_pi;
        out.plus.push_back(run(circuit, shifted));
        shifted(ii) = params(ii) - half_pi;
        out.minus.push_back(run(circuit, shifted));
        shifted(ii) = params(ii);
    }
    return out;
}

/// g_i = (f(theta + pi/2 e_i) - f(theta - pi/2 e_i)) / 2 from precomputed states.
inline RealVector grad_parameter_shift(const ShiftedStates &shifted, const Hamiltonian &h) {
    RealVector g(static_cast<Eigen::Index>(shifted.n_params()));
    for (std::size_t i = 0; i < shifted.n_params(); ++i) {
        g(static_cast<Eigen::Index>(i)) =
            (expectation(shifted.plus[i], h) - expectation(shifted.minus[i], h)) / 2.0;
    }
    return g;
}

/// Exact gradient of f(theta) = <psi(theta)|H|psi(theta)> by the
/// parameter-shift rule.
inline RealVector grad_parameter_shift(const Circuit &circuit, const ParameterVector &params,
                                       const Hamiltonian &h) {
    VQELAB_REQUIRE(circuit.n_qubits() == h.n_qubits(),
                   "grad_parameter_shift: circuit/Hamiltonian qubit count mismatch");
    return grad_parameter_shift(shifted_states(circuit, params), h);
}

/// f(theta) = <psi(theta)|H|psi(theta)>
inline double energy(const Circuit &circuit, const ParameterVector &params, const Hamiltonian &h) {
    return expectation(run(circuit, params), h);
}

} // namespace vqelab
