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
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "metric.hpp"
#include "pauli.hpp"

namespace vqelab {

enum class OptimizerKind { Vanilla, QNG, WAQNG };

inline std::string to_string(OptimizerKind k) {
    switch (k) {
    case OptimizerKind::Vanilla:
        return "vanilla";
    case OptimizerKind::QNG:
        return "qng";
    default:
        return "waqng";
    }
}

inline OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "vanilla") {
        return OptimizerKind::Vanilla;
    }
    if (name == "qng") {
        return OptimizerKind::QNG;
    }
    if (name == "waqng") {
        return OptimizerKind::WAQNG;
    }
    throw InvalidArgument("unknown optimizer '" + std::string{name} + "'");
}

struct StepConfig {
    double lr = 0.02;
    SpectralConfig spectral{};

    void validate() const {
        VQELAB_REQUIRE(lr > 0.0 && std::isfinite(lr), "StepConfig: lr must be finite and positive");
        spectral.validate();
    }
};

struct RunRecord {
    OptimizerKind kind;
    std::uint64_t seed;
    std::vector<double> energies; ///< index 0 is the initial energy
    ParameterVector final_params;
    StepConfig config;
};

/// i.i.d. uniform draws on [-1, 1].
inline ParameterVector init_params(std::size_t n_params, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ParameterVector p(static_cast<Eigen::Index>(n_params));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = dist(rng);
    }
    return p;
}

/// Everything one update computes at theta.
struct StepDetail {
    ParameterVector next;
    RealVector gradient;
    RealVector direction; ///< M^+ grad (grad itself for vanilla)
    double energy;        ///< f(theta) before the update
};

/**
 * One update at theta:
 *   vanilla: theta - lr grad
 *   qng:     theta - lr F^+ grad, F the pure-state QFI
 *   waqng:   theta - lr W^+ grad, W the weighted subsystem metric
 * Gradient and metric come from the same parameter-shift table.
 */
inline StepDetail step_detailed(OptimizerKind kind, const Circuit &circuit,
                                const ParameterVector &params, const Hamiltonian &h,
                                const StepConfig &cfg, const Statevector &state) {
    const auto shifted = shifted_states(circuit, params);
    StepDetail out;
    out.energy = expectation(state, h);
    out.gradient = grad_parameter_shift(shifted, h);
    switch (kind) {
    case OptimizerKind::Vanilla:
        out.direction = out.gradient;
        break;
    case OptimizerKind::QNG:
        out.direction = pinv_psd(qfi_pure(state, shifted), cfg.spectral) * out.gradient;
        break;
    case OptimizerKind::WAQNG:
        out.direction = pinv_psd(weighted_metric(shifted, h), cfg.spectral) * out.gradient;
        break;
    }
    out.next = params - cfg.lr * out.direction;
    return out;
}

inline StepDetail step_detailed(OptimizerKind kind, const Circuit &circuit,
                                const ParameterVector &params, const Hamiltonian &h,
                                const StepConfig &cfg) {
    cfg.validate();
    VQELAB_REQUIRE(circuit.n_qubits() == h.n_qubits(), "step: circuit/Hamiltonian qubit count mismatch");
    return step_detailed(kind, circuit, params, h, cfg, run(circuit, params));
}

inline ParameterVector step(OptimizerKind kind, const Circuit &circuit,
                            const ParameterVector &params, const Hamiltonian &h,
                            const StepConfig &cfg) {
    return step_detailed(kind, circuit, params, h, cfg).next;
}

/// VQE loop from init_params(seed); records steps + 1 energies.
inline RunRecord run_vqe(const Circuit &circuit, const Hamiltonian &h, OptimizerKind kind,
                         const StepConfig &cfg, std::size_t steps, std::uint64_t seed) {
    VQELAB_REQUIRE(steps >= 1, "run_vqe: steps must be >= 1");
    VQELAB_REQUIRE(circuit.n_qubits() == h.n_qubits(), "run_vqe: circuit/Hamiltonian qubit count mismatch");
    cfg.validate();
    const double guard = 10.0 * h.coefficient_abs_sum();
    RunRecord rec{kind, seed, {}, init_params(circuit.n_params(), seed), cfg};
    rec.energies.reserve(steps + 1);
    for (std::size_t s = 0;; ++s) {
        const auto state = run(circuit, rec.final_params);
        const double e = expectation(state, h);
        if (!std::isfinite(e) || std::abs(e) > guard) {
            throw RuntimeError("run_vqe: energy " + std::to_string(e) + " at step " +
                               std::to_string(s) + " (optimizer " + to_string(kind) +
                               ", seed " + std::to_string(seed) + ") is outside [-" +
                               std::to_string(guard) + ", " + std::to_string(guard) + "]");
        }
        rec.energies.push_back(e);
        if (s == steps) {
            break;
        }
        rec.final_params = step_detailed(kind, circuit, rec.final_params, h, cfg, state).next;
    }
    return rec;
}

struct GroundState {
    double energy;
    std::optional<ComplexVector> vector;
};

/// Smallest eigenvalue of the dense Hamiltonian (n <= 12).
inline GroundState ground_energy_exact(const Hamiltonian &h, bool with_vector = false) {
    VQELAB_REQUIRE(h.n_qubits() <= 12, "ground_energy_exact: n too large for a dense eigensolve");
    const ComplexMatrix m = hamiltonian_matrix(h);
    const ComplexMatrix herm = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
        herm, with_vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw RuntimeError("ground_energy_exact: eigensolver failed");
    }
    GroundState out{eig.eigenvalues()(0), std::nullopt};
    if (with_vector) {
        out.vector = eig.eigenvectors().col(0);
    }
    return out;
}

} // namespace vqelab
