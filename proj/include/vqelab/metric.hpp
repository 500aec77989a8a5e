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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "pauli.hpp"
#include "statevector.hpp"

namespace vqelab {

using Support = std::vector<std::size_t>;

/// Reduced state of the qubits in `support`. Row/column bit t corresponds to
/// support[t].
struct DensityMatrix {
    Support support;
    ComplexMatrix entries;

    [[nodiscard]] std::size_t k() const noexcept { return support.size(); }
};

/// Relative eigenvalue cutoff and optional Tikhonov shift for pinv_psd.
struct SpectralConfig {
    double rcond = 1e-8;
    double ridge = 0.0;

    void validate() const {
        VQELAB_REQUIRE(rcond > 0.0 && rcond < 1.0, "SpectralConfig: rcond must lie in (0, 1)");
        VQELAB_REQUIRE(ridge >= 0.0 && std::isfinite(ridge),
                       "SpectralConfig: ridge must be finite and >= 0");
    }
};

namespace detail {

inline void check_support(const Support &support, std::size_t n_qubits) {
    VQELAB_REQUIRE(!support.empty(), "support must be non-empty");
    for (std::size_t t = 0; t < support.size(); ++t) {
        VQELAB_REQUIRE(support[t] < n_qubits, "support qubit out of range");
        VQELAB_REQUIRE(t == 0 || support[t - 1] < support[t],
                       "support must be sorted without duplicates");
    }
}

/// Partial trace of |psi><psi| onto `support`. An empty support yields the
/// 1x1 matrix [<psi|psi>].
inline ComplexMatrix partial_trace(const ComplexVector &psi, std::size_t n_qubits,
                                   const Support &support) {
    const std::size_t k = support.size();
    const std::size_t env_count = n_qubits - k;
    std::uint64_t support_mask = 0;
    for (auto q : support) {
        support_mask |= std::uint64_t{1} << q;
    }
    Support env;
    env.reserve(env_count);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if ((support_mask >> q & 1U) == 0) {
            env.push_back(q);
        }
    }
    // A(a, e) = psi[j] where j has support bits a and environment bits e.
    ComplexMatrix a(static_cast<Eigen::Index>(dim_of(k)),
                    static_cast<Eigen::Index>(dim_of(env_count)));
    for (std::uint64_t j = 0; j < dim_of(n_qubits); ++j) {
        std::uint64_t ai = 0;
        std::uint64_t ei = 0;
        for (std::size_t t = 0; t < k; ++t) {
            ai |= (j >> support[t] & 1U) << t;
        }
        for (std::size_t t = 0; t < env_count; ++t) {
            ei |= (j >> env[t] & 1U) << t;
        }
        a(static_cast<Eigen::Index>(ai), static_cast<Eigen::Index>(ei)) =
            psi(static_cast<Eigen::Index>(j));
    }
    return a * a.adjoint();
}

/// Real vectorization: column-major real parts followed by imaginary parts.
inline RealVector real_vec(const ComplexMatrix &m) {
    const auto n = m.size();
    RealVector out(2 * n);
    Eigen::Index idx = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            out(idx) = m(r, c).real();
            out(idx + n) = m(r, c).imag();
            ++idx;
        }
    }
    return out;
}

/// Pauli string restricted to `support`, as a 2^k x 2^k matrix in the
/// support ordering used by partial_trace.
inline ComplexMatrix restricted_pauli_matrix(const PauliString &p, const Support &support) {
    if (support.empty()) {
        return ComplexMatrix::Identity(1, 1);
    }
    std::vector<PauliAxis> axes;
    axes.reserve(support.size());
    for (auto q : support) {
        axes.push_back(p.axis(q));
    }
    return pauli_matrix(PauliString{support.size(), std::move(axes)});
}

/// Groups Hamiltonian terms by support, accumulating h_m^2 per support.
inline std::map<Support, double> squared_weights_by_support(const Hamiltonian &h) {
    std::map<Support, double> weights;
    for (const auto &t : h.terms()) {
        weights[t.string.support()] += t.coefficient * t.coefficient;
    }
    return weights;
}

/// Stacks real_vec of each matrix as columns.
inline RealMatrix stack_real_vecs(const std::vector<ComplexMatrix> &ms) {
    if (ms.empty()) {
        return RealMatrix(0, 0);
    }
    RealMatrix out(2 * ms.front().size(), static_cast<Eigen::Index>(ms.size()));
    for (std::size_t i = 0; i < ms.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = real_vec(ms[i]);
    }
    return out;
}

} // namespace detail

inline DensityMatrix reduced_density(const Statevector &state, const Support &support) {
    detail::check_support(support, state.n_qubits());
    return {support, detail::partial_trace(state.amplitudes(), state.n_qubits(), support)};
}

/// d(rho_S)/d(theta_i) for every parameter i, from a shift table.
/// The pi/2 shift rule is exact for rho under exp(-i phi P / 2) rotations.
inline std::vector<ComplexMatrix> rdm_derivatives(const ShiftedStates &shifted,
                                                  const Support &support) {
    std::vector<ComplexMatrix> out;
    out.reserve(shifted.n_params());
    for (std::size_t i = 0; i < shifted.n_params(); ++i) {
        const auto &p = shifted.plus[i];
        const auto &m = shifted.minus[i];
        out.push_back((detail::partial_trace(p.amplitudes(), p.n_qubits(), support) -
                       detail::partial_trace(m.amplitudes(), m.n_qubits(), support)) /
                      2.0);
    }
    return out;
}

inline ComplexMatrix rdm_derivative(const Circuit &circuit, const ParameterVector &params,
                                    std::size_t i, const Support &support) {
    detail::check_params(circuit, params);
    VQELAB_REQUIRE(i < circuit.n_params(), "rdm_derivative: parameter index out of range");
    detail::check_support(support, circuit.n_qubits());
    ParameterVector shifted = params;
    const auto ii = static_cast<Eigen::Index>(i);
    shifted(ii) = params(ii) + half_pi;
    const auto plus = run(circuit, shifted);
    shifted(ii) = params(ii) - half_pi;
    const auto minus = run(circuit, shifted);
    return (detail::partial_trace(plus.amplitudes(), plus.n_qubits(), support) -
            detail::partial_trace(minus.amplitudes(), minus.n_qubits(), support)) /
           2.0;
}

/// (T)_ij = tr(D_i D_j) for Hermitian derivative matrices D.
inline MetricTensor hs_tensor_from_derivatives(const std::vector<ComplexMatrix> &derivs) {
    const auto v = static_cast<Eigen::Index>(derivs.size());
    if (v == 0) {
        return MetricTensor(0, 0);
    }
    const RealMatrix stacked = detail::stack_real_vecs(derivs);
    MetricTensor t = stacked.transpose() * stacked;
    // Exact symmetry; the product is symmetric up to rounding only.
    return (t + t.transpose()) / 2.0;
}

inline MetricTensor hs_tensor(const ShiftedStates &shifted, const Support &support) {
    return hs_tensor_from_derivatives(rdm_derivatives(shifted, support));
}

/// Hilbert-Schmidt metric tensor tr(d_i rho_S d_j rho_S) of the reduced state.
inline MetricTensor hs_tensor(const Circuit &circuit, const ParameterVector &params,
                              const Support &support) {
    detail::check_support(support, circuit.n_qubits());
    return hs_tensor(shifted_states(circuit, params), support);
}

/**
 * Pure-state quantum Fisher information
 *   F_ij = 4 Re(<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>).
 *
 * For psi = A R(theta_i) B|0>, psi(theta + pi/2 e_i) - psi(theta - pi/2 e_i)
 * = sqrt(2) d_i psi, so the state derivative is read off the shift table.
 */
inline MetricTensor qfi_pure(const Statevector &state, const ShiftedStates &shifted) {
    const auto v = static_cast<Eigen::Index>(shifted.n_params());
    if (v == 0) {
        return MetricTensor(0, 0);
    }
    const auto dim = static_cast<Eigen::Index>(state.dim());
    ComplexMatrix d(dim, v);
    const double scale = 1.0 / (2.0 * std::numbers::sqrt2);
    for (Eigen::Index i = 0; i < v; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        d.col(i) = (shifted.plus[ui].amplitudes() - shifted.minus[ui].amplitudes()) * scale;
    }
    const ComplexMatrix gram = d.adjoint() * d;
    const ComplexVector overlap = d.adjoint() * state.amplitudes(); // <d_i psi|psi>
    MetricTensor f = 4.0 * (gram - overlap * overlap.adjoint()).real();
    return (f + f.transpose()) / 2.0;
}

inline MetricTensor qfi_pure(const Circuit &circuit, const ParameterVector &params) {
    return qfi_pure(run(circuit, params), shifted_states(circuit, params));
}

/// W = (2 / sum_m h_m^2) sum_m h_m^2 T_m, with T_m the Hilbert-Schmidt tensor
/// on the support of term m. Terms sharing a support share one T.
inline MetricTensor weighted_metric(const ShiftedStates &shifted, const Hamiltonian &h) {
    const double norm_sq = h.coefficient_norm_sq();
    VQELAB_REQUIRE(norm_sq > 0.0, "weighted_metric: zero coefficient vector");
    const auto v = static_cast<Eigen::Index>(shifted.n_params());
    MetricTensor w = MetricTensor::Zero(v, v);
    if (v == 0) {
        return w;
    }
    for (const auto &[support, weight] : detail::squared_weights_by_support(h)) {
        if (support.empty()) {
            continue; // identity terms do not move
        }
        w += weight * hs_tensor(shifted, support);
    }
    return (2.0 / norm_sq) * w;
}

inline MetricTensor weighted_metric(const Circuit &circuit, const ParameterVector &params,
                                    const Hamiltonian &h) {
    VQELAB_REQUIRE(circuit.n_qubits() == h.n_qubits(),
                   "weighted_metric: circuit/Hamiltonian qubit count mismatch");
    VQELAB_REQUIRE(h.coefficient_norm_sq() > 0.0, "weighted_metric: zero coefficient vector");
    return weighted_metric(shifted_states(circuit, params), h);
}

/// Spectral pseudo-inverse of a symmetric PSD matrix: eigenvalues of
/// M + ridge I above rcond * lambda_max are inverted, the rest are dropped.
inline RealMatrix pinv_psd(const RealMatrix &m, const SpectralConfig &cfg = {}) {
    cfg.validate();
    VQELAB_REQUIRE(m.rows() == m.cols(), "pinv_psd: matrix must be square");
    if (m.size() == 0) {
        return RealMatrix(0, 0);
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    VQELAB_REQUIRE((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
                   "pinv_psd: matrix is not symmetric");
    RealMatrix shifted = (m + m.transpose()) / 2.0;
    shifted.diagonal().array() += cfg.ridge;
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(shifted);
    VQELAB_REQUIRE(eig.info() == Eigen::Success, "pinv_psd: eigendecomposition failed");
    const RealVector &lambda = eig.eigenvalues();
    const double lambda_max = lambda.maxCoeff();
    RealVector inv = RealVector::Zero(lambda.size());
    if (lambda_max > 0.0) {
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            if (lambda(i) > cfg.rcond * lambda_max) {
                inv(i) = 1.0 / lambda(i);
            }
        }
    }
    const RealMatrix &vecs = eig.eigenvectors();
    RealMatrix out = vecs * inv.asDiagonal() * vecs.transpose();
    return (out + out.transpose()) / 2.0;
}

inline double min_eigenvalue(const RealMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig((m + m.transpose()) / 2.0,
                                                  Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

/// Residual and Jacobian of the weighted least-squares surrogate
///   f(theta) = r^T r,  r = [h_m (vec rho_m - vec Hhat_m)]_m / sqrt(sum h^2),
/// with Hhat_m = -H_m / h_m.
struct GaussNewtonSystem {
    RealVector residual;
    RealMatrix jacobian;
};

inline GaussNewtonSystem gauss_newton_residual_jacobian(const Circuit &circuit,
                                                        const ParameterVector &params,
                                                        const Hamiltonian &h) {
    VQELAB_REQUIRE(circuit.n_qubits() == h.n_qubits(),
                   "gauss_newton_residual_jacobian: qubit count mismatch");
    for (const auto &t : h.terms()) {
        VQELAB_REQUIRE(t.coefficient != 0.0,
                       "gauss_newton_residual_jacobian: zero coefficient");
    }
    const auto state = run(circuit, params);
    const auto shifted = shifted_states(circuit, params);
    const double inv_norm = 1.0 / std::sqrt(h.coefficient_norm_sq());
    const auto v = static_cast<Eigen::Index>(circuit.n_params());

    std::map<Support, std::pair<ComplexMatrix, RealMatrix>> cache;
    std::vector<RealVector> residual_blocks;
    std::vector<RealMatrix> jacobian_blocks;
    Eigen::Index rows = 0;
    for (const auto &t : h.terms()) {
        const auto support = t.string.support();
        auto it = cache.find(support);
        if (it == cache.end()) {
            ComplexMatrix rho = detail::partial_trace(state.amplitudes(), state.n_qubits(), support);
            RealMatrix jac = RealMatrix::Zero(2 * rho.size(), v);
            if (!support.empty() && v > 0) {
                jac = detail::stack_real_vecs(rdm_derivatives(shifted, support));
            }
            it = cache.emplace(support, std::make_pair(std::move(rho), std::move(jac))).first;
        }
        const auto &[rho, jac] = it->second;
        const ComplexMatrix target =
            -detail::restricted_pauli_matrix(t.string, support) / t.coefficient;
        residual_blocks.push_back(t.coefficient * inv_norm * detail::real_vec(rho - target));
        jacobian_blocks.push_back(t.coefficient * inv_norm * jac);
        rows += residual_blocks.back().size();
    }
    GaussNewtonSystem out{RealVector(rows), RealMatrix(rows, v)};
    Eigen::Index r0 = 0;
    for (std::size_t b = 0; b < residual_blocks.size(); ++b) {
        const auto len = residual_blocks[b].size();
        out.residual.segment(r0, len) = residual_blocks[b];
        out.jacobian.middleRows(r0, len) = jacobian_blocks[b];
        r0 += len;
    }
    return out;
}

/// D_W(theta, theta + delta) = (2 / sum h^2) sum_m h_m^2 ||rho_m(theta + delta) - rho_m(theta)||_F^2
inline double dw_distance(const Circuit &circuit, const ParameterVector &params,
                          const RealVector &delta, const Hamiltonian &h) {
    VQELAB_REQUIRE(delta.size() == params.size(), "dw_distance: delta length mismatch");
    VQELAB_REQUIRE(circuit.n_qubits() == h.n_qubits(), "dw_distance: qubit count mismatch");
    const double norm_sq = h.coefficient_norm_sq();
    VQELAB_REQUIRE(norm_sq > 0.0, "dw_distance: zero coefficient vector");
    const auto a = run(circuit, params);
    const auto b = run(circuit, params + delta);
    double acc = 0.0;
    for (const auto &[support, weight] : detail::squared_weights_by_support(h)) {
        if (support.empty()) {
            continue;
        }
        const ComplexMatrix diff =
            detail::partial_trace(b.amplitudes(), b.n_qubits(), support) -
            detail::partial_trace(a.amplitudes(), a.n_qubits(), support);
        acc += weight * diff.squaredNorm();
    }
    return 2.0 * acc / norm_sq;
}

/// 1 - |<a|b>|^2
inline double fidelity_distance_pure(const Statevector &a, const Statevector &b) {
    VQELAB_REQUIRE(a.dim() == b.dim(), "fidelity_distance_pure: dimension mismatch");
    const double overlap = std::norm(a.amplitudes().dot(b.amplitudes()));
    return std::clamp(1.0 - overlap, 0.0, 1.0);
}

} // namespace vqelab
