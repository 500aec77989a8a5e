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
#include <array>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "metric.hpp"
#include "pauli.hpp"

namespace vqelab {

/// One randomized-Pauli measurement record restricted to a support.
struct Snapshot {
    std::vector<PauliAxis> bases;      ///< X, Y or Z per support qubit
    std::vector<std::uint8_t> outcomes; ///< measured bit per support qubit

    bool operator==(const Snapshot &) const = default;
};

struct ShadowSet {
    Support support;
    std::vector<Snapshot> snapshots;
    std::uint64_t seed;

    [[nodiscard]] std::size_t size() const noexcept { return snapshots.size(); }
};

namespace shadow_detail {

inline const Eigen::Matrix2cd &hadamard() {
    static const Eigen::Matrix2cd h = [] {
        Eigen::Matrix2cd m;
        const double s = 1.0 / std::numbers::sqrt2;
        m << s, s, s, -s;
        return m;
    }();
    return h;
}

/// Rotation U applied before a computational-basis measurement:
///   X -> H,  Y -> H S^dagger,  Z -> I.
inline Eigen::Matrix2cd measurement_rotation(PauliAxis basis) {
    const Complex i{0.0, 1.0};
    switch (basis) {
    case PauliAxis::X:
        return hadamard();
    case PauliAxis::Y: {
        Eigen::Matrix2cd s_dag;
        s_dag << 1.0, 0.0, 0.0, -i;
        return hadamard() * s_dag;
    }
    case PauliAxis::Z:
        return Eigen::Matrix2cd::Identity();
    default:
        throw InvalidArgument("shadow basis must be X, Y or Z");
    }
}

/// 3 U^dagger |b><b| U - I
inline Eigen::Matrix2cd factor(PauliAxis basis, std::uint8_t bit) {
    const Eigen::Matrix2cd u = measurement_rotation(basis);
    const Eigen::Vector2cd v = u.adjoint().col(bit & 1U);
    return 3.0 * v * v.adjoint() - Eigen::Matrix2cd::Identity();
}

inline constexpr std::size_t code_of(PauliAxis basis, std::uint8_t bit) noexcept {
    return 2 * (static_cast<std::size_t>(basis) - 1) + (bit & 1U);
}

/// Real tr(A B) over the six single-qubit factors, indexed by code_of.
inline const std::array<std::array<double, 6>, 6> &factor_trace_table() {
    static const auto table = [] {
        std::array<std::array<double, 6>, 6> t{};
        constexpr std::array<PauliAxis, 3> axes{PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
        for (auto a1 : axes) {
            for (std::uint8_t b1 = 0; b1 < 2; ++b1) {
                for (auto a2 : axes) {
                    for (std::uint8_t b2 = 0; b2 < 2; ++b2) {
                        t[code_of(a1, b1)][code_of(a2, b2)] =
                            (factor(a1, b1) * factor(a2, b2)).trace().real();
                    }
                }
            }
        }
        return t;
    }();
    return table;
}

inline std::map<std::vector<std::uint8_t>, std::size_t> histogram(const ShadowSet &s) {
    std::map<std::vector<std::uint8_t>, std::size_t> hist;
    std::vector<std::uint8_t> codes(s.support.size());
    for (const auto &snap : s.snapshots) {
        for (std::size_t q = 0; q < codes.size(); ++q) {
            codes[q] = static_cast<std::uint8_t>(code_of(snap.bases[q], snap.outcomes[q]));
        }
        ++hist[codes];
    }
    return hist;
}

} // namespace shadow_detail

/// Per-qubit factors 3 U^dagger |b><b| U - I of a snapshot. Their Kronecker
/// product is the snapshot's unbiased state estimate.
inline std::vector<Eigen::Matrix2cd> snapshot_factors(const Snapshot &s) {
    VQELAB_REQUIRE(s.bases.size() == s.outcomes.size(),
                   "snapshot: basis and outcome lists differ in length");
    std::vector<Eigen::Matrix2cd> out;
    out.reserve(s.bases.size());
    for (std::size_t q = 0; q < s.bases.size(); ++q) {
        out.push_back(shadow_detail::factor(s.bases[q], s.outcomes[q]));
    }
    return out;
}

/// Draws `count` snapshots of the state prepared by (circuit, params) on the
/// given support. Bases are uniform over {X, Y, Z} per support qubit; the
/// outcome is drawn from the Born distribution of the rotated state
/// marginalized to the support.
inline ShadowSet collect_shadows(const Statevector &state, const Support &support,
                                 std::size_t count, std::uint64_t seed) {
    detail::check_support(support, state.n_qubits());
    VQELAB_REQUIRE(count >= 1, "collect_shadows: need at least one snapshot");
    const std::size_t k = support.size();
    VQELAB_REQUIRE(k <= 20, "collect_shadows: support too large");

    std::mt19937_64 rng(mix_seed(seed));
    std::uniform_int_distribution<int> pick_basis(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr std::array<PauliAxis, 3> axes{PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

    // Cumulative marginal outcome distribution, cached per basis assignment.
    std::map<std::vector<std::uint8_t>, std::vector<double>> cdf_cache;
    auto cdf_for = [&](const std::vector<std::uint8_t> &basis_ids) -> const std::vector<double> & {
        auto it = cdf_cache.find(basis_ids);
        if (it != cdf_cache.end()) {
            return it->second;
        }
        ComplexVector psi = state.amplitudes();
        for (std::size_t t = 0; t < k; ++t) {
            detail::apply_single_qubit(psi, support[t],
                                       shadow_detail::measurement_rotation(axes[basis_ids[t]]));
        }
        std::vector<double> marginal(dim_of(k), 0.0);
        for (std::uint64_t j = 0; j < dim_of(state.n_qubits()); ++j) {
            std::uint64_t b = 0;
            for (std::size_t t = 0; t < k; ++t) {
                b |= (j >> support[t] & 1U) << t;
            }
            marginal[b] += std::norm(psi(static_cast<Eigen::Index>(j)));
        }
        std::vector<double> cdf(marginal.size());
        double acc = 0.0;
        for (std::size_t b = 0; b < marginal.size(); ++b) {
            acc += marginal[b];
            cdf[b] = acc;
        }
        return cdf_cache.emplace(basis_ids, std::move(cdf)).first->second;
    };

    ShadowSet out{support, {}, seed};
    out.snapshots.reserve(count);
    std::vector<std::uint8_t> basis_ids(k);
    for (std::size_t s = 0; s < count; ++s) {
        for (std::size_t t = 0; t < k; ++t) {
            basis_ids[t] = static_cast<std::uint8_t>(pick_basis(rng));
        }
        const auto &cdf = cdf_for(basis_ids);
        const double u = unit(rng) * cdf.back();
        auto pos = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        pos = std::min(pos, cdf.size() - 1);
        Snapshot snap;
        snap.bases.resize(k);
        snap.outcomes.resize(k);
        for (std::size_t t = 0; t < k; ++t) {
            snap.bases[t] = axes[basis_ids[t]];
            snap.outcomes[t] = static_cast<std::uint8_t>(pos >> t & 1U);
        }
        out.snapshots.push_back(std::move(snap));
    }
    return out;
}

inline ShadowSet collect_shadows(const Circuit &circuit, const ParameterVector &params,
                                 const Support &support, std::size_t count,
                                 std::uint64_t seed) {
    return collect_shadows(run(circuit, params), support, count, seed);
}

/**
 * Cross-set overlap estimator p = (1 / T_a T_b) sum_ij tr(rho_i sigma_j).
 *
 * Each trace factorizes into prod_q tr(A_q B_q); identical snapshots are
 * histogrammed first so the double sum runs over distinct records only.
 */
inline double estimate_overlap(const ShadowSet &a, const ShadowSet &b) {
    VQELAB_REQUIRE(a.support == b.support, "estimate_overlap: support mismatch");
    VQELAB_REQUIRE(a.size() > 0 && b.size() > 0, "estimate_overlap: empty shadow set");
    if (a.seed == b.seed) {
        std::clog << "vqelab: warning: estimate_overlap called with identical seeds ("
                  << a.seed << "); the estimator assumes independent sets\n";
    }
    const auto &table = shadow_detail::factor_trace_table();
    const auto hist_a = shadow_detail::histogram(a);
    const auto hist_b = shadow_detail::histogram(b);
    double total = 0.0;
    for (const auto &[ua, ca] : hist_a) {
        double row = 0.0;
        for (const auto &[ub, cb] : hist_b) {
            double prod = 1.0;
            for (std::size_t q = 0; q < ua.size(); ++q) {
                prod *= table[ua[q]][ub[q]];
            }
            row += static_cast<double>(cb) * prod;
        }
        total += static_cast<double>(ca) * row;
    }
    return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

/**
 * Shadow estimate of 2 tr(d_i rho_S d_j rho_S) via
 *   (1/2) [p(+,+) - p(+,-) - p(-,+) + p(-,-)],
 * p(s,t) = tr(rho_S(theta + s pi/2 e_i) rho_S(theta + t pi/2 e_j)).
 *
 * Every overlap uses two fresh shadow sets. A set's seed depends only on the
 * unordered pair of shifted states it is paired with, so swapping i and j
 * reproduces the same estimate bit for bit.
 */
inline double estimate_metric_element(const Circuit &circuit, const ParameterVector &params,
                                      std::size_t i, std::size_t j, const Support &support,
                                      std::size_t shots, std::uint64_t seed) {
    detail::check_params(circuit, params);
    VQELAB_REQUIRE(i < circuit.n_params() && j < circuit.n_params(),
                   "estimate_metric_element: parameter index out of range");
    VQELAB_REQUIRE(shots >= 1, "estimate_metric_element: need at least one snapshot");
    detail::check_support(support, circuit.n_qubits());

    auto shifted_state = [&](std::size_t p, int sign) {
        ParameterVector th = params;
        th(static_cast<Eigen::Index>(p)) += sign * half_pi;
        return run(circuit, th);
    };
    auto overlap = [&](std::size_t pa, int sa, std::size_t pb, int sb) {
        std::uint64_t ka = 2 * pa + (sa < 0 ? 1 : 0);
        std::uint64_t kb = 2 * pb + (sb < 0 ? 1 : 0);
        if (kb < ka) {
            std::swap(ka, kb);
            std::swap(pa, pb);
            std::swap(sa, sb);
        }
        const auto set_a =
            collect_shadows(shifted_state(pa, sa), support, shots, mix_seed(seed, ka, kb, 0));
        const auto set_b =
            collect_shadows(shifted_state(pb, sb), support, shots, mix_seed(seed, ka, kb, 1));
        return estimate_overlap(set_a, set_b);
    };
    const double pp = overlap(i, +1, j, +1);
    const double pm = overlap(i, +1, j, -1);
    const double mp = overlap(i, -1, j, +1);
    const double mm = overlap(i, -1, j, -1);
    return 0.5 * ((pp + mm) - (pm + mp));
}

/// Chebyshev bound on Var[p_hat] for n-qubit states with T snapshots per set:
/// 2^{n+1} / T + 2^{4n} / T^2.
inline double overlap_variance_bound(std::size_t n, std::size_t shots) {
    const auto t = static_cast<double>(shots);
    return std::ldexp(1.0, static_cast<int>(n + 1)) / t +
           std::ldexp(1.0, static_cast<int>(4 * n)) / (t * t);
}

/// Snapshots needed per metric element: four overlaps, each requiring
/// T >= 2^{k+1} / (eps^2 delta).
inline std::uint64_t shots_budget(std::size_t k, double eps, double delta) {
    VQELAB_REQUIRE(eps > 0.0 && std::isfinite(eps), "shots_budget: eps must be positive");
    VQELAB_REQUIRE(delta > 0.0 && delta < 1.0, "shots_budget: delta must lie in (0, 1)");
    VQELAB_REQUIRE(k <= 60, "shots_budget: locality too large");
    const double raw = 4.0 * std::ldexp(1.0, static_cast<int>(k + 1)) / (eps * eps * delta);
    // Absorb rounding noise such as 15999.999999999996 before taking the ceiling.
    const double nearest = std::round(raw);
    const double value = std::abs(raw - nearest) <= 1e-9 * raw ? nearest : std::ceil(raw);
    return static_cast<std::uint64_t>(value);
}

} // namespace vqelab
