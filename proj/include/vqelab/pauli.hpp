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
#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "common.hpp"
#include "statevector.hpp"

namespace vqelab {

enum class PauliAxis : std::uint8_t { I, X, Y, Z };

inline char to_char(PauliAxis a) noexcept {
    switch (a) {
    case PauliAxis::X:
        return 'X';
    case PauliAxis::Y:
        return 'Y';
    case PauliAxis::Z:
        return 'Z';
    default:
        return 'I';
    }
}

/// Single-qubit Pauli matrix in the computational basis.
inline Eigen::Matrix2cd single_qubit_pauli(PauliAxis a) {
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (a) {
    case PauliAxis::X:
        m << 0.0, 1.0, 1.0, 0.0;
        break;
    case PauliAxis::Y:
        m << 0.0, -i, i, 0.0;
        break;
    case PauliAxis::Z:
        m << 1.0, 0.0, 0.0, -1.0;
        break;
    default:
        m.setIdentity();
    }
    return m;
}

/**
 * @brief Tensor product of single-qubit Pauli operators on n qubits.
 *
 * Acting on a basis state, P|j> = i^{#Y} (-1)^{popcount(j & z_mask)} |j ^ x_mask>,
 * where x_mask marks X/Y positions and z_mask marks Y/Z positions.
 */
class PauliString {
  public:
    PauliString(std::size_t n_qubits, std::vector<PauliAxis> axes)
        : n_qubits_{n_qubits}, axes_{std::move(axes)} {
        VQELAB_REQUIRE(n_qubits_ >= 1, "PauliString: need at least one qubit");
        VQELAB_REQUIRE(n_qubits_ <= 63, "PauliString: too many qubits");
        VQELAB_REQUIRE(axes_.size() == n_qubits_,
                       "PauliString: axes length must equal n_qubits");
        for (std::size_t q = 0; q < n_qubits_; ++q) {
            const auto bit = std::uint64_t{1} << q;
            if (axes_[q] == PauliAxis::X || axes_[q] == PauliAxis::Y) {
                x_mask_ |= bit;
            }
            if (axes_[q] == PauliAxis::Y || axes_[q] == PauliAxis::Z) {
                z_mask_ |= bit;
            }
            if (axes_[q] == PauliAxis::Y) {
                ++n_y_;
            }
        }
    }

    /// Builds a string from sparse (qubit, axis) pairs; all other qubits are I.
    static PauliString
    from_sparse(std::size_t n_qubits,
                const std::vector<std::pair<std::size_t, PauliAxis>> &ops) {
        std::vector<PauliAxis> axes(n_qubits, PauliAxis::I);
        for (const auto &[q, a] : ops) {
            VQELAB_REQUIRE(q < n_qubits, "PauliString: qubit index out of range");
            VQELAB_REQUIRE(axes[q] == PauliAxis::I,
                           "PauliString: duplicate qubit index " +
                               std::to_string(q));
            axes[q] = a;
        }
        return {n_qubits, std::move(axes)};
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliAxis> &axes() const noexcept {
        return axes_;
    }
    [[nodiscard]] PauliAxis axis(std::size_t q) const { return axes_.at(q); }

    /// Sorted list of qubits carrying a non-identity axis.
    [[nodiscard]] std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t q = 0; q < n_qubits_; ++q) {
            if (axes_[q] != PauliAxis::I) {
                s.push_back(q);
            }
        }
        return s;
    }
    [[nodiscard]] std::size_t locality() const noexcept {
        return static_cast<std::size_t>(std::popcount(x_mask_ | z_mask_));
    }

    [[nodiscard]] std::uint64_t x_mask() const noexcept { return x_mask_; }
    [[nodiscard]] std::uint64_t z_mask() const noexcept { return z_mask_; }

    /// Phase picked up by basis state |j> under the string.
    [[nodiscard]] Complex phase(std::uint64_t j) const noexcept {
        static constexpr Complex i_pow[4] = {
            {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        const auto sign_flips =
            static_cast<std::size_t>(std::popcount(j & z_mask_)) & 1U;
        return i_pow[(n_y_ + 2 * sign_flips) % 4];
    }

    /// Compact label such as "Z0 Z1" ("" for the identity).
    [[nodiscard]] std::string label() const {
        std::string out;
        for (std::size_t q = 0; q < n_qubits_; ++q) {
            if (axes_[q] == PauliAxis::I) {
                continue;
            }
            if (!out.empty()) {
                out += ' ';
            }
            out += to_char(axes_[q]);
            out += std::to_string(q);
        }
        return out;
    }

    bool operator==(const PauliString &other) const {
        return n_qubits_ == other.n_qubits_ && axes_ == other.axes_;
    }

  private:
    std::size_t n_qubits_;
    std::vector<PauliAxis> axes_;
    std::uint64_t x_mask_{0};
    std::uint64_t z_mask_{0};
    std::size_t n_y_{0};
};

struct PauliTerm {
    double coefficient;
    PauliString string;

    bool operator==(const PauliTerm &) const = default;
};

/// Real-weighted sum of Pauli strings, H = sum_m h_m H_m.
class Hamiltonian {
  public:
    Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms)
        : n_qubits_{n_qubits}, terms_{std::move(terms)} {
        VQELAB_REQUIRE(n_qubits_ >= 1, "Hamiltonian: need at least one qubit");
        VQELAB_REQUIRE(!terms_.empty(), "Hamiltonian: empty term list");
        for (const auto &t : terms_) {
            VQELAB_REQUIRE(t.string.n_qubits() == n_qubits_,
                           "Hamiltonian: term qubit count mismatch");
            VQELAB_REQUIRE(std::isfinite(t.coefficient),
                           "Hamiltonian: non-finite coefficient");
        }
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    /// sum_m h_m^2
    [[nodiscard]] double coefficient_norm_sq() const noexcept {
        double s = 0.0;
        for (const auto &t : terms_) {
            s += t.coefficient * t.coefficient;
        }
        return s;
    }
    /// sum_m |h_m|, an upper bound on |<H>|.
    [[nodiscard]] double coefficient_abs_sum() const noexcept {
        double s = 0.0;
        for (const auto &t : terms_) {
            s += std::abs(t.coefficient);
        }
        return s;
    }
    [[nodiscard]] std::size_t max_locality() const noexcept {
        std::size_t k = 0;
        for (const auto &t : terms_) {
            k = std::max(k, t.string.locality());
        }
        return k;
    }

    [[nodiscard]] Hamiltonian scaled(double c) const {
        auto terms = terms_;
        for (auto &t : terms) {
            t.coefficient *= c;
        }
        return {n_qubits_, std::move(terms)};
    }

    bool operator==(const Hamiltonian &) const = default;

  private:
    std::size_t n_qubits_;
    std::vector<PauliTerm> terms_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

inline double parse_double(std::string_view tok, const std::string &what) {
    const std::string buf{tok};
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE ||
        !std::isfinite(v)) {
        throw InvalidArgument("malformed " + what + ": '" + buf + "'");
    }
    return v;
}

inline std::size_t parse_index(std::string_view tok, const std::string &what) {
    if (tok.empty() || tok.size() > 6 ||
        !std::all_of(tok.begin(), tok.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw InvalidArgument("malformed " + what + ": '" + std::string{tok} + "'");
    }
    return static_cast<std::size_t>(std::stoul(std::string{tok}));
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/**
 * Parses "coeff [Axis][qubit] ...; coeff ..." e.g. "1.0 Z0 Z1; -0.5 X2".
 *
 * An optional leading segment "qubits=N" fixes the register size; otherwise it
 * is the largest referenced qubit index plus one. A term with no operators is
 * the identity.
 */
inline Hamiltonian parse_hamiltonian(std::string_view text) {
    using RawTerm = std::pair<double, std::vector<std::pair<std::size_t, PauliAxis>>>;
    std::vector<RawTerm> raw;
    std::optional<std::size_t> explicit_n;
    std::size_t max_index = 0;
    bool any_index = false;

    const auto segments = detail::split(text, ';');
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto seg = detail::trim(segments[s]);
        if (seg.empty()) {
            // Tolerate a trailing separator only.
            if (s + 1 == segments.size() && s > 0) {
                continue;
            }
            throw InvalidArgument("malformed Hamiltonian: empty term");
        }
        if (seg.rfind("qubits", 0) == 0) {
            VQELAB_REQUIRE(s == 0 && !explicit_n,
                           "malformed Hamiltonian: 'qubits=' must lead the text");
            const auto eq = seg.find('=');
            VQELAB_REQUIRE(eq != std::string_view::npos,
                           "malformed Hamiltonian header: '" + std::string{seg} + "'");
            explicit_n = detail::parse_index(detail::trim(seg.substr(eq + 1)),
                                             "qubit count");
            VQELAB_REQUIRE(*explicit_n >= 1, "Hamiltonian: qubit count must be >= 1");
            continue;
        }
        const auto toks = detail::split_ws(seg);
        RawTerm term{detail::parse_double(toks.front(), "coefficient"), {}};
        std::vector<bool> seen;
        for (std::size_t t = 1; t < toks.size(); ++t) {
            const auto tok = toks[t];
            PauliAxis axis{};
            switch (tok.front()) {
            case 'I':
                axis = PauliAxis::I;
                break;
            case 'X':
                axis = PauliAxis::X;
                break;
            case 'Y':
                axis = PauliAxis::Y;
                break;
            case 'Z':
                axis = PauliAxis::Z;
                break;
            default:
                throw InvalidArgument("malformed Pauli token: '" + std::string{tok} + "'");
            }
            const auto q = detail::parse_index(tok.substr(1), "Pauli token");
            if (seen.size() <= q) {
                seen.resize(q + 1, false);
            }
            VQELAB_REQUIRE(!seen[q], "duplicate qubit index " + std::to_string(q) +
                                         " in term '" + std::string{seg} + "'");
            seen[q] = true;
            max_index = any_index ? std::max(max_index, q) : q;
            any_index = true;
            if (axis != PauliAxis::I) {
                term.second.emplace_back(q, axis);
            }
        }
        raw.push_back(std::move(term));
    }
    VQELAB_REQUIRE(!raw.empty(), "Hamiltonian: empty term list");

    std::size_t n = any_index ? max_index + 1 : 1;
    if (explicit_n) {
        VQELAB_REQUIRE(*explicit_n >= n, "Hamiltonian: qubit index exceeds declared qubits");
        n = *explicit_n;
    }
    std::vector<PauliTerm> terms;
    terms.reserve(raw.size());
    for (const auto &[c, ops] : raw) {
        terms.push_back({c, PauliString::from_sparse(n, ops)});
    }
    return {n, std::move(terms)};
}

/// Inverse of parse_hamiltonian; coefficients are printed with 17 significant
/// digits so the round trip is exact.
inline std::string serialize_hamiltonian(const Hamiltonian &h) {
    std::size_t implied = 1;
    for (const auto &t : h.terms()) {
        const auto s = t.string.support();
        if (!s.empty()) {
            implied = std::max(implied, s.back() + 1);
        }
    }
    std::string out;
    if (implied != h.n_qubits()) {
        out = "qubits=" + std::to_string(h.n_qubits());
    }
    for (const auto &t : h.terms()) {
        if (!out.empty()) {
            out += "; ";
        }
        out += detail::format_double(t.coefficient);
        const auto label = t.string.label();
        if (!label.empty()) {
            out += ' ';
            out += label;
        }
    }
    return out;
}

enum class ModelFamily { Ising, Heisenberg, WeightedAlpha };

inline ModelFamily parse_model_family(std::string_view name) {
    if (name == "ising") {
        return ModelFamily::Ising;
    }
    if (name == "heisenberg") {
        return ModelFamily::Heisenberg;
    }
    if (name == "weighted_alpha") {
        return ModelFamily::WeightedAlpha;
    }
    throw InvalidArgument("unsupported model family '" + std::string{name} + "'");
}

inline std::string to_string(ModelFamily f) {
    switch (f) {
    case ModelFamily::Ising:
        return "ising";
    case ModelFamily::Heisenberg:
        return "heisenberg";
    default:
        return "weighted_alpha";
    }
}

/**
 * Open-chain model Hamiltonians:
 *   ising(n)          = sum_i Z_i Z_{i+1} + sum_i X_i
 *   heisenberg(n)     = sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1})
 *   weighted_alpha(3) = Z0 Z1 + Z1 Z2 + a X0 + (3 - 2a) X1 + a X2
 */
inline Hamiltonian build_model(ModelFamily family, std::size_t n,
                               std::optional<double> alpha = std::nullopt) {
    VQELAB_REQUIRE(n >= 2, "build_model: need n >= 2");
    using P = PauliAxis;
    std::vector<PauliTerm> terms;
    auto pair_term = [&](double c, std::size_t i, P a) {
        terms.push_back({c, PauliString::from_sparse(n, {{i, a}, {i + 1, a}})});
    };
    auto single_term = [&](double c, std::size_t i, P a) {
        terms.push_back({c, PauliString::from_sparse(n, {{i, a}})});
    };
    switch (family) {
    case ModelFamily::Ising:
        VQELAB_REQUIRE(!alpha, "build_model: alpha is only valid for weighted_alpha");
        for (std::size_t i = 0; i + 1 < n; ++i) {
            pair_term(1.0, i, P::Z);
        }
        for (std::size_t i = 0; i < n; ++i) {
            single_term(1.0, i, P::X);
        }
        break;
    case ModelFamily::Heisenberg:
        VQELAB_REQUIRE(!alpha, "build_model: alpha is only valid for weighted_alpha");
        for (std::size_t i = 0; i + 1 < n; ++i) {
            pair_term(1.0, i, P::X);
            pair_term(1.0, i, P::Y);
            pair_term(1.0, i, P::Z);
        }
        break;
    case ModelFamily::WeightedAlpha: {
        VQELAB_REQUIRE(n == 3, "build_model: weighted_alpha requires n = 3");
        VQELAB_REQUIRE(alpha.has_value(), "build_model: weighted_alpha requires alpha");
        VQELAB_REQUIRE(std::isfinite(*alpha), "build_model: alpha must be finite");
        const double a = *alpha;
        pair_term(1.0, 0, P::Z);
        pair_term(1.0, 1, P::Z);
        single_term(a, 0, P::X);
        single_term(3.0 - 2.0 * a, 1, P::X);
        single_term(a, 2, P::X);
        break;
    }
    }
    return {n, std::move(terms)};
}

/// Dense 2^n x 2^n matrix of a Pauli string.
inline ComplexMatrix pauli_matrix(const PauliString &p) {
    VQELAB_REQUIRE(p.n_qubits() <= 14, "pauli_matrix: n too large for dense construction");
    const auto dim = static_cast<Eigen::Index>(dim_of(p.n_qubits()));
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
        m(static_cast<Eigen::Index>(j ^ p.x_mask()), static_cast<Eigen::Index>(j)) =
            p.phase(j);
    }
    return m;
}

/// Dense matrix of the full Hamiltonian; Hermitian by construction.
inline ComplexMatrix hamiltonian_matrix(const Hamiltonian &h) {
    VQELAB_REQUIRE(h.n_qubits() <= 12, "hamiltonian_matrix: n too large for dense construction");
    const auto dim = static_cast<Eigen::Index>(dim_of(h.n_qubits()));
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (const auto &t : h.terms()) {
        for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
            m(static_cast<Eigen::Index>(j ^ t.string.x_mask()),
              static_cast<Eigen::Index>(j)) += t.coefficient * t.string.phase(j);
        }
    }
    return m;
}

/// <psi|P|psi> for a single Pauli string, without forming P.
inline double pauli_expectation(const ComplexVector &psi, const PauliString &p) {
    const auto x = p.x_mask();
    Complex acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
        const auto uj = static_cast<std::uint64_t>(j);
        acc += std::conj(psi(static_cast<Eigen::Index>(uj ^ x))) * p.phase(uj) * psi(j);
    }
    return acc.real();
}

/// sum_m h_m <psi|H_m|psi>, evaluated term by term.
inline double expectation(const Statevector &state, const Hamiltonian &h) {
    VQELAB_REQUIRE(state.n_qubits() == h.n_qubits(),
                   "expectation: state/Hamiltonian qubit count mismatch");
    double e = 0.0;
    for (const auto &t : h.terms()) {
        e += t.coefficient * pauli_expectation(state.amplitudes(), t.string);
    }
    return e;
}

} // namespace vqelab
