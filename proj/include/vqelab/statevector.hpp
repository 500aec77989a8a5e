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
#include <string>
#include <utility>

#include "common.hpp"

namespace vqelab {

/**
 * @brief Normalized amplitude vector of an n-qubit pure state.
 *
 * Bit q of an amplitude index is the computational-basis value of qubit q
 * (qubit 0 is the least-significant bit).
 */
class Statevector {
  public:
    static constexpr double norm_tolerance = 1e-10;

    /// |0...0>
    explicit Statevector(std::size_t n_qubits)
        : n_qubits_{n_qubits}, amplitudes_{ComplexVector::Zero(
                                   static_cast<Eigen::Index>(dim_of(n_qubits)))} {
        VQELAB_REQUIRE(n_qubits >= 1, "Statevector: need at least one qubit");
        VQELAB_REQUIRE(n_qubits <= 30, "Statevector: too many qubits");
        amplitudes_(0) = 1.0;
    }

    Statevector(std::size_t n_qubits, ComplexVector amplitudes)
        : n_qubits_{n_qubits}, amplitudes_{std::move(amplitudes)} {
        VQELAB_REQUIRE(n_qubits >= 1 && n_qubits <= 30,
                       "Statevector: qubit count out of range");
        VQELAB_REQUIRE(static_cast<std::size_t>(amplitudes_.size()) ==
                           dim_of(n_qubits),
                       "Statevector: amplitude length must be 2^n");
        const double norm = amplitudes_.norm();
        VQELAB_REQUIRE(std::abs(norm - 1.0) < norm_tolerance,
                       "Statevector: amplitudes not normalized (norm " +
                           std::to_string(norm) + ")");
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_of(n_qubits_); }
    [[nodiscard]] const ComplexVector &amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] Complex operator[](std::size_t i) const {
        return amplitudes_(static_cast<Eigen::Index>(i));
    }

    /// Mutable access for gate kernels; callers keep the vector unitary.
    [[nodiscard]] ComplexVector &mutable_amplitudes() noexcept {
        return amplitudes_;
    }

  private:
    std::size_t n_qubits_;
    ComplexVector amplitudes_;
};

} // namespace vqelab
