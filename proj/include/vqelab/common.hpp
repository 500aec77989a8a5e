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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vqelab {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Circuit parameters in radians.
using ParameterVector = Eigen::VectorXd;

/// Real symmetric v x v matrix (Hilbert-Schmidt tensor, QFI, weighted metric).
using MetricTensor = Eigen::MatrixXd;

/// Thrown when an input violates an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation produces an unusable result (non-finite energy,
/// divergence, I/O failure).
class RuntimeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define VQELAB_REQUIRE(cond, msg)                                              \
    do {                                                                       \
        if (!(cond)) {                                                         \
            throw ::vqelab::InvalidArgument(msg);                              \
        }                                                                      \
    } while (0)

/// SplitMix64 finalizer. Used to derive independent child seeds from a parent
/// seed and a stream index: `mix_seed(seed, a, b, ...)`.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

inline constexpr std::uint64_t mix_seed(std::uint64_t seed) noexcept {
    return splitmix64(seed);
}

template <class... Rest>
inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t next,
                                        Rest... rest) noexcept {
    return mix_seed(splitmix64(seed) ^ next, static_cast<std::uint64_t>(rest)...);
}

inline constexpr std::size_t dim_of(std::size_t n_qubits) noexcept {
    return std::size_t{1} << n_qubits;
}

} // namespace vqelab
