// Copyright 2026 The selact Authors.

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
 * @file statevector.hpp
 * Dense statevector and in-place gate kernels.
 *
 * Qubit q is bit q of the basis index (qubit 0 is the least-significant
 * bit). The same convention is used by Pauli strings in hamiltonian.hpp.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace selact {

using Complex = std::complex<double>;

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::size_t kMaxQubits = 24;

[[nodiscard]] constexpr std::size_t axisOrdinal(Axis axis) noexcept {
    return static_cast<std::size_t>(axis);
}

[[nodiscard]] constexpr char axisName(Axis axis) noexcept {
    constexpr char names[] = {'X', 'Y', 'Z'};
    return names[axisOrdinal(axis)];
}

/// Complex amplitudes over 2^n basis states. Owned by value.
class Statevector {
  public:
    /// |0...0> on @p num_qubits qubits.
    explicit Statevector(std::size_t num_qubits)
        : num_qubits_(checkedQubits(num_qubits)),
          amplitudes_(std::size_t{1} << num_qubits, Complex{0.0, 0.0}) {
        amplitudes_[0] = Complex{1.0, 0.0};
    }

    /// Wrap existing amplitudes; the length must be a power of two.
    explicit Statevector(std::vector<Complex> amplitudes)
        : num_qubits_(qubitsForLength(amplitudes.size())),
          amplitudes_(std::move(amplitudes)) {}

    [[nodiscard]] std::size_t numQubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return amplitudes_.size();
    }

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept {
        return amplitudes_;
    }

    [[nodiscard]] const Complex &operator[](std::size_t i) const {
        return amplitudes_[i];
    }
    Complex &operator[](std::size_t i) { return amplitudes_[i]; }

    [[nodiscard]] double squaredNorm() const noexcept {
        double acc = 0.0;
        for (const auto &a : amplitudes_) {
            acc += std::norm(a);
        }
        return acc;
    }

    void checkQubit(std::size_t qubit) const {
        if (qubit >= num_qubits_) {
            throw IndexError("qubit index " + std::to_string(qubit) +
                             " out of range for " +
                             std::to_string(num_qubits_) + " qubits");
        }
    }

  private:
    static std::size_t checkedQubits(std::size_t n) {
        if (n < 1 || n > kMaxQubits) {
            throw SizeError("qubit count " + std::to_string(n) +
                            " outside [1, " + std::to_string(kMaxQubits) +
                            "]");
        }
        return n;
    }

    static std::size_t qubitsForLength(std::size_t len) {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < len && n <= kMaxQubits) {
            ++n;
        }
        if ((std::size_t{1} << n) != len) {
            throw SizeError("amplitude count " + std::to_string(len) +
                            " is not a power of two");
        }
        return checkedQubits(n);
    }

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

[[nodiscard]] inline Statevector zeroState(std::size_t num_qubits) {
    return Statevector(num_qubits);
}

namespace detail {
/// Calls f(i0, i1) for every index pair differing only in bit @p qubit.
template <class F>
inline void forEachPair(std::size_t num_qubits, std::size_t qubit, F &&f) {
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t low_mask = stride - 1;
    const std::size_t half = std::size_t{1} << (num_qubits - 1);
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = ((k & ~low_mask) << 1U) | (k & low_mask);
        f(i0, i0 | stride);
    }
}
} // namespace detail

/**
 * Apply R_axis(theta) = exp(-i theta/2 P_axis) to @p qubit.
 *
 * RX = [[c, -is], [-is, c]], RY = [[c, -s], [s, c]], RZ = diag(e^{-i t/2},
 * e^{i t/2}) with c = cos(theta/2), s = sin(theta/2).
 */
inline void applyRotation(Statevector &state, Axis axis, std::size_t qubit,
                          double theta) {
    state.checkQubit(qubit);
    auto amp = state.amplitudes();
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    switch (axis) {
    case Axis::X: {
        const Complex mis{0.0, -s};
        detail::forEachPair(state.numQubits(), qubit,
                            [&](std::size_t i0, std::size_t i1) {
                                const Complex v0 = amp[i0];
                                const Complex v1 = amp[i1];
                                amp[i0] = c * v0 + mis * v1;
                                amp[i1] = mis * v0 + c * v1;
                            });
        break;
    }
    case Axis::Y:
        detail::forEachPair(state.numQubits(), qubit,
                            [&](std::size_t i0, std::size_t i1) {
                                const Complex v0 = amp[i0];
                                const Complex v1 = amp[i1];
                                amp[i0] = c * v0 - s * v1;
                                amp[i1] = s * v0 + c * v1;
                            });
        break;
    case Axis::Z: {
        const Complex p0{c, -s};
        const Complex p1{c, s};
        detail::forEachPair(state.numQubits(), qubit,
                            [&](std::size_t i0, std::size_t i1) {
                                amp[i0] *= p0;
                                amp[i1] *= p1;
                            });
        break;
    }
    }
}

/// Apply the bare Pauli operator (the rotation generator) to @p qubit.
inline void applyPauli(Statevector &state, Axis axis, std::size_t qubit) {
    state.checkQubit(qubit);
    auto amp = state.amplitudes();
    const Complex i_unit{0.0, 1.0};
    switch (axis) {
    case Axis::X:
        detail::forEachPair(
            state.numQubits(), qubit,
            [&](std::size_t i0, std::size_t i1) { std::swap(amp[i0], amp[i1]); });
        break;
    case Axis::Y:
        detail::forEachPair(state.numQubits(), qubit,
                            [&](std::size_t i0, std::size_t i1) {
                                const Complex v0 = amp[i0];
                                amp[i0] = -i_unit * amp[i1];
                                amp[i1] = i_unit * v0;
                            });
        break;
    case Axis::Z:
        detail::forEachPair(state.numQubits(), qubit,
                            [&](std::size_t, std::size_t i1) {
                                amp[i1] = -amp[i1];
                            });
        break;
    }
}

inline void applyCnot(Statevector &state, std::size_t control,
                      std::size_t target) {
    state.checkQubit(control);
    state.checkQubit(target);
    if (control == target) {
        throw IndexError("CNOT control and target are both qubit " +
                         std::to_string(control));
    }
    auto amp = state.amplitudes();
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(amp[i], amp[i | tbit]);
        }
    }
}

/// <a|b> = sum_i conj(a_i) b_i.
[[nodiscard]] inline Complex innerProduct(const Statevector &a,
                                          const Statevector &b) {
    if (a.numQubits() != b.numQubits()) {
        throw SizeError("inner product of " + std::to_string(a.numQubits()) +
                        "- and " + std::to_string(b.numQubits()) +
                        "-qubit states");
    }
    Complex acc{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

} // namespace selact
