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
 * @file ansatz.hpp
 * Strongly-entangling-layers circuit: per layer, RX RY RZ on every qubit
 * (qubit-major) followed by the CNOT ring q -> (q + 1) mod n.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"
#include "statevector.hpp"

namespace selact {

using ParamVector = std::vector<double>;

/// One parameterized rotation. param_index = layer*3n + qubit*3 + axis.
struct GateSlot {
    std::size_t param_index;
    std::size_t layer;
    std::size_t qubit;
    Axis axis;
};

struct CnotPair {
    std::size_t control;
    std::size_t target;

    friend bool operator==(const CnotPair &, const CnotPair &) = default;
};

class CircuitSpec {
  public:
    CircuitSpec(std::size_t num_qubits, std::size_t num_layers)
        : num_qubits_(num_qubits), num_layers_(num_layers) {
        if (num_qubits < 2 || num_qubits > kMaxQubits) {
            throw SizeError("ansatz needs between 2 and " +
                            std::to_string(kMaxQubits) + " qubits, got " +
                            std::to_string(num_qubits));
        }
        if (num_layers < 1) {
            throw SizeError("ansatz needs at least one layer");
        }
        slots_.reserve(3 * num_qubits * num_layers);
        for (std::size_t l = 0; l < num_layers; ++l) {
            for (std::size_t q = 0; q < num_qubits; ++q) {
                for (const Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                    slots_.push_back({slots_.size(), l, q, a});
                }
            }
        }
        ring_.reserve(num_qubits);
        for (std::size_t q = 0; q < num_qubits; ++q) {
            ring_.push_back({q, (q + 1) % num_qubits});
        }
    }

    [[nodiscard]] std::size_t numQubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] std::size_t numLayers() const noexcept {
        return num_layers_;
    }
    [[nodiscard]] std::size_t numParams() const noexcept {
        return slots_.size();
    }
    [[nodiscard]] std::size_t paramsPerLayer() const noexcept {
        return 3 * num_qubits_;
    }
    [[nodiscard]] const std::vector<GateSlot> &slots() const noexcept {
        return slots_;
    }
    /// Entanglers of every layer (identical across layers).
    [[nodiscard]] const std::vector<CnotPair> &entanglers() const noexcept {
        return ring_;
    }

    void checkParams(const ParamVector &params) const {
        if (params.size() != numParams()) {
            throw SizeError("parameter vector has length " +
                            std::to_string(params.size()) + ", circuit has " +
                            std::to_string(numParams()));
        }
    }

  private:
    std::size_t num_qubits_;
    std::size_t num_layers_;
    std::vector<GateSlot> slots_;
    std::vector<CnotPair> ring_;
};

[[nodiscard]] inline CircuitSpec buildCircuit(std::size_t num_qubits,
                                              std::size_t num_layers) {
    return {num_qubits, num_layers};
}

/// Apply U(params) to @p state in place.
inline void applyCircuit(const CircuitSpec &circuit, const ParamVector &params,
                         Statevector &state) {
    circuit.checkParams(params);
    const auto &slots = circuit.slots();
    const std::size_t per_layer = circuit.paramsPerLayer();
    for (std::size_t l = 0; l < circuit.numLayers(); ++l) {
        for (std::size_t k = l * per_layer; k < (l + 1) * per_layer; ++k) {
            applyRotation(state, slots[k].axis, slots[k].qubit, params[k]);
        }
        for (const auto &[c, t] : circuit.entanglers()) {
            applyCnot(state, c, t);
        }
    }
}

/// U(params)|0...0>.
[[nodiscard]] inline Statevector prepareState(const CircuitSpec &circuit,
                                              const ParamVector &params) {
    circuit.checkParams(params);
    Statevector state(circuit.numQubits());
    applyCircuit(circuit, params, state);
    return state;
}

/// Independent uniform draws on [-pi, pi) from a counter-based stream.
[[nodiscard]] inline ParamVector initParams(const CircuitSpec &circuit,
                                            std::uint64_t seed) {
    CounterRng rng(deriveKey(seed, 0x1A17ULL));
    ParamVector params(circuit.numParams());
    for (auto &p : params) {
        p = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return params;
}

} // namespace selact
