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
 * @file gradient.hpp
 * Loss l(theta) = <psi(theta)|H|psi(theta)>, its exact gradient by adjoint
 * differentiation and by the parameter-shift rule, and an empirical
 * gradient-variance diagnostic with a Chebyshev-bound check.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ansatz.hpp"
#include "error.hpp"
#include "hamiltonian.hpp"
#include "random.hpp"
#include "statevector.hpp"

namespace selact {

using GradientVector = std::vector<double>;

[[nodiscard]] inline double loss(const CircuitSpec &circuit,
                                 const ParamVector &params,
                                 const Hamiltonian &h) {
    return expectation(h, prepareState(circuit, params));
}

struct EnergyAndGradient {
    double energy;
    GradientVector gradient;
};

namespace detail {
/// <a| P_axis(qubit) |b> without materializing P|b>.
inline Complex pauliMatrixElement(const Statevector &a, Axis axis,
                                  std::size_t qubit, const Statevector &b) {
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    Complex acc{0.0, 0.0};
    switch (axis) {
    case Axis::X:
        forEachPair(a.numQubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            acc += std::conj(x[i0]) * y[i1] + std::conj(x[i1]) * y[i0];
        });
        break;
    case Axis::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        forEachPair(a.numQubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            acc += Complex{0.0, -1.0} * std::conj(x[i0]) * y[i1] +
                   Complex{0.0, 1.0} * std::conj(x[i1]) * y[i0];
        });
        break;
    case Axis::Z:
        forEachPair(a.numQubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            acc += std::conj(x[i0]) * y[i0] - std::conj(x[i1]) * y[i1];
        });
        break;
    }
    return acc;
}
} // namespace detail

/**
 * @brief Energy and full gradient in one forward and one backward sweep.
 *
 * With |psi> the final state and |lambda> = H|psi>, gates are undone from
 * the last to the first on both vectors. Just before undoing rotation k,
 * dl/dtheta_k = Im <lambda| P_k |psi>, from dR/dtheta = -(i/2) P R.
 */
[[nodiscard]] inline EnergyAndGradient
energyAndGradient(const CircuitSpec &circuit, const ParamVector &params,
                  const Hamiltonian &h) {
    Statevector psi = prepareState(circuit, params);
    const double energy = expectation(h, psi);
    Statevector lambda = applyHamiltonian(h, psi);

    GradientVector grad(circuit.numParams(), 0.0);
    const auto &slots = circuit.slots();
    const auto &ring = circuit.entanglers();
    const std::size_t per_layer = circuit.paramsPerLayer();
    for (std::size_t l = circuit.numLayers(); l-- > 0;) {
        for (auto it = ring.rbegin(); it != ring.rend(); ++it) {
            applyCnot(psi, it->control, it->target);
            applyCnot(lambda, it->control, it->target);
        }
        for (std::size_t k = (l + 1) * per_layer; k-- > l * per_layer;) {
            const GateSlot &s = slots[k];
            grad[k] = detail::pauliMatrixElement(lambda, s.axis, s.qubit, psi)
                          .imag();
            applyRotation(psi, s.axis, s.qubit, -params[k]);
            applyRotation(lambda, s.axis, s.qubit, -params[k]);
        }
    }
    return {energy, std::move(grad)};
}

[[nodiscard]] inline GradientVector gradientAdjoint(const CircuitSpec &circuit,
                                                    const ParamVector &params,
                                                    const Hamiltonian &h) {
    return energyAndGradient(circuit, params, h).gradient;
}

/**
 * Parameter-shift gradient, [l(theta + pi/2 e_i) - l(theta - pi/2 e_i)] / 2,
 * at @p indices (all when empty). Other entries are zero.
 */
[[nodiscard]] inline GradientVector
gradientParamShift(const CircuitSpec &circuit, const ParamVector &params,
                   const Hamiltonian &h,
                   const std::optional<std::vector<std::size_t>> &indices =
                       std::nullopt) {
    circuit.checkParams(params);
    const std::size_t p = circuit.numParams();
    std::vector<std::size_t> which;
    if (indices) {
        which = *indices;
        for (const auto i : which) {
            if (i >= p) {
                throw IndexError("parameter index " + std::to_string(i) +
                                 " out of range for " + std::to_string(p) +
                                 " parameters");
            }
        }
    } else {
        which.resize(p);
        for (std::size_t i = 0; i < p; ++i) {
            which[i] = i;
        }
    }
    GradientVector grad(p, 0.0);
    ParamVector shifted = params;
    constexpr double shift = std::numbers::pi / 2;
    for (const auto i : which) {
        shifted[i] = params[i] + shift;
        const double plus = loss(circuit, shifted, h);
        shifted[i] = params[i] - shift;
        const double minus = loss(circuit, shifted, h);
        shifted[i] = params[i];
        grad[i] = 0.5 * (plus - minus);
    }
    return grad;
}

// ---------------------------------------------------------------------------
// Gradient variance

struct VarianceReport {
    std::size_t num_params = 0;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    std::vector<double> delta_grid;
    std::vector<double> per_index_mean;
    std::vector<double> per_index_variance; ///< unbiased, divisor M - 1
    /// empirical_exceedance[i][d] = fraction of samples with |g_i| >= delta_d
    std::vector<std::vector<double>> empirical_exceedance;

    /// Var_i / delta^2 (uncapped).
    [[nodiscard]] double chebyshevBound(std::size_t i, std::size_t d) const {
        return per_index_variance[i] / (delta_grid[d] * delta_grid[d]);
    }

    /// Binomial standard error of an exceedance fraction.
    [[nodiscard]] double exceedanceStdError(std::size_t i,
                                            std::size_t d) const {
        const double p = empirical_exceedance[i][d];
        return std::sqrt(p * (1.0 - p) / static_cast<double>(sample_count));
    }

    /// (i, delta) cells where exceedance > bound + n_sigma * SE.
    [[nodiscard]] std::size_t chebyshevViolations(double n_sigma = 3.0) const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < num_params; ++i) {
            for (std::size_t d = 0; d < delta_grid.size(); ++d) {
                if (empirical_exceedance[i][d] >
                    chebyshevBound(i, d) + n_sigma * exceedanceStdError(i, d)) {
                    ++count;
                }
            }
        }
        return count;
    }

    [[nodiscard]] double medianVariance() const {
        std::vector<double> v = per_index_variance;
        if (v.empty()) {
            return 0.0;
        }
        const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        if (v.size() % 2 == 1) {
            return *mid;
        }
        const double upper = *mid;
        const double lower = *std::max_element(v.begin(), mid);
        return 0.5 * (lower + upper);
    }
};

/// Seed of the m-th parameter draw in a variance estimate.
[[nodiscard]] inline std::uint64_t varianceSampleSeed(std::uint64_t seed,
                                                      std::size_t m) {
    return deriveKey(seed, 0x7A41A0CEULL + m);
}

/**
 * Draw @p samples parameter vectors with initParams (uniform [-pi, pi) per
 * coordinate) and summarize the adjoint gradients.
 */
[[nodiscard]] inline VarianceReport
gradientVariance(const CircuitSpec &circuit, const Hamiltonian &h,
                 std::size_t samples, std::uint64_t seed,
                 std::vector<double> delta_grid) {
    if (samples < 2) {
        throw ArgumentError("gradient variance needs at least 2 samples");
    }
    for (const double d : delta_grid) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw ArgumentError("delta values must be positive and finite");
        }
    }
    const std::size_t p = circuit.numParams();
    std::vector<GradientVector> grads;
    grads.reserve(samples);
    for (std::size_t m = 0; m < samples; ++m) {
        grads.push_back(gradientAdjoint(
            circuit, initParams(circuit, varianceSampleSeed(seed, m)), h));
    }

    VarianceReport r;
    r.num_params = p;
    r.sample_count = samples;
    r.seed = seed;
    r.delta_grid = std::move(delta_grid);
    r.per_index_mean.assign(p, 0.0);
    r.per_index_variance.assign(p, 0.0);
    r.empirical_exceedance.assign(p,
                                  std::vector<double>(r.delta_grid.size(), 0.0));
    const auto m_count = static_cast<double>(samples);
    for (std::size_t i = 0; i < p; ++i) {
        double mean = 0.0;
        for (const auto &g : grads) {
            mean += g[i];
        }
        mean /= m_count;
        double ss = 0.0;
        for (const auto &g : grads) {
            ss += (g[i] - mean) * (g[i] - mean);
        }
        r.per_index_mean[i] = mean;
        r.per_index_variance[i] = ss / (m_count - 1.0);
        for (std::size_t d = 0; d < r.delta_grid.size(); ++d) {
            std::size_t hits = 0;
            for (const auto &g : grads) {
                hits += std::abs(g[i]) >= r.delta_grid[d] ? 1 : 0;
            }
            r.empirical_exceedance[i][d] = static_cast<double>(hits) / m_count;
        }
    }
    return r;
}

[[nodiscard]] inline nlohmann::ordered_json toJson(const VarianceReport &r) {
    nlohmann::ordered_json doc;
    doc["parameter_distribution"] = "uniform[-pi,pi) per coordinate";
    doc["seed"] = r.seed;
    doc["sample_count"] = r.sample_count;
    doc["num_params"] = r.num_params;
    doc["delta_grid"] = r.delta_grid;
    doc["per_index_mean"] = r.per_index_mean;
    doc["per_index_variance"] = r.per_index_variance;
    doc["median_variance"] = r.medianVariance();
    doc["empirical_exceedance"] = r.empirical_exceedance;
    auto bound = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.num_params; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t d = 0; d < r.delta_grid.size(); ++d) {
            row.push_back(r.chebyshevBound(i, d));
        }
        bound.push_back(std::move(row));
    }
    doc["chebyshev_bound"] = std::move(bound);
    doc["chebyshev_violations_3sigma"] = r.chebyshevViolations(3.0);
    return doc;
}

} // namespace selact
