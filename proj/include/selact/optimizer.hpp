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
 * @file optimizer.hpp
 * Adam with activation-mask-gated updates.
 *
 * Inactive coordinates are frozen entirely: theta, both moments and the
 * step counter are left untouched. Bias correction uses a per-coordinate
 * step counter that only advances on active steps.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "activation.hpp"
#include "ansatz.hpp"
#include "error.hpp"
#include "gradient.hpp"

namespace selact {

struct AdamHyperparams {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamHyperparams hp;
    std::vector<double> m;
    std::vector<double> v;
    std::vector<std::uint64_t> step_count;

    AdamState(std::size_t num_params, AdamHyperparams hyper)
        : hp(hyper), m(num_params, 0.0), v(num_params, 0.0),
          step_count(num_params, 0) {
        if (!(hp.lr > 0.0) || !(hp.beta1 >= 0.0 && hp.beta1 < 1.0) ||
            !(hp.beta2 >= 0.0 && hp.beta2 < 1.0) || !(hp.epsilon > 0.0)) {
            throw ConfigError("invalid Adam hyperparameters");
        }
    }
};

inline void adamStep(AdamState &state, ParamVector &params,
                     const GradientVector &grad, const ActivationMask &mask) {
    const std::size_t p = params.size();
    if (grad.size() != p || mask.active.size() != p || state.m.size() != p) {
        throw SizeError("Adam step with mismatched vector lengths");
    }
    for (std::size_t i = 0; i < p; ++i) {
        if (!std::isfinite(grad[i])) {
            throw NumericError("non-finite gradient at parameter " +
                               std::to_string(i));
        }
    }
    const auto &hp = state.hp;
    for (std::size_t i = 0; i < p; ++i) {
        if (!mask.active[i]) {
            continue;
        }
        const auto t = static_cast<double>(++state.step_count[i]);
        const double g = grad[i];
        state.m[i] = hp.beta1 * state.m[i] + (1.0 - hp.beta1) * g;
        state.v[i] = hp.beta2 * state.v[i] + (1.0 - hp.beta2) * g * g;
        const double m_hat = state.m[i] / (1.0 - std::pow(hp.beta1, t));
        const double v_hat = state.v[i] / (1.0 - std::pow(hp.beta2, t));
        params[i] -= hp.lr * m_hat / (std::sqrt(v_hat) + hp.epsilon);
    }
}

} // namespace selact
