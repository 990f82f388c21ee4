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
 * @file activation.hpp
 * Per-iteration choice of which rotation gates the optimizer may update.
 *
 * Three rules are provided, all activating a fixed count of floor(P*k/100)
 * gates per iteration:
 *  - FullyRandom: a uniform random subset of all P gates.
 *  - GateRandom: pick one axis uniformly, then a uniform subset of that
 *    axis's P/3 gates; never tops up from other axes.
 *  - MagnitudeBased: every gate during warm-up, then the gates with the
 *    largest |theta| (ties go to the lower index).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ansatz.hpp"
#include "error.hpp"
#include "random.hpp"

namespace selact {

enum class StrategyKind : std::uint8_t { FullyRandom, GateRandom, MagnitudeBased };

[[nodiscard]] constexpr std::string_view strategyName(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::FullyRandom:
        return "ra";
    case StrategyKind::GateRandom:
        return "gate-ra";
    case StrategyKind::MagnitudeBased:
        return "mag";
    }
    return "?";
}

[[nodiscard]] inline StrategyKind parseStrategyKind(std::string_view name) {
    if (name == "ra") {
        return StrategyKind::FullyRandom;
    }
    if (name == "gate-ra") {
        return StrategyKind::GateRandom;
    }
    if (name == "mag") {
        return StrategyKind::MagnitudeBased;
    }
    throw ConfigError("unknown strategy '" + std::string(name) +
                      "' (expected ra, gate-ra or mag)");
}

struct StrategyConfig {
    StrategyKind kind = StrategyKind::FullyRandom;
    double k_percent = 100.0;
    std::size_t warmup_iters = 0;     ///< MagnitudeBased only
    bool gate_ra_fixed_axis = false;  ///< GateRandom: draw the axis once per run

    void validate() const {
        if (!(k_percent > 0.0 && k_percent <= 100.0)) {
            throw ConfigError("k_percent must lie in (0, 100], got " +
                              std::to_string(k_percent));
        }
        if (kind != StrategyKind::MagnitudeBased && warmup_iters != 0) {
            throw ConfigError("warmup_iters is only meaningful for 'mag'");
        }
        if (kind != StrategyKind::GateRandom && gate_ra_fixed_axis) {
            throw ConfigError("gate_ra_fixed_axis is only meaningful for "
                              "'gate-ra'");
        }
    }

    friend bool operator==(const StrategyConfig &,
                           const StrategyConfig &) = default;
};

/// floor(P*k/100), robust to k values that are not exact binary fractions.
[[nodiscard]] inline std::size_t activeTarget(std::size_t num_params,
                                              double k_percent) {
    const double raw = static_cast<double>(num_params) * k_percent / 100.0;
    return static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
}

namespace detail {
inline std::size_t checkedTarget(std::size_t num_params, double k_percent) {
    const std::size_t target = activeTarget(num_params, k_percent);
    if (target == 0) {
        throw ConfigError("k_percent = " + std::to_string(k_percent) +
                          " activates no gate out of " +
                          std::to_string(num_params));
    }
    return target;
}

/// Mark @p count members of @p pool, chosen by partial Fisher-Yates.
inline void markRandomSubset(std::vector<std::size_t> pool, std::size_t count,
                             CounterRng &rng, std::vector<bool> &active) {
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(
                               rng.uniformIndex(pool.size() - i));
        std::swap(pool[i], pool[j]);
        active[pool[i]] = true;
    }
}
} // namespace detail

struct ActivationMask {
    std::vector<bool> active;
    std::size_t iteration = 0;

    [[nodiscard]] std::size_t activeCount() const {
        return static_cast<std::size_t>(
            std::count(active.begin(), active.end(), true));
    }
};

[[nodiscard]] inline ActivationMask
selectFullyRandom(const StrategyConfig &cfg, std::size_t num_params,
                  CounterRng &rng, std::size_t iteration = 0) {
    const std::size_t target = detail::checkedTarget(num_params, cfg.k_percent);
    ActivationMask mask{std::vector<bool>(num_params, false), iteration};
    std::vector<std::size_t> pool(num_params);
    for (std::size_t i = 0; i < num_params; ++i) {
        pool[i] = i;
    }
    detail::markRandomSubset(std::move(pool), target, rng, mask.active);
    return mask;
}

/**
 * GateRandom selection. When @p fixed_axis is set it replaces the
 * per-iteration axis draw.
 */
[[nodiscard]] inline ActivationMask
selectGateRandom(const StrategyConfig &cfg, const CircuitSpec &circuit,
                 CounterRng &rng, std::size_t iteration = 0,
                 std::optional<Axis> fixed_axis = std::nullopt) {
    const std::size_t p = circuit.numParams();
    const std::size_t target = detail::checkedTarget(p, cfg.k_percent);
    const Axis axis =
        fixed_axis ? *fixed_axis : static_cast<Axis>(rng.uniformIndex(3));
    std::vector<std::size_t> pool;
    pool.reserve(p / 3);
    for (const auto &slot : circuit.slots()) {
        if (slot.axis == axis) {
            pool.push_back(slot.param_index);
        }
    }
    ActivationMask mask{std::vector<bool>(p, false), iteration};
    const std::size_t count = std::min(target, pool.size());
    detail::markRandomSubset(std::move(pool), count, rng, mask.active);
    return mask;
}

[[nodiscard]] inline ActivationMask
selectMagnitude(const StrategyConfig &cfg, const ParamVector &params,
                std::size_t iteration) {
    const std::size_t p = params.size();
    const std::size_t target = detail::checkedTarget(p, cfg.k_percent);
    if (iteration < cfg.warmup_iters) {
        return {std::vector<bool>(p, true), iteration};
    }
    std::vector<std::size_t> order(p);
    for (std::size_t i = 0; i < p; ++i) {
        order[i] = i;
    }
    const auto larger = [&params](std::size_t a, std::size_t b) {
        const double ma = std::abs(params[a]);
        const double mb = std::abs(params[b]);
        return ma > mb || (ma == mb && a < b);
    };
    std::partial_sort(order.begin(),
                      order.begin() + static_cast<std::ptrdiff_t>(target),
                      order.end(), larger);
    ActivationMask mask{std::vector<bool>(p, false), iteration};
    for (std::size_t i = 0; i < target; ++i) {
        mask.active[order[i]] = true;
    }
    return mask;
}

/**
 * @brief Strategy bound to one run.
 *
 * The random stream for iteration t is keyed by (seed, t), so the mask for
 * a given (config, seed, iteration, params) never depends on call history.
 */
class Activator {
  public:
    Activator(StrategyConfig cfg, const CircuitSpec &circuit,
              std::uint64_t seed)
        : cfg_(cfg), circuit_(&circuit),
          key_(deriveKey(seed, 0xAC71ULL)) {
        cfg_.validate();
        static_cast<void>(detail::checkedTarget(circuit.numParams(),
                                                cfg_.k_percent));
        if (cfg_.kind == StrategyKind::GateRandom && cfg_.gate_ra_fixed_axis) {
            CounterRng rng(deriveKey(key_, 0xA815ULL));
            fixed_axis_ = static_cast<Axis>(rng.uniformIndex(3));
        }
    }

    [[nodiscard]] const StrategyConfig &config() const noexcept {
        return cfg_;
    }

    [[nodiscard]] ActivationMask mask(std::size_t iteration,
                                      const ParamVector &params) const {
        circuit_->checkParams(params);
        CounterRng rng(deriveKey(key_, iteration));
        switch (cfg_.kind) {
        case StrategyKind::FullyRandom:
            return selectFullyRandom(cfg_, circuit_->numParams(), rng,
                                     iteration);
        case StrategyKind::GateRandom:
            return selectGateRandom(cfg_, *circuit_, rng, iteration,
                                    fixed_axis_);
        case StrategyKind::MagnitudeBased:
            return selectMagnitude(cfg_, params, iteration);
        }
        throw ConfigError("unhandled strategy kind");
    }

    /// Count every mask from this strategy must have at @p iteration.
    [[nodiscard]] std::size_t expectedActiveCount(std::size_t iteration) const {
        const std::size_t p = circuit_->numParams();
        const std::size_t target = activeTarget(p, cfg_.k_percent);
        switch (cfg_.kind) {
        case StrategyKind::FullyRandom:
            return target;
        case StrategyKind::GateRandom:
            return std::min(target, p / 3);
        case StrategyKind::MagnitudeBased:
            return iteration < cfg_.warmup_iters ? p : target;
        }
        return 0;
    }

  private:
    StrategyConfig cfg_;
    const CircuitSpec *circuit_;
    std::uint64_t key_;
    std::optional<Axis> fixed_axis_;
};

} // namespace selact
