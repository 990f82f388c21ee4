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

#include <cmath>
#include <set>

#include <catch_amalgamated.hpp>

#include "selact/activation.hpp"

using namespace selact;

namespace {
StrategyConfig cfgOf(StrategyKind kind, double k, std::size_t warmup = 0) {
    StrategyConfig c;
    c.kind = kind;
    c.k_percent = k;
    c.warmup_iters = warmup;
    return c;
}

std::set<Axis> axesTouched(const ActivationMask &m, const CircuitSpec &c) {
    std::set<Axis> axes;
    for (std::size_t i = 0; i < m.active.size(); ++i) {
        if (m.active[i]) {
            axes.insert(c.slots()[i].axis);
        }
    }
    return axes;
}
} // namespace

TEST_CASE("activeTarget", "[activation]") {
    CHECK(activeTarget(210, 10) == 21);
    CHECK(activeTarget(210, 100) == 210);
    CHECK(activeTarget(210, 0.1) == 0);
    CHECK(activeTarget(3, 34) == 1);
    CHECK(activeTarget(72, 10) == 7);
    CHECK(activeTarget(72, 50) == 36);
}

TEST_CASE("fully random selection", "[activation]") {
    CounterRng rng(1);
    CHECK(selectFullyRandom(cfgOf(StrategyKind::FullyRandom, 10), 210, rng)
              .activeCount() == 21);
    CHECK(selectFullyRandom(cfgOf(StrategyKind::FullyRandom, 100), 210, rng)
              .activeCount() == 210);
    CHECK_THROWS_AS(
        selectFullyRandom(cfgOf(StrategyKind::FullyRandom, 0.1), 210, rng),
        ConfigError);
}

TEST_CASE("gate random selection", "[activation]") {
    const auto c = buildCircuit(10, 7);
    CounterRng rng(2);
    const auto m10 = selectGateRandom(cfgOf(StrategyKind::GateRandom, 10), c, rng);
    CHECK(m10.activeCount() == 21);
    CHECK(axesTouched(m10, c).size() == 1);
    for (const double k : {50.0, 90.0}) {
        const auto m = selectGateRandom(cfgOf(StrategyKind::GateRandom, k), c, rng);
        CHECK(m.activeCount() == 70);
        CHECK(axesTouched(m, c).size() == 1);
    }
    const auto fixed = selectGateRandom(cfgOf(StrategyKind::GateRandom, 10), c,
                                        rng, 0, Axis::Y);
    CHECK(axesTouched(fixed, c) == std::set<Axis>{Axis::Y});
}

TEST_CASE("magnitude selection", "[activation]") {
    SECTION("largest |theta|") {
        const auto m = selectMagnitude(cfgOf(StrategyKind::MagnitudeBased, 34),
                                       {0.5, -0.9, 0.1}, 0);
        CHECK(m.active == std::vector<bool>{false, true, false});
    }
    SECTION("warm-up activates everything") {
        const auto m = selectMagnitude(
            cfgOf(StrategyKind::MagnitudeBased, 34, 100), {0.5, -0.9, 0.1}, 50);
        CHECK(m.activeCount() == 3);
        const auto after = selectMagnitude(
            cfgOf(StrategyKind::MagnitudeBased, 34, 100), {0.5, -0.9, 0.1}, 100);
        CHECK(after.activeCount() == 1);
    }
    SECTION("ties go to the lower index") {
        const auto m = selectMagnitude(cfgOf(StrategyKind::MagnitudeBased, 34),
                                       {0.7, 0.7, 0.1}, 0);
        CHECK(m.active == std::vector<bool>{true, false, false});
        const auto neg = selectMagnitude(cfgOf(StrategyKind::MagnitudeBased, 34),
                                         {0.1, -0.7, 0.7}, 0);
        CHECK(neg.active == std::vector<bool>{false, true, false});
    }
    SECTION("zero target") {
        CHECK_THROWS_AS(selectMagnitude(cfgOf(StrategyKind::MagnitudeBased, 10),
                                        {0.5, -0.9, 0.1}, 0),
                        ConfigError);
    }
}

TEST_CASE("strategy config validation", "[activation]") {
    CHECK_THROWS_AS(cfgOf(StrategyKind::FullyRandom, 0).validate(), ConfigError);
    CHECK_THROWS_AS(cfgOf(StrategyKind::FullyRandom, 100.5).validate(),
                    ConfigError);
    CHECK_THROWS_AS(cfgOf(StrategyKind::FullyRandom, 10, 5).validate(),
                    ConfigError);
    CHECK_NOTHROW(cfgOf(StrategyKind::MagnitudeBased, 10, 5).validate());
    CHECK(parseStrategyKind("gate-ra") == StrategyKind::GateRandom);
    CHECK_THROWS_AS(parseStrategyKind("random"), ConfigError);
    const auto c = buildCircuit(10, 7);
    CHECK_THROWS_AS(Activator(cfgOf(StrategyKind::FullyRandom, 0.1), c, 0),
                    ConfigError);
}

TEST_CASE("property: popcount, purity and monotonicity invariants",
          "[activation][property]") {
    for (const std::size_t n : {2, 4, 6, 10}) {
        for (const std::size_t layers : {1, 4, 7}) {
            const auto c = buildCircuit(n, layers);
            const std::size_t p = c.numParams();
            for (const double k : {1.0, 10.0, 33.3, 50.0, 90.0, 100.0}) {
                if (activeTarget(p, k) == 0) {
                    continue;
                }
                for (const auto kind :
                     {StrategyKind::FullyRandom, StrategyKind::GateRandom,
                      StrategyKind::MagnitudeBased}) {
                    const std::size_t warmup =
                        kind == StrategyKind::MagnitudeBased ? 3 : 0;
                    const Activator act(cfgOf(kind, k, warmup), c, n * 100 + layers);
                    for (std::size_t it = 0; it < 12; ++it) {
                        const auto params = initParams(c, it);
                        const auto m = act.mask(it, params);
                        REQUIRE(m.activeCount() == act.expectedActiveCount(it));
                        if (kind == StrategyKind::GateRandom) {
                            CHECK(axesTouched(m, c).size() == 1);
                        }
                        if (kind == StrategyKind::MagnitudeBased && it >= warmup) {
                            double min_active = 1e300;
                            double max_inactive = 0.0;
                            for (std::size_t i = 0; i < p; ++i) {
                                const double a = std::abs(params[i]);
                                if (m.active[i]) {
                                    min_active = std::min(min_active, a);
                                } else {
                                    max_inactive = std::max(max_inactive, a);
                                }
                            }
                            CHECK(max_inactive <= min_active);
                        }
                        // Determinism: same inputs, same mask.
                        CHECK(act.mask(it, params).active == m.active);
                    }
                }
            }
        }
    }
}

TEST_CASE("fully random marginals are uniform", "[activation][property]") {
    const auto cfg = cfgOf(StrategyKind::FullyRandom, 50);
    constexpr std::size_t p = 20;
    constexpr int draws = 10000;
    std::vector<int> freq(p, 0);
    for (int t = 0; t < draws; ++t) {
        CounterRng rng(deriveKey(99, static_cast<std::uint64_t>(t)));
        const auto m = selectFullyRandom(cfg, p, rng);
        REQUIRE(m.activeCount() == 10);
        for (std::size_t i = 0; i < p; ++i) {
            freq[i] += m.active[i] ? 1 : 0;
        }
    }
    const double sigma = std::sqrt(draws * 0.25);
    for (const int f : freq) {
        CHECK(std::abs(f - draws * 0.5) <= 3 * sigma);
    }
}

TEST_CASE("gate random axis choice", "[activation]") {
    const auto c = buildCircuit(6, 4);
    StrategyConfig cfg = cfgOf(StrategyKind::GateRandom, 10);
    const Activator per_iter(cfg, c, 5);
    std::set<Axis> seen;
    for (std::size_t it = 0; it < 60; ++it) {
        const auto axes = axesTouched(per_iter.mask(it, initParams(c, 0)), c);
        seen.insert(axes.begin(), axes.end());
    }
    CHECK(seen.size() == 3);

    cfg.gate_ra_fixed_axis = true;
    const Activator fixed(cfg, c, 5);
    std::set<Axis> fixed_seen;
    for (std::size_t it = 0; it < 60; ++it) {
        const auto axes = axesTouched(fixed.mask(it, initParams(c, 0)), c);
        fixed_seen.insert(axes.begin(), axes.end());
    }
    CHECK(fixed_seen.size() == 1);
}
