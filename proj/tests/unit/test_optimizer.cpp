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
#include <cstring>
#include <limits>
#include <random>

#include <catch_amalgamated.hpp>

#include "selact/optimizer.hpp"

using namespace selact;
using Catch::Matchers::WithinAbs;

namespace {
bool bitEqual(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

ActivationMask maskOf(std::vector<bool> bits) { return {std::move(bits), 0}; }
} // namespace

TEST_CASE("adamStep basics", "[optimizer]") {
    SECTION("all-false mask leaves params unchanged") {
        AdamState s(3, {});
        ParamVector theta{0.1, -0.2, 0.3};
        const ParamVector before = theta;
        adamStep(s, theta, {1.0, 2.0, 3.0}, maskOf({false, false, false}));
        CHECK(theta == before);
        CHECK(s.step_count == std::vector<std::uint64_t>{0, 0, 0});
    }
    SECTION("zero gradient leaves theta unchanged") {
        AdamState s(1, {});
        ParamVector theta{0.4};
        adamStep(s, theta, {0.0}, maskOf({true}));
        CHECK(theta[0] == 0.4);
        CHECK(s.step_count[0] == 1);
    }
    SECTION("first step size") {
        AdamState s(1, {});
        ParamVector theta{0.0};
        adamStep(s, theta, {2.0}, maskOf({true}));
        CHECK_THAT(theta[0], WithinAbs(-0.001 * 2.0 / (2.0 + 1e-8), 1e-18));
    }
    SECTION("non-finite gradient") {
        AdamState s(2, {});
        ParamVector theta{0.0, 0.0};
        CHECK_THROWS_AS(adamStep(s, theta,
                                 {0.0, std::numeric_limits<double>::quiet_NaN()},
                                 maskOf({true, false})),
                        NumericError);
        CHECK_THROWS_AS(adamStep(s, theta, {0.0}, maskOf({true, false})),
                        SizeError);
    }
    SECTION("bad hyperparameters") {
        CHECK_THROWS_AS(AdamState(1, AdamHyperparams{0.0, 0.9, 0.999, 1e-8}),
                        ConfigError);
        CHECK_THROWS_AS(AdamState(1, AdamHyperparams{0.1, 1.0, 0.999, 1e-8}),
                        ConfigError);
    }
}

TEST_CASE("per-parameter bias correction", "[optimizer]") {
    // A coordinate activated for the first time after others have stepped
    // behaves like a fresh Adam: its first step is lr * g / (|g| + eps).
    AdamState s(2, {});
    ParamVector theta{0.0, 0.0};
    for (int i = 0; i < 50; ++i) {
        adamStep(s, theta, {1.0, 3.0}, maskOf({true, false}));
    }
    CHECK(theta[1] == 0.0);
    adamStep(s, theta, {1.0, 3.0}, maskOf({true, true}));
    CHECK_THAT(theta[1], WithinAbs(-0.001 * 3.0 / (3.0 + 1e-8), 1e-18));
    CHECK(s.step_count == std::vector<std::uint64_t>{51, 1});
}

TEST_CASE("property: exact freeze and bounded first step",
          "[optimizer][property]") {
    std::mt19937_64 gen(555);
    std::normal_distribution<double> nd(0.0, 5.0);
    std::bernoulli_distribution coin(0.3);
    constexpr std::size_t p = 40;
    AdamState s(p, AdamHyperparams{0.01, 0.9, 0.999, 1e-8});
    ParamVector theta(p);
    for (auto &x : theta) {
        x = nd(gen);
    }
    for (int step = 0; step < 300; ++step) {
        GradientVector g(p);
        std::vector<bool> bits(p);
        for (std::size_t i = 0; i < p; ++i) {
            g[i] = nd(gen);
            bits[i] = coin(gen);
        }
        const ParamVector t0 = theta;
        const auto m0 = s.m;
        const auto v0 = s.v;
        const auto c0 = s.step_count;
        adamStep(s, theta, g, maskOf(bits));
        for (std::size_t i = 0; i < p; ++i) {
            if (!bits[i]) {
                REQUIRE(bitEqual(theta[i], t0[i]));
                REQUIRE(bitEqual(s.m[i], m0[i]));
                REQUIRE(bitEqual(s.v[i], v0[i]));
                REQUIRE(s.step_count[i] == c0[i]);
            } else {
                REQUIRE(s.step_count[i] == c0[i] + 1);
                REQUIRE(s.v[i] >= 0.0);
                if (c0[i] == 0) {
                    REQUIRE(std::abs(theta[i] - t0[i]) <= 0.01 * (1 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("determinism", "[optimizer]") {
    auto run = [] {
        AdamState s(3, {});
        ParamVector theta{0.1, 0.2, 0.3};
        for (int i = 0; i < 100; ++i) {
            adamStep(s, theta, {std::sin(i * 0.1), 0.5, -theta[2]},
                     maskOf({i % 2 == 0, true, i % 3 == 0}));
        }
        return theta;
    };
    const auto a = run();
    const auto b = run();
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(bitEqual(a[i], b[i]));
    }
}
