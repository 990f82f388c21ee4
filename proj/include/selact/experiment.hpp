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
 * @file experiment.hpp
 * VQE training under a gate-activation strategy, multi-run sweeps,
 * aggregation across seeds and Hamiltonians, and CSV / JSONL emission.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "activation.hpp"
#include "ansatz.hpp"
#include "error.hpp"
#include "gradient.hpp"
#include "hamiltonian.hpp"
#include "optimizer.hpp"

namespace selact {

/// Gap values below this are written as log10 = -15.
inline constexpr double kGapFloorLog10 = -15.0;

/// Allowed disagreement between Lanczos and a file's e_gs_reference.
inline constexpr double kReferenceTolerance = 1e-6;

/// log10 |e_gs - energy|, floored at -15.
[[nodiscard]] inline double gapLog10(double e_gs, double energy) {
    const double d = std::abs(e_gs - energy);
    return d < 1e-15 ? kGapFloorLog10 : std::log10(d);
}

/// printf("%.9g") for every number that reaches a file or the console.
[[nodiscard]] inline std::string formatNumber(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

struct RunConfig {
    std::string hamiltonian = "builtin:tfim:6:1.0";
    std::size_t num_layers = 4;
    StrategyConfig strategy;
    std::size_t iterations = 2000;
    std::uint64_t seed = 0;
    AdamHyperparams adam;
    std::size_t log_every = 10;

    void validate() const {
        if (iterations < 1) {
            throw ConfigError("iterations must be >= 1");
        }
        if (num_layers < 1) {
            throw ConfigError("num_layers must be >= 1");
        }
        if (log_every < 1) {
            throw ConfigError("log_every must be >= 1");
        }
        strategy.validate();
    }
};

struct TracePoint {
    std::size_t iteration;
    double energy;
    double gap_log10;
    std::size_t active_count;
};

struct RunRecord {
    RunConfig config;
    std::string hamiltonian_label;
    double e_gs = 0.0;
    std::vector<TracePoint> trace;
    ParamVector final_params;
    double wall_time = 0.0; ///< seconds
    std::vector<std::string> warnings;
    std::optional<std::string> error; ///< set when the run failed

    [[nodiscard]] bool ok() const noexcept { return !error.has_value(); }
    [[nodiscard]] double finalGap() const { return trace.back().gap_log10; }
};

/// Ground energy plus the reference cross-check warning, if any.
struct GroundEnergyInfo {
    double e_gs;
    std::optional<std::string> warning;
};

[[nodiscard]] inline GroundEnergyInfo
checkedGroundEnergy(const Hamiltonian &h) {
    GroundEnergyInfo info{groundEnergy(h), std::nullopt};
    if (const auto ref = h.groundEnergyReference();
        ref && std::abs(*ref - info.e_gs) > kReferenceTolerance) {
        info.warning = "ground energy " + formatNumber(info.e_gs) +
                       " disagrees with e_gs_reference " + formatNumber(*ref);
    }
    return info;
}

/**
 * @brief Train with a known Hamiltonian and ground energy.
 *
 * Iteration t evaluates energy and gradient at the current parameters,
 * draws the mask for t, then applies one gated Adam step. The trace holds
 * t = 0, every log_every-th t, and t = iterations (after the last step).
 */
[[nodiscard]] inline RunRecord runVqe(const RunConfig &cfg,
                                      const Hamiltonian &h, double e_gs) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.config = cfg;
    rec.hamiltonian_label = h.label();
    rec.e_gs = e_gs;

    const CircuitSpec circuit(h.numQubits(), cfg.num_layers);
    const Activator activator(cfg.strategy, circuit, cfg.seed);
    ParamVector params = initParams(circuit, cfg.seed);
    AdamState adam(circuit.numParams(), cfg.adam);

    bool below_floor = false;
    for (std::size_t it = 0;; ++it) {
        auto [energy, grad] = energyAndGradient(circuit, params, h);
        const ActivationMask mask = activator.mask(it, params);
        if (it == 0 || it % cfg.log_every == 0 || it == cfg.iterations) {
            rec.trace.push_back(
                {it, energy, gapLog10(e_gs, energy), mask.activeCount()});
            if (energy < e_gs - 1e-8) {
                below_floor = true;
            }
        }
        if (it == cfg.iterations) {
            break;
        }
        adamStep(adam, params, grad, mask);
    }
    if (below_floor) {
        rec.warnings.push_back("logged energy below ground energy - 1e-8");
    }
    rec.final_params = std::move(params);
    rec.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return rec;
}

[[nodiscard]] inline RunRecord runVqe(const RunConfig &cfg) {
    const Hamiltonian h = loadHamiltonian(cfg.hamiltonian);
    const auto info = checkedGroundEnergy(h);
    RunRecord rec = runVqe(cfg, h, info.e_gs);
    if (info.warning) {
        rec.warnings.insert(rec.warnings.begin(), *info.warning);
    }
    return rec;
}

[[nodiscard]] inline std::size_t defaultJobs() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/**
 * Every (hamiltonian, seed, variant) combination as an independent run,
 * returned hamiltonian-major, then seed, then variant. A failing cell is
 * recorded with its error instead of aborting the sweep.
 */
[[nodiscard]] inline std::vector<RunRecord>
runSweep(const RunConfig &base, const std::vector<std::string> &hamiltonians,
         const std::vector<std::uint64_t> &seeds,
         const std::vector<StrategyConfig> &variants,
         std::size_t jobs = defaultJobs()) {
    if (hamiltonians.empty() || seeds.empty() || variants.empty()) {
        throw ArgumentError(
            "sweep needs non-empty hamiltonian, seed and variant lists");
    }

    struct Target {
        std::unique_ptr<Hamiltonian> h;
        GroundEnergyInfo info{0.0, std::nullopt};
        std::optional<std::string> error;
    };
    std::vector<Target> targets(hamiltonians.size());
    for (std::size_t i = 0; i < hamiltonians.size(); ++i) {
        try {
            targets[i].h =
                std::make_unique<Hamiltonian>(loadHamiltonian(hamiltonians[i]));
            targets[i].info = checkedGroundEnergy(*targets[i].h);
        } catch (const std::exception &e) {
            targets[i].error = e.what();
        }
    }

    const std::size_t cells =
        hamiltonians.size() * seeds.size() * variants.size();
    std::vector<RunRecord> records(cells);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t c = next++; c < cells; c = next++) {
            const std::size_t v = c % variants.size();
            const std::size_t s = (c / variants.size()) % seeds.size();
            const std::size_t hi = c / (variants.size() * seeds.size());
            RunConfig cfg = base;
            cfg.hamiltonian = hamiltonians[hi];
            cfg.seed = seeds[s];
            cfg.strategy = variants[v];
            const Target &t = targets[hi];
            RunRecord &rec = records[c];
            try {
                if (t.error) {
                    throw Error(*t.error);
                }
                rec = runVqe(cfg, *t.h, t.info.e_gs);
                if (t.info.warning) {
                    rec.warnings.insert(rec.warnings.begin(), *t.info.warning);
                }
            } catch (const std::exception &e) {
                rec = RunRecord{};
                rec.config = cfg;
                rec.error = e.what();
            }
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, cells);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &th : pool) {
        th.join();
    }
    return records;
}

// ---------------------------------------------------------------------------
// Aggregation

struct AggregateTrace {
    StrategyConfig variant;
    std::size_t record_count = 0;
    std::vector<std::size_t> iterations;
    std::vector<double> mean;
    std::vector<double> stddev; ///< sample std, divisor N - 1 (0 when N = 1)
    std::vector<double> band_low;
    std::vector<double> band_high;
};

/// Per-iteration gap statistics for the given records (one group).
[[nodiscard]] inline AggregateTrace
aggregateGroup(const std::vector<const RunRecord *> &records) {
    if (records.empty()) {
        throw AggregationError("cannot aggregate an empty group");
    }
    AggregateTrace out;
    out.variant = records.front()->config.strategy;
    out.record_count = records.size();
    const auto &grid = records.front()->trace;
    for (const auto *r : records) {
        bool same = r->trace.size() == grid.size();
        for (std::size_t i = 0; same && i < grid.size(); ++i) {
            same = r->trace[i].iteration == grid[i].iteration;
        }
        if (!same) {
            throw AggregationError("records in one group have different "
                                   "iteration grids");
        }
    }
    const auto n = static_cast<double>(records.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double mu = 0.0;
        for (const auto *r : records) {
            mu += r->trace[i].gap_log10;
        }
        mu /= n;
        double ss = 0.0;
        for (const auto *r : records) {
            const double d = r->trace[i].gap_log10 - mu;
            ss += d * d;
        }
        const double sigma = records.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        out.iterations.push_back(grid[i].iteration);
        out.mean.push_back(mu);
        out.stddev.push_back(sigma);
        out.band_low.push_back(mu - sigma / 2);
        out.band_high.push_back(mu + sigma / 2);
    }
    return out;
}

/// Group successful records by strategy variant, in order of first
/// appearance, and aggregate each group.
[[nodiscard]] inline std::vector<AggregateTrace>
aggregate(const std::vector<RunRecord> &records) {
    std::vector<StrategyConfig> keys;
    std::vector<std::vector<const RunRecord *>> groups;
    for (const auto &r : records) {
        if (!r.ok()) {
            continue;
        }
        auto it = std::find(keys.begin(), keys.end(), r.config.strategy);
        if (it == keys.end()) {
            keys.push_back(r.config.strategy);
            groups.emplace_back();
            it = keys.end() - 1;
        }
        groups[static_cast<std::size_t>(it - keys.begin())].push_back(&r);
    }
    std::vector<AggregateTrace> out;
    out.reserve(groups.size());
    for (const auto &g : groups) {
        out.push_back(aggregateGroup(g));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {
inline std::string csvField(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}
} // namespace detail

inline constexpr const char *kResultsCsvHeader =
    "strategy,k_percent,warmup,hamiltonian,seed,iteration,energy,gap_log10,"
    "active_count";

inline void writeResultsCsv(std::ostream &os,
                            const std::vector<RunRecord> &records) {
    os << kResultsCsvHeader << '\n';
    for (const auto &r : records) {
        if (!r.ok()) {
            continue;
        }
        const auto &s = r.config.strategy;
        for (const auto &p : r.trace) {
            os << strategyName(s.kind) << ',' << formatNumber(s.k_percent)
               << ',' << s.warmup_iters << ','
               << detail::csvField(r.config.hamiltonian) << ','
               << r.config.seed << ',' << p.iteration << ','
               << formatNumber(p.energy) << ',' << formatNumber(p.gap_log10)
               << ',' << p.active_count << '\n';
        }
    }
}

inline void writeAggregateCsv(std::ostream &os,
                              const std::vector<AggregateTrace> &traces) {
    os << "strategy,k_percent,warmup,records,iteration,mean_gap_log10,"
          "std_gap_log10,band_low,band_high\n";
    for (const auto &t : traces) {
        for (std::size_t i = 0; i < t.iterations.size(); ++i) {
            os << strategyName(t.variant.kind) << ','
               << formatNumber(t.variant.k_percent) << ','
               << t.variant.warmup_iters << ',' << t.record_count << ','
               << t.iterations[i] << ',' << formatNumber(t.mean[i]) << ','
               << formatNumber(t.stddev[i]) << ','
               << formatNumber(t.band_low[i]) << ','
               << formatNumber(t.band_high[i]) << '\n';
        }
    }
}

[[nodiscard]] inline nlohmann::ordered_json
strategyToJson(const StrategyConfig &s) {
    nlohmann::ordered_json j;
    j["strategy"] = strategyName(s.kind);
    j["k_percent"] = s.k_percent;
    j["warmup_iters"] = s.warmup_iters;
    if (s.gate_ra_fixed_axis) {
        j["gate_ra_fixed_axis"] = true;
    }
    return j;
}

[[nodiscard]] inline nlohmann::ordered_json toJson(const RunConfig &cfg) {
    nlohmann::ordered_json j;
    j["hamiltonian"] = cfg.hamiltonian;
    j["num_layers"] = cfg.num_layers;
    j.update(strategyToJson(cfg.strategy));
    j["iterations"] = cfg.iterations;
    j["seed"] = cfg.seed;
    j["lr"] = cfg.adam.lr;
    j["beta1"] = cfg.adam.beta1;
    j["beta2"] = cfg.adam.beta2;
    j["epsilon"] = cfg.adam.epsilon;
    j["log_every"] = cfg.log_every;
    return j;
}

/**
 * One JSON object per record. Wall time is left out unless
 * @p include_timing, so the default output is byte-deterministic.
 */
inline void writeRecordsJsonl(std::ostream &os,
                              const std::vector<RunRecord> &records,
                              bool include_timing = false) {
    for (const auto &r : records) {
        nlohmann::ordered_json j;
        j["config"] = toJson(r.config);
        if (r.error) {
            j["error"] = *r.error;
            os << j.dump() << '\n';
            continue;
        }
        j["hamiltonian_label"] = r.hamiltonian_label;
        j["e_gs"] = r.e_gs;
        j["gap_log_base"] = 10;
        auto trace = nlohmann::ordered_json::array();
        for (const auto &p : r.trace) {
            trace.push_back(nlohmann::ordered_json::array(
                {p.iteration, p.energy, p.gap_log10, p.active_count}));
        }
        j["trace_columns"] = {"iteration", "energy", "gap_log10",
                              "active_count"};
        j["trace"] = std::move(trace);
        j["final_params"] = r.final_params;
        if (!r.warnings.empty()) {
            j["warnings"] = r.warnings;
        }
        if (include_timing) {
            j["wall_time"] = r.wall_time;
        }
        os << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Config files

namespace detail {
template <class T>
T configValue(const nlohmann::json &j, const char *key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config key '") + key + "': " +
                          e.what());
    }
}

inline std::size_t configCount(const nlohmann::json &j, const char *key) {
    const auto &v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError(std::string("config key '") + key +
                          "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

inline std::uint64_t configSeed(const nlohmann::json &v) {
    if (!v.is_number_integer() || (v.is_number_integer() &&
                                   !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
        throw ConfigError("seeds must be non-negative integers");
    }
    return v.get<std::uint64_t>();
}

inline void applyStrategyKeys(const nlohmann::json &j, StrategyConfig &s) {
    if (j.contains("strategy")) {
        s.kind = parseStrategyKind(configValue<std::string>(j, "strategy"));
    }
    if (j.contains("k_percent")) {
        s.k_percent = configValue<double>(j, "k_percent");
    }
    if (j.contains("warmup_iters")) {
        s.warmup_iters = configCount(j, "warmup_iters");
    }
    if (j.contains("gate_ra_fixed_axis")) {
        s.gate_ra_fixed_axis = configValue<bool>(j, "gate_ra_fixed_axis");
    }
}

inline void rejectUnknownKeys(const nlohmann::json &j,
                              const std::set<std::string> &allowed,
                              const char *where) {
    for (const auto &[key, value] : j.items()) {
        if (allowed.count(key) == 0) {
            throw ConfigError(std::string("unknown ") + where + " key '" + key +
                              "'");
        }
    }
}

inline const std::set<std::string> kStrategyKeys = {
    "strategy", "k_percent", "warmup_iters", "gate_ra_fixed_axis"};
inline const std::set<std::string> kRunKeys = {
    "hamiltonian", "num_layers", "strategy",   "k_percent",
    "warmup_iters", "gate_ra_fixed_axis", "iterations", "seed",
    "lr",           "beta1",      "beta2",      "epsilon",
    "log_every"};
} // namespace detail

[[nodiscard]] inline StrategyConfig strategyFromJson(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("strategy variant must be a JSON object");
    }
    detail::rejectUnknownKeys(j, detail::kStrategyKeys, "variant");
    StrategyConfig s;
    detail::applyStrategyKeys(j, s);
    s.validate();
    return s;
}

/// RunConfig from a JSON object; keys not listed here are rejected unless
/// @p extra_keys names them.
[[nodiscard]] inline RunConfig
runConfigFromJson(const nlohmann::json &j,
                  const std::set<std::string> &extra_keys = {}) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    std::set<std::string> allowed = detail::kRunKeys;
    allowed.insert(extra_keys.begin(), extra_keys.end());
    detail::rejectUnknownKeys(j, allowed, "config");

    RunConfig cfg;
    if (j.contains("hamiltonian")) {
        cfg.hamiltonian = detail::configValue<std::string>(j, "hamiltonian");
    }
    if (j.contains("num_layers")) {
        cfg.num_layers = detail::configCount(j, "num_layers");
    }
    detail::applyStrategyKeys(j, cfg.strategy);
    if (j.contains("iterations")) {
        cfg.iterations = detail::configCount(j, "iterations");
    }
    if (j.contains("seed")) {
        cfg.seed = detail::configSeed(j["seed"]);
    }
    if (j.contains("lr")) {
        cfg.adam.lr = detail::configValue<double>(j, "lr");
    }
    if (j.contains("beta1")) {
        cfg.adam.beta1 = detail::configValue<double>(j, "beta1");
    }
    if (j.contains("beta2")) {
        cfg.adam.beta2 = detail::configValue<double>(j, "beta2");
    }
    if (j.contains("epsilon")) {
        cfg.adam.epsilon = detail::configValue<double>(j, "epsilon");
    }
    if (j.contains("log_every")) {
        cfg.log_every = detail::configCount(j, "log_every");
    }
    cfg.validate();
    AdamState probe(0, cfg.adam);
    static_cast<void>(probe);
    return cfg;
}

struct SweepConfig {
    RunConfig base;
    std::vector<std::string> hamiltonians;
    std::vector<std::uint64_t> seeds;
    std::vector<StrategyConfig> variants;
};

/// Sweep config: RunConfig keys plus optional `hamiltonians`, `seeds` and
/// `variants` lists (each defaults to the single value in the base).
[[nodiscard]] inline SweepConfig sweepConfigFromJson(const nlohmann::json &j) {
    SweepConfig sw;
    sw.base = runConfigFromJson(j, {"hamiltonians", "seeds", "variants"});
    if (j.contains("hamiltonians")) {
        sw.hamiltonians =
            detail::configValue<std::vector<std::string>>(j, "hamiltonians");
    } else {
        sw.hamiltonians = {sw.base.hamiltonian};
    }
    if (j.contains("seeds")) {
        if (!j["seeds"].is_array()) {
            throw ConfigError("'seeds' must be an array");
        }
        for (const auto &s : j["seeds"]) {
            sw.seeds.push_back(detail::configSeed(s));
        }
    } else {
        sw.seeds = {sw.base.seed};
    }
    if (j.contains("variants")) {
        if (!j["variants"].is_array()) {
            throw ConfigError("'variants' must be an array");
        }
        for (const auto &v : j["variants"]) {
            sw.variants.push_back(strategyFromJson(v));
        }
    } else {
        sw.variants = {sw.base.strategy};
    }
    if (sw.hamiltonians.empty() || sw.seeds.empty() || sw.variants.empty()) {
        throw ArgumentError("sweep lists must be non-empty");
    }
    return sw;
}

[[nodiscard]] inline nlohmann::json readJsonFile(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError("malformed JSON in '" + path + "': " + e.what());
    }
}

} // namespace selact
