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
 * @file cli.hpp
 * Subcommand dispatch for the `selact` executable. Kept in a header so the
 * test suites can drive it in-process.
 *
 * Exit codes: 0 success, 1 usage error, 2 runtime or numeric error.
 */
#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selact/selact.hpp"

namespace selact::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Environment override for the configured seed(s), used by smoke tests.
inline constexpr const char *kSeedEnv = "VQE_SELACT_SEED";

namespace detail {

inline std::optional<std::uint64_t> seedOverride() {
    const char *raw = std::getenv(kSeedEnv);
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(raw, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || raw[used] != '\0') {
        throw ConfigError(std::string(kSeedEnv) + " is not an unsigned integer");
    }
    return v;
}

inline std::ofstream openOutput(const std::filesystem::path &path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    return out;
}

inline std::vector<double> parseDeltas(const std::string &list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw ArgumentError("bad delta value '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ArgumentError("empty delta list");
    }
    return out;
}

inline void printWarnings(const std::vector<RunRecord> &records,
                          std::ostream &err) {
    for (const auto &r : records) {
        for (const auto &w : r.warnings) {
            err << "warning [" << r.config.hamiltonian << " seed "
                << r.config.seed << "]: " << w << '\n';
        }
        if (r.error) {
            err << "error [" << r.config.hamiltonian << " seed "
                << r.config.seed << " " << strategyName(r.config.strategy.kind)
                << "]: " << *r.error << '\n';
        }
    }
}

} // namespace detail

/// Parse @p args (without the program name) and execute one subcommand.
inline int dispatch(const std::vector<std::string> &args, std::ostream &out,
                    std::ostream &err) {
    CLI::App app{"Selective gate-activation VQE training harness", "selact"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string hamiltonian;
    std::string out_path;
    std::string deltas = "0.01,0.05,0.1";
    std::size_t samples = 500;
    std::size_t jobs = defaultJobs();
    bool with_timing = false;
    double tol = LanczosOptions{}.tolerance;

    auto *run = app.add_subcommand("run", "Train one VQE run");
    run->add_option("--config", config_path, "Run config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_flag("--with-timing", with_timing,
                  "Include wall time in runs.jsonl");

    auto *sweep = app.add_subcommand("sweep", "Run a Hamiltonian x seed x "
                                              "strategy sweep");
    sweep->add_option("--config", config_path, "Sweep config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Output directory")->required();
    sweep->add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    sweep->add_flag("--with-timing", with_timing,
                    "Include wall time in runs.jsonl");

    auto *ground = app.add_subcommand("ground-energy",
                                      "Print the exact ground-state energy");
    ground
        ->add_option("--hamiltonian", hamiltonian,
                     "File path, builtin:tfim:n:g or "
                     "builtin:heisenberg:n:J:h")
        ->required();
    ground->add_option("--tol", tol, "Lanczos tolerance")
        ->check(CLI::PositiveNumber);

    auto *variance = app.add_subcommand(
        "grad-variance", "Gradient variance and Chebyshev-bound report");
    variance->add_option("--config", config_path, "Run config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    variance->add_option("--samples", samples, "Parameter draws M")
        ->required();
    variance->add_option("--deltas", deltas, "Comma-separated delta grid");
    variance->add_option("--out", out_path, "Write JSON here (default stdout)");

    auto *make = app.add_subcommand("make-hamiltonian",
                                    "Serialize a Hamiltonian to pauli-sum-v1");
    make->add_option("source", hamiltonian, "builtin:... or file path")
        ->required();
    make->add_option("--out", out_path, "Output file")->required();

    auto *validate = app.add_subcommand(
        "validate", "Check a Hamiltonian file and its e_gs_reference");
    validate->add_option("--hamiltonian", hamiltonian, "File path")
        ->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App *sub = nullptr;
        for (const auto *s : app.get_subcommands()) {
            sub = s;
        }
        err << (sub != nullptr ? sub->help() : app.help());
        return kExitUsage;
    }

    try {
        if (*run) {
            RunConfig cfg = runConfigFromJson(readJsonFile(config_path));
            if (const auto s = detail::seedOverride()) {
                cfg.seed = *s;
            }
            const std::vector<RunRecord> records{runVqe(cfg)};
            const std::filesystem::path dir(out_dir);
            {
                auto csv = detail::openOutput(dir / "results.csv");
                writeResultsCsv(csv, records);
            }
            {
                auto jsonl = detail::openOutput(dir / "runs.jsonl");
                writeRecordsJsonl(jsonl, records, with_timing);
            }
            detail::printWarnings(records, err);
            const auto &r = records.front();
            out << "e_gs " << formatNumber(r.e_gs) << "\nfinal_energy "
                << formatNumber(r.trace.back().energy) << "\nfinal_gap_log10 "
                << formatNumber(r.finalGap()) << '\n';
            return kExitOk;
        }
        if (*sweep) {
            SweepConfig sw = sweepConfigFromJson(readJsonFile(config_path));
            if (const auto s = detail::seedOverride()) {
                sw.seeds = {*s};
            }
            const auto records =
                runSweep(sw.base, sw.hamiltonians, sw.seeds, sw.variants, jobs);
            const std::filesystem::path dir(out_dir);
            {
                auto csv = detail::openOutput(dir / "results.csv");
                writeResultsCsv(csv, records);
            }
            {
                auto jsonl = detail::openOutput(dir / "runs.jsonl");
                writeRecordsJsonl(jsonl, records, with_timing);
            }
            {
                auto agg = detail::openOutput(dir / "aggregate.csv");
                writeAggregateCsv(agg, aggregate(records));
            }
            detail::printWarnings(records, err);
            std::size_t failed = 0;
            for (const auto &r : records) {
                failed += r.ok() ? 0 : 1;
            }
            out << "runs " << records.size() << "\nfailed " << failed << '\n';
            return failed == 0 ? kExitOk : kExitRuntime;
        }
        if (*ground) {
            const Hamiltonian h = loadHamiltonian(hamiltonian);
            out << formatNumber(groundEnergy(h, tol)) << '\n';
            return kExitOk;
        }
        if (*variance) {
            RunConfig cfg = runConfigFromJson(readJsonFile(config_path));
            if (const auto s = detail::seedOverride()) {
                cfg.seed = *s;
            }
            const Hamiltonian h = loadHamiltonian(cfg.hamiltonian);
            const CircuitSpec circuit(h.numQubits(), cfg.num_layers);
            const auto report = gradientVariance(circuit, h, samples, cfg.seed,
                                                 detail::parseDeltas(deltas));
            auto doc = toJson(report);
            doc["hamiltonian"] = cfg.hamiltonian;
            doc["num_qubits"] = h.numQubits();
            doc["num_layers"] = cfg.num_layers;
            if (out_path.empty()) {
                out << doc.dump(2) << '\n';
            } else {
                auto file = detail::openOutput(out_path);
                file << doc.dump(2) << '\n';
            }
            return kExitOk;
        }
        if (*make) {
            const Hamiltonian h = loadHamiltonian(hamiltonian);
            auto file = detail::openOutput(out_path);
            file << serializeHamiltonian(h);
            return kExitOk;
        }
        if (*validate) {
            const Hamiltonian h = readHamiltonianFile(hamiltonian);
            const auto info = checkedGroundEnergy(h);
            out << "label " << h.label() << "\nnum_qubits " << h.numQubits()
                << "\nterms " << h.terms().size() << "\nground_energy "
                << formatNumber(info.e_gs) << '\n';
            if (const auto ref = h.groundEnergyReference()) {
                out << "e_gs_reference " << formatNumber(*ref) << '\n';
            }
            if (info.warning) {
                err << "error: " << *info.warning << '\n';
                return kExitRuntime;
            }
            return kExitOk;
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    err << app.help();
    return kExitUsage;
}

inline int dispatch(int argc, const char *const *argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return dispatch(args, std::cout, std::cerr);
}

} // namespace selact::cli
