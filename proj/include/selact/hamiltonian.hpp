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
 * @file hamiltonian.hpp
 * Real-weighted Pauli-sum Hamiltonians: construction, matrix-free
 * application, expectation values, ground-state energy and the
 * `pauli-sum-v1` JSON wire format.
 *
 * Character q of a Pauli string acts on qubit q, i.e. on bit q of the basis
 * index, matching statevector.hpp.
 */
#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "lanczos.hpp"
#include "statevector.hpp"

namespace selact {

inline constexpr std::string_view kHamiltonianFormat = "pauli-sum-v1";

/// Terms whose merged coefficient falls below this are dropped.
inline constexpr double kCoefficientCutoff = 1e-14;

struct PauliTerm {
    double coeff;
    std::string paulis;

    friend bool operator==(const PauliTerm &, const PauliTerm &) = default;
};

/**
 * @brief Immutable H = sum_j c_j P_j.
 *
 * Construction validates every term, merges duplicate Pauli strings by
 * summing coefficients (first occurrence keeps its position) and drops
 * terms with |c| < kCoefficientCutoff.
 */
class Hamiltonian {
  public:
    Hamiltonian(std::size_t num_qubits, std::vector<PauliTerm> terms,
                std::string label = {},
                std::optional<double> e_gs_reference = std::nullopt)
        : num_qubits_(num_qubits), label_(std::move(label)),
          e_gs_reference_(e_gs_reference) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw SizeError("Hamiltonian qubit count " +
                            std::to_string(num_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
        }
        std::unordered_map<std::string, std::size_t> seen;
        std::vector<PauliTerm> merged;
        for (auto &term : terms) {
            validate(term);
            auto [it, inserted] = seen.emplace(term.paulis, merged.size());
            if (inserted) {
                merged.push_back(std::move(term));
            } else {
                merged[it->second].coeff += term.coeff;
            }
        }
        for (auto &term : merged) {
            if (std::abs(term.coeff) >= kCoefficientCutoff) {
                masks_.push_back(masksFor(term.paulis));
                terms_.push_back(std::move(term));
            }
        }
    }

    [[nodiscard]] std::size_t numQubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] std::optional<double> groundEnergyReference() const noexcept {
        return e_gs_reference_;
    }

    /// Bitwise action of term j: P_j|i> = phase(i) |i ^ flip>.
    struct TermMasks {
        std::size_t flip;  ///< X or Y positions
        std::size_t phase; ///< Z or Y positions
        Complex y_phase;   ///< i^{number of Y}
    };
    [[nodiscard]] const std::vector<TermMasks> &masks() const noexcept {
        return masks_;
    }

  private:
    void validate(const PauliTerm &term) const {
        if (!std::isfinite(term.coeff)) {
            throw SchemaError("non-finite coefficient on term '" +
                              term.paulis + "'");
        }
        if (term.paulis.size() != num_qubits_) {
            throw SchemaError("Pauli string '" + term.paulis + "' has length " +
                              std::to_string(term.paulis.size()) +
                              ", expected " + std::to_string(num_qubits_));
        }
        for (const char c : term.paulis) {
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw SchemaError("illegal character '" + std::string(1, c) +
                                  "' in Pauli string '" + term.paulis + "'");
            }
        }
    }

    static TermMasks masksFor(const std::string &paulis) {
        TermMasks m{0, 0, Complex{1.0, 0.0}};
        std::size_t num_y = 0;
        for (std::size_t q = 0; q < paulis.size(); ++q) {
            const std::size_t bit = std::size_t{1} << q;
            switch (paulis[q]) {
            case 'X':
                m.flip |= bit;
                break;
            case 'Y':
                m.flip |= bit;
                m.phase |= bit;
                ++num_y;
                break;
            case 'Z':
                m.phase |= bit;
                break;
            default:
                break;
            }
        }
        constexpr Complex powers[] = {
            {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        m.y_phase = powers[num_y % 4];
        return m;
    }

    std::size_t num_qubits_;
    std::vector<PauliTerm> terms_;
    std::vector<TermMasks> masks_;
    std::string label_;
    std::optional<double> e_gs_reference_;
};

namespace detail {
inline std::string pauliAt(std::size_t n,
                           std::initializer_list<std::pair<std::size_t, char>>
                               ops) {
    std::string s(n, 'I');
    for (const auto &[q, c] : ops) {
        s[q] = c;
    }
    return s;
}

inline void checkDimensions(const Hamiltonian &h, const Statevector &psi) {
    if (h.numQubits() != psi.numQubits()) {
        throw SizeError("Hamiltonian on " + std::to_string(h.numQubits()) +
                        " qubits applied to a " +
                        std::to_string(psi.numQubits()) + "-qubit state");
    }
}

inline double parity(std::size_t x) {
    return (std::popcount(x) & 1) != 0 ? -1.0 : 1.0;
}
} // namespace detail

/// Open-boundary transverse-field Ising chain:
/// H = -sum_q Z_q Z_{q+1} - g sum_q X_q.
[[nodiscard]] inline Hamiltonian builtinTfim(std::size_t n, double g) {
    if (n < 2) {
        throw SizeError("TFIM needs at least 2 qubits");
    }
    std::vector<PauliTerm> terms;
    for (std::size_t q = 0; q + 1 < n; ++q) {
        terms.push_back({-1.0, detail::pauliAt(n, {{q, 'Z'}, {q + 1, 'Z'}})});
    }
    for (std::size_t q = 0; q < n; ++q) {
        terms.push_back({-g, detail::pauliAt(n, {{q, 'X'}})});
    }
    std::ostringstream label;
    label << "tfim(n=" << n << ",g=" << g << ")";
    return {n, std::move(terms), label.str()};
}

/// Open-boundary Heisenberg chain:
/// H = J sum_q (XX + YY + ZZ)_{q,q+1} + h sum_q Z_q.
[[nodiscard]] inline Hamiltonian builtinHeisenberg(std::size_t n, double j,
                                                   double h) {
    if (n < 2) {
        throw SizeError("Heisenberg chain needs at least 2 qubits");
    }
    std::vector<PauliTerm> terms;
    for (std::size_t q = 0; q + 1 < n; ++q) {
        for (const char c : {'X', 'Y', 'Z'}) {
            terms.push_back({j, detail::pauliAt(n, {{q, c}, {q + 1, c}})});
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        terms.push_back({h, detail::pauliAt(n, {{q, 'Z'}})});
    }
    std::ostringstream label;
    label << "heisenberg(n=" << n << ",J=" << j << ",h=" << h << ")";
    return {n, std::move(terms), label.str()};
}

/// y = H x over raw amplitude spans of length 2^n.
inline void applyHamiltonian(const Hamiltonian &h,
                             std::span<const Complex> x, std::span<Complex> y) {
    std::fill(y.begin(), y.end(), Complex{0.0, 0.0});
    const auto &terms = h.terms();
    const auto &masks = h.masks();
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto &m = masks[t];
        const Complex scale = terms[t].coeff * m.y_phase;
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i ^ m.flip] += scale * detail::parity(i & m.phase) * x[i];
        }
    }
}

/// H|psi>; generally unnormalized.
[[nodiscard]] inline Statevector applyHamiltonian(const Hamiltonian &h,
                                                  const Statevector &psi) {
    detail::checkDimensions(h, psi);
    Statevector out(psi.numQubits());
    applyHamiltonian(h, psi.amplitudes(), out.amplitudes());
    return out;
}

/**
 * <psi|H|psi> for a unit-norm @p psi.
 *
 * @throws StateError if | ||psi||^2 - 1 | > 1e-9 or the imaginary residue
 * exceeds 1e-10.
 */
[[nodiscard]] inline double expectation(const Hamiltonian &h,
                                        const Statevector &psi) {
    detail::checkDimensions(h, psi);
    const double norm2 = psi.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw StateError("expectation needs a unit-norm state, got |psi|^2 = " +
                         std::to_string(norm2));
    }
    const auto amp = psi.amplitudes();
    const auto &terms = h.terms();
    const auto &masks = h.masks();
    Complex acc{0.0, 0.0};
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto &m = masks[t];
        Complex term{0.0, 0.0};
        for (std::size_t i = 0; i < amp.size(); ++i) {
            term += std::conj(amp[i ^ m.flip]) * detail::parity(i & m.phase) *
                    amp[i];
        }
        acc += terms[t].coeff * m.y_phase * term;
    }
    if (std::abs(acc.imag()) > 1e-10) {
        throw StateError("expectation has imaginary residue " +
                         std::to_string(acc.imag()));
    }
    return acc.real();
}

/// Minimal eigenvalue of @p h by matrix-free Lanczos.
[[nodiscard]] inline double groundEnergy(const Hamiltonian &h,
                                         const LanczosOptions &options = {}) {
    const std::size_t dim = std::size_t{1} << h.numQubits();
    return lanczosMinEigenvalue(
               [&h](std::span<const Complex> x, std::span<Complex> y) {
                   applyHamiltonian(h, x, y);
               },
               dim, options)
        .eigenvalue;
}

[[nodiscard]] inline double groundEnergy(const Hamiltonian &h, double tol) {
    LanczosOptions options;
    options.tolerance = tol;
    return groundEnergy(h, options);
}

// ---------------------------------------------------------------------------
// pauli-sum-v1 JSON

[[nodiscard]] inline nlohmann::ordered_json
toJson(const Hamiltonian &h) {
    nlohmann::ordered_json doc;
    doc["format"] = kHamiltonianFormat;
    doc["num_qubits"] = h.numQubits();
    doc["label"] = h.label();
    if (const auto ref = h.groundEnergyReference()) {
        doc["e_gs_reference"] = *ref;
    }
    auto terms = nlohmann::ordered_json::array();
    for (const auto &t : h.terms()) {
        nlohmann::ordered_json term;
        term["coeff"] = t.coeff;
        term["paulis"] = t.paulis;
        terms.push_back(std::move(term));
    }
    doc["terms"] = std::move(terms);
    return doc;
}

[[nodiscard]] inline std::string serializeHamiltonian(const Hamiltonian &h) {
    return toJson(h).dump(2) + "\n";
}

[[nodiscard]] inline Hamiltonian parseHamiltonian(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("malformed Hamiltonian JSON: ") +
                         e.what());
    } catch (const nlohmann::json::out_of_range &e) {
        // Numeric literals outside double range.
        throw SchemaError(std::string("non-finite number in Hamiltonian: ") +
                          e.what());
    }
    if (!doc.is_object()) {
        throw SchemaError("Hamiltonian document must be a JSON object");
    }
    if (doc.contains("format") &&
        (!doc["format"].is_string() ||
         doc["format"].get<std::string>() != kHamiltonianFormat)) {
        throw SchemaError("unsupported Hamiltonian format, expected " +
                          std::string(kHamiltonianFormat));
    }
    if (!doc.contains("num_qubits") || !doc["num_qubits"].is_number_integer()) {
        throw SchemaError("'num_qubits' must be an integer");
    }
    const auto n = doc["num_qubits"].get<std::int64_t>();
    if (n < 1 || n > static_cast<std::int64_t>(kMaxQubits)) {
        throw SchemaError("'num_qubits' = " + std::to_string(n) +
                          " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::string label;
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) {
            throw SchemaError("'label' must be a string");
        }
        label = doc["label"].get<std::string>();
    }
    std::optional<double> reference;
    if (doc.contains("e_gs_reference") && !doc["e_gs_reference"].is_null()) {
        if (!doc["e_gs_reference"].is_number()) {
            throw SchemaError("'e_gs_reference' must be a number");
        }
        reference = doc["e_gs_reference"].get<double>();
    }
    if (!doc.contains("terms") || !doc["terms"].is_array()) {
        throw SchemaError("'terms' must be an array");
    }
    std::vector<PauliTerm> terms;
    for (const auto &term : doc["terms"]) {
        if (!term.is_object() || !term.contains("coeff") ||
            !term.contains("paulis")) {
            throw SchemaError("each term needs 'coeff' and 'paulis'");
        }
        if (!term["coeff"].is_number()) {
            throw SchemaError("'coeff' must be a real number");
        }
        if (!term["paulis"].is_string()) {
            throw SchemaError("'paulis' must be a string");
        }
        terms.push_back(
            {term["coeff"].get<double>(), term["paulis"].get<std::string>()});
    }
    return {static_cast<std::size_t>(n), std::move(terms), std::move(label),
            reference};
}

[[nodiscard]] inline Hamiltonian readHamiltonianFile(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open Hamiltonian file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseHamiltonian(buf.str());
}

namespace detail {
inline std::vector<std::string> splitColon(std::string_view s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(':', start);
        parts.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

inline double parseNumber(const std::string &s, const std::string &source) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw ArgumentError("bad number '" + s + "' in '" + source + "'");
    }
    return v;
}

inline std::size_t parseCount(const std::string &s, const std::string &source) {
    const double v = parseNumber(s, source);
    if (v < 0 || v != std::floor(v)) {
        throw ArgumentError("bad qubit count '" + s + "' in '" + source + "'");
    }
    return static_cast<std::size_t>(v);
}
} // namespace detail

/**
 * Resolve a Hamiltonian source: `builtin:tfim:<n>:<g>`,
 * `builtin:heisenberg:<n>:<J>:<h>`, or a path to a pauli-sum-v1 file.
 */
[[nodiscard]] inline Hamiltonian loadHamiltonian(const std::string &source) {
    constexpr std::string_view prefix = "builtin:";
    if (source.rfind(prefix, 0) != 0) {
        return readHamiltonianFile(source);
    }
    const auto parts = detail::splitColon(source);
    if (parts.size() == 4 && parts[1] == "tfim") {
        return builtinTfim(detail::parseCount(parts[2], source),
                           detail::parseNumber(parts[3], source));
    }
    if (parts.size() == 5 && parts[1] == "heisenberg") {
        return builtinHeisenberg(detail::parseCount(parts[2], source),
                                 detail::parseNumber(parts[3], source),
                                 detail::parseNumber(parts[4], source));
    }
    throw ArgumentError("unknown builtin Hamiltonian '" + source +
                        "' (expected builtin:tfim:n:g or "
                        "builtin:heisenberg:n:J:h)");
}

} // namespace selact
