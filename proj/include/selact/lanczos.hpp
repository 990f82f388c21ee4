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
 * @file lanczos.hpp
 * Lanczos iteration with full reorthogonalization for the lowest eigenvalue
 * of a Hermitian operator that is only available through its action on
 * vectors.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace selact {

struct LanczosOptions {
    double tolerance = 1e-10;      ///< on successive Ritz-value change
    std::size_t max_iterations = 500;
    std::uint64_t seed = 0x5EEDULL; ///< start-vector key
};

struct LanczosResult {
    double eigenvalue;
    std::size_t iterations;
};

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
inline std::size_t sturmCount(std::span<const double> diag,
                              std::span<const double> off, double x) {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
        d = diag[i] - x - (i == 0 ? 0.0 : b2 / d);
        if (d == 0.0) {
            d = -std::numeric_limits<double>::epsilon() *
                (std::abs(x) + 1.0);
        }
        if (d < 0.0) {
            ++count;
        }
    }
    return count;
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by bisection.
inline double tridiagonalMinEigenvalue(std::span<const double> diag,
                                       std::span<const double> off) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double radius = 0.0;
        if (i > 0) {
            radius += std::abs(off[i - 1]);
        }
        if (i + 1 < diag.size()) {
            radius += std::abs(off[i]);
        }
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * scale) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (sturmCount(diag, off, mid) >= 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::complex<double> dot(std::span<const std::complex<double>> a,
                                std::span<const std::complex<double>> b) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

inline double norm(std::span<const std::complex<double>> a) {
    double acc = 0.0;
    for (const auto &x : a) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

} // namespace detail

/**
 * @brief Lowest eigenvalue of a Hermitian operator of dimension @p dim.
 *
 * @p apply must write A*x into y: apply(std::span<const Complex> x,
 * std::span<Complex> y). Stops when two successive Ritz values differ by at
 * most options.tolerance, when the Krylov space becomes invariant, or when
 * it spans the whole space.
 *
 * @throws ConvergenceError after options.max_iterations steps.
 */
template <class ApplyOp>
LanczosResult lanczosMinEigenvalue(ApplyOp &&apply, std::size_t dim,
                                   const LanczosOptions &options = {}) {
    using C = std::complex<double>;
    if (dim == 0) {
        throw SizeError("Lanczos on an empty space");
    }

    std::vector<std::vector<C>> basis;
    std::vector<double> alpha;
    std::vector<double> beta;

    std::vector<C> v(dim);
    CounterRng rng(options.seed);
    for (auto &x : v) {
        x = C{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    const double n0 = detail::norm(v);
    for (auto &x : v) {
        x /= n0;
    }

    std::vector<C> w(dim);
    double ritz = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < options.max_iterations; ++j) {
        basis.push_back(v);
        apply(std::span<const C>(basis.back()), std::span<C>(w));

        const double a = detail::dot(basis.back(), w).real();
        alpha.push_back(a);

        // Two passes of classical Gram-Schmidt against the whole basis.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &q : basis) {
                const C proj = detail::dot(q, w);
                for (std::size_t i = 0; i < dim; ++i) {
                    w[i] -= proj * q[i];
                }
            }
        }
        const double b = detail::norm(w);

        const double prev = ritz;
        ritz = detail::tridiagonalMinEigenvalue(alpha, beta);

        const double scale = std::max(std::abs(ritz), 1.0);
        const bool invariant = b <= 1e-12 * scale;
        const bool full = basis.size() == dim;
        const bool settled =
            j > 0 && std::abs(ritz - prev) <= options.tolerance;
        if (invariant || full || settled) {
            return {ritz, j + 1};
        }

        beta.push_back(b);
        for (std::size_t i = 0; i < dim; ++i) {
            v[i] = w[i] / b;
        }
    }
    throw ConvergenceError("Lanczos did not converge within " +
                               std::to_string(options.max_iterations) +
                               " iterations",
                           ritz);
}

} // namespace selact
