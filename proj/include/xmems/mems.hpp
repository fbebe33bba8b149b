#pragma once

// Entropy-raising transform, the maximally entangled mixed X-state family
// and its entanglement/entropy boundary.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "xmems/core.hpp"
#include "xmems/measures.hpp"

namespace xmems {

namespace detail {

inline void require_qubits(int n_qubits) {
    if (n_qubits < kMinQubits) {
        throw DomainError("at least 2 qubits required, got " + std::to_string(n_qubits));
    }
    if (n_qubits > 1000) {
        throw DomainError("n_qubits too large for double-precision evaluation");
    }
}

inline void require_gamma(double gamma_abs) {
    if (!(gamma_abs >= 0.0 && gamma_abs <= 0.5)) {
        throw DomainError("|gamma| must lie in [0, 1/2], got " + std::to_string(gamma_abs));
    }
}

/// d/(d-1) with d = 2^N.
inline double entropy_prefactor(int n_qubits) {
    const double d = std::ldexp(1.0, n_qubits);
    return d / (d - 1.0);
}

}  // namespace detail

struct BarTransform {
    XState state;
    /// permutation[k] is the original block now sitting at position k.
    std::vector<std::size_t> permutation;
};

/// Builds X-bar: the block that attains the concurrence is swapped to position
/// 0, every other block is collapsed onto its upper diagonal entry, and the
/// surviving coherence is reduced by the sum of the discarded sqrt(a_j b_j).
/// Concurrence is unchanged and linear entropy does not decrease.
inline BarTransform bar_transform(const XState& s) {
    require_valid(s);
    const auto c = gm_concurrence(s);
    if (!(c.value > 0.0)) {
        throw DomainError("bar transform requires a genuinely multipartite entangled state");
    }

    const std::size_t n = s.blocks();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::swap(perm[0], perm[c.argmax_index]);

    const auto a = s.a();
    const auto b = s.b();
    const auto z = s.z();
    std::vector<double> na(n), nb(n, 0.0);
    std::vector<complex> nz(n, 0.0);

    double discarded = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t src = perm[k];
        na[k] = a[src] + b[src];
        discarded += s.block_ceiling(src);
    }
    na[0] = a[perm[0]];
    nb[0] = b[perm[0]];
    nz[0] = std::abs(z[perm[0]]) - discarded;

    return {XState(s.n_qubits(), std::move(na), std::move(nb), std::move(nz)), std::move(perm)};
}

/// Coefficients of the entropy of the equal-population X-bar family as a
/// quadratic in t = x + |gamma|:  S = d/(d-1) (A t^2 + B t + C).
struct BoundaryCoefficients {
    double A;
    double B;
    double C;
    std::size_t n;

    static BoundaryCoefficients make(int n_qubits, double gamma_abs) {
        detail::require_qubits(n_qubits);
        const double n = std::ldexp(1.0, n_qubits - 1);
        return {-2.0 * (n + 1.0) / (n - 1.0), 4.0 / (n - 1.0),
                1.0 - 1.0 / (n - 1.0) - 2.0 * gamma_abs * gamma_abs,
                n_qubits <= 64 ? std::size_t{1} << (n_qubits - 1) : 0};
    }

    double at(double t) const { return (A * t + B) * t + C; }
    /// Unconstrained maximizer -B/(2A) = 1/(n+1).
    double vertex() const { return -B / (2.0 * A); }
};

/// Upper-diagonal weight of the boundary state: 1/(n+1) below the kink, |gamma|
/// above it.
inline double mems_f(int n_qubits, double gamma_abs) {
    detail::require_qubits(n_qubits);
    detail::require_gamma(gamma_abs);
    const double n = std::ldexp(1.0, n_qubits - 1);
    const double kink = 1.0 / (n + 1.0);
    return gamma_abs <= kink ? kink : gamma_abs;
}

/// Weight shared by the remaining upper-diagonal entries.
inline double mems_g(int n_qubits, double gamma_abs) {
    detail::require_qubits(n_qubits);
    detail::require_gamma(gamma_abs);
    const double n = std::ldexp(1.0, n_qubits - 1);
    const double kink = 1.0 / (n + 1.0);
    return gamma_abs <= kink ? kink : (1.0 - 2.0 * gamma_abs) / (n - 1.0);
}

/// Largest linear entropy an X-state with concurrence 2|gamma| can have.
inline double boundary_entropy(int n_qubits, double gamma_abs) {
    const double f = mems_f(n_qubits, gamma_abs);
    const auto coeffs = BoundaryCoefficients::make(n_qubits, gamma_abs);
    return detail::entropy_prefactor(n_qubits) * coeffs.at(f);
}

struct MemsPoint {
    int n_qubits;
    complex gamma;
    double f_value;
    double g_value;
    double concurrence;
    double entropy;
};

struct MemsState {
    MemsPoint point;
    XState state;
};

/// Member of the maximally entangled mixed X-state family with coherence gamma.
inline MemsState mems_state(int n_qubits, complex gamma) {
    detail::require_qubits(n_qubits);
    if (n_qubits > kMaxCompactQubits) {
        throw CapacityError("compact states are limited to " + std::to_string(kMaxCompactQubits) +
                            " qubits");
    }
    const double g_abs = std::abs(gamma);
    detail::require_gamma(g_abs);

    const double f = mems_f(n_qubits, g_abs);
    const double g = mems_g(n_qubits, g_abs);
    const std::size_t n = block_count(n_qubits);
    std::vector<double> a(n, g), b(n, 0.0);
    std::vector<complex> z(n, 0.0);
    a[0] = f;
    b[0] = f;
    z[0] = gamma;

    MemsPoint point{n_qubits, gamma, f, g, 2.0 * g_abs, boundary_entropy(n_qubits, g_abs)};
    return {point, XState(n_qubits, std::move(a), std::move(b), std::move(z))};
}

inline double critical_entropy(int n_qubits) {
    detail::require_qubits(n_qubits);
    // 2^(2N-1) / ((2^N - 1)(2^(N-1) + 1)) written in terms of n = 2^(N-1).
    const double n = std::ldexp(1.0, n_qubits - 1);
    return 2.0 * n * n / ((2.0 * n - 1.0) * (n + 1.0));
}

struct Fraction {
    std::uint64_t numerator;
    std::uint64_t denominator;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

inline constexpr int kMaxExactCriticalQubits = 30;

/// Critical entropy as a reduced fraction, exact for N <= 30.
inline Fraction critical_entropy_exact(int n_qubits) {
    detail::require_qubits(n_qubits);
    if (n_qubits > kMaxExactCriticalQubits) {
        throw DomainError("exact critical entropy available for N <= 30");
    }
    const std::uint64_t num = std::uint64_t{1} << (2 * n_qubits - 1);
    const std::uint64_t den =
        ((std::uint64_t{1} << n_qubits) - 1) * ((std::uint64_t{1} << (n_qubits - 1)) + 1);
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

struct CurvePoint {
    double diagonal;  // x + |gamma|
    double entropy;
};

/// Entropy of the equal-population X-bar family across the allowed range
/// |gamma| <= x + |gamma| <= 1/2.
inline std::vector<CurvePoint> entropy_vs_diagonal_curve(int n_qubits, double gamma_abs, int samples) {
    detail::require_gamma(gamma_abs);
    if (samples < 2) {
        throw DomainError("curve needs at least 2 samples");
    }
    const auto coeffs = BoundaryCoefficients::make(n_qubits, gamma_abs);
    const double scale = detail::entropy_prefactor(n_qubits);
    const double step = (0.5 - gamma_abs) / static_cast<double>(samples - 1);
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double t = k + 1 == samples ? 0.5 : gamma_abs + step * k;
        curve.push_back({t, scale * coeffs.at(t)});
    }
    return curve;
}

}  // namespace xmems
