#pragma once

#include <cstddef>

#include "xmems/core.hpp"

namespace xmems {

/// Tr(rho^2) from the compact entries: sum of a_i^2 + b_i^2 + 2|z_i|^2.
inline double purity(const XState& s) {
    const auto a = s.a();
    const auto b = s.b();
    const auto z = s.z();
    double p = 0.0;
    for (std::size_t i = 0; i < s.blocks(); ++i) {
        p += a[i] * a[i] + b[i] * b[i] + 2.0 * std::norm(z[i]);
    }
    return p;
}

/// Normalized linear entropy d/(d-1) (1 - Tr rho^2); 0 when pure, 1 when
/// maximally mixed.
inline double linear_entropy(const XState& s) {
    const double d = static_cast<double>(s.dim());
    return d / (d - 1.0) * (1.0 - purity(s));
}

struct Concurrence {
    double value;
    std::size_t argmax_index;  // 0 when the zero branch wins
};

/// Genuine multipartite concurrence of an X-state:
///   2 max(0, max_i |z_i| - sum_{j != i} sqrt(a_j b_j)).
/// The inner sum is formed as T - sqrt(a_i b_i) with T accumulated once.
/// Ties go to the smallest index.
inline Concurrence gm_concurrence(const XState& s) {
    const auto z = s.z();
    double total = 0.0;
    for (std::size_t j = 0; j < s.blocks(); ++j) total += s.block_ceiling(j);

    Concurrence best{0.0, 0};
    for (std::size_t i = 0; i < s.blocks(); ++i) {
        const double candidate = 2.0 * (std::abs(z[i]) - (total - s.block_ceiling(i)));
        if (candidate > best.value) best = {candidate, i};
    }
    return best;
}

struct MeasurePair {
    double entropy;
    double concurrence;
    std::size_t argmax_index;
};

inline MeasurePair measure(const XState& s) {
    const auto c = gm_concurrence(s);
    return {linear_entropy(s), c.value, c.argmax_index};
}

}  // namespace xmems
