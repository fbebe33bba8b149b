#pragma once

// Seeded generation of valid X-states and the Monte Carlo
// entanglement/entropy sweep.
//
// Every sample is a pure function of (master_seed, index): the per-index
// stream is SplitMix64 started from derive_seed(master_seed, index), so any
// subset of indices can be produced independently, in any order, on any
// number of threads.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "xmems/core.hpp"
#include "xmems/measures.hpp"
#include "xmems/mems.hpp"

namespace xmems {

/// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Stream seed for one sample. Fixed across versions; changing it changes
/// every golden value.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(master_seed ^ mix64(index * kGoldenGamma + kGoldenGamma));
}

/// Counter-based SplitMix64 generator; models UniformRandomBitGenerator.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Standard exponential variate.
    double exponential() noexcept { return -std::log1p(-uniform()); }

  private:
    std::uint64_t state_;
};

enum class DiagonalDistribution {
    /// a||b uniform on the probability simplex.
    flat_simplex,
    /// flat simplex mixed with weight w ~ U[0,1) of a GHZ population on one
    /// uniformly chosen block; populates the entangled part of the plane.
    ghz_admixture,
};

enum class OffdiagFill {
    /// |z_i| = u_i sqrt(a_i b_i) with u_i ~ U[0,1), phase ~ U[0, 2 pi).
    uniform_fraction,
};

struct SamplerConfig {
    int n_qubits;
    std::uint64_t count;
    std::uint64_t master_seed;
    DiagonalDistribution diagonal_distribution = DiagonalDistribution::flat_simplex;
    OffdiagFill offdiag_fill = OffdiagFill::uniform_fraction;

    SamplerConfig(int n, std::uint64_t count_, std::uint64_t seed,
                  DiagonalDistribution diag = DiagonalDistribution::flat_simplex,
                  OffdiagFill fill = OffdiagFill::uniform_fraction)
        : n_qubits(n), count(count_), master_seed(seed), diagonal_distribution(diag), offdiag_fill(fill) {
        if (n_qubits < kMinQubits || n_qubits > kMaxCompactQubits) {
            throw DomainError("sampler n_qubits must lie in [2, 24], got " + std::to_string(n_qubits));
        }
        if (count == 0) {
            throw DomainError("sampler count must be at least 1");
        }
    }
};

namespace detail {

inline constexpr int kQuantumBits = 52;

/// Rounds nonnegative weights onto the grid k / 2^52 with the k summing to
/// exactly 2^52 (largest remainder, ties to lower index). All partial sums of
/// such values are exact, so the result has unit trace in any summation order.
inline std::vector<double> quantize_to_simplex(const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const std::uint64_t units = std::uint64_t{1} << kQuantumBits;
    const double scale = static_cast<double>(units) / total;

    std::vector<std::uint64_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders(weights.size());
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = weights[i] * scale;
        const double whole = std::floor(exact);
        counts[i] = static_cast<std::uint64_t>(whole);
        assigned += counts[i];
        remainders[i] = {exact - whole, i};
    }
    // Floating rounding can leave the floors a few units over; take them back
    // from the largest entries.
    while (assigned > units) {
        const auto it = std::max_element(counts.begin(), counts.end());
        --*it;
        --assigned;
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    for (std::size_t k = 0; assigned < units; k = (k + 1) % remainders.size()) {
        ++counts[remainders[k].second];
        ++assigned;
    }

    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out[i] = std::ldexp(static_cast<double>(counts[i]), -kQuantumBits);
    }
    return out;
}

}  // namespace detail

/// Deterministic valid X-state for (config.master_seed, index). Passes
/// validate() at tolerance 0 by construction.
inline XState sample_xstate(const SamplerConfig& config, std::uint64_t index) {
    SplitMix64 rng(derive_seed(config.master_seed, index));
    const std::size_t n = block_count(config.n_qubits);

    std::vector<double> weights(2 * n);
    for (auto& w : weights) w = rng.exponential();

    if (config.diagonal_distribution == DiagonalDistribution::ghz_admixture) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        const double w = rng.uniform();
        const auto block = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
        for (auto& x : weights) x *= (1.0 - w) / total;
        weights[block] += 0.5 * w;
        weights[n + block] += 0.5 * w;
    }

    const auto diag = detail::quantize_to_simplex(weights);
    std::vector<double> a(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> b(diag.begin() + static_cast<std::ptrdiff_t>(n), diag.end());

    std::vector<complex> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = a[i] * b[i];
        const double ceiling = p > 0.0 ? std::sqrt(p) : 0.0;
        const double fraction = rng.uniform();
        const double phase = 2.0 * std::numbers::pi * rng.uniform();
        z[i] = std::polar(fraction * ceiling, phase);
        // |polar(r, phi)| can round a hair above r.
        while (std::abs(z[i]) > ceiling) z[i] *= 0x1.fffffffffffffp-1;
    }
    return {config.n_qubits, std::move(a), std::move(b), std::move(z)};
}

struct SweepRecord {
    std::uint64_t sample_index;
    double entropy;
    double concurrence;

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

inline SweepRecord sweep_record(const SamplerConfig& config, std::uint64_t index) {
    const auto m = measure(sample_xstate(config, index));
    return {index, m.entropy, m.concurrence};
}

inline constexpr std::uint64_t kSweepChunk = 1 << 14;

/// Streams one record per sample to `sink`, in index order. Work inside each
/// chunk is split across `shards` threads; the emitted sequence does not
/// depend on the shard count.
template <typename Sink>
void sweep(const SamplerConfig& config, Sink&& sink, unsigned shards = 1) {
    shards = std::max(1u, shards);
    std::vector<SweepRecord> buffer;
    for (std::uint64_t begin = 0; begin < config.count; begin += kSweepChunk) {
        const std::uint64_t end = std::min(config.count, begin + kSweepChunk);
        buffer.assign(end - begin, SweepRecord{});
        const std::uint64_t span = end - begin;
        const std::uint64_t per_shard = (span + shards - 1) / shards;
        auto work = [&](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t i = lo; i < hi; ++i) buffer[i - begin] = sweep_record(config, i);
        };
        if (shards == 1) {
            work(begin, end);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned s = 0; s < shards; ++s) {
                const std::uint64_t lo = begin + s * per_shard;
                const std::uint64_t hi = std::min(end, lo + per_shard);
                if (lo < hi) pool.emplace_back(work, lo, hi);
            }
        }
        for (const auto& r : buffer) sink(r);
    }
}

/// Entangled records must sit on or under the boundary curve; separable
/// records are unconstrained (the maximally mixed state has zero concurrence
/// and unit entropy).
inline bool violates_boundary(int n_qubits, const SweepRecord& r, double slack = 1e-9) {
    if (!(r.concurrence > 0.0)) return false;
    const double gamma_abs = std::min(0.5, r.concurrence / 2.0);
    return r.entropy > boundary_entropy(n_qubits, gamma_abs) + slack;
}

inline bool violates_critical_entropy(int n_qubits, const SweepRecord& r, double slack = 1e-9) {
    return r.concurrence > 1e-12 && r.entropy > critical_entropy(n_qubits) + slack;
}

/// 17 significant digits; reads back to the identical double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline constexpr const char* kSweepCsvHeader = "index,entropy,concurrence";

inline void write_csv_row(std::ostream& os, const SweepRecord& r) {
    os << r.sample_index << ',' << format_double(r.entropy) << ',' << format_double(r.concurrence)
       << '\n';
}

}  // namespace xmems
