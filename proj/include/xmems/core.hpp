#pragma once

// Compact N-qubit X-state representation.
//
// Basis ordering is |1,1,...,1>, |1,1,...,0>, ..., |0,0,...,0>: dense row k
// holds the product state whose bits are the complement of k written
// most-significant-bit first, with qubit 0 on the most significant bit.
//
// Row k < n holds a[k]; row k >= n holds b[d-1-k], so block i couples
// a[i] and b[i] through the antidiagonal entry z[i].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xmems {

using complex = std::complex<double>;

/// Wrong shapes or indices. Never a statement about physicality.
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Requested dense size exceeds the configured cap.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

inline constexpr int kMinQubits = 2;
/// Memory guard for the compact path: vectors of length 2^23.
inline constexpr int kMaxCompactQubits = 24;
inline constexpr int kDefaultDenseCap = 12;

inline constexpr double kValidationTolerance = 1e-12;
inline constexpr double kEigenTolerance = 1e-10;

/// Dense-cap override through XMEMS_DENSE_CAP; falls back to 12.
inline int dense_cap() {
    if (const char* env = std::getenv("XMEMS_DENSE_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= kMinQubits && v <= kMaxCompactQubits) {
            return static_cast<int>(v);
        }
    }
    return kDefaultDenseCap;
}

/// Number of 2x2 blocks, 2^(N-1).
constexpr std::size_t block_count(int n_qubits) { return std::size_t{1} << (n_qubits - 1); }
constexpr std::size_t dimension(int n_qubits) { return std::size_t{1} << n_qubits; }

class XState {
  public:
    XState(int n_qubits, std::vector<double> a, std::vector<double> b, std::vector<complex> z)
        : n_qubits_(n_qubits), a_(std::move(a)), b_(std::move(b)), z_(std::move(z)) {
        if (n_qubits_ < kMinQubits || n_qubits_ > kMaxCompactQubits) {
            throw StructuralError("n_qubits must lie in [" + std::to_string(kMinQubits) + ", " +
                                  std::to_string(kMaxCompactQubits) + "], got " +
                                  std::to_string(n_qubits_));
        }
        const std::size_t n = block_count(n_qubits_);
        if (a_.size() != n || b_.size() != n || z_.size() != n) {
            throw StructuralError("a, b, z must all have length " + std::to_string(n) + " for N=" +
                                  std::to_string(n_qubits_) + " (got " + std::to_string(a_.size()) +
                                  ", " + std::to_string(b_.size()) + ", " +
                                  std::to_string(z_.size()) + ")");
        }
    }

    /// Pure GHZ-type state (|1...1> + e^{i phase}|0...0>)/sqrt(2) on block 0.
    static XState ghz(int n_qubits, double phase = 0.0) {
        const std::size_t n = block_count(n_qubits);
        std::vector<double> a(n, 0.0), b(n, 0.0);
        std::vector<complex> z(n, 0.0);
        a[0] = b[0] = 0.5;
        z[0] = std::polar(0.5, phase);
        return {n_qubits, std::move(a), std::move(b), std::move(z)};
    }

    static XState maximally_mixed(int n_qubits) {
        const std::size_t n = block_count(n_qubits);
        const double p = 1.0 / static_cast<double>(2 * n);
        return {n_qubits, std::vector<double>(n, p), std::vector<double>(n, p),
                std::vector<complex>(n, 0.0)};
    }

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t blocks() const noexcept { return a_.size(); }
    std::size_t dim() const noexcept { return 2 * a_.size(); }

    std::span<const double> a() const noexcept { return a_; }
    std::span<const double> b() const noexcept { return b_; }
    std::span<const complex> z() const noexcept { return z_; }

    /// sqrt(a_i b_i) with rounding-negative products clamped to zero.
    double block_ceiling(std::size_t i) const {
        const double p = a_[i] * b_[i];
        return p > 0.0 ? std::sqrt(p) : 0.0;
    }

    /// Diagonal entry of dense row k in the fixed basis ordering.
    double diagonal(std::size_t k) const {
        const std::size_t n = a_.size();
        return k < n ? a_[k] : b_[2 * n - 1 - k];
    }

    friend bool operator==(const XState&, const XState&) = default;

  private:
    int n_qubits_;
    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<complex> z_;
};

enum class ViolationKind { negative_a, negative_b, trace, coherence };

inline const char* to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::negative_a: return "negative_a";
    case ViolationKind::negative_b: return "negative_b";
    case ViolationKind::trace: return "trace";
    case ViolationKind::coherence: return "coherence";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::size_t index;  // block index; 0 for the trace condition
    double magnitude;   // amount by which the condition is exceeded
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return ok(); }
};

/// Checks nonnegativity, unit trace and |z_i| <= sqrt(a_i b_i), each within
/// `tolerance`. Together these are equivalent to the dense matrix being a
/// density matrix.
inline ValidationReport validate(const XState& s, double tolerance = kValidationTolerance) {
    if (!(tolerance >= 0.0)) {
        throw StructuralError("validation tolerance must be nonnegative");
    }
    ValidationReport report;
    const auto a = s.a();
    const auto b = s.b();
    const auto z = s.z();
    double trace = 0.0;
    for (std::size_t i = 0; i < s.blocks(); ++i) {
        if (!(a[i] >= -tolerance)) {
            report.violations.push_back({ViolationKind::negative_a, i, -a[i]});
        }
        if (!(b[i] >= -tolerance)) {
            report.violations.push_back({ViolationKind::negative_b, i, -b[i]});
        }
        trace += a[i] + b[i];
    }
    if (!(std::abs(trace - 1.0) <= tolerance)) {
        report.violations.push_back({ViolationKind::trace, 0, std::abs(trace - 1.0)});
    }
    for (std::size_t i = 0; i < s.blocks(); ++i) {
        const double excess = std::abs(z[i]) - s.block_ceiling(i);
        if (!(excess <= tolerance)) {
            report.violations.push_back({ViolationKind::coherence, i, excess});
        }
    }
    return report;
}

inline void require_valid(const XState& s, double tolerance = kValidationTolerance) {
    const auto report = validate(s, tolerance);
    if (!report.ok()) {
        const auto& v = report.violations.front();
        throw DomainError(std::string("invalid X-state: ") + to_string(v.kind) + " violated at block " +
                          std::to_string(v.index) + " by " + std::to_string(v.magnitude));
    }
}

/// Full d x d complex matrix, row-major. Oracle-side only.
class DenseMatrix {
  public:
    explicit DenseMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, complex{}) {}

    std::size_t dim() const noexcept { return dim_; }
    complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    std::span<const complex> data() const noexcept { return entries_; }

    complex trace() const {
        complex t{};
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest |M(i,j) - conj(M(j,i))|.
    double hermiticity_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i; j < dim_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return worst;
    }

  private:
    std::size_t dim_;
    std::vector<complex> entries_;
};

inline DenseMatrix to_dense(const XState& s, int cap = dense_cap()) {
    if (s.n_qubits() > cap) {
        throw CapacityError("dense expansion limited to " + std::to_string(cap) + " qubits, got " +
                            std::to_string(s.n_qubits()));
    }
    const std::size_t d = s.dim();
    const std::size_t n = s.blocks();
    DenseMatrix m(d);
    for (std::size_t k = 0; k < d; ++k) m(k, k) = s.diagonal(k);
    const auto z = s.z();
    for (std::size_t i = 0; i < n; ++i) {
        m(i, d - 1 - i) = z[i];
        m(d - 1 - i, i) = std::conj(z[i]);
    }
    return m;
}

/// Removes bit `pos` (counted from the least significant end) from k.
constexpr std::size_t drop_bit(std::size_t k, int pos) {
    const std::size_t low = k & ((std::size_t{1} << pos) - 1);
    const std::size_t high = (k >> (pos + 1)) << pos;
    return high | low;
}

/// Diagonal of the reduced state after tracing out `qubit`. Rows k and d-1-k
/// differ in every bit, so the antidiagonal never survives the trace and the
/// reduced state is diagonal.
inline std::vector<double> partial_trace_single_qubit(const XState& s, int qubit) {
    if (qubit < 0 || qubit >= s.n_qubits()) {
        throw StructuralError("qubit index " + std::to_string(qubit) + " out of range for N=" +
                              std::to_string(s.n_qubits()));
    }
    const int pos = s.n_qubits() - 1 - qubit;
    std::vector<double> reduced(s.blocks(), 0.0);
    for (std::size_t k = 0; k < s.dim(); ++k) reduced[drop_bit(k, pos)] += s.diagonal(k);
    return reduced;
}

}  // namespace xmems
