#pragma once

// Brute-force cross-checks for the closed forms. Everything here works on
// dense matrices with a general Hermitian eigensolver and deliberately ignores
// the 2x2 block structure of X-states.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xmems/core.hpp"
#include "xmems/measures.hpp"
#include "xmems/mems.hpp"
#include "xmems/sampling.hpp"

namespace xmems::oracle {

struct OracleReport {
    std::string check_name;
    double analytic_value;
    double oracle_value;
    double abs_diff;
    double tolerance;
    bool passed;  // abs_diff <= tolerance
};

inline OracleReport make_report(std::string name, double analytic, double oracle, double tolerance) {
    const double diff = std::abs(analytic - oracle);
    return {std::move(name), analytic, oracle, diff, tolerance, diff <= tolerance};
}

inline Eigen::MatrixXcd to_eigen(const DenseMatrix& m) {
    const auto d = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return out;
}

/// Tr(rho^2) by explicit matrix product.
inline double dense_purity(const DenseMatrix& m) {
    const Eigen::MatrixXcd rho = to_eigen(m);
    return (rho * rho).trace().real();
}

inline double dense_linear_entropy(const DenseMatrix& m) {
    const double d = static_cast<double>(m.dim());
    return d / (d - 1.0) * (1.0 - dense_purity(m));
}

inline constexpr double kHermitianTolerance = 1e-12;

struct PsdResult {
    bool positive;
    double min_eigenvalue;
};

inline PsdResult psd_check(const DenseMatrix& m, double tolerance = kEigenTolerance) {
    if (m.hermiticity_defect() > kHermitianTolerance) {
        throw StructuralError("psd_check requires a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    return {lo >= -tolerance, lo};
}

/// Two-qubit concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square
/// roots of the eigenvalues of rho (sy x sy) rho* (sy x sy), obtained from the
/// Hermitian form sqrt(rho) rho~ sqrt(rho).
inline double wootters_concurrence(const DenseMatrix& m) {
    if (m.dim() != 4) {
        throw StructuralError("Wootters concurrence needs a 4x4 matrix, got dim " +
                              std::to_string(m.dim()));
    }
    const Eigen::Matrix4cd rho = to_eigen(m);
    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    // rho = W W^dagger; the lambdas are the singular values of W^T flip W.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd w = es.eigenvectors() * root.asDiagonal();
    const Eigen::Matrix4cd k = w.transpose() * flip * w;
    const Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4cd>(k).singularValues();
    std::array<double, 4> l{sv(0), sv(1), sv(2), sv(3)};
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

/// Generic single-qubit partial trace of a dense N-qubit matrix; qubit 0 is
/// the most significant bit of the row index.
inline DenseMatrix dense_partial_trace(const DenseMatrix& m, int n_qubits, int qubit) {
    if (m.dim() != dimension(n_qubits) || qubit < 0 || qubit >= n_qubits) {
        throw StructuralError("dense_partial_trace: shape/qubit mismatch");
    }
    const int pos = n_qubits - 1 - qubit;
    const std::size_t bit = std::size_t{1} << pos;
    const std::size_t rd = m.dim() / 2;
    DenseMatrix out(rd);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if ((i & bit) != (j & bit)) continue;
            out(drop_bit(i, pos), drop_bit(j, pos)) += m(i, j);
        }
    }
    return out;
}

inline double max_offdiagonal(const DenseMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

/// Concurrence with the inner sum taken literally over j != i (O(n^2)).
inline double concurrence_direct(const XState& s) {
    const auto a = s.a();
    const auto b = s.b();
    const auto z = s.z();
    double best = 0.0;
    for (std::size_t i = 0; i < s.blocks(); ++i) {
        double others = 0.0;
        for (std::size_t j = 0; j < s.blocks(); ++j) {
            if (j != i) others += std::sqrt(std::max(0.0, a[j] * b[j]));
        }
        best = std::max(best, 2.0 * (std::abs(z[i]) - others));
    }
    return best;
}

struct GridOptimum {
    double argmax;
    double max_entropy;
    double step;
};

/// Maximizes the linear entropy of the equal-population X-bar state
/// (a_1 = b_1 = t, z_1 = gamma, a_2..a_n = (1 - 2t)/(n - 1)) over an evenly
/// spaced grid of t in [|gamma|, 1/2]. The entropy is formed from the entries
/// directly, not from the quadratic coefficients.
inline GridOptimum equal_population_grid_max(int n_qubits, double gamma_abs, int grid_points) {
    const double n = std::ldexp(1.0, n_qubits - 1);
    const double d = 2.0 * n;
    const double step = (0.5 - gamma_abs) / static_cast<double>(grid_points - 1);
    GridOptimum best{gamma_abs, -1.0, step};
    for (int k = 0; k < grid_points; ++k) {
        const double t = k + 1 == grid_points ? 0.5 : gamma_abs + step * k;
        const double y = (1.0 - 2.0 * t) / (n - 1.0);
        const double pur = 2.0 * t * t + 2.0 * gamma_abs * gamma_abs + (n - 1.0) * y * y;
        const double s = d / (d - 1.0) * (1.0 - pur);
        if (s > best.max_entropy) best = {t, s, step};
    }
    return best;
}

inline constexpr std::size_t kMaxSimplexBlocks = 4;

/// Exhaustive search over the X-bar family (a_1, b_1, a_2..a_n on the grid
/// k/resolution, summing to 1, with a_1 b_1 >= |gamma|^2) without assuming
/// equal populations. Only for n <= 4.
inline double simplex_grid_max_entropy(int n_qubits, double gamma_abs, int resolution) {
    const std::size_t n = block_count(n_qubits);
    if (n > kMaxSimplexBlocks) {
        throw CapacityError("simplex grid limited to N <= 3");
    }
    const std::size_t parts = n + 1;
    const double d = static_cast<double>(2 * n);
    const double h = 1.0 / resolution;
    const double g2 = gamma_abs * gamma_abs;
    const double feasibility_slack = 1e-14;

    std::vector<int> c(parts, 0);
    double best_purity = 2.0;
    // Enumerate compositions of `resolution` into `parts` nonnegative integers.
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int remaining) {
        if (k + 1 == parts) {
            c[k] = remaining;
            const double a1 = c[0] * h;
            const double b1 = c[1] * h;
            if (a1 * b1 + feasibility_slack < g2) return;
            double pur = 2.0 * g2;
            for (std::size_t i = 0; i < parts; ++i) pur += (c[i] * h) * (c[i] * h);
            best_purity = std::min(best_purity, pur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            c[k] = v;
            rec(k + 1, remaining - v);
        }
    };
    rec(0, resolution);
    if (best_purity > 1.5) return -1.0;  // nothing feasible on this grid
    return d / (d - 1.0) * (1.0 - best_purity);
}

inline constexpr int kDefaultSimplexResolution = 120;

/// Confirms the boundary construction numerically for one |gamma|:
///  - 1-D maximum over the equal-population family matches boundary_entropy,
///  - its argmax lands on f(gamma) within one grid step,
///  - the dense entropy of mems_state equals boundary_entropy,
///  - for n <= 4, no unequal population on a simplex grid beats the analytic
///    value, and the grid comes within resolution of it.
inline std::vector<OracleReport> mems_grid_verify(int n_qubits, double gamma_abs, int grid_points,
                                                  int simplex_resolution = kDefaultSimplexResolution) {
    detail::require_qubits(n_qubits);
    detail::require_gamma(gamma_abs);
    if (grid_points < 100) {
        throw DomainError("mems_grid_verify needs at least 100 grid points");
    }
    const double analytic = boundary_entropy(n_qubits, gamma_abs);
    const double f = mems_f(n_qubits, gamma_abs);
    const auto coeffs = BoundaryCoefficients::make(n_qubits, gamma_abs);
    const double scale = detail::entropy_prefactor(n_qubits);

    std::vector<OracleReport> out;
    const auto opt = equal_population_grid_max(n_qubits, gamma_abs, grid_points);
    const double value_tol = scale * std::abs(coeffs.A) * opt.step * opt.step + 1e-12;
    out.push_back(make_report("mems_1d_max", analytic, opt.max_entropy, value_tol));
    out.push_back(make_report("mems_1d_argmax", f, opt.argmax, opt.step + 1e-12));

    if (n_qubits <= dense_cap()) {
        const auto ms = mems_state(n_qubits, gamma_abs);
        out.push_back(make_report("mems_state_dense_entropy", analytic,
                                  dense_linear_entropy(to_dense(ms.state)), 1e-12));
    }

    if (block_count(n_qubits) <= kMaxSimplexBlocks) {
        const double grid_max = simplex_grid_max_entropy(n_qubits, gamma_abs, simplex_resolution);
        // One-sided: a grid point above the analytic maximum is a counterexample.
        const double excess = std::max(0.0, grid_max - analytic);
        out.push_back({"simplex_grid_not_above", analytic, grid_max, excess, 1e-12, excess <= 1e-12});
        const double parts = static_cast<double>(block_count(n_qubits) + 1);
        const double reach_tol = scale * 2.0 * parts / simplex_resolution;
        out.push_back(make_report("simplex_grid_reaches", analytic, grid_max, reach_tol));
    }
    return out;
}

struct SuiteOptions {
    int mems_gamma_points = 21;
    int mems_grid_points = 1000;
    int simplex_resolution = kDefaultSimplexResolution;
};

/// Full oracle suite on a seeded corpus: `count` flat-simplex samples plus
/// `count` GHZ-admixture samples, each also perturbed past block positivity.
inline std::vector<OracleReport> run_suite(int n_qubits, std::uint64_t count, std::uint64_t seed,
                                           const SuiteOptions& opts = {}) {
    if (n_qubits > dense_cap()) {
        throw CapacityError("oracle suite needs dense matrices; N=" + std::to_string(n_qubits) +
                            " exceeds dense cap " + std::to_string(dense_cap()));
    }
    const SamplerConfig flat(n_qubits, count, seed, DiagonalDistribution::flat_simplex);
    const SamplerConfig mixed(n_qubits, count, seed, DiagonalDistribution::ghz_admixture);

    double purity_diff = 0.0, entropy_diff = 0.0, trace_herm = 0.0;
    double psd_disagreements = 0.0, offdiag = 0.0, reduced_diff = 0.0;
    double wootters_diff = 0.0, bar_conc_diff = 0.0, bar_entropy_drop = 0.0;
    double boundary_excess = 0.0, direct_sum_diff = 0.0;
    double entangled = 0.0;

    auto check_state = [&](const XState& s, std::uint64_t index) {
        const DenseMatrix m = to_dense(s);
        purity_diff = std::max(purity_diff, std::abs(purity(s) - dense_purity(m)));
        entropy_diff = std::max(entropy_diff, std::abs(linear_entropy(s) - dense_linear_entropy(m)));
        trace_herm = std::max({trace_herm, std::abs(m.trace() - 1.0), m.hermiticity_defect()});
        if (validate(s).ok() != psd_check(m).positive) psd_disagreements += 1.0;

        for (int q = 0; q < n_qubits; ++q) {
            const DenseMatrix r = dense_partial_trace(m, n_qubits, q);
            offdiag = std::max(offdiag, max_offdiagonal(r));
            const auto compact = partial_trace_single_qubit(s, q);
            for (std::size_t k = 0; k < compact.size(); ++k)
                reduced_diff = std::max(reduced_diff, std::abs(compact[k] - r(k, k).real()));
        }

        const auto c = gm_concurrence(s);
        direct_sum_diff = std::max(direct_sum_diff, std::abs(c.value - concurrence_direct(s)));
        if (n_qubits == 2) wootters_diff = std::max(wootters_diff, std::abs(c.value - wootters_concurrence(m)));
        if (c.value > 0.0) {
            entangled += 1.0;
            const auto bar = bar_transform(s);
            bar_conc_diff = std::max(bar_conc_diff, std::abs(gm_concurrence(bar.state).value - c.value));
            bar_entropy_drop = std::max(bar_entropy_drop, linear_entropy(s) - linear_entropy(bar.state));
            boundary_excess = std::max(boundary_excess,
                                       linear_entropy(s) - boundary_entropy(n_qubits, std::min(0.5, c.value / 2)));
        }

        // Push one coherence past its ceiling by at least 1e-3.
        SplitMix64 rng(derive_seed(seed ^ 0x5bd1e995ULL, index));
        const std::size_t blk = static_cast<std::size_t>(index % s.blocks());
        std::vector<complex> z(s.z().begin(), s.z().end());
        const double phase = std::arg(z[blk]);
        z[blk] = std::polar(s.block_ceiling(blk) + 1e-3 + 9e-3 * rng.uniform(), phase);
        const XState bad(n_qubits, {s.a().begin(), s.a().end()}, {s.b().begin(), s.b().end()}, std::move(z));
        if (validate(bad).ok() != psd_check(to_dense(bad)).positive) psd_disagreements += 1.0;
    };

    for (std::uint64_t i = 0; i < count; ++i) {
        check_state(sample_xstate(flat, i), i);
        check_state(sample_xstate(mixed, i), i);
    }

    std::vector<OracleReport> out;
    out.push_back(make_report("purity", 0.0, purity_diff, 1e-12));
    out.push_back(make_report("linear_entropy", 0.0, entropy_diff, 1e-12));
    out.push_back(make_report("dense_trace_hermitian", 0.0, trace_herm, 1e-12));
    out.push_back(make_report("psd_agreement", 0.0, psd_disagreements, 0.0));
    out.push_back(make_report("partial_trace_offdiag", 0.0, offdiag, 1e-12));
    out.push_back(make_report("partial_trace_diagonal", 0.0, reduced_diff, 1e-12));
    out.push_back(make_report("concurrence_direct_sum", 0.0, direct_sum_diff, 1e-12));
    if (n_qubits == 2) out.push_back(make_report("wootters", 0.0, wootters_diff, 1e-9));
    out.push_back(make_report("bar_concurrence", 0.0, bar_conc_diff, 1e-12));
    out.push_back(make_report("bar_entropy_drop", 0.0, std::max(0.0, bar_entropy_drop), 1e-12));
    out.push_back(make_report("boundary_excess", 0.0, std::max(0.0, boundary_excess), 1e-9));
    // Not a check: how many corpus states exercised the entangled-only paths.
    out.push_back(make_report("entangled_samples", entangled, entangled, 0.0));

    for (int k = 0; k < opts.mems_gamma_points; ++k) {
        const double gamma =
            opts.mems_gamma_points == 1 ? 0.0 : 0.5 * k / static_cast<double>(opts.mems_gamma_points - 1);
        for (auto& r : mems_grid_verify(n_qubits, gamma, opts.mems_grid_points, opts.simplex_resolution)) {
            r.check_name += "[gamma=" + format_double(gamma) + "]";
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace xmems::oracle
