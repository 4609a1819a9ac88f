#pragma once

// Correlation matrices and their eigenspectra. The correlation matrix of a
// normalized return panel is C = (1/T) G G^t, which is symmetric, unit
// diagonal, positive semidefinite and has trace exactly N. Eigenvalues are
// computed with cyclic Jacobi rotations in a fixed sweep order, so results
// are deterministic for a given input; every (lambda, v) pair is verified
// against the residual bound ||Cv - lambda v|| <= tol * N before returning.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fxnet/matrix.hpp"
#include "fxnet/returns.hpp"

namespace fxnet {

struct CorrelationMatrix {
    CurrencyCode base;
    std::vector<CurrencyCode> currencies;
    Matrix values;  // N x N
};

/// C_AB = (1/T) sum_t g_A(t) g_B(t) over a normalized panel. The upper
/// triangle is computed once and mirrored, so the result is exactly
/// symmetric.
inline CorrelationMatrix correlation_matrix(const ReturnPanel& panel) {
    if (!panel.normalized) throw Error("correlation_matrix requires a normalized panel");
    const std::size_t n = panel.currencies.size();
    const std::size_t t_count = panel.returns.cols;
    if (n < 1 || t_count < 2) throw Error("correlation_matrix: empty panel");

    CorrelationMatrix corr;
    corr.base = panel.base;
    corr.currencies = panel.currencies;
    corr.values = Matrix(n, n);
    const double inv_t = 1.0 / static_cast<double>(t_count);
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> gi = panel.returns.row(i);
        for (std::size_t j = i; j < n; ++j) {
            const std::span<const double> gj = panel.returns.row(j);
            double dot = 0.0;
            for (std::size_t t = 0; t < t_count; ++t) dot += gi[t] * gj[t];
            const double c = dot * inv_t;
            corr.values(i, j) = c;
            corr.values(j, i) = c;
        }
    }

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = corr.values(i, i);
        if (std::abs(d - 1.0) > 1e-10)
            throw Error("correlation diagonal for '" + corr.currencies[i].str() + "' deviates from 1");
        trace += d;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(corr.values(i, j)) > 1.0 + 1e-10)
                throw Error("correlation entry outside [-1, 1]");
    }
    if (std::abs(trace - static_cast<double>(n)) > 1e-8)
        throw Error("correlation trace deviates from N");
    return corr;
}

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi diagonalization of a symmetric matrix. Sweeps visit (p, q)
/// pairs in fixed row order, so the rotation sequence (and hence the output)
/// is deterministic. Throws if the matrix is not symmetric within 1e-12, if
/// the off-diagonal mass fails to converge, or if any residual
/// ||Av - lambda v||_2 exceeds residual_tol * n.
inline EigenDecomposition jacobi_eigen(const Matrix& input, double residual_tol = 1e-10) {
    const std::size_t n = input.rows;
    if (n == 0 || input.cols != n) throw Error("jacobi_eigen requires a non-empty square matrix");
    double max_abs = 0.0;
    for (const double v : input.data) max_abs = std::max(max_abs, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(input(i, j) - input(j, i)) > 1e-12 * std::max(1.0, max_abs))
                throw Error("jacobi_eigen: matrix not symmetric");

    Matrix a = input;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    const auto off_diagonal = [&]() {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) sum += a(i, j) * a(i, j);
        return std::sqrt(2.0 * sum);
    };

    const double stop = 1e-13 * static_cast<double>(n) * std::max(1.0, max_abs);
    constexpr int kMaxSweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal() <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i != p && i != q) {
                        const double aip = a(i, p);
                        const double aiq = a(i, q);
                        a(i, p) = aip - s * (aiq + tau * aip);
                        a(p, i) = a(i, p);
                        a(i, q) = aiq + s * (aip - tau * aiq);
                        a(q, i) = a(i, q);
                    }
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = vip - s * (viq + tau * vip);
                    v(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if (!converged && off_diagonal() > stop) throw Error("jacobi_eigen failed to converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition eig;
    eig.values.resize(n);
    eig.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        eig.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = v(i, order[k]);
    }

    for (std::size_t k = 0; k < n; ++k) {
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = -eig.values[k] * eig.vectors(i, k);
            for (std::size_t j = 0; j < n; ++j) r += input(i, j) * eig.vectors(j, k);
            norm_sq += r * r;
        }
        if (std::sqrt(norm_sq) > residual_tol * static_cast<double>(n))
            throw Error("jacobi_eigen residual exceeds tolerance");
    }
    return eig;
}

/// Upper edge of the eigenvalue density of a random correlation matrix built
/// from N independent series of length T: 1 + N/T + 2*sqrt(N/T).
inline double rmt_bound(std::size_t t_count, std::size_t n) {
    if (t_count == 0 || n == 0) throw Error("rmt_bound requires positive T and N");
    const double ratio = static_cast<double>(n) / static_cast<double>(t_count);
    return 1.0 + ratio + 2.0 * std::sqrt(ratio);
}

/// Number of eigenvalues below `threshold`; these flag exactly dependent
/// (e.g. pegged) series collapsing directions of the panel.
inline int zero_modes(std::span<const double> eigenvalues, double threshold = 1e-8) {
    int count = 0;
    for (const double v : eigenvalues)
        if (v < threshold) ++count;
    return count;
}

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    double lambda_max = 0.0;
    double lambda_second = 0.0;
    int zero_mode_count = 0;
    double lambda_rm = 0.0;  // random-matrix upper edge for this (T, N)
    double q = 0.0;          // T / N
};

/// Full spectrum summary of a correlation matrix built from T time points.
inline Spectrum make_spectrum(const CorrelationMatrix& corr, std::size_t t_count,
                              double zero_threshold = 1e-8, double residual_tol = 1e-10) {
    const std::size_t n = corr.currencies.size();
    if (n < 2) throw Error("make_spectrum requires at least 2 series");
    const EigenDecomposition eig = jacobi_eigen(corr.values, residual_tol);

    const double sum = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
    if (std::abs(sum - static_cast<double>(n)) > 1e-6)
        throw Error("eigenvalue sum deviates from N");

    Spectrum spec;
    spec.eigenvalues = eig.values;
    spec.lambda_max = eig.values[0];
    spec.lambda_second = eig.values[1];
    spec.zero_mode_count = zero_modes(eig.values, zero_threshold);
    spec.lambda_rm = rmt_bound(t_count, n);
    spec.q = static_cast<double>(t_count) / static_cast<double>(n);
    return spec;
}

/// Per-rank eigenvalue rows followed by a one-row summary section.
inline std::string spectrum_csv(CurrencyCode base, const Spectrum& spec) {
    std::string out = "base,rank,eigenvalue\n";
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
        out += base.str();
        out += ',';
        out += std::to_string(k + 1);
        out += ',';
        out += format_double(spec.eigenvalues[k]);
        out += '\n';
    }
    out += "\nbase,lambda_max,lambda_second,zero_mode_count,lambda_rm\n";
    out += base.str();
    out += ',';
    out += format_double(spec.lambda_max);
    out += ',';
    out += format_double(spec.lambda_second);
    out += ',';
    out += std::to_string(spec.zero_mode_count);
    out += ',';
    out += format_double(spec.lambda_rm);
    out += '\n';
    return out;
}

}  // namespace fxnet
