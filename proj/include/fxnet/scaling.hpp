#pragma once

// Power-law fitting in linear scale. The model F(K) = c * K^(-alpha) is
// fitted by least squares on the raw (not log-transformed) values. For fixed
// alpha the optimal amplitude has a closed form, so the 2-parameter problem
// reduces to a 1-D profile in alpha: a deterministic coarse grid brackets the
// minimum and golden-section refinement pins it down. The same machinery
// drives the cross-base regression alpha ~ a * (lambda_max - lambda_rm)^(-beta).

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "fxnet/mst.hpp"

namespace fxnet {

/// Amplitude handling for power fits: estimate it, or pin it to 1 (natural
/// for cumulative distributions, where F(1) = 1 by construction).
enum class FitMode { TwoParameter, UnitAmplitude };

inline FitMode parse_fit_mode(std::string_view text) {
    if (text == "two") return FitMode::TwoParameter;
    if (text == "unit") return FitMode::UnitAmplitude;
    throw Error("unknown fit mode '" + std::string(text) + "' (expected 'two' or 'unit')");
}

struct FitPoint {
    double k = 0.0;  // abscissa, must be positive
    double f = 0.0;  // ordinate
};

struct PowerFit {
    double alpha = 0.0;        // scaling exponent
    double amplitude = 0.0;    // prefactor c
    double delta_alpha = 0.0;  // standard error of alpha
    double rel_err = 0.0;      // delta_alpha / alpha
    double sse = 0.0;          // sum of squared residuals at the optimum
    std::size_t points_used = 0;
    FitMode mode = FitMode::TwoParameter;
};

namespace detail {

/// Golden-section search for the minimizer of fn on [lo, hi], assuming the
/// bracket contains a single local minimum. Deterministic, derivative-free.
inline double golden_minimize(const std::function<double(double)>& fn, double lo, double hi,
                              double tol = 1e-13) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = fn(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Minimize a profiled SSE over one exponent: coarse grid to bracket the
/// global minimum, golden-section to polish. Throws if the optimum sits on
/// the domain boundary (the model is then degenerate for this data).
inline double minimize_exponent(const std::function<double(double)>& sse, double lo, double hi,
                                int grid_steps, const char* what) {
    double best_x = lo;
    double best_v = sse(lo);
    for (int i = 1; i <= grid_steps; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / grid_steps;
        const double v = sse(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    const double step = (hi - lo) / grid_steps;
    const double refined = golden_minimize(sse, std::max(lo, best_x - step),
                                           std::min(hi, best_x + step));
    if (refined <= lo + 1e-9 || refined >= hi - 1e-9)
        throw Error(std::string("degenerate optimum: ") + what + " hit the search boundary");
    return refined;
}

}  // namespace detail

/// Least-squares fit of f = c * k^(-alpha) in linear scale. Points are
/// canonicalized by sorting, so the result is exactly invariant under input
/// permutation. delta_alpha is the Gauss-Newton standard error
/// sqrt(s^2 * [(J^t J)^-1]_aa) with s^2 = sse / (points - params).
inline PowerFit fit_power(std::span<const FitPoint> points, FitMode mode = FitMode::TwoParameter) {
    if (points.size() < 3) throw Error("fit_power requires at least 3 points");
    std::vector<FitPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const FitPoint& x, const FitPoint& y) {
        if (x.k != y.k) return x.k < y.k;
        return x.f < y.f;
    });
    for (const FitPoint& p : pts)
        if (!(p.k > 0.0) || !std::isfinite(p.f)) throw Error("fit_power points need k > 0 and finite f");

    const auto amplitude_at = [&](double alpha) {
        if (mode == FitMode::UnitAmplitude) return 1.0;
        double num = 0.0, den = 0.0;
        for (const FitPoint& p : pts) {
            const double w = std::pow(p.k, -alpha);
            num += p.f * w;
            den += w * w;
        }
        return num / den;
    };
    const auto sse_at = [&](double alpha) {
        const double c = amplitude_at(alpha);
        double sse = 0.0;
        for (const FitPoint& p : pts) {
            const double r = p.f - c * std::pow(p.k, -alpha);
            sse += r * r;
        }
        return sse;
    };

    constexpr double kAlphaLo = 0.05, kAlphaHi = 5.0;
    PowerFit fit;
    fit.mode = mode;
    fit.points_used = pts.size();
    fit.alpha = detail::minimize_exponent(sse_at, kAlphaLo, kAlphaHi, 4000, "exponent");
    fit.amplitude = amplitude_at(fit.alpha);
    fit.sse = sse_at(fit.alpha);

    // Linearized covariance at the optimum; residual r = c*k^-a - f, columns
    // of J are dr/da and (in two-parameter mode) dr/dc.
    const std::size_t params = mode == FitMode::TwoParameter ? 2 : 1;
    if (pts.size() <= params) throw Error("fit_power: too few points for an error estimate");
    const double s2 = fit.sse / static_cast<double>(pts.size() - params);
    double jaa = 0.0, jac = 0.0, jcc = 0.0;
    for (const FitPoint& p : pts) {
        const double w = std::pow(p.k, -fit.alpha);
        const double da = -fit.amplitude * std::log(p.k) * w;
        jaa += da * da;
        jac += da * w;
        jcc += w * w;
    }
    double inv_aa = 0.0;
    if (mode == FitMode::TwoParameter) {
        const double det = jaa * jcc - jac * jac;
        if (det <= 1e-300) throw Error("degenerate optimum: singular fit covariance");
        inv_aa = jcc / det;
    } else {
        if (jaa <= 1e-300) throw Error("degenerate optimum: singular fit covariance");
        inv_aa = 1.0 / jaa;
    }
    fit.delta_alpha = std::sqrt(s2 * inv_aa);
    fit.rel_err = fit.delta_alpha / fit.alpha;
    return fit;
}

/// Fit the cumulative degree distribution, using only occupied K values
/// (those with a nonzero exact count).
inline PowerFit fit_power(const DegreeDistribution& dd, FitMode mode = FitMode::TwoParameter) {
    std::vector<FitPoint> pts;
    pts.reserve(dd.counts.size());
    for (const auto& [k, count] : dd.counts)
        pts.push_back({static_cast<double>(k), dd.f(k)});
    if (pts.size() < 3) throw Error("fit_power requires at least 3 occupied degree values");
    return fit_power(pts, mode);
}

struct HierarchicalExponent {
    double m = 0.0;           // effective replication factor <K> + 1
    double alpha_hier = 0.0;  // ln M / ln(M - 1)
};

/// Analytic exponent of the hierarchical reference model, with the
/// replication factor inferred from the mean tree degree:
/// M = <K> + 1 = 2(N-1)/N + 1 and alpha = ln M / ln(M-1).
inline HierarchicalExponent hierarchical_exponent(std::size_t n) {
    if (n < 3) throw Error("hierarchical_exponent requires N >= 3");
    HierarchicalExponent h;
    h.m = 2.0 * static_cast<double>(n - 1) / static_cast<double>(n) + 1.0;
    h.alpha_hier = std::log(h.m) / std::log(h.m - 1.0);
    return h;
}

struct ScatterPoint {
    double lambda_max = 0.0;
    double alpha = 0.0;
};

struct BetaFit {
    double beta = 0.0;
    double prefactor = 0.0;
    double lambda_rm = 0.0;  // offset subtracted from lambda_max
    double sse = 0.0;
};

/// Least-squares fit of alpha = a * (lambda_max - lambda_rm)^(-beta) in
/// linear scale, with the prefactor profiled out exactly as in fit_power.
inline BetaFit fit_beta(std::span<const ScatterPoint> points, double lambda_rm) {
    if (points.size() < 5) throw Error("fit_beta requires at least 5 points");
    std::vector<ScatterPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const ScatterPoint& x, const ScatterPoint& y) {
        if (x.lambda_max != y.lambda_max) return x.lambda_max < y.lambda_max;
        return x.alpha < y.alpha;
    });
    for (const ScatterPoint& p : pts) {
        if (!(p.lambda_max > lambda_rm))
            throw Error("fit_beta: point with lambda_max <= lambda_rm");
        if (!std::isfinite(p.alpha)) throw Error("fit_beta: non-finite alpha");
    }

    const auto prefactor_at = [&](double beta) {
        double num = 0.0, den = 0.0;
        for (const ScatterPoint& p : pts) {
            const double w = std::pow(p.lambda_max - lambda_rm, -beta);
            num += p.alpha * w;
            den += w * w;
        }
        return num / den;
    };
    const auto sse_at = [&](double beta) {
        const double a = prefactor_at(beta);
        double sse = 0.0;
        for (const ScatterPoint& p : pts) {
            const double r = p.alpha - a * std::pow(p.lambda_max - lambda_rm, -beta);
            sse += r * r;
        }
        return sse;
    };

    constexpr double kBetaLo = -5.0, kBetaHi = 5.0;
    BetaFit fit;
    fit.lambda_rm = lambda_rm;
    fit.beta = detail::minimize_exponent(sse_at, kBetaLo, kBetaHi, 8000, "beta");
    fit.prefactor = prefactor_at(fit.beta);
    fit.sse = sse_at(fit.beta);
    return fit;
}

}  // namespace fxnet
