#pragma once

// Synthetic rate panels with known correlation structure, so every
// downstream statistic can be tested without proprietary market data. All
// generators are pure functions of (parameters, seed): the RNG is a fixed,
// documented algorithm (see rng.hpp) and the draw order is specified per
// generator, so identical inputs give byte-identical panels everywhere.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fxnet/groups.hpp"
#include "fxnet/panel.hpp"
#include "fxnet/rng.hpp"

namespace fxnet {

inline constexpr std::string_view kSynthStartDate = "1998-12-01";
inline constexpr double kDailyVolatility = 0.01;

/// Deterministic currency codes for synthetic panels: the default universe
/// (sorted) for n <= 60, then generated three-letter codes for anything
/// larger, skipping collisions.
inline std::vector<CurrencyCode> synth_codes(std::size_t n) {
    if (n < 2) throw Error("synth_codes requires n >= 2");
    std::vector<CurrencyCode> codes;
    codes.reserve(n);
    for (const auto& [code, group] : default_groups().assignment) codes.push_back(code);
    if (n <= codes.size()) {
        codes.resize(n);
        return codes;
    }
    for (char a = 'A'; a <= 'Z' && codes.size() < n; ++a)
        for (char b = 'A'; b <= 'Z' && codes.size() < n; ++b)
            for (char c = 'A'; c <= 'Z' && codes.size() < n; ++c) {
                const CurrencyCode candidate{{a, b, c}};
                if (std::find(codes.begin(), codes.end(), candidate) == codes.end())
                    codes.push_back(candidate);
            }
    return codes;
}

namespace detail {

/// Assemble a RatePanel from per-currency daily log-returns: prices start at
/// 1.0 and follow the exponentiated cumulative sums.
inline RatePanel panel_from_log_returns(const std::vector<CurrencyCode>& codes,
                                        const Matrix& log_steps, std::size_t t_count) {
    RatePanel panel;
    panel.currencies = codes;
    panel.dates = date_range(kSynthStartDate, t_count);
    panel.cells.resize(codes.size() * t_count);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        double log_price = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) {
            if (t > 0) log_price += log_steps(i, t - 1);
            panel.cells[i * t_count + t] = std::exp(log_price);
        }
    }
    return panel;
}

}  // namespace detail

/// n independent geometric random walks with 1% daily volatility. Draw
/// order: currency by currency, then date by date within the currency.
inline RatePanel random_walk_panel(std::size_t n, std::size_t t_count, std::uint64_t seed) {
    if (n < 2 || t_count < 2) throw Error("random_walk_panel requires n >= 2 and T >= 2");
    const std::vector<CurrencyCode> codes = synth_codes(n);
    GaussianSource rng(seed);
    Matrix steps(n, t_count - 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t + 1 < t_count; ++t)
            steps(i, t) = kDailyVolatility * rng.normal();
    return detail::panel_from_log_returns(codes, steps, t_count);
}

/// One-factor panel: series i has return a_i * f(t) + sqrt(1 - a_i^2) * e_i(t),
/// so the pairwise correlation of series i and j is exactly a_i * a_j.
/// Loadings are centered on sqrt(rho) and, when loading_spread > 0, fan out
/// evenly across [sqrt(rho) - spread, sqrt(rho) + spread] — heterogeneous
/// loadings are what makes the leading eigenvalue differ between rebased
/// views of the same panel. Draw order: the common factor series first, then
/// per-currency idiosyncratic series.
inline RatePanel one_factor_panel(std::size_t n, std::size_t t_count, double rho,
                                  std::uint64_t seed, double loading_spread = 0.0) {
    if (n < 2 || t_count < 2) throw Error("one_factor_panel requires n >= 2 and T >= 2");
    if (!(rho >= 0.0) || rho >= 1.0) throw Error("one_factor_panel requires rho in [0, 1)");
    if (loading_spread < 0.0) throw Error("one_factor_panel requires loading_spread >= 0");
    const double center = std::sqrt(rho);
    if (center + loading_spread >= 1.0 || center - loading_spread < 0.0)
        throw Error("one_factor_panel: loadings leave [0, 1)");

    const std::vector<CurrencyCode> codes = synth_codes(n);
    GaussianSource rng(seed);
    std::vector<double> factor(t_count - 1);
    for (double& f : factor) f = rng.normal();

    Matrix steps(n, t_count - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double spread_pos =
            n == 1 ? 0.0 : 2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
        const double loading = center + loading_spread * spread_pos;
        const double idio = std::sqrt(1.0 - loading * loading);
        for (std::size_t t = 0; t + 1 < t_count; ++t)
            steps(i, t) = kDailyVolatility * (loading * factor[t] + idio * rng.normal());
    }
    return detail::panel_from_log_returns(codes, steps, t_count);
}

struct HierarchySpec {
    int replication = 3;           // M: branching factor, >= 2
    int levels = 1;                // L: nesting depth, >= 1; leaf count M^L
    double intra_block_corr = 0.5; // sibling correlation at noise_scale 1
    double noise_scale = 1.0;      // idiosyncratic noise multiplier
    std::uint64_t seed = 0;
    double loading_decay = 0.5;    // geometric loading ratio per level down
};

/// Nested-factor panel over M^L leaves. Level 1 is a single block holding
/// everyone; each deeper level splits every block M ways, so a leaf has L
/// ancestor blocks and two leaves correlate through the factors of the
/// blocks they share. Level loadings decay geometrically with depth and are
/// calibrated so that sibling correlation equals intra_block_corr exactly
/// when noise_scale is 1; noise_scale -> infinity recovers independent
/// walks. Draw order: level by level, block by block, date by date for the
/// factors, then leaf by leaf for the idiosyncratic noise.
inline RatePanel hierarchical_panel(const HierarchySpec& spec, std::size_t t_count) {
    if (spec.replication < 2) throw Error("hierarchical_panel requires replication >= 2");
    if (spec.levels < 1) throw Error("hierarchical_panel requires levels >= 1");
    if (!(spec.intra_block_corr > 0.0) || spec.intra_block_corr >= 1.0)
        throw Error("hierarchical_panel requires intra_block_corr in (0, 1)");
    if (!(spec.noise_scale > 0.0)) throw Error("hierarchical_panel requires noise_scale > 0");
    if (!(spec.loading_decay > 0.0) || spec.loading_decay > 1.0)
        throw Error("hierarchical_panel requires loading_decay in (0, 1]");
    if (t_count < 2) throw Error("hierarchical_panel requires T >= 2");

    const std::size_t m = static_cast<std::size_t>(spec.replication);
    const std::size_t levels = static_cast<std::size_t>(spec.levels);
    std::size_t leaves = 1;
    for (std::size_t l = 0; l < levels; ++l) {
        leaves *= m;
        if (leaves > 100000) throw Error("hierarchical_panel: leaf count exceeds 100000");
    }

    // kappa^2 * sum(g^(2(l-1))) = rho / (1 - rho) puts sibling correlation at
    // exactly rho when the idiosyncratic variance is 1 (noise_scale == 1).
    const double g = spec.loading_decay;
    double loading_var_sum = 0.0;
    for (std::size_t l = 0; l < levels; ++l) loading_var_sum += std::pow(g, 2.0 * l);
    const double rho = spec.intra_block_corr;
    const double kappa = std::sqrt(rho / (1.0 - rho) / loading_var_sum);
    const double total_var =
        rho / (1.0 - rho) + spec.noise_scale * spec.noise_scale;
    const double scale = kDailyVolatility / std::sqrt(total_var);

    GaussianSource rng(spec.seed);
    const std::size_t steps_count = t_count - 1;
    // factors[l] holds m^l block factor series at level l+1, flattened
    // block-major.
    std::vector<std::vector<double>> factors(levels);
    std::size_t blocks = 1;
    for (std::size_t l = 0; l < levels; ++l) {
        factors[l].resize(blocks * steps_count);
        for (double& f : factors[l]) f = rng.normal();
        blocks *= m;
    }

    Matrix steps(leaves, steps_count);
    for (std::size_t i = 0; i < leaves; ++i) {
        for (std::size_t t = 0; t < steps_count; ++t) {
            double value = spec.noise_scale * rng.normal();
            std::size_t block_size = leaves;
            for (std::size_t l = 0; l < levels; ++l) {
                const std::size_t block = i / block_size;
                value += kappa * std::pow(g, static_cast<double>(l)) *
                         factors[l][block * steps_count + t];
                block_size /= m;
            }
            steps(i, t) = scale * value;
        }
    }
    return detail::panel_from_log_returns(synth_codes(leaves), steps, t_count);
}

/// Exact degree sequence of the deterministic hierarchical reference graph:
/// an M-clique seed replicated L times, with hub degrees growing
/// geometrically. After round j (counting from the deepest replication), the
/// graph contributes (M-1) * M^(L-j) nodes of degree (M-1)^j, and the single
/// apex hub reaches degree (M-1)^L; the total node count is M^L. At every
/// occupied degree K = (M-1)^j the cumulative distribution obeys
/// F(K) = M * K^(-ln M / ln(M-1)) exactly, which is what makes this sequence
/// a closed-form fixture for the power-law fitter.
inline std::vector<int> deterministic_hierarchy_degrees(int m, int l) {
    if (m < 3) throw Error("deterministic_hierarchy_degrees requires M >= 3");
    if (l < 1) throw Error("deterministic_hierarchy_degrees requires L >= 1");
    double projected = std::pow(static_cast<double>(m), l);
    if (projected > 1e6) throw Error("deterministic_hierarchy_degrees: node count exceeds 1e6");

    std::vector<int> degrees;
    degrees.reserve(static_cast<std::size_t>(projected));
    for (int j = 1; j <= l; ++j) {
        long long count = (m - 1);
        for (int p = 0; p < l - j; ++p) count *= m;
        long long degree = 1;
        for (int p = 0; p < j; ++p) degree *= (m - 1);
        for (long long c = 0; c < count; ++c) degrees.push_back(static_cast<int>(degree));
    }
    long long apex = 1;
    for (int p = 0; p < l; ++p) apex *= (m - 1);
    degrees.push_back(static_cast<int>(apex));
    return degrees;
}

}  // namespace fxnet
