#pragma once

// Log-returns and base-currency changes. Every price panel is quoted in some
// reference currency; log-returns taken in that quote basis can be re-expressed
// in the basis of any panel currency X by subtracting X's own return series,
// because ln(x_A/x_X) telescopes. Rebasing therefore never touches prices and
// is exact up to floating-point rounding.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fxnet/matrix.hpp"
#include "fxnet/panel.hpp"

namespace fxnet {

/// Returns in the quote basis of the source file. `quote_base` is set when
/// the caller knows which currency the file quotes in (it then becomes a
/// nameable rebase target); synthetic panels leave it empty.
struct RawReturns {
    std::optional<CurrencyCode> quote_base;
    std::vector<CurrencyCode> currencies;  // one row per panel column
    Matrix returns;                        // n x T
};

/// Returns expressed in the basis of one panel currency. The base currency
/// itself has no row.
struct ReturnPanel {
    CurrencyCode base;
    std::vector<CurrencyCode> currencies;  // N rows
    Matrix returns;                        // N x T
    bool normalized = false;

    std::optional<std::size_t> index_of(CurrencyCode code) const {
        for (std::size_t i = 0; i < currencies.size(); ++i)
            if (currencies[i] == code) return i;
        return std::nullopt;
    }
};

/// G_i(t) = ln x_i(t + tau) - ln x_i(t) over a rectangular panel.
inline RawReturns log_returns(const RatePanel& panel, int tau = 1,
                              std::optional<CurrencyCode> quote_base = std::nullopt) {
    if (tau < 1) throw Error("return lag tau must be >= 1");
    if (!panel.rectangular()) throw Error("log_returns requires a synchronized (rectangular) panel");
    const std::size_t t_count = panel.date_count();
    if (t_count <= static_cast<std::size_t>(tau))
        throw Error("panel too short for tau=" + std::to_string(tau) + " (" + std::to_string(t_count) +
                    " dates)");
    if (quote_base && panel.index_of(*quote_base))
        throw Error("quote base '" + quote_base->str() + "' is already a panel column");

    const std::size_t n = panel.currency_count();
    const std::size_t t_out = t_count - static_cast<std::size_t>(tau);
    RawReturns raw;
    raw.quote_base = quote_base;
    raw.currencies = panel.currencies;
    raw.returns = Matrix(n, t_out);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < t_out; ++t)
            raw.returns(i, t) =
                std::log(*panel.cell(i, t + static_cast<std::size_t>(tau))) - std::log(*panel.cell(i, t));
    return raw;
}

/// Rebases quote-basis returns to panel currency `target`:
/// G_A^X = G_A - G_X for every other column A, and, when the quote currency
/// is named, a row for it equal to -G_X. Choosing the quote currency itself
/// as target leaves the panel unchanged.
inline ReturnPanel rebase(const RawReturns& raw, CurrencyCode target) {
    const std::size_t n = raw.currencies.size();
    const std::size_t t_count = raw.returns.cols;

    if (raw.quote_base && target == *raw.quote_base) {
        ReturnPanel panel;
        panel.base = target;
        panel.currencies = raw.currencies;
        panel.returns = raw.returns;
        return panel;
    }

    std::size_t target_row = n;
    for (std::size_t i = 0; i < n; ++i)
        if (raw.currencies[i] == target) target_row = i;
    if (target_row == n) throw Error("unknown base currency '" + target.str() + "'");

    ReturnPanel panel;
    panel.base = target;
    const std::size_t rows = n - 1 + (raw.quote_base ? 1 : 0);
    panel.currencies.reserve(rows);
    panel.returns = Matrix(rows, t_count);
    const std::span<const double> g_target = raw.returns.row(target_row);

    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == target_row) continue;
        panel.currencies.push_back(raw.currencies[i]);
        const std::span<const double> g = raw.returns.row(i);
        for (std::size_t t = 0; t < t_count; ++t) panel.returns(r, t) = g[t] - g_target[t];
        ++r;
    }
    if (raw.quote_base) {
        panel.currencies.push_back(*raw.quote_base);
        for (std::size_t t = 0; t < t_count; ++t) panel.returns(r, t) = -g_target[t];
    }
    return panel;
}

/// Switches an unnormalized return panel from its current base to `target`
/// (one of its rows, or the current base for the identity). The old base
/// appears as a new row equal to -G_target.
inline ReturnPanel rebase(const ReturnPanel& panel, CurrencyCode target) {
    if (panel.normalized) throw Error("rebase requires unnormalized returns");
    if (target == panel.base) return panel;
    const auto target_row = panel.index_of(target);
    if (!target_row) throw Error("unknown base currency '" + target.str() + "'");

    const std::size_t n = panel.currencies.size();
    const std::size_t t_count = panel.returns.cols;
    ReturnPanel out;
    out.base = target;
    out.currencies.reserve(n);
    out.returns = Matrix(n, t_count);
    const std::span<const double> g_target = panel.returns.row(*target_row);

    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == *target_row) continue;
        out.currencies.push_back(panel.currencies[i]);
        const std::span<const double> g = panel.returns.row(i);
        for (std::size_t t = 0; t < t_count; ++t) out.returns(r, t) = g[t] - g_target[t];
        ++r;
    }
    out.currencies.push_back(panel.base);
    for (std::size_t t = 0; t < t_count; ++t) out.returns(r, t) = -g_target[t];
    return out;
}

/// Rescales each row to mean 0 and variance 1 (population variance, divisor
/// T, so the later correlation matrix has unit diagonal and trace N exactly).
inline ReturnPanel normalize(const ReturnPanel& panel) {
    const std::size_t t_count = panel.returns.cols;
    if (t_count < 2) throw Error("normalize requires at least 2 time points");
    ReturnPanel out = panel;
    for (std::size_t i = 0; i < out.currencies.size(); ++i) {
        const std::span<double> g = out.returns.row(i);
        double mean = 0.0;
        for (const double v : g) mean += v;
        mean /= static_cast<double>(t_count);
        double var = 0.0, max_dev = 0.0, max_abs = 0.0;
        for (const double v : g) {
            const double d = v - mean;
            var += d * d;
            max_dev = std::max(max_dev, std::abs(d));
            max_abs = std::max(max_abs, std::abs(v));
        }
        var /= static_cast<double>(t_count);
        // Degenerate when the series never moves: exactly zero variance, or
        // fluctuations at the rounding floor of a constant level (a constant
        // whose mean is not exactly representable leaves variance ~1e-32,
        // which would normalize into pure noise).
        if (var <= 0.0 || max_dev <= 1e-12 * max_abs)
            throw Error("zero-variance series for '" + out.currencies[i].str() + "'");
        const double inv_sigma = 1.0 / std::sqrt(var);
        for (double& v : g) v = (v - mean) * inv_sigma;
    }
    out.normalized = true;
    return out;
}

/// CSV export of a return panel (one row per currency). Column labels come
/// from `dates` when provided (sized T), otherwise t1..T.
inline std::string returns_csv(const ReturnPanel& panel, std::span<const std::string> dates = {}) {
    const std::size_t t_count = panel.returns.cols;
    if (!dates.empty() && dates.size() != t_count)
        throw Error("returns_csv: date label count does not match panel width");
    std::string out = "currency";
    for (std::size_t t = 0; t < t_count; ++t) {
        out += ',';
        out += dates.empty() ? "t" + std::to_string(t + 1) : dates[t];
    }
    out += '\n';
    for (std::size_t i = 0; i < panel.currencies.size(); ++i) {
        out += panel.currencies[i].str();
        for (std::size_t t = 0; t < t_count; ++t) {
            out += ',';
            out += format_double(panel.returns(i, t));
        }
        out += '\n';
    }
    return out;
}

}  // namespace fxnet
