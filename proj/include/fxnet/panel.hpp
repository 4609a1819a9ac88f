#pragma once

// Daily exchange-rate panels: CSV parsing, serialization, calendar
// synchronization and return despiking. A panel holds one price series per
// currency over a shared, strictly increasing list of dates; individual cells
// may be missing (non-trading days) until synchronize() intersects the
// calendars.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fxnet/common.hpp"

namespace fxnet {

namespace detail {

inline bool is_leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

inline int days_in_month(int y, int m) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return lengths[m - 1];
}

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

/// Splits on `sep`, keeping empty fields.
inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = text.find(sep, begin);
        if (end == std::string_view::npos) {
            fields.push_back(text.substr(begin));
            return fields;
        }
        fields.push_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Validates an ISO-8601 calendar date (YYYY-MM-DD); throws Error otherwise.
inline void validate_date(std::string_view d) {
    const bool shape_ok = d.size() == 10 && d[4] == '-' && d[7] == '-' &&
                          detail::all_digits(d.substr(0, 4)) && detail::all_digits(d.substr(5, 2)) &&
                          detail::all_digits(d.substr(8, 2));
    if (!shape_ok) throw Error("unparseable date '" + std::string(d) + "'");
    const int y = (d[0] - '0') * 1000 + (d[1] - '0') * 100 + (d[2] - '0') * 10 + (d[3] - '0');
    const int m = (d[5] - '0') * 10 + (d[6] - '0');
    const int day = (d[8] - '0') * 10 + (d[9] - '0');
    if (m < 1 || m > 12 || day < 1 || day > detail::days_in_month(y, m))
        throw Error("unparseable date '" + std::string(d) + "'");
}

/// The calendar day after `d`.
inline std::string next_date(std::string_view d) {
    int y = (d[0] - '0') * 1000 + (d[1] - '0') * 100 + (d[2] - '0') * 10 + (d[3] - '0');
    int m = (d[5] - '0') * 10 + (d[6] - '0');
    int day = (d[8] - '0') * 10 + (d[9] - '0');
    if (++day > detail::days_in_month(y, m)) {
        day = 1;
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02d-%02d", y, m, day);
    return std::string(buf.data(), 10);
}

/// `count` consecutive calendar days starting at `start`.
inline std::vector<std::string> date_range(std::string_view start, std::size_t count) {
    validate_date(start);
    std::vector<std::string> dates;
    dates.reserve(count);
    std::string d(start);
    for (std::size_t i = 0; i < count; ++i) {
        dates.push_back(d);
        d = next_date(d);
    }
    return dates;
}

/// Raw price panel: `cells[i * dates.size() + t]` is the price of one unit of
/// currency i on date t, quoted in the file's (implicit) quote currency.
/// Missing quotes are represented explicitly, never by sentinel numbers.
struct RatePanel {
    std::vector<CurrencyCode> currencies;
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    std::vector<std::optional<double>> cells;

    std::size_t currency_count() const { return currencies.size(); }
    std::size_t date_count() const { return dates.size(); }

    std::optional<double>& cell(std::size_t i, std::size_t t) { return cells[i * dates.size() + t]; }
    const std::optional<double>& cell(std::size_t i, std::size_t t) const {
        return cells[i * dates.size() + t];
    }

    /// True when every cell holds a value.
    bool rectangular() const {
        return std::all_of(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); });
    }

    std::optional<std::size_t> index_of(CurrencyCode code) const {
        const auto it = std::find(currencies.begin(), currencies.end(), code);
        if (it == currencies.end()) return std::nullopt;
        return static_cast<std::size_t>(it - currencies.begin());
    }
};

/// Parses a `date,CODE1,CODE2,...` CSV. Empty cells mark missing quotes;
/// prices must be strictly positive and finite; dates must be ISO-8601 and
/// strictly increasing; duplicate currency columns are rejected.
inline RatePanel parse_rates(std::string_view csv) {
    const auto lines = detail::split(csv, '\n');
    std::size_t row = 0;
    while (row < lines.size() && detail::trim(lines[row]).empty()) ++row;
    if (row == lines.size()) throw Error("malformed header: empty input");

    const auto header = detail::split(lines[row], ',');
    if (detail::trim(header[0]) != "date")
        throw Error("malformed header: first column must be 'date'");
    if (header.size() < 2) throw Error("malformed header: no currency columns");

    RatePanel panel;
    panel.currencies.reserve(header.size() - 1);
    for (std::size_t c = 1; c < header.size(); ++c) {
        const CurrencyCode code = CurrencyCode::parse(detail::trim(header[c]));
        if (std::find(panel.currencies.begin(), panel.currencies.end(), code) != panel.currencies.end())
            throw Error("duplicate currency column '" + code.str() + "'");
        panel.currencies.push_back(code);
    }
    const std::size_t n = panel.currencies.size();

    std::vector<std::vector<std::optional<double>>> by_date;  // [t][i]
    for (++row; row < lines.size(); ++row) {
        const std::string_view line = lines[row];
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != n + 1)
            throw Error("row " + std::to_string(row + 1) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(n + 1));
        const std::string_view date = detail::trim(fields[0]);
        validate_date(date);
        if (!panel.dates.empty() && std::string_view(panel.dates.back()) >= date)
            throw Error("dates not strictly increasing at '" + std::string(date) + "'");
        panel.dates.emplace_back(date);

        std::vector<std::optional<double>> prices(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string_view field = detail::trim(fields[i + 1]);
            if (field.empty()) continue;  // missing quote
            const double price = parse_double(field);
            if (!std::isfinite(price) || price <= 0.0)
                throw Error("non-positive price '" + std::string(field) + "' for " +
                            panel.currencies[i].str() + " on " + std::string(date));
            prices[i] = price;
        }
        by_date.push_back(std::move(prices));
    }

    const std::size_t t_count = panel.dates.size();
    panel.cells.assign(n * t_count, std::nullopt);
    for (std::size_t t = 0; t < t_count; ++t)
        for (std::size_t i = 0; i < n; ++i) panel.cells[i * t_count + t] = by_date[t][i];
    return panel;
}

/// Inverse of parse_rates: doubles are emitted in shortest round-trip form,
/// missing cells as empty fields, so parse_rates(serialize_rates(p)) == p.
inline std::string serialize_rates(const RatePanel& panel) {
    std::string out = "date";
    for (const auto& code : panel.currencies) {
        out += ',';
        out += code.str();
    }
    out += '\n';
    for (std::size_t t = 0; t < panel.date_count(); ++t) {
        out += panel.dates[t];
        for (std::size_t i = 0; i < panel.currency_count(); ++i) {
            out += ',';
            if (const auto& c = panel.cell(i, t)) out += format_double(*c);
        }
        out += '\n';
    }
    return out;
}

/// Keeps only the dates on which every currency has a quote. Order is
/// preserved; the result is rectangular. Throws if fewer than two common
/// dates survive.
inline RatePanel synchronize(const RatePanel& panel) {
    const std::size_t n = panel.currency_count();
    const std::size_t t_count = panel.date_count();
    std::vector<std::size_t> keep;
    keep.reserve(t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        bool complete = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!panel.cell(i, t)) {
                complete = false;
                break;
            }
        }
        if (complete) keep.push_back(t);
    }
    if (keep.size() < 2)
        throw Error("fewer than 2 common dates across currencies (" + std::to_string(keep.size()) +
                    " remain)");

    RatePanel out;
    out.currencies = panel.currencies;
    out.dates.reserve(keep.size());
    for (const std::size_t t : keep) out.dates.push_back(panel.dates[t]);
    out.cells.assign(n * keep.size(), std::nullopt);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < keep.size(); ++k) out.cells[i * keep.size() + k] = panel.cell(i, keep[k]);
    return out;
}

/// Result of despiking one return series.
struct DespikeResult {
    std::vector<double> series;
    std::size_t removed = 0;
    double sigma = 0.0;
    /// Set when sigma == 0 but the series has nonzero entries; the series is
    /// then passed through unchanged rather than zeroed wholesale.
    bool zero_variance_skipped = false;
};

/// Replaces every return with |g| > threshold * sigma by 0. Sigma is the
/// population standard deviation of the input, computed once before any
/// removal; pass `sigma_override` to reuse a previously computed value (which
/// makes repeated application idempotent).
inline DespikeResult despike(std::span<const double> series, double threshold = 5.0,
                             std::optional<double> sigma_override = std::nullopt) {
    if (threshold <= 0.0) throw Error("despike threshold must be positive");
    DespikeResult result;
    result.series.assign(series.begin(), series.end());
    if (series.empty()) return result;

    if (sigma_override) {
        result.sigma = *sigma_override;
    } else {
        double mean = 0.0;
        for (const double g : series) mean += g;
        mean /= static_cast<double>(series.size());
        double var = 0.0;
        for (const double g : series) var += (g - mean) * (g - mean);
        var /= static_cast<double>(series.size());
        result.sigma = std::sqrt(var);
    }

    if (result.sigma == 0.0) {
        result.zero_variance_skipped =
            std::any_of(series.begin(), series.end(), [](double g) { return g != 0.0; });
        return result;
    }

    const double cut = threshold * result.sigma;
    for (double& g : result.series) {
        if (std::abs(g) > cut) {
            g = 0.0;
            ++result.removed;
        }
    }
    return result;
}

}  // namespace fxnet
