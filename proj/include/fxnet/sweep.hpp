#pragma once

// The base-currency sweep: run the whole chain (rebase -> normalize ->
// correlation -> spectrum -> MST -> F(K) -> power fit) once per currency in
// the panel. Bases are independent, so they are mapped over a thread pool;
// each failure is captured per base and never aborts the sweep. All
// aggregation happens after the parallel phase, in panel order, so results
// are deterministic regardless of thread scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fxnet/groups.hpp"
#include "fxnet/mst.hpp"
#include "fxnet/panel.hpp"
#include "fxnet/returns.hpp"
#include "fxnet/scaling.hpp"
#include "fxnet/spectrum.hpp"
#include "fxnet/synth.hpp"

namespace fxnet {

struct SweepOptions {
    double despike_sigma = 5.0;
    int tau = 1;
    FitMode fit_mode = FitMode::TwoParameter;
    GroupConfig groups = default_groups();
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct DespikeSummary {
    std::size_t total_removed = 0;
    std::map<CurrencyCode, std::size_t> removed_by_currency;  // nonzero entries only
};

struct BaseReport {
    CurrencyCode base;
    std::optional<LiquidityGroup> group;  // empty for codes outside the config
    PowerFit fit;
    double lambda_max = 0.0;
    int zero_modes = 0;
};

/// Everything computed for one base currency, kept so callers can export
/// trees, spectra and degree distributions without recomputation.
struct BaseOutcome {
    BaseReport report;
    Spectrum spectrum;
    SpanningTree tree;
    DegreeDistribution distribution;
};

struct BaseFailure {
    CurrencyCode base;
    std::string message;
};

struct GroupAverage {
    std::string label;  // "A*", "A", "B", "C" or "all"
    std::size_t count = 0;
    double alpha = 0.0;
    double delta_alpha = 0.0;
    double rel_err = 0.0;
    double lambda_max = 0.0;
    double zero_modes = 0.0;
};

struct SweepResult {
    std::vector<BaseOutcome> outcomes;  // successful bases, in panel order
    std::vector<BaseFailure> failures;  // failed bases, in panel order
    std::vector<GroupAverage> averages;
    DespikeSummary despike;
    std::size_t t_count = 0;   // return-series length entering the correlations
    double lambda_rm = 0.0;    // random-matrix bound shared by all bases
};

/// One base currency's full pipeline over already-cleaned raw returns.
inline BaseOutcome analyze_base(const RawReturns& raw, CurrencyCode base,
                                std::optional<LiquidityGroup> group, FitMode fit_mode) {
    const ReturnPanel panel = normalize(rebase(raw, base));
    const CorrelationMatrix corr = correlation_matrix(panel);
    const std::size_t t_count = panel.returns.cols;

    BaseOutcome outcome;
    outcome.spectrum = make_spectrum(corr, t_count);
    outcome.tree = build_mst(distance_matrix(corr));
    outcome.distribution = degree_distribution(outcome.tree);
    outcome.report.base = base;
    outcome.report.group = group;
    outcome.report.fit = fit_power(outcome.distribution, fit_mode);
    outcome.report.lambda_max = outcome.spectrum.lambda_max;
    outcome.report.zero_modes = outcome.spectrum.zero_mode_count;
    return outcome;
}

/// Synchronize, take log-returns and despike each raw series — the shared
/// preparation in front of any per-base analysis.
inline RawReturns prepare_returns(const RatePanel& raw_panel, double despike_sigma, int tau,
                                  DespikeSummary& summary) {
    if (!(despike_sigma > 0.0)) throw Error("despike threshold must be positive");
    const RatePanel panel = synchronize(raw_panel);
    RawReturns raw = log_returns(panel, tau);
    for (std::size_t i = 0; i < raw.currencies.size(); ++i) {
        const DespikeResult cleaned = despike(raw.returns.row(i), despike_sigma);
        if (cleaned.removed > 0) {
            std::copy(cleaned.series.begin(), cleaned.series.end(), raw.returns.row(i).begin());
            summary.removed_by_currency[raw.currencies[i]] = cleaned.removed;
            summary.total_removed += cleaned.removed;
        }
    }
    return raw;
}

/// Clean the panel, then run every base in parallel. Per-base errors land in
/// `failures`; the sweep always completes.
inline SweepResult sweep_report(const RatePanel& raw_panel, const SweepOptions& options) {
    SweepResult result;
    const RawReturns raw =
        prepare_returns(raw_panel, options.despike_sigma, options.tau, result.despike);
    const std::size_t n = raw.currencies.size();
    if (n < 3) throw Error("sweep needs at least 3 currencies");
    result.t_count = raw.returns.cols;
    result.lambda_rm = rmt_bound(result.t_count, n - 1);

    struct Slot {
        std::optional<BaseOutcome> outcome;
        std::optional<BaseFailure> failure;
    };
    std::vector<Slot> slots(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            const CurrencyCode base = raw.currencies[i];
            try {
                slots[i].outcome =
                    analyze_base(raw, base, options.groups.group_of(base), options.fit_mode);
            } catch (const std::exception& e) {
                slots[i].failure = BaseFailure{base, e.what()};
            }
        }
    };

    unsigned thread_count = options.threads != 0 ? options.threads
                                                 : std::thread::hardware_concurrency();
    if (thread_count == 0) thread_count = 1;
    thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned w = 0; w < thread_count; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (Slot& slot : slots) {
        if (slot.outcome) result.outcomes.push_back(std::move(*slot.outcome));
        else if (slot.failure) result.failures.push_back(std::move(*slot.failure));
    }

    const auto average_over = [](std::string label,
                                 const std::vector<const BaseReport*>& reports) {
        GroupAverage avg;
        avg.label = std::move(label);
        avg.count = reports.size();
        for (const BaseReport* r : reports) {
            avg.alpha += r->fit.alpha;
            avg.delta_alpha += r->fit.delta_alpha;
            avg.rel_err += r->fit.rel_err;
            avg.lambda_max += r->lambda_max;
            avg.zero_modes += r->zero_modes;
        }
        const double m = static_cast<double>(reports.size());
        avg.alpha /= m;
        avg.delta_alpha /= m;
        avg.rel_err /= m;
        avg.lambda_max /= m;
        avg.zero_modes /= m;
        return avg;
    };
    for (const LiquidityGroup g : kGroupOrder) {
        std::vector<const BaseReport*> members;
        for (const BaseOutcome& o : result.outcomes)
            if (o.report.group == g) members.push_back(&o.report);
        if (!members.empty()) result.averages.push_back(average_over(std::string(to_string(g)), members));
    }
    if (!result.outcomes.empty()) {
        std::vector<const BaseReport*> all;
        for (const BaseOutcome& o : result.outcomes) all.push_back(&o.report);
        result.averages.push_back(average_over("all", all));
    }
    return result;
}

/// Fit the cross-base regression alpha ~ a * (lambda_max - lambda_rm)^(-beta)
/// over the sweep's successful bases. Bases whose lambda_max does not clear
/// the random-matrix bound carry no signal for this regression and are left
/// out; returns nothing when fewer than 5 points remain.
inline std::optional<BetaFit> fit_beta_over(const SweepResult& result) {
    std::vector<ScatterPoint> points;
    for (const BaseOutcome& o : result.outcomes)
        if (o.report.lambda_max > result.lambda_rm)
            points.push_back({o.report.lambda_max, o.report.fit.alpha});
    if (points.size() < 5) return std::nullopt;
    return fit_beta(points, result.lambda_rm);
}

/// Per-base rows followed by group-average rows, mirroring the summary-table
/// layout: `base,group,alpha,delta_alpha,rel_err_pct,lambda_max,zero_modes`.
inline std::string report_csv(const SweepResult& result) {
    std::string out = "base,group,alpha,delta_alpha,rel_err_pct,lambda_max,zero_modes\n";
    const auto group_label = [](const std::optional<LiquidityGroup>& g) {
        return g ? std::string(to_string(*g)) : std::string("-");
    };
    for (const BaseOutcome& o : result.outcomes) {
        const BaseReport& r = o.report;
        out += r.base.str();
        out += ',';
        out += group_label(r.group);
        out += ',';
        out += format_double(r.fit.alpha);
        out += ',';
        out += format_double(r.fit.delta_alpha);
        out += ',';
        out += format_double(100.0 * r.fit.rel_err);
        out += ',';
        out += format_double(r.lambda_max);
        out += ',';
        out += std::to_string(r.zero_modes);
        out += '\n';
    }
    for (const GroupAverage& avg : result.averages) {
        out += "average,";
        out += avg.label;
        out += ',';
        out += format_double(avg.alpha);
        out += ',';
        out += format_double(avg.delta_alpha);
        out += ',';
        out += format_double(100.0 * avg.rel_err);
        out += ',';
        out += format_double(avg.lambda_max);
        out += ',';
        out += format_double(avg.zero_modes);
        out += '\n';
    }
    return out;
}

/// Scatter of (lambda_max, alpha) per base, plus sampled points of the
/// fitted regression curve when one is available (rows labeled `curve`).
inline std::string scatter_csv(const SweepResult& result, const std::optional<BetaFit>& beta) {
    std::string out = "base,group,lambda_max,alpha\n";
    double lo = 0.0, hi = 0.0;
    bool have_range = false;
    for (const BaseOutcome& o : result.outcomes) {
        const BaseReport& r = o.report;
        out += r.base.str();
        out += ',';
        out += r.group ? std::string(to_string(*r.group)) : std::string("-");
        out += ',';
        out += format_double(r.lambda_max);
        out += ',';
        out += format_double(r.fit.alpha);
        out += '\n';
        if (r.lambda_max > result.lambda_rm) {
            if (!have_range) {
                lo = hi = r.lambda_max;
                have_range = true;
            } else {
                lo = std::min(lo, r.lambda_max);
                hi = std::max(hi, r.lambda_max);
            }
        }
    }
    if (beta && have_range && hi > lo) {
        constexpr int kSamples = 100;
        for (int s = 0; s < kSamples; ++s) {
            const double lambda = lo + (hi - lo) * static_cast<double>(s) / (kSamples - 1);
            const double alpha =
                beta->prefactor * std::pow(lambda - beta->lambda_rm, -beta->beta);
            out += "curve,,";
            out += format_double(lambda);
            out += ',';
            out += format_double(alpha);
            out += '\n';
        }
    }
    return out;
}

/// One-row summary of the cross-base regression.
inline std::string beta_csv(const std::optional<BetaFit>& beta, std::size_t points_used) {
    std::string out = "prefactor,beta,lambda_rm,sse,points_used\n";
    if (beta) {
        out += format_double(beta->prefactor);
        out += ',';
        out += format_double(beta->beta);
        out += ',';
        out += format_double(beta->lambda_rm);
        out += ',';
        out += format_double(beta->sse);
        out += ',';
        out += std::to_string(points_used);
        out += '\n';
    }
    return out;
}

}  // namespace fxnet
