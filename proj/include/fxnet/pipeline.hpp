#pragma once

// Filesystem-facing orchestration behind the command-line tool: read a rate
// panel, run the analysis (one base or the full sweep), and write the
// artifact files. Every output file is written atomically (temp file in the
// target directory, then rename), so a crash never leaves a truncated file
// behind, and reruns with identical inputs produce byte-identical outputs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "fxnet/sweep.hpp"

namespace fxnet {

inline std::string read_file_or_stdin(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read input file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error("cannot read input file '" + path + "'");
    return buffer.str();
}

inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

struct AnalyzeConfig {
    std::string input;          // CSV path, or "-" for standard input
    std::string out_dir;
    std::string base = "all";   // one currency code, or "all" for the sweep
    double despike_sigma = 5.0;
    std::string fit_mode = "two";
    std::string groups_path;    // empty = built-in default assignment
    int tau = 1;
    unsigned threads = 0;
};

namespace detail {

inline void write_base_artifacts(const std::filesystem::path& dir, const BaseOutcome& outcome) {
    const std::string code = outcome.report.base.str();
    write_file_atomic(dir / (code + "_mst.dot"), export_tree(outcome.tree, "dot"));
    write_file_atomic(dir / (code + "_fk.csv"), degree_csv(outcome.distribution));
    write_file_atomic(dir / (code + "_spectrum.csv"),
                      spectrum_csv(outcome.report.base, outcome.spectrum));
}

}  // namespace detail

/// Run the analysis and write artifacts under config.out_dir. Returns the
/// process exit status: 0 on full success, 1 if anything failed (failures
/// are listed on `err`).
inline int run_analyze(const AnalyzeConfig& config, std::ostream& err) {
    try {
        const RatePanel panel = parse_rates(read_file_or_stdin(config.input));

        SweepOptions options;
        options.despike_sigma = config.despike_sigma;
        options.tau = config.tau;
        options.fit_mode = parse_fit_mode(config.fit_mode);
        options.threads = config.threads;
        if (!config.groups_path.empty())
            options.groups = parse_groups_json(read_file_or_stdin(config.groups_path));

        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);

        if (config.base != "all") {
            const CurrencyCode base = CurrencyCode::parse(config.base);
            if (!panel.index_of(base))
                throw Error("panel has no currency '" + base.str() + "'");
            SweepResult single;
            single.despike = {};
            const RawReturns raw =
                prepare_returns(panel, options.despike_sigma, options.tau, single.despike);
            single.t_count = raw.returns.cols;
            single.lambda_rm = rmt_bound(single.t_count, raw.currencies.size() - 1);
            single.outcomes.push_back(
                analyze_base(raw, base, options.groups.group_of(base), options.fit_mode));
            detail::write_base_artifacts(dir, single.outcomes.front());
            write_file_atomic(dir / "report.csv", report_csv(single));
            return 0;
        }

        const SweepResult result = sweep_report(panel, options);
        for (const BaseOutcome& outcome : result.outcomes)
            detail::write_base_artifacts(dir, outcome);
        write_file_atomic(dir / "report.csv", report_csv(result));

        const std::optional<BetaFit> beta = fit_beta_over(result);
        std::size_t beta_points = 0;
        for (const BaseOutcome& o : result.outcomes)
            if (o.report.lambda_max > result.lambda_rm) ++beta_points;
        write_file_atomic(dir / "scatter.csv", scatter_csv(result, beta));
        write_file_atomic(dir / "beta.csv", beta_csv(beta, beta_points));

        for (const BaseFailure& failure : result.failures)
            err << "base " << failure.base.str() << " failed: " << failure.message << "\n";
        if (result.outcomes.empty()) {
            err << "analyze: no base currency completed\n";
            return 1;
        }
        return result.failures.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        err << "analyze: " << e.what() << "\n";
        return 1;
    }
}

struct SynthConfig {
    std::string model = "walk";  // walk | hier | factor
    std::size_t n = 60;          // series count (walk, factor)
    std::size_t t = 1658;        // panel length in days
    std::uint64_t seed = 0;
    int m = 3;                   // hier: replication factor
    int levels = 2;              // hier: nesting depth (leaf count m^levels)
    double corr = 0.6;           // hier: sibling correlation at noise 1
    double noise = 1.0;          // hier: idiosyncratic noise scale
    double decay = 0.5;          // hier: loading decay per level
    double rho = 0.3;            // factor: common-factor variance share
    double spread = 0.0;         // factor: loading spread around sqrt(rho)
};

/// Generate a synthetic panel and stream it as CSV. Returns the process
/// exit status.
inline int run_synth(const SynthConfig& config, std::ostream& out, std::ostream& err) {
    try {
        RatePanel panel;
        if (config.model == "walk") {
            panel = random_walk_panel(config.n, config.t, config.seed);
        } else if (config.model == "hier") {
            HierarchySpec spec;
            spec.replication = config.m;
            spec.levels = config.levels;
            spec.intra_block_corr = config.corr;
            spec.noise_scale = config.noise;
            spec.seed = config.seed;
            spec.loading_decay = config.decay;
            panel = hierarchical_panel(spec, config.t);
        } else if (config.model == "factor") {
            panel = one_factor_panel(config.n, config.t, config.rho, config.seed, config.spread);
        } else {
            throw Error("unknown model '" + config.model + "' (expected walk, hier or factor)");
        }
        out << serialize_rates(panel);
        return 0;
    } catch (const std::exception& e) {
        err << "synth: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fxnet
