// Command-line front end: `fxnet analyze` runs the full pipeline over a rate
// panel and writes artifact files; `fxnet synth` emits synthetic panels in
// the same CSV schema, so the two subcommands compose through a pipe.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fxnet/fxnet.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Currency-network analysis: correlations, spectra, spanning trees, scaling fits"};
    app.require_subcommand(1);

    fxnet::AnalyzeConfig analyze_config;
    CLI::App* analyze = app.add_subcommand("analyze", "Analyze a rate panel CSV");
    analyze->add_option("--input", analyze_config.input, "Rate panel CSV path, or - for stdin")
        ->required();
    analyze->add_option("--out", analyze_config.out_dir, "Output directory for artifacts")
        ->required();
    analyze->add_option("--base", analyze_config.base,
                        "Base currency code, or 'all' for the full sweep");
    analyze->add_option("--despike-sigma", analyze_config.despike_sigma,
                        "Spike-removal threshold in sigmas (> 0)");
    analyze->add_option("--fit-mode", analyze_config.fit_mode,
                        "Power-fit amplitude handling: 'two' or 'unit'");
    analyze->add_option("--groups", analyze_config.groups_path,
                        "Liquidity-group JSON (defaults to the built-in assignment)");
    analyze->add_option("--tau", analyze_config.tau, "Return lag in days (>= 1)");
    analyze->add_option("--threads", analyze_config.threads,
                        "Worker threads for the sweep (0 = auto)");

    fxnet::SynthConfig synth_config;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic rate panel CSV");
    synth->add_option("--model", synth_config.model, "Generator: walk, hier or factor");
    synth->add_option("--n", synth_config.n, "Series count (walk, factor)");
    synth->add_option("--t", synth_config.t, "Panel length in days");
    synth->add_option("--seed", synth_config.seed, "RNG seed");
    synth->add_option("--m", synth_config.m, "Replication factor (hier)");
    synth->add_option("--levels", synth_config.levels, "Nesting depth (hier); leaves = m^levels");
    synth->add_option("--corr", synth_config.corr, "Sibling correlation at noise 1 (hier)");
    synth->add_option("--noise", synth_config.noise, "Idiosyncratic noise scale (hier)");
    synth->add_option("--decay", synth_config.decay, "Loading decay per level (hier)");
    synth->add_option("--rho", synth_config.rho, "Common-factor variance share (factor)");
    synth->add_option("--spread", synth_config.spread, "Loading spread around sqrt(rho) (factor)");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return fxnet::run_analyze(analyze_config, std::cerr);
    return fxnet::run_synth(synth_config, std::cout, std::cerr);
}
