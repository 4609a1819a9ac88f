// The per-base sweep: parallel determinism, failure isolation, aggregation,
// and the CSV surfaces built on top of it.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fxnet/sweep.hpp"

using namespace fxnet;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        lines.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    return lines;
}

}  // namespace

TEST_CASE("sweep over a nested panel completes every base") {
    HierarchySpec spec;
    spec.replication = 4;
    spec.levels = 2;
    spec.intra_block_corr = 0.6;
    spec.seed = 8;
    const RatePanel prices = hierarchical_panel(spec, 400);

    SweepOptions options;
    options.threads = 2;
    const SweepResult result = sweep_report(prices, options);

    CHECK(result.failures.empty());
    REQUIRE(result.outcomes.size() == 16);
    CHECK(result.t_count == 399);
    CHECK(result.lambda_rm == rmt_bound(399, 15));
    for (std::size_t i = 0; i < 16; ++i) {
        const BaseOutcome& o = result.outcomes[i];
        CHECK(o.report.base == prices.currencies[i]);  // panel order
        CHECK(o.tree.edges.size() == 14);              // 15 nodes per rebased view
        CHECK(o.spectrum.eigenvalues.size() == 15);
        CHECK(o.report.lambda_max >= 1.0);
        CHECK(o.report.fit.points_used >= 3);
        CHECK(o.report.fit.alpha > 0.0);
        CHECK(o.spectrum.lambda_rm == result.lambda_rm);
    }
    REQUIRE_FALSE(result.averages.empty());
    CHECK(result.averages.back().label == "all");
    CHECK(result.averages.back().count == 16);
}

TEST_CASE("sweep of the full 60-currency universe aggregates all four groups") {
    const RatePanel prices = random_walk_panel(60, 300, 77);
    SweepOptions options;
    const SweepResult result = sweep_report(prices, options);

    CHECK(result.failures.empty());
    REQUIRE(result.outcomes.size() == 60);
    REQUIRE(result.averages.size() == 5);  // A*, A, B, C, all
    CHECK(result.averages[0].label == "A*");
    CHECK(result.averages[0].count == 11);
    CHECK(result.averages[1].label == "A");
    CHECK(result.averages[1].count == 21);
    CHECK(result.averages[2].label == "B");
    CHECK(result.averages[2].count == 10);
    CHECK(result.averages[3].label == "C");
    CHECK(result.averages[3].count == 18);
    CHECK(result.averages[4].label == "all");
    CHECK(result.averages[4].count == 60);

    // The all-currency mean is consistent with the group means.
    double weighted = 0.0;
    for (std::size_t g = 0; g < 4; ++g)
        weighted += result.averages[g].alpha * static_cast<double>(result.averages[g].count);
    CHECK_THAT(weighted / 60.0, Catch::Matchers::WithinAbs(result.averages[4].alpha, 1e-12));
}

TEST_CASE("a pegged pair fails as a base and flags zero modes elsewhere") {
    RatePanel prices = random_walk_panel(12, 400, 3);
    const std::size_t t_count = prices.date_count();
    for (std::size_t t = 0; t < t_count; ++t)
        prices.cells[1 * t_count + t] = prices.cells[0 * t_count + t];

    SweepOptions options;
    const SweepResult result = sweep_report(prices, options);

    REQUIRE(result.failures.size() == 2);
    CHECK(result.failures[0].base == prices.currencies[0]);  // AED
    CHECK(result.failures[1].base == prices.currencies[1]);  // ARS
    CHECK(result.failures[0].message.find("zero-variance") != std::string::npos);
    CHECK(result.failures[0].message.find(prices.currencies[1].str()) != std::string::npos);
    CHECK(result.failures[1].message.find(prices.currencies[0].str()) != std::string::npos);

    REQUIRE(result.outcomes.size() == 10);
    for (const BaseOutcome& o : result.outcomes) CHECK(o.report.zero_modes >= 1);
}

TEST_CASE("sweep output does not depend on the thread count") {
    HierarchySpec spec;
    spec.replication = 3;
    spec.levels = 2;
    spec.seed = 19;
    const RatePanel prices = hierarchical_panel(spec, 250);

    SweepOptions serial;
    serial.threads = 1;
    SweepOptions wide;
    wide.threads = 4;
    const std::string a = report_csv(sweep_report(prices, serial));
    const std::string b = report_csv(sweep_report(prices, wide));
    const std::string c = report_csv(sweep_report(prices, wide));
    CHECK(a == b);
    CHECK(b == c);
}

TEST_CASE("report_csv layout") {
    const RatePanel prices = random_walk_panel(60, 220, 55);
    const SweepResult result = sweep_report(prices, SweepOptions{});
    const std::vector<std::string> lines = lines_of(report_csv(result));

    REQUIRE(lines.size() == 1 + 60 + 5);
    CHECK(lines[0] == "base,group,alpha,delta_alpha,rel_err_pct,lambda_max,zero_modes");
    CHECK(lines[1].rfind("AED,B,", 0) == 0);
    CHECK(lines[61].rfind("average,A*,", 0) == 0);
    CHECK(lines[65].rfind("average,all,", 0) == 0);
    for (std::size_t i = 1; i <= 60; ++i) {
        CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 6);
        CHECK(lines[i].back() == '0');  // zero_modes column: clean panels have none
    }
}

TEST_CASE("currencies outside the group config report a dash") {
    const RatePanel prices = random_walk_panel(61, 150, 9);  // 61st code is AAA
    const SweepResult result = sweep_report(prices, SweepOptions{});
    REQUIRE(result.outcomes.size() == 61);
    const std::string csv = report_csv(result);
    CHECK(csv.find("\nAAA,-,") != std::string::npos);
    CHECK_FALSE(result.outcomes.back().report.group.has_value());
    // Unassigned codes still contribute to the all-currency average.
    CHECK(result.averages.back().count == 61);
}

TEST_CASE("the shipped group config matches the built-in table byte for byte") {
    const std::string shipped = read_file(std::string(FXNET_SOURCE_DIR) + "/data/groups.json");
    CHECK(shipped == serialize_groups_json(default_groups()));

    const GroupConfig parsed = parse_groups_json(shipped);
    CHECK(parsed.assignment == default_groups().assignment);
    CHECK(parsed.members(LiquidityGroup::AStar).size() == 11);
    CHECK(parsed.members(LiquidityGroup::A).size() == 21);
    CHECK(parsed.members(LiquidityGroup::B).size() == 10);
    CHECK(parsed.members(LiquidityGroup::C).size() == 18);
}

TEST_CASE("despiking is reported per currency and keeps the sweep alive") {
    // 12 currencies keep every per-base tree large enough for a power fit
    // (tiny trees can occupy fewer than 3 distinct degrees).
    RatePanel prices = random_walk_panel(12, 300, 101);
    const std::size_t t_count = prices.date_count();
    // One wild quote: the jump in and out produces two removable returns.
    prices.cells[2 * t_count + 150] = *prices.cells[2 * t_count + 150] * 1000.0;

    SweepOptions options;
    const SweepResult result = sweep_report(prices, options);
    CHECK(result.failures.empty());
    CHECK(result.outcomes.size() == 12);
    CHECK(result.despike.total_removed == 2);
    REQUIRE(result.despike.removed_by_currency.size() == 1);
    CHECK(result.despike.removed_by_currency.at(prices.currencies[2]) == 2);
}

TEST_CASE("cross-base regression runs when enough bases clear the bound") {
    const RatePanel prices = one_factor_panel(20, 400, 0.5, 21, 0.25);
    const SweepResult result = sweep_report(prices, SweepOptions{});
    REQUIRE(result.outcomes.size() == 20);

    const std::optional<BetaFit> beta = fit_beta_over(result);
    REQUIRE(beta.has_value());
    CHECK(beta->lambda_rm == result.lambda_rm);

    const std::string scatter = scatter_csv(result, beta);
    const std::vector<std::string> lines = lines_of(scatter);
    CHECK(lines[0] == "base,group,lambda_max,alpha");
    CHECK(std::count_if(lines.begin(), lines.end(), [](const std::string& l) {
              return l.rfind("curve,,", 0) == 0;
          }) == 100);

    std::size_t points = 0;
    for (const BaseOutcome& o : result.outcomes)
        if (o.report.lambda_max > result.lambda_rm) ++points;
    const std::string summary = beta_csv(beta, points);
    const std::vector<std::string> summary_lines = lines_of(summary);
    REQUIRE(summary_lines.size() == 2);
    CHECK(summary_lines[0] == "prefactor,beta,lambda_rm,sse,points_used");
    CHECK(summary_lines[1].find(std::to_string(points)) != std::string::npos);
}

TEST_CASE("csv surfaces degrade gracefully without a regression") {
    const RatePanel prices = random_walk_panel(5, 200, 33);
    const SweepResult result = sweep_report(prices, SweepOptions{});
    const std::string scatter = scatter_csv(result, std::nullopt);
    CHECK(lines_of(scatter).size() == 1 + result.outcomes.size());
    CHECK(beta_csv(std::nullopt, 0) == "prefactor,beta,lambda_rm,sse,points_used\n");
}

TEST_CASE("sweep input validation") {
    const RatePanel tiny = random_walk_panel(2, 100, 1);
    CHECK_THROWS_WITH(sweep_report(tiny, SweepOptions{}),
                      Catch::Matchers::ContainsSubstring("at least 3 currencies"));

    SweepOptions bad;
    bad.despike_sigma = 0.0;
    CHECK_THROWS_WITH(sweep_report(random_walk_panel(4, 100, 1), bad),
                      Catch::Matchers::ContainsSubstring("positive"));
}
