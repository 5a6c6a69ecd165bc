#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fragnet/metrics.hpp"
#include "oracles.hpp"

using namespace fragnet;

namespace {

// n nodes, first half type_a, plus a caller-chosen edge list
NetworkState make_net(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    NetworkState net;
    net.types.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        net.types[i] = i < n / 2 ? NodeType::type_a : NodeType::type_b;
    net.adj.resize(n);
    for (const auto& [u, v] : edges)
        net.add_edge(u, v, 0, EdgeOrigin::primary);
    return net;
}

MetricSeries series_from(const std::vector<double>& xs) {
    MetricSeries s;
    s.provenance = "abm";
    for (std::size_t t = 0; t < xs.size(); ++t) {
        MetricRow row;
        row.t = static_cast<int>(t);
        row.x_hat = xs[t];
        s.rows.push_back(row);
    }
    return s;
}

MeanFieldParams asymmetric_params(Mode mode = Mode::base, double phi = 0.0) {
    MeanFieldParams p;
    p.f = HomophilyFunction::power(0.5);
    p.kernels = KernelTriple::weibull(1.01, 2.0, 5.0, 0.5);
    p.mode = mode;
    p.phi = phi;
    return p;
}

}  // namespace

TEST_CASE("cross-edge fraction counts dissimilar pairs") {
    // 4 nodes: 0,1 type_a and 2,3 type_b
    CHECK(cross_edge_fraction(make_net(4, {{0, 2}, {1, 3}})) == 1.0);
    CHECK(cross_edge_fraction(make_net(4, {{0, 1}, {2, 3}})) == 0.0);
    const auto mixed = make_net(8, {{0, 4}, {1, 5}, {2, 6},          // cross
                                    {0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}});
    CHECK(cross_edge_fraction(mixed) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("cross-edge fraction is undefined on an empty edge set") {
    CHECK_THROWS_AS((void)cross_edge_fraction(make_net(4, {})), std::domain_error);
}

TEST_CASE("fragmentation time is the first crossing") {
    const auto hit = fragmentation_time(series_from({0.5, 0.3, 0.009, 0.2}), 0.01);
    REQUIRE(hit.has_value());
    CHECK(*hit == 2);
    CHECK_FALSE(fragmentation_time(series_from({0.4, 0.4, 0.4}), 0.01).has_value());
    CHECK_THROWS_AS((void)fragmentation_time(series_from({0.5}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)fragmentation_time(series_from({0.5}), 1.0), std::invalid_argument);
}

TEST_CASE("empty-network rows cannot trigger fragmentation") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto hit = fragmentation_time(series_from({0.5, nan, 0.005}), 0.01);
    REQUIRE(hit.has_value());
    CHECK(*hit == 2);
}

TEST_CASE("fragmentation time of the integrator matches the recurrence") {
    // durable similar ties vs near-memoryless dissimilar ones drives x down
    const auto traj = run_trajectory(asymmetric_params(), 400);
    const auto series = to_metric_series(traj);

    oracle::params prm;
    prm.f = [](double x) { return std::pow(x, 0.5); };
    prm.lambda_d = 1.01;
    prm.lambda_b = 2.0;
    prm.lambda_s = 5.0;
    const auto ref = oracle::run(prm, 400);

    const auto lib = fragmentation_time(series, 0.3);
    const int want = oracle::first_passage(ref, 0.3);
    REQUIRE(want >= 0);
    REQUIRE(lib.has_value());
    CHECK(*lib == want);
    // the interior attractor sits well above 0.01: neither side crosses
    CHECK(oracle::first_passage(ref, 0.01) == -1);
    CHECK_FALSE(fragmentation_time(series, 0.01).has_value());
}

TEST_CASE("fragmentation time is monotone in the threshold") {
    // tighter thresholds are crossed later on a falling trajectory
    const auto series = to_metric_series(run_trajectory(asymmetric_params(), 400));
    int prev = 0;
    for (double eps : {0.45, 0.4, 0.35, 0.3, 0.25}) {
        const auto hit = fragmentation_time(series, eps);
        REQUIRE(hit.has_value());
        CHECK(*hit >= prev);
        prev = *hit;
    }
}

TEST_CASE("mean-field series conversion keeps stocks and x") {
    const auto traj = run_trajectory(asymmetric_params(), 5);
    const auto series = to_metric_series(traj);
    CHECK(series.provenance == "meanfield");
    REQUIRE(series.rows.size() == 6);
    for (std::size_t t = 0; t < series.rows.size(); ++t) {
        CHECK(series.rows[t].x_hat == traj.rows[t].x);
        CHECK(series.rows[t].n_similar == traj.rows[t].e_s);
        CHECK(series.rows[t].n_dissimilar == traj.rows[t].e_d);
        CHECK(series.rows[t].mean_degree == traj.rows[t].e_s + traj.rows[t].e_d);
    }
}

TEST_CASE("an ensemble equal to the reference has zero error") {
    const auto reference = to_metric_series(run_trajectory(asymmetric_params(), 20));
    std::vector<MetricSeries> ensemble{reference, reference, reference};
    const auto report = compare_to_meanfield(ensemble, reference);
    CHECK(report.rmse == 0.0);
    CHECK(report.coverage == 1.0);
    for (std::size_t t = 1; t < report.mean_x.size(); ++t) {
        CHECK(report.mean_x[t] == reference.rows[t].x_hat);
        CHECK(report.se_x[t] == 0.0);
    }
}

TEST_CASE("a constant offset shows up as the rmse") {
    const auto reference = to_metric_series(run_trajectory(asymmetric_params(), 20));
    auto shifted = reference;
    for (auto& row : shifted.rows)
        row.x_hat += 0.1;
    const std::vector<MetricSeries> ensemble{shifted, shifted};
    const auto report = compare_to_meanfield(ensemble, reference);
    CHECK(report.rmse == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("comparison rejects degenerate input") {
    const auto reference = to_metric_series(run_trajectory(asymmetric_params(), 10));
    CHECK_THROWS_AS((void)compare_to_meanfield({reference}, reference),
                    std::invalid_argument);
    auto shorter = reference;
    shorter.rows.pop_back();
    CHECK_THROWS_AS((void)compare_to_meanfield({reference, shorter}, reference),
                    std::invalid_argument);
}

TEST_CASE("comparison is invariant under replica order") {
    std::vector<MetricSeries> ensemble;
    for (int r = 0; r < 5; ++r) {
        auto s = to_metric_series(run_trajectory(asymmetric_params(), 15));
        for (auto& row : s.rows)
            row.x_hat += 0.01 * (r - 2);
        s.replica = r;
        ensemble.push_back(std::move(s));
    }
    const auto reference = to_metric_series(run_trajectory(asymmetric_params(), 15));
    const auto a = compare_to_meanfield(ensemble, reference);
    std::reverse(ensemble.begin(), ensemble.end());
    const auto b = compare_to_meanfield(ensemble, reference);
    std::rotate(ensemble.begin(), ensemble.begin() + 2, ensemble.end());
    const auto c = compare_to_meanfield(ensemble, reference);
    CHECK(a.rmse == b.rmse);
    CHECK(a.rmse == c.rmse);
    CHECK(a.coverage == b.coverage);
    CHECK(a.coverage == c.coverage);
    for (std::size_t t = 0; t < a.se_x.size(); ++t)
        CHECK(a.se_x[t] == b.se_x[t]);
}

TEST_CASE("identical series give a slowdown ratio of one") {
    const auto s = to_metric_series(run_trajectory(asymmetric_params(), 400));
    const auto r = slowdown_ratio(s, s, 0.3);
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio == 1.0);
    CHECK(r.status == "ok");
}

TEST_CASE("slowdown is undefined when a side never crosses") {
    const auto crossing = to_metric_series(run_trajectory(asymmetric_params(), 400));
    const auto flat = series_from(std::vector<double>(401, 0.5));
    CHECK_FALSE(slowdown_ratio(flat, crossing, 0.3).ratio.has_value());
    CHECK(slowdown_ratio(flat, crossing, 0.3).status ==
          "no slowdown measurable: base series never crosses eps");
    CHECK_FALSE(slowdown_ratio(crossing, flat, 0.3).ratio.has_value());
    CHECK(slowdown_ratio(crossing, flat, 0.3).status ==
          "no slowdown measurable: variant series never crosses eps");
}

TEST_CASE("weak ties slow fragmentation down") {
    const auto base = to_metric_series(run_trajectory(asymmetric_params(), 400));
    const auto weak =
        to_metric_series(run_trajectory(asymmetric_params(Mode::weak_ties), 400));
    const auto r = slowdown_ratio(base, weak, 0.3);
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio >= 1.0);
}

TEST_CASE("large-ensemble comparison reproduces the registered figures") {
    // registered from the first verified run of this exact configuration;
    // the deterministic seeds make the figures reproducible to the bit
    // note the low coverage: with 20 replicas of n=2000 the monte-carlo error
    // shrinks well below the finite-size gap to the deterministic limit, so
    // the +-3se band rarely contains the reference; rmse is the cross check
    constexpr double registered_rmse = 0.010593680368013805;
    constexpr double registered_coverage = 0.0049751243781094526;

    SimConfig cfg;
    cfg.n = 2000;
    cfg.horizon = 200;
    cfg.replicas = 20;
    cfg.seed = 1001;
    std::vector<MetricSeries> ensemble;
    for (int r = 0; r < cfg.replicas; ++r)
        ensemble.push_back(run_abm_replica(cfg, r).series);
    const auto reference =
        to_metric_series(run_trajectory(MeanFieldParams::from(cfg), cfg.horizon));
    const auto report = compare_to_meanfield(ensemble, reference);
    CHECK(report.rmse < 0.05);  // the two engines must track each other
    CHECK(report.rmse == doctest::Approx(registered_rmse).epsilon(1e-9));
    CHECK(report.coverage == doctest::Approx(registered_coverage).epsilon(1e-9));
}

TEST_CASE("rewiring slows fragmentation down") {
    const auto base = to_metric_series(run_trajectory(asymmetric_params(), 400));
    const auto bias =
        to_metric_series(run_trajectory(asymmetric_params(Mode::bias, 0.9), 400));
    const auto r = slowdown_ratio(base, bias, 0.3);
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio >= 1.0);
}
