// Release gate: one line per criterion, nonzero exit if any fails.
// Tolerances are pinned next to each criterion body.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fragnet/abm.hpp"
#include "fragnet/checks.hpp"
#include "fragnet/meanfield.hpp"
#include "fragnet/metrics.hpp"
#include "oracles.hpp"

using namespace fragnet;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

Outcome pass(std::string detail = "") { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

// registered reference values for criterion 7 (asymmetric kernels
// lambda = 1.01/2/5, gamma = 0.5, eps = 0.3, horizon 600); frozen from the
// first verified run and required to reproduce exactly thereafter.
// -1 marks a budget that holds x above eps for the whole horizon; at full
// budget every similar tie that would decay is recycled, so x levels off
// near 0.5 and the series never crosses
constexpr int kFrozenFragTimes[4] = {6, 6, 36, -1};
constexpr double kFrozenTerminalXFullBudget = 0.50459652745613381;

MeanFieldParams make_params(Mode mode, double phi, const KernelTriple& kernels) {
    MeanFieldParams p;
    p.f = HomophilyFunction::power(0.5);
    p.kernels = kernels;
    p.mode = mode;
    p.phi = phi;
    return p;
}

KernelTriple default_kernels() { return KernelTriple::weibull(1.2, 1.5, 2.0, 0.5); }
KernelTriple asymmetric_kernels() { return KernelTriple::weibull(1.01, 2.0, 5.0, 0.5); }

Outcome criterion_recurrence_oracle() {
    constexpr double tol = 1e-12;
    const auto traj = run_trajectory(make_params(Mode::base, 0.0, default_kernels()), 10);
    oracle::params prm;
    prm.f = [](double x) { return std::pow(x, 0.5); };
    const auto ref = oracle::run(prm, 10);
    double worst = 0.0;
    for (std::size_t t = 1; t <= 10; ++t) {
        const auto& row = traj.rows[t];
        worst = std::max(worst, std::abs(row.p - ref.p[t]));
        worst = std::max(worst, std::abs(row.e_s - ref.e_s[t]));
        worst = std::max(worst, std::abs(row.e_d - ref.e_d[t]));
        worst = std::max(worst, std::abs(row.x - ref.x[t]));
    }
    if (worst > tol)
        return fail("max deviation " + std::to_string(worst) + " exceeds 1e-12");
    char buf[64];
    std::snprintf(buf, sizeof buf, "max deviation %.2e", worst);
    return pass(buf);
}

Outcome criterion_fixed_point() {
    constexpr double tol = 1e-6;
    const auto params = make_params(Mode::base, 0.0, KernelTriple::constant(0.5, 0.5, 0.5));
    const auto traj = run_trajectory(params, 10000);
    const double target = (3.0 - std::sqrt(5.0)) / 2.0;
    const double diff = std::abs(traj.rows.back().x - target);
    if (diff > tol)
        return fail("|x - (3-sqrt(5))/2| = " + std::to_string(diff) + " exceeds 1e-6");
    const double bisect = oracle::fixed_point_x([](double x) { return std::sqrt(x); });
    if (std::abs(traj.rows.back().x - bisect) > tol)
        return fail("terminal x disagrees with the bisection fixed point");
    char buf[64];
    std::snprintf(buf, sizeof buf, "|x - x*| = %.2e", diff);
    return pass(buf);
}

Outcome criterion_steady_state() {
    std::mt19937_64 eng(77);
    std::uniform_real_distribution<double> uq(0.01, 0.99);
    std::uniform_int_distribution<int> ut(10, 1000);
    for (int i = 0; i < 100; ++i) {
        const double t = static_cast<double>(ut(eng));
        const double q = uq(eng);
        const auto full = steady_state_ed({t, q, 1.0});
        if (full.e_d != (1.0 + t) * q)
            return fail("phi*=1 does not reduce to (1+t*)q* exactly at t*=" + std::to_string(t));
        if (full.divergent)
            return fail("phi*=1 flagged divergent");
        // independent evaluation of the literal expression, summed back to front
        for (double phi : {0.0, 0.25, 0.5, 0.75, 0.9}) {
            const auto r = steady_state_ed({t, q, phi});
            const double expect = (phi - 1.0) * (t - 1.0 - q) +
                                  t * (t - 1.0) * (phi - 1.0) * (t - 2.0 - q) + t * q + q;
            if (std::abs(r.e_d - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
                return fail("literal evaluation drifted at phi*=" + std::to_string(phi));
            if (!(r.e_d < 0.0) || !r.divergent)
                return fail("phi*<1 regime not negative/divergent at phi*=" + std::to_string(phi));
        }
    }
    return pass("100 draws, 5 budget levels each");
}

Outcome criterion_sensitivity() {
    constexpr double rel_tol = 1e-4;  // finite difference vs closed form
    constexpr double delta = 1e-6;
    const auto kernels = default_kernels();
    const HomophilyFunction f = HomophilyFunction::power(0.5);
    std::mt19937_64 eng(4242);
    std::uniform_real_distribution<double> ux(0.05, 0.95);
    std::uniform_real_distribution<double> up(0.0, 1.0);
    std::uniform_int_distribution<int> ut(3, 500);

    for (int i = 0; i < 50; ++i) {
        MeanFieldState s;
        s.t = ut(eng);
        s.x_arg = ux(eng);
        s.p_prev = up(eng);
        const double phi = up(eng);
        const double t = static_cast<double>(s.t);

        // a perturbation of the previous dissimilar formation shifts x by the
        // documented attribution factor over the normalizing denominator
        // before the response curve is applied; differentiate that map
        struct Case {
            Mode mode;
            double factor;
            double denom;
        };
        const double ks_t = kernels.similar().retention(s.t);
        const Case cases[] = {
            {Mode::base, 1.0, t},
            {Mode::weak_ties, 1.0 + s.p_prev, t},
            {Mode::bias, 1.0 - (phi - ks_t), t - 1.0},
        };
        for (const auto& c : cases) {
            const auto map = [&](double d) { return f(s.x_arg + d * c.factor / c.denom); };
            const double fd = (map(delta) - map(-delta)) / (2.0 * delta);
            const double analytic = sensitivity(s, make_params(c.mode, phi, kernels));
            if (std::abs(fd - analytic) > rel_tol * std::abs(analytic))
                return fail("finite difference disagrees at t=" + std::to_string(s.t) +
                            " mode=" + std::to_string(static_cast<int>(c.mode)));
        }

        // the weak-tie factor must be exactly (1 + p_prev) times base
        const double base = sensitivity(s, make_params(Mode::base, 0.0, kernels));
        const double weak = sensitivity(s, make_params(Mode::weak_ties, 0.0, kernels));
        if (std::abs(weak - (1.0 + s.p_prev) * base) > 1e-15 * std::abs(weak))
            return fail("weak/base ratio deviates from 1 + p_prev");
    }

    // asymptotic: at large t the rewiring factor reduces to phi * f' / (t - 1)
    MeanFieldState s;
    s.t = 10000;
    s.x_arg = 0.25;
    const double got = sensitivity(s, make_params(Mode::bias, 1.0, kernels));
    const double asymptotic = f.derivative(0.25) / (10000.0 - 1.0);
    if (std::abs(got - asymptotic) > 0.01 * asymptotic)
        return fail("large-t rewiring sensitivity off by more than 1%");
    return pass("150 finite-difference probes within 1e-4");
}

Outcome criterion_abm_first_step() {
    SimConfig cfg;
    cfg.n = 2000;
    cfg.horizon = 50;
    cfg.replicas = 20;
    cfg.seed = 2025;

    std::vector<double> deviations;
    for (int r = 0; r < cfg.replicas; ++r) {
        const auto result = run_abm_replica(cfg, r);
        const auto& stats = result.step_stats.front();
        const double rate = static_cast<double>(stats.drawn_similar) /
                            static_cast<double>(stats.drawn_total);
        deviations.push_back(rate - cfg.f(result.x_hat_0));
    }
    double mean = 0.0;
    for (double d : deviations)
        mean += d;
    mean /= static_cast<double>(deviations.size());
    double var = 0.0;
    for (double d : deviations)
        var += (d - mean) * (d - mean);
    var /= static_cast<double>(deviations.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(deviations.size()));
    if (std::abs(mean) > 3.0 * se)
        return fail("mean deviation " + std::to_string(mean) + " outside 3 SE (" +
                    std::to_string(3.0 * se) + ")");

    // structural audit along one replica, and bitwise replay of another
    Rng rng(derived_seed(cfg.seed, 0));
    NetworkState net = init_network(cfg, rng);
    for (int t = 0; t < cfg.horizon; ++t) {
        (void)abm_step(net, cfg, rng);
        const auto report = verify_network(net);
        if (!report.ok)
            return fail("integrity lost at step " + std::to_string(t + 1) + ": " +
                        report.problem);
    }
    const auto once = run_abm_replica(cfg, 3);
    const auto twice = run_abm_replica(cfg, 3);
    for (std::size_t t = 0; t < once.series.rows.size(); ++t)
        if (once.series.rows[t].x_hat != twice.series.rows[t].x_hat)
            return fail("replica replay diverged at t=" + std::to_string(t));
    char buf[96];
    std::snprintf(buf, sizeof buf, "20 replicas, |mean dev| %.2e <= 3 SE %.2e", std::abs(mean),
                  3.0 * se);
    return pass(buf);
}

Outcome criterion_weak_slowdown() {
    constexpr double eps = 0.3;
    const auto kernels = asymmetric_kernels();
    const auto base =
        to_metric_series(run_trajectory(make_params(Mode::base, 0.0, kernels), 400));
    const auto weak =
        to_metric_series(run_trajectory(make_params(Mode::weak_ties, 0.0, kernels), 400));
    const auto slow = slowdown_ratio(base, weak, eps);
    if (!slow.ratio)
        return fail("ratio undefined: " + slow.status);
    if (*slow.ratio < 1.0)
        return fail("weak ties sped fragmentation up, ratio " + std::to_string(*slow.ratio));
    return pass("ratio " + std::to_string(*slow.ratio));
}

Outcome criterion_bias_delay() {
    constexpr double eps = 0.3;
    constexpr double phis[4] = {0.0, 0.5, 0.9, 1.0};
    const auto kernels = asymmetric_kernels();
    int frag[4] = {0, 0, 0, 0};
    double terminal_full = 0.0;
    for (int i = 0; i < 4; ++i) {
        const auto traj = run_trajectory(make_params(Mode::bias, phis[i], kernels), 600);
        const auto hit = fragmentation_time(to_metric_series(traj), eps);
        frag[i] = hit ? *hit : -1;  // -1: stayed above eps for the whole run
        if (i == 3)
            terminal_full = traj.rows.back().x;
    }
    // monotone non-decreasing with "never" counting as infinity
    for (int i = 1; i < 4; ++i) {
        if (frag[i - 1] == -1 && frag[i] != -1)
            return fail("phi=" + std::to_string(phis[i]) +
                        " fragmented although the smaller budget never did");
        if (frag[i] != -1 && frag[i] < frag[i - 1])
            return fail("fragmentation time decreased between phi=" +
                        std::to_string(phis[i - 1]) + " and phi=" + std::to_string(phis[i]));
    }
    for (int i = 0; i < 4; ++i)
        if (frag[i] != kFrozenFragTimes[i])
            return fail("registered fragmentation time changed at phi=" +
                        std::to_string(phis[i]) + ": got " + std::to_string(frag[i]) +
                        ", registered " + std::to_string(kFrozenFragTimes[i]));
    if (std::abs(terminal_full - kFrozenTerminalXFullBudget) > 1e-9)
        return fail("registered terminal x at phi=1 changed: got " +
                    std::to_string(terminal_full));
    const auto show = [](int t) { return t < 0 ? std::string("never") : std::to_string(t); };
    return pass("delays " + show(frag[0]) + "/" + show(frag[1]) + "/" + show(frag[2]) + "/" +
                show(frag[3]) + " within 600 steps; full budget levels off at x " +
                std::to_string(terminal_full).substr(0, 6));
}

Outcome criterion_invariants() {
    const auto results = run_all_checks();
    std::string failing;
    for (const auto& r : results)
        if (!r.ok)
            failing += (failing.empty() ? "" : ", ") + r.name + " (" + r.detail + ")";
    if (!failing.empty())
        return fail("failing checks: " + failing);
    return pass(std::to_string(results.size()) + " checks");
}

struct Criterion {
    int id;
    const char* summary;
    double budget_seconds;
    std::function<Outcome()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "deterministic recurrence matches an independent 10-step oracle", 1.0,
         criterion_recurrence_oracle},
        {2, "identical kernels settle on the homophily fixed point", 1.0, criterion_fixed_point},
        {3, "closed-form steady state: exact at full budget, divergent below", 1.0,
         criterion_steady_state},
        {4, "sensitivity formulas agree with finite differences in all modes", 5.0,
         criterion_sensitivity},
        {5, "agent ensemble reproduces the response rate, stays sound and replays", 120.0,
         criterion_abm_first_step},
        {6, "weak ties delay fragmentation in the deterministic model", 60.0,
         criterion_weak_slowdown},
        {7, "rewiring delays fragmentation monotonically in the budget", 60.0,
         criterion_bias_delay},
        {8, "full invariant suite passes", 300.0, criterion_invariants},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.body();
        } catch (const std::exception& ex) {
            outcome = fail(std::string("exception: ") + ex.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (outcome.ok && elapsed > c.budget_seconds)
            outcome = fail("runtime " + std::to_string(elapsed) + "s over budget " +
                           std::to_string(c.budget_seconds) + "s");
        std::printf("[%s] criterion %d: %s%s%s (%.2fs)\n", outcome.ok ? "PASS" : "FAIL", c.id,
                    c.summary, outcome.detail.empty() ? "" : " - ", outcome.detail.c_str(),
                    elapsed);
        if (!outcome.ok)
            ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
