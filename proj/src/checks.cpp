#include "fragnet/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fragnet/abm.hpp"
#include "fragnet/config_io.hpp"
#include "fragnet/csv.hpp"
#include "fragnet/meanfield.hpp"
#include "fragnet/metrics.hpp"
#include "fragnet/sweep.hpp"

namespace fragnet {

namespace {

bool same_value(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

CheckResult pass(std::string name, std::string detail = "") {
    return {std::move(name), true, std::move(detail)};
}

CheckResult failure(std::string name, std::string detail) {
    return {std::move(name), false, std::move(detail)};
}

CheckResult homophily_shape_grid() {
    for (const auto& f :
         {HomophilyFunction::power(0.5), HomophilyFunction::log_saturating(4.0)}) {
        const ValidationReport report = f.validate();
        if (!report.valid) {
            std::string detail;
            for (const auto& v : report.violations)
                detail += v + "; ";
            return failure("homophily-shape-grid", detail);
        }
    }
    return pass("homophily-shape-grid");
}

CheckResult homophily_derivative_fd() {
    const double h = 1e-6;
    for (const auto& f :
         {HomophilyFunction::power(0.5), HomophilyFunction::log_saturating(4.0)}) {
        for (int i = 1; i <= 100; ++i) {
            const double x = static_cast<double>(i) / 101.0;
            const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
            const double an = f.derivative(x);
            const double rel = std::abs(fd - an) / std::abs(an);
            if (!(rel <= 1e-6))
                return failure("homophily-derivative-fd",
                               "x=" + format_double(x) + " rel=" + format_double(rel));
        }
    }
    return pass("homophily-derivative-fd");
}

CheckResult kernel_retention_band() {
    const KernelTriple defaults;
    const DecayKernel stress = DecayKernel::weibull(10.0, 0.9);
    for (const DecayKernel* k :
         {&defaults.dissimilar(), &defaults.biased(), &defaults.similar(), &stress}) {
        const double floor = 1.0 - k->gamma();
        double prev = -1.0;
        for (std::int64_t a = 1; a <= 1000000; ++a) {
            const double v = k->retention(a);
            if (!(v >= floor && v < 1.0))
                return failure("kernel-retention-band", "lambda=" + format_double(k->lambda()) +
                                                           " a=" + std::to_string(a) +
                                                           " k=" + format_double(v));
            if (!(v > prev))
                return failure("kernel-retention-band",
                               "not increasing at a=" + std::to_string(a));
            prev = v;
        }
    }
    return pass("kernel-retention-band");
}

CheckResult kernel_triple_ordering() {
    const KernelTriple t;  // defaults have strictly ordered lambdas
    for (std::int64_t a = 1; a <= 10000; ++a) {
        const double d = t.dissimilar().retention(a);
        const double b = t.biased().retention(a);
        const double s = t.similar().retention(a);
        if (!(d < b && b < s))
            return failure("kernel-triple-ordering", "a=" + std::to_string(a));
    }
    return pass("kernel-triple-ordering");
}

CheckResult mf_p_plus_q_one() {
    const auto traj = run_trajectory(MeanFieldParams::from(SimConfig{}), 300);
    for (const auto& row : traj.rows) {
        if (row.t == 0)
            continue;
        if (row.p + row.q != 1.0)
            return failure("mf-p-plus-q-one", "t=" + std::to_string(row.t));
    }
    return pass("mf-p-plus-q-one");
}

CheckResult mf_stocks_nonnegative() {
    for (double phi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        SimConfig cfg;
        cfg.mode = Mode::bias;
        cfg.phi = phi;
        const auto traj = run_trajectory(MeanFieldParams::from(cfg), 200);
        for (const auto& row : traj.rows)
            if (!(row.e_s >= 0.0) || !(row.e_d >= 0.0))
                return failure("mf-stocks-nonnegative",
                               "phi=" + format_double(phi) + " t=" + std::to_string(row.t));
    }
    return pass("mf-stocks-nonnegative");
}

CheckResult mf_rewire_balance() {
    SimConfig cfg;
    cfg.mode = Mode::bias;
    cfg.phi = 0.9;
    const MeanFieldParams params = MeanFieldParams::from(cfg);
    MeanFieldState s = init_meanfield();
    for (int t = 0; t < 10; ++t)
        s = step_meanfield(std::move(s), params);

    // expected flows out of the similar cohorts, same order of accumulation
    const int t_new = s.t + 1;
    const DecayKernel& ks = params.kernels.similar();
    std::vector<std::pair<int, double>> expected;  // (birth, post-flow stock)
    double total_flow = 0.0;
    for (const auto& cohort : s.similar_cohorts) {
        const std::int64_t age = t_new - cohort.birth;
        const double raw = cfg.phi - ks.retention(age);
        const double flow = raw > 0.0 ? raw * cohort.stock : 0.0;
        total_flow += flow;
        expected.emplace_back(cohort.birth,
                              (cohort.stock - flow) *
                                  ks.survival_factor_unclamped(age, params.decay_mode));
    }
    const MeanFieldState s2 = step_meanfield(std::move(s), params);

    const Cohort* fresh = nullptr;
    for (const auto& cohort : s2.biased_cohorts)
        if (cohort.birth == s2.t)
            fresh = &cohort;
    if (total_flow > 0.0) {
        if (!fresh)
            return failure("mf-rewire-balance", "no rewired cohort created");
        if (std::abs(fresh->stock - total_flow) > 1e-15)
            return failure("mf-rewire-balance",
                           "moved " + format_double(total_flow) + " but cohort holds " +
                               format_double(fresh->stock));
    }
    for (const auto& [birth, stock] : expected) {
        for (const auto& cohort : s2.similar_cohorts)
            if (cohort.birth == birth && std::abs(cohort.stock - stock) > 1e-15)
                return failure("mf-rewire-balance", "cohort born " + std::to_string(birth) +
                                                        " off by " +
                                                        format_double(cohort.stock - stock));
    }
    return pass("mf-rewire-balance", "flow " + format_double(total_flow));
}

CheckResult mf_determinism() {
    const MeanFieldParams params = MeanFieldParams::from(SimConfig{});
    const auto a = run_trajectory(params, 200);
    const auto b = run_trajectory(params, 200);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        if (!same_value(ra.p, rb.p) || !same_value(ra.q, rb.q) || !same_value(ra.e_s, rb.e_s) ||
            !same_value(ra.e_d, rb.e_d) || !same_value(ra.x, rb.x) ||
            !same_value(ra.sensitivity, rb.sensitivity))
            return failure("mf-determinism", "t=" + std::to_string(ra.t));
    }
    return pass("mf-determinism");
}

// With an age-constant kernel the cohort ledger must reproduce the plain
// aggregate recursion E <- increment + c * E.
CheckResult mf_constant_kernel_recursion() {
    SimConfig cfg;
    cfg.kernels = KernelTriple::constant(0.4, 0.5, 0.6);
    const auto traj = run_trajectory(MeanFieldParams::from(cfg), 20);
    double es = 0.5, ed = 0.5;
    for (const auto& row : traj.rows) {
        if (row.t == 0)
            continue;
        const double p = cfg.f(ed / (es + ed));
        es = p + 0.6 * es;
        ed = (1.0 - p) + 0.4 * ed;
        if (std::abs(row.e_s - es) > 1e-12 || std::abs(row.e_d - ed) > 1e-12)
            return failure("mf-constant-kernel-recursion",
                           "t=" + std::to_string(row.t) + " dEs=" + format_double(row.e_s - es) +
                               " dEd=" + format_double(row.e_d - ed));
    }
    return pass("mf-constant-kernel-recursion");
}

CheckResult mf_base_sensitivity_identity() {
    SimConfig cfg;
    const auto traj = run_trajectory(MeanFieldParams::from(cfg), 50);
    for (std::size_t i = 2; i < traj.rows.size(); ++i) {
        const double fp = cfg.f.derivative(traj.rows[i - 1].x);
        const double recovered = traj.rows[i].sensitivity * static_cast<double>(traj.rows[i].t);
        if (std::abs(recovered - fp) > 1e-15 * std::abs(fp))
            return failure("mf-base-sensitivity-identity", "t=" + std::to_string(traj.rows[i].t));
    }
    return pass("mf-base-sensitivity-identity");
}

CheckResult mf_sensitivity_vanishes() {
    const auto traj = run_trajectory(MeanFieldParams::from(SimConfig{}), 4000);
    const double early = std::abs(traj.rows[10].sensitivity);
    const double late = std::abs(traj.rows.back().sensitivity);
    if (!(traj.rows.back().x > 0.01))
        return failure("mf-sensitivity-vanishes", "x collapsed, premise violated");
    if (!(late < 1e-3 && late < early))
        return failure("mf-sensitivity-vanishes",
                       "sens(10)=" + format_double(early) + " sens(4000)=" + format_double(late));
    return pass("mf-sensitivity-vanishes", "terminal " + format_double(late));
}

CheckResult mf_zero_phi_equals_base() {
    SimConfig bias_cfg;
    bias_cfg.mode = Mode::bias;
    bias_cfg.phi = 0.0;
    const auto bias = run_trajectory(MeanFieldParams::from(bias_cfg), 100);
    const auto base = run_trajectory(MeanFieldParams::from(SimConfig{}), 100);
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        if (std::abs(bias.rows[i].e_s - base.rows[i].e_s) > 1e-15 ||
            std::abs(bias.rows[i].e_d - base.rows[i].e_d) > 1e-15)
            return failure("mf-zero-phi-equals-base", "t=" + std::to_string(base.rows[i].t));
    }
    return pass("mf-zero-phi-equals-base");
}

CheckResult mf_weak_increment_dominates() {
    for (int i = 0; i <= 100; ++i) {
        const double p = static_cast<double>(i) / 100.0;
        const double q = 1.0 - p;
        const double wd = weak_dissimilar_increment(p, q);
        if (p * q == 0.0) {
            if (wd != q)
                return failure("mf-weak-increment-dominates", "boundary p=" + format_double(p));
        } else if (!(wd > q)) {
            return failure("mf-weak-increment-dominates", "p=" + format_double(p));
        }
    }
    return pass("mf-weak-increment-dominates");
}

struct EngineAudit {
    CheckResult integrity = pass("abm-graph-integrity");
    CheckResult conservation = pass("abm-step-conservation");
    CheckResult recount = pass("metrics-cross-fraction-recount");
};

EngineAudit audit_engine() {
    EngineAudit audit;
    for (int variant = 0; variant < 3; ++variant) {
        SimConfig cfg;
        cfg.n = 200;
        cfg.horizon = 60;
        cfg.seed = 7;
        if (variant == 1)
            cfg.mode = Mode::weak_ties;
        if (variant == 2) {
            cfg.mode = Mode::bias;
            cfg.phi = 0.8;
        }
        Rng rng(derived_seed(cfg.seed, 0));
        NetworkState net = init_network(cfg, rng);
        for (int t = 1; t <= cfg.horizon; ++t) {
            const auto before = static_cast<std::int64_t>(net.edges.size());
            const StepStats stats = abm_step(net, cfg, rng);
            const auto where = mode_name(cfg.mode) + " t=" + std::to_string(t);

            const IntegrityReport report = verify_network(net);
            if (!report.ok && audit.integrity.ok)
                audit.integrity = failure("abm-graph-integrity", where + ": " + report.problem);

            const auto after = static_cast<std::int64_t>(net.edges.size());
            if (after != before + stats.formed_total() - stats.decayed &&
                audit.conservation.ok)
                audit.conservation = failure("abm-step-conservation", where);

            std::int64_t dis = 0;
            for (const auto& rec : net.edges)
                dis += rec.similar ? 0 : 1;
            const double recounted =
                static_cast<double>(dis) / static_cast<double>(net.edges.size());
            if (!net.edges.empty() && recounted != cross_edge_fraction(net) &&
                audit.recount.ok)
                audit.recount = failure("metrics-cross-fraction-recount", where);
        }
    }
    return audit;
}

CheckResult abm_replica_determinism() {
    for (int variant = 0; variant < 2; ++variant) {
        SimConfig cfg;
        cfg.n = 200;
        cfg.horizon = 50;
        cfg.seed = 11;
        if (variant == 1) {
            cfg.mode = Mode::bias;
            cfg.phi = 0.7;
        }
        const ReplicaResult a = run_abm_replica(cfg, 0);
        const ReplicaResult b = run_abm_replica(cfg, 0);
        for (std::size_t i = 0; i < a.series.rows.size(); ++i) {
            const MetricRow& ra = a.series.rows[i];
            const MetricRow& rb = b.series.rows[i];
            if (!same_value(ra.x_hat, rb.x_hat) || !same_value(ra.mean_degree, rb.mean_degree) ||
                ra.n_similar != rb.n_similar || ra.n_dissimilar != rb.n_dissimilar ||
                ra.skipped != rb.skipped || ra.rewired != rb.rewired)
                return failure("abm-replica-determinism",
                               mode_name(cfg.mode) + " t=" + std::to_string(ra.t));
        }
    }
    return pass("abm-replica-determinism");
}

CheckResult abm_quartile_response() {
    SimConfig cfg;
    cfg.n = 2000;
    cfg.horizon = 50;
    cfg.seed = 99;
    Rng rng(derived_seed(cfg.seed, 0));
    NetworkState net = init_network(cfg, rng);
    std::int64_t top_sim = 0, top_n = 0, bot_sim = 0, bot_n = 0;
    std::vector<DrawRecord> draws;
    std::vector<double> xs;
    for (int t = 1; t <= cfg.horizon; ++t) {
        draws.clear();
        abm_step(net, cfg, rng, &draws);
        if (t <= cfg.horizon - 10)
            continue;
        xs.clear();
        for (const auto& d : draws)
            xs.push_back(d.x_i);
        std::sort(xs.begin(), xs.end());
        const double q1 = xs[xs.size() / 4];
        const double q3 = xs[(3 * xs.size()) / 4];
        for (const auto& d : draws) {
            if (d.x_i >= q3) {
                ++top_n;
                top_sim += d.want_similar ? 1 : 0;
            } else if (d.x_i <= q1) {
                ++bot_n;
                bot_sim += d.want_similar ? 1 : 0;
            }
        }
    }
    const double pt = static_cast<double>(top_sim) / static_cast<double>(top_n);
    const double pb = static_cast<double>(bot_sim) / static_cast<double>(bot_n);
    const double se = std::sqrt(pt * (1.0 - pt) / static_cast<double>(top_n) +
                                pb * (1.0 - pb) / static_cast<double>(bot_n));
    if (!(pt - pb > 3.0 * se))
        return failure("abm-quartile-response", "top " + format_double(pt) + " bottom " +
                                                    format_double(pb) + " se " +
                                                    format_double(se));
    return pass("abm-quartile-response",
                "top " + format_double(pt) + " vs bottom " + format_double(pb));
}

CheckResult abm_weak_adds_dissimilar() {
    double base_rate = 0.0, weak_rate = 0.0;
    for (int variant = 0; variant < 2; ++variant) {
        SimConfig cfg;
        cfg.n = 500;
        cfg.horizon = 50;
        cfg.seed = 21;
        cfg.replicas = 5;
        cfg.mode = variant == 0 ? Mode::base : Mode::weak_ties;
        std::int64_t formed = 0, steps = 0;
        for (const ReplicaResult& rep : run_abm(cfg)) {
            for (const StepStats& stats : rep.step_stats) {
                formed += stats.formed_dissimilar + stats.formed_secondary_dissimilar;
                ++steps;
            }
        }
        const double rate = static_cast<double>(formed) / static_cast<double>(steps);
        (variant == 0 ? base_rate : weak_rate) = rate;
    }
    if (!(weak_rate >= base_rate))
        return failure("abm-weak-adds-dissimilar", "base " + format_double(base_rate) +
                                                       " weak " + format_double(weak_rate));
    return pass("abm-weak-adds-dissimilar",
                "base " + format_double(base_rate) + " weak " + format_double(weak_rate));
}

CheckResult metrics_rmse_permutation() {
    SimConfig cfg;
    cfg.n = 100;
    cfg.horizon = 30;
    cfg.seed = 31;
    cfg.replicas = 6;
    std::vector<MetricSeries> ensemble;
    for (ReplicaResult& rep : run_abm(cfg))
        ensemble.push_back(std::move(rep.series));
    const MetricSeries reference = to_metric_series(run_trajectory(MeanFieldParams::from(cfg), 30));
    const ComparisonReport original = compare_to_meanfield(ensemble, reference);
    std::reverse(ensemble.begin(), ensemble.end());
    std::rotate(ensemble.begin(), ensemble.begin() + 1, ensemble.end());
    const ComparisonReport shuffled = compare_to_meanfield(ensemble, reference);
    if (original.rmse != shuffled.rmse || original.coverage != shuffled.coverage)
        return failure("metrics-rmse-permutation",
                       format_double(original.rmse) + " vs " + format_double(shuffled.rmse));
    return pass("metrics-rmse-permutation", "rmse " + format_double(original.rmse));
}

CheckResult metrics_fragtime_monotone() {
    SimConfig cfg;
    cfg.kernels = KernelTriple::weibull(1.01, 2.0, 5.0, 0.5);
    const MetricSeries series = to_metric_series(run_trajectory(MeanFieldParams::from(cfg), 400));
    double prev_eps = 0.0;
    std::int64_t prev_time = std::numeric_limits<std::int64_t>::max();
    bool any_finite = false;
    for (int i = 1; i <= 19; ++i) {
        const double eps = 0.05 * i;
        const auto ft = fragmentation_time(series, eps);
        const std::int64_t val = ft ? *ft : std::numeric_limits<std::int64_t>::max();
        any_finite = any_finite || ft.has_value();
        if (val > prev_time)
            return failure("metrics-fragtime-monotone",
                           "eps " + format_double(prev_eps) + " -> " + format_double(eps));
        prev_time = val;
        prev_eps = eps;
    }
    if (!any_finite)
        return failure("metrics-fragtime-monotone", "no eps ever crossed");
    return pass("metrics-fragtime-monotone");
}

const char* sweep_config_text =
    "run.n = 100\n"
    "run.horizon = 30\n"
    "run.seed = 5\n"
    "sweep.phi = 0,0.5\n"
    "sweep.mode = base,bias\n"
    "sweep.replicas = 2\n";

CheckResult io_worker_independence(const SweepOutcome& one, const SweepOutcome& four) {
    if (one.summary_csv != four.summary_csv)
        return failure("io-worker-independence", "summary differs");
    for (std::size_t c = 0; c < one.results.size(); ++c)
        if (abm_csv(one.results[c].replicas) != abm_csv(four.results[c].replicas))
            return failure("io-worker-independence", "cell " + std::to_string(c));
    return pass("io-worker-independence");
}

CheckResult io_csv_headers(const SweepOutcome& sweep) {
    const auto traj = run_trajectory(MeanFieldParams::from(SimConfig{}), 3);
    if (meanfield_csv(traj).rfind("t,p,q,E_s,E_d,x,sensitivity\n", 0) != 0)
        return failure("io-csv-headers", "meanfield header");
    if (abm_csv(sweep.results.front().replicas)
            .rfind("replica,t,x_hat,mean_degree,n_similar,n_dissimilar,skipped,rewired\n", 0) != 0)
        return failure("io-csv-headers", "abm header");
    if (sweep.summary_csv.rfind("cell,", 0) != 0 ||
        sweep.summary_csv.find(",frag_time,terminal_x,slowdown_ratio\n") == std::string::npos)
        return failure("io-csv-headers", "sweep header");
    return pass("io-csv-headers");
}

CheckResult io_manifest_roundtrip() {
    std::map<std::string, std::string> raw;
    raw["model.alpha"] = "0.7";
    raw["run.seed"] = "42";
    raw["run.n"] = "100";
    raw["run.horizon"] = "20";
    raw["run.replicas"] = "2";
    const ConfigDoc doc = build_config(raw);

    ManifestInfo info;
    info.master_seed = doc.sim.seed;
    for (int r = 0; r < doc.sim.replicas; ++r)
        info.replica_seeds.push_back(derived_seed(doc.sim.seed, static_cast<std::uint64_t>(r)));
    info.outputs.push_back("abm.csv");

    const std::string m1 = render_manifest(doc, info);
    const ConfigDoc doc2 = parse_config_text(m1);
    const std::string m2 = render_manifest(doc2, info);
    if (m1 != m2)
        return failure("io-manifest-roundtrip", "manifest text drifted");

    const auto run1 = run_abm(doc.sim);
    const auto run2 = run_abm(doc2.sim);
    for (std::size_t r = 0; r < run1.size(); ++r) {
        std::vector<MetricSeries> a{run1[r].series}, b{run2[r].series};
        if (abm_csv(a) != abm_csv(b))
            return failure("io-manifest-roundtrip", "replica " + std::to_string(r) + " differs");
    }
    return pass("io-manifest-roundtrip");
}

}  // namespace

std::vector<CheckResult> run_all_checks() {
    std::vector<CheckResult> results;
    results.push_back(homophily_shape_grid());
    results.push_back(homophily_derivative_fd());
    results.push_back(kernel_retention_band());
    results.push_back(kernel_triple_ordering());
    results.push_back(mf_p_plus_q_one());
    results.push_back(mf_stocks_nonnegative());
    results.push_back(mf_rewire_balance());
    results.push_back(mf_determinism());
    results.push_back(mf_constant_kernel_recursion());
    results.push_back(mf_base_sensitivity_identity());
    results.push_back(mf_sensitivity_vanishes());
    results.push_back(mf_zero_phi_equals_base());
    results.push_back(mf_weak_increment_dominates());
    EngineAudit audit = audit_engine();
    results.push_back(std::move(audit.integrity));
    results.push_back(std::move(audit.conservation));
    results.push_back(abm_replica_determinism());
    results.push_back(abm_quartile_response());
    results.push_back(abm_weak_adds_dissimilar());
    results.push_back(std::move(audit.recount));
    results.push_back(metrics_rmse_permutation());
    results.push_back(metrics_fragtime_monotone());
    const ConfigDoc sweep_doc = parse_config_text(sweep_config_text);
    const SweepOutcome sweep_one = run_sweep(sweep_doc, 1);
    const SweepOutcome sweep_four = run_sweep(sweep_doc, 4);
    results.push_back(io_csv_headers(sweep_one));
    results.push_back(io_worker_independence(sweep_one, sweep_four));
    results.push_back(io_manifest_roundtrip());
    return results;
}

}  // namespace fragnet
