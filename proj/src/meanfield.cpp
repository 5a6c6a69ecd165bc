#include "fragnet/meanfield.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace fragnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Survival factors and retention values indexed by age, grown lazily.
// Purely a cache: values are identical to direct kernel evaluation.
struct StepCaches {
    std::vector<double> surv_s, surv_d, surv_b, ret_s;

    static void ensure(std::vector<double>& v, std::int64_t max_age, const DecayKernel& k,
                       const DecayMode* mode) {
        if (v.empty())
            v.push_back(kNaN);  // age 0 unused
        while (static_cast<std::int64_t>(v.size()) <= max_age) {
            const auto age = static_cast<std::int64_t>(v.size());
            v.push_back(mode ? k.survival_factor_unclamped(age, *mode) : k.retention(age));
        }
    }

    void prepare(const MeanFieldParams& params, std::int64_t max_age) {
        ensure(surv_s, max_age, params.kernels.similar(), &params.decay_mode);
        ensure(surv_d, max_age, params.kernels.dissimilar(), &params.decay_mode);
        ensure(surv_b, max_age, params.kernels.biased(), &params.decay_mode);
        ensure(ret_s, max_age, params.kernels.similar(), nullptr);
    }
};

MeanFieldState step_impl(MeanFieldState s, const MeanFieldParams& params, StepCaches* caches) {
    if (params.mode == Mode::bias && !(params.phi >= 0.0 && params.phi <= 1.0))
        throw std::invalid_argument(
            "meanfield: phi must lie in [0,1]; rewiring more similar ties than exist is "
            "contradictory");

    const int t_new = s.t + 1;
    const double x_prev = s.x();
    const double p_t = params.f(x_prev);
    const double q_t = 1.0 - p_t;

    if (caches)
        caches->prepare(params, t_new);

    MeanFieldState out = std::move(s);
    out.p_prev = out.p;
    out.t = t_new;
    out.x_arg = x_prev;
    out.p = p_t;
    out.q = q_t;
    out.clamped_flows = 0;

    // rewiring of pre-existing similar cohorts (bias mode); flow moves into a
    // fresh rewired cohort so total degree is conserved by this phase
    double total_flow = 0.0;
    if (params.mode == Mode::bias) {
        const DecayKernel& ks = params.kernels.similar();
        for (auto& cohort : out.similar_cohorts) {
            const std::int64_t age = t_new - cohort.birth;
            const double ks_a =
                caches ? caches->ret_s[static_cast<std::size_t>(age)] : ks.retention(age);
            const double raw = params.phi - ks_a;
            if (raw > 0.0) {
                const double flow = raw * cohort.stock;
                cohort.stock -= flow;
                total_flow += flow;
            } else if (cohort.stock > 0.0) {
                ++out.clamped_flows;  // literal flow would be negative
            }
        }
    }

    // decay of everything formed before this step
    const auto decay = [&](std::vector<Cohort>& cohorts, EdgeClass cls,
                           const std::vector<double>* cached) {
        const DecayKernel& k = params.kernels.for_class(cls);
        for (auto& cohort : cohorts) {
            const std::int64_t age = t_new - cohort.birth;
            const double factor = cached ? (*cached)[static_cast<std::size_t>(age)]
                                         : k.survival_factor_unclamped(age, params.decay_mode);
            cohort.stock *= factor;
        }
    };
    decay(out.similar_cohorts, EdgeClass::similar, caches ? &caches->surv_s : nullptr);
    decay(out.dissimilar_cohorts, EdgeClass::dissimilar, caches ? &caches->surv_d : nullptr);
    decay(out.biased_cohorts, EdgeClass::biased, caches ? &caches->surv_b : nullptr);

    // this step's formation cohorts enter undecayed
    double s_inc = p_t;
    double d_inc = q_t;
    if (params.mode == Mode::weak_ties) {
        d_inc = weak_dissimilar_increment(p_t, q_t);
        s_inc = weak_similar_increment(p_t, q_t);
    }
    out.similar_cohorts.push_back({t_new, s_inc});
    out.dissimilar_cohorts.push_back({t_new, d_inc});
    if (total_flow > 0.0)
        out.biased_cohorts.push_back({t_new, total_flow});

    double es = 0.0;
    for (const auto& cohort : out.similar_cohorts)
        es += cohort.stock;
    double ed = 0.0;
    for (const auto& cohort : out.dissimilar_cohorts)
        ed += cohort.stock;
    for (const auto& cohort : out.biased_cohorts)
        ed += cohort.stock;
    out.e_s = es;
    out.e_d = ed;
    return out;
}

}  // namespace

MeanFieldParams MeanFieldParams::from(const SimConfig& cfg) {
    return {cfg.f, cfg.kernels, cfg.mode, cfg.decay_mode, cfg.phi};
}

MeanFieldState init_meanfield() {
    MeanFieldState s;
    s.t = 0;
    s.e_s = 0.5;
    s.e_d = 0.5;
    s.p = kNaN;
    s.q = kNaN;
    s.x_arg = kNaN;
    s.p_prev = kNaN;
    s.similar_cohorts.push_back({0, 0.5});
    s.dissimilar_cohorts.push_back({0, 0.5});
    return s;
}

MeanFieldState step_meanfield(MeanFieldState state, const MeanFieldParams& params) {
    return step_impl(std::move(state), params, nullptr);
}

double weak_dissimilar_increment(double p, double q) { return q + 2.0 * p * q; }

double weak_similar_increment(double p, double q) { return p + p * p + q * q; }

MeanFieldTrajectory run_trajectory(const MeanFieldParams& params, int horizon) {
    if (horizon < 0)
        throw std::invalid_argument("meanfield: horizon must be >= 0");

    MeanFieldTrajectory traj;
    traj.rows.reserve(static_cast<std::size_t>(horizon) + 1);
    StepCaches caches;

    MeanFieldState state = init_meanfield();
    const auto emit = [&](const MeanFieldState& s) {
        TrajectoryRow row;
        row.t = s.t;
        row.p = s.p;
        row.q = s.q;
        row.e_s = s.e_s;
        row.e_d = s.e_d;
        row.x = s.x();
        row.sensitivity = s.t >= 2 ? sensitivity(s, params) : kNaN;
        traj.rows.push_back(row);
    };
    emit(state);
    for (int t = 1; t <= horizon; ++t) {
        state = step_impl(std::move(state), params, &caches);
        traj.clamped_flows_total += state.clamped_flows;
        emit(state);
    }
    return traj;
}

double sensitivity(const MeanFieldState& state, const MeanFieldParams& params) {
    if (state.t < 2)
        throw std::invalid_argument("meanfield: sensitivity defined for t >= 2 only");
    const double fp = params.f.derivative(state.x_arg);
    const double t = static_cast<double>(state.t);
    switch (params.mode) {
    case Mode::base:
        return fp / t;
    case Mode::weak_ties:
        return fp * (1.0 + state.p_prev) / t;
    case Mode::bias: {
        const double ks_t = params.kernels.similar().retention(state.t);
        return fp * (1.0 - (params.phi - ks_t)) / (t - 1.0);
    }
    }
    return kNaN;  // unreachable
}

ConvergenceReport convergence_diagnostics(const MeanFieldTrajectory& traj, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("meanfield: eps must lie in (0,1)");
    if (traj.rows.empty())
        throw std::invalid_argument("meanfield: empty trajectory");

    ConvergenceReport report;
    for (const auto& row : traj.rows) {
        if (row.x < eps) {
            report.fragmentation_step = row.t;
            break;
        }
    }
    for (std::size_t i = 2; i < traj.rows.size(); ++i) {
        const double prev = traj.rows[i - 1].p - traj.rows[i - 2].p;
        const double cur = traj.rows[i].p - traj.rows[i - 1].p;
        if (cur < 0.0)
            report.p_nondecreasing = false;
        if ((prev > 0.0 && cur < 0.0) || (prev < 0.0 && cur > 0.0))
            ++report.p_direction_changes;
    }
    if (traj.rows.size() >= 10) {
        double lo = traj.rows.back().x, hi = lo;
        for (std::size_t i = traj.rows.size() - 10; i < traj.rows.size(); ++i) {
            lo = std::min(lo, traj.rows[i].x);
            hi = std::max(hi, traj.rows[i].x);
        }
        report.plateau = (hi - lo) < 1e-9;
    }
    report.terminal_x = traj.rows.back().x;
    report.terminal_sensitivity = traj.rows.back().sensitivity;
    return report;
}

SteadyStateResult steady_state_ed(const SteadyStateInput& in) {
    if (!(in.t_star > 2.0))
        throw std::invalid_argument("steady state: t_star must be > 2");
    if (!(in.q_star >= 0.0 && in.q_star <= 1.0))
        throw std::invalid_argument("steady state: q_star must lie in [0,1]");
    if (!(in.phi_star >= 0.0 && in.phi_star <= 1.0))
        throw std::invalid_argument(
            "steady state: phi_star must lie in [0,1]; rewiring more similar ties than exist "
            "is contradictory");

    const double t = in.t_star, q = in.q_star, phi = in.phi_star;
    SteadyStateResult r;
    if (phi == 1.0) {
        // every (phi - 1) term vanishes; evaluating the reduced form keeps
        // the identity e_d == (1 + t*) q* exact in floating point
        r.e_d = (1.0 + t) * q;
    } else {
        r.e_d = q + t * q + t * (t - 1.0) * (phi - 1.0) * (t - 2.0 - q) +
                (phi - 1.0) * (t - 1.0 - q);
    }
    r.ratio = q / (1.0 - q);  // +inf at q_star = 1
    r.divergent = r.e_d < 0.0;
    return r;
}

}  // namespace fragnet
