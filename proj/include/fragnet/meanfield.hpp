#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fragnet/sim_config.hpp"

namespace fragnet {

/// One formation cohort: ties created at step `birth`, current expected
/// stock per node. In cohort decay mode the per-step factor telescopes so
/// that stock == original_increment * k(age) exactly.
struct Cohort {
    int birth = 0;
    double stock = 0.0;
};

/// Expected per-node state of the recurrence. p/q are the similar and
/// dissimilar formation probabilities of the step that produced this state;
/// they are unset (NaN) at t=0 where no preferential draw has happened yet.
struct MeanFieldState {
    int t = 0;
    double e_s = 0.5;           // expected similar ties per node
    double e_d = 0.5;           // expected dissimilar ties per node (incl. rewired)
    double p = 0.0, q = 0.0;    // NaN at t=0
    double x_arg = 0.0;         // composition x_{t-1} the draw was based on (NaN at t=0)
    double p_prev = 0.0;        // p_{t-1} (NaN for t<2)
    std::int64_t clamped_flows = 0;  // rewiring flows clamped at zero during this step

    std::vector<Cohort> similar_cohorts, dissimilar_cohorts, biased_cohorts;

    double degree() const { return e_s + e_d; }
    double x() const { return e_d / (e_s + e_d); }
};

struct MeanFieldParams {
    HomophilyFunction f;
    KernelTriple kernels;
    Mode mode = Mode::base;
    DecayMode decay_mode = DecayMode::per_step;
    double phi = 0.0;

    static MeanFieldParams from(const SimConfig& cfg);
};

/// t=0 state: every node holds one tie, half expected similar, half
/// dissimilar, so x_0 = 1/2.
MeanFieldState init_meanfield();

/// Advance one step:
///   1. p_t = f(x_{t-1}), q_t = 1 - p_t
///   2. (bias) move max(0, phi - k_s(age)) of each existing similar cohort
///      into a fresh rewired cohort; negative flows clamp to zero, counted
///   3. age and decay every existing cohort per the decay mode
///   4. append the step's formation cohorts (weak-ties mode adds the
///      secondary-tie terms)
/// Throws std::invalid_argument for phi outside [0,1] in bias mode.
MeanFieldState step_meanfield(MeanFieldState state, const MeanFieldParams& params);

/// Expected secondary+primary dissimilar increment q + 2pq and its similar
/// counterpart p + p^2 + q^2 (each node also picks up one two-hop tie).
double weak_dissimilar_increment(double p, double q);
double weak_similar_increment(double p, double q);

struct TrajectoryRow {
    int t = 0;
    double p = 0.0, q = 0.0;
    double e_s = 0.0, e_d = 0.0;
    double x = 0.0;
    double sensitivity = 0.0;   // NaN for t < 2
};

struct MeanFieldTrajectory {
    std::vector<TrajectoryRow> rows;       // horizon + 1 rows, t = 0..horizon
    std::int64_t clamped_flows_total = 0;
};

/// Deterministic integration over `horizon` steps. Retention values are
/// cached per age so long runs stay O(T^2) multiplies, not O(T^2) pow calls;
/// results are bit-identical to repeated step_meanfield application.
MeanFieldTrajectory run_trajectory(const MeanFieldParams& params, int horizon);

/// d p_t / d q_{t-1} of the one-step map, in the t-denominator normalization:
///   base:      f'(x_{t-1}) / t
///   weak_ties: f'(x_{t-1}) (1 + p_{t-1}) / t
///   bias:      f'(x_{t-1}) (1 - (phi - k_s(t))) / (t - 1)
/// Requires t >= 2 (throws std::invalid_argument otherwise).
double sensitivity(const MeanFieldState& state, const MeanFieldParams& params);

struct ConvergenceReport {
    std::optional<int> fragmentation_step;  // first t with x_t < eps
    bool p_nondecreasing = true;            // over t >= 1
    int p_direction_changes = 0;
    bool plateau = false;                   // x flat over the last 10 steps
    double terminal_x = 0.0;
    double terminal_sensitivity = 0.0;      // NaN if horizon < 2
};

ConvergenceReport convergence_diagnostics(const MeanFieldTrajectory& traj, double eps);

/// Inputs to the closed-form long-run expected dissimilar stock. t_star is
/// the nominal steady-state step (> 2), q_star the stationary dissimilar
/// formation probability, phi_star the stationary rewiring budget.
struct SteadyStateInput {
    double t_star = 10.0;
    double q_star = 0.2;
    double phi_star = 1.0;
};

struct SteadyStateResult {
    double e_d = 0.0;       // (1 + t*) q* at phi* = 1
    double ratio = 0.0;     // q* / p*
    bool divergent = false; // negative expected stock (phi* < 1 regime)
};

/// Literal evaluation of the long-run expression
///   E[E_d] = q* + t* q* + t*(t*-1)(phi*-1)(t*-2-q*) + (phi*-1)(t*-1-q*).
/// Values can be negative for phi* < 1; that is reported, not clamped.
SteadyStateResult steady_state_ed(const SteadyStateInput& in);

}  // namespace fragnet
