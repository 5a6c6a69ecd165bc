#pragma once

#include <cstdint>

namespace fragnet {

/// Tie classification used for kernel lookup. Rewired ties get their own
/// kernel (k_b) independent of their endpoint classes.
enum class EdgeClass { similar, dissimilar, biased };

/// How k(age) is read when ties persist across steps:
///   per_step - k(age) is the probability that a tie of that age survives the
///              current step (survival compounds over a tie's lifetime)
///   cohort   - k(age) is the total retained fraction of a formation cohort,
///              applied to the cohort's original size
enum class DecayMode { per_step, cohort };

enum class KernelFamily { weibull, constant };

/// Retention kernel for tie persistence.
///   weibull:  k(a) = 1 - lambda^(-gamma) * gamma * a^(gamma-1),
///             lambda >= 1, gamma in (0,1); increasing in age, k -> 1
///   constant: k(a) = c for every age, c in [0,1)
class DecayKernel {
public:
    static DecayKernel weibull(double lambda, double gamma);
    static DecayKernel constant(double c);

    /// k(age) for integer age >= 1; throws std::invalid_argument below that
    double retention(std::int64_t age) const;

    /// Per-step survival probability for the agent engine, clamped to [0,1].
    /// per_step mode: k(age). cohort mode: k(age)/k(age-1) with k(0) == 1;
    /// a real cohort cannot grow, hence the clamp.
    double conditional_survival(std::int64_t age, DecayMode mode) const;

    /// Same bridge without the clamp, for expected-value integration where
    /// the ratio must telescope exactly to the single cohort factor k(age).
    double survival_factor_unclamped(std::int64_t age, DecayMode mode) const;

    KernelFamily family() const { return family_; }
    double lambda() const { return lambda_; }
    double gamma() const { return gamma_; }
    double constant_value() const { return c_; }

private:
    DecayKernel() = default;

    KernelFamily family_ = KernelFamily::weibull;
    double lambda_ = 1.0;
    double gamma_ = 0.5;
    double lam_pow_ = 1.0;  // lambda^(-gamma), cached
    double c_ = 0.0;
};

/// The three kernels of a run, ordered so dissimilar ties are the most
/// fragile and similar ties the most durable: k_d(a) <= k_b(a) <= k_s(a).
/// Enforced via lambda_d <= lambda_b <= lambda_s at shared gamma (or the
/// same ordering of the constants); ties allowed so symmetric setups are
/// expressible.
class KernelTriple {
public:
    static KernelTriple weibull(double lambda_d, double lambda_b, double lambda_s, double gamma);
    static KernelTriple constant(double c_d, double c_b, double c_s);

    const DecayKernel& dissimilar() const { return k_d_; }
    const DecayKernel& biased() const { return k_b_; }
    const DecayKernel& similar() const { return k_s_; }
    const DecayKernel& for_class(EdgeClass cls) const;

    KernelTriple() : KernelTriple(weibull(1.2, 1.5, 2.0, 0.5)) {}

private:
    KernelTriple(DecayKernel d, DecayKernel b, DecayKernel s)
        : k_d_(d), k_b_(b), k_s_(s) {}

    DecayKernel k_d_, k_b_, k_s_;
};

}  // namespace fragnet
