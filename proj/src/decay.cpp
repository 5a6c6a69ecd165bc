#include "fragnet/decay.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fragnet {

DecayKernel DecayKernel::weibull(double lambda, double gamma) {
    if (!(lambda >= 1.0))
        throw std::invalid_argument("decay: weibull scale must be >= 1, got " +
                                    std::to_string(lambda));
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("decay: weibull shape must lie in (0,1), got " +
                                    std::to_string(gamma));
    DecayKernel k;
    k.family_ = KernelFamily::weibull;
    k.lambda_ = lambda;
    k.gamma_ = gamma;
    k.lam_pow_ = std::pow(lambda, -gamma);
    return k;
}

DecayKernel DecayKernel::constant(double c) {
    if (!(c >= 0.0 && c < 1.0))
        throw std::invalid_argument("decay: constant retention must lie in [0,1), got " +
                                    std::to_string(c));
    DecayKernel k;
    k.family_ = KernelFamily::constant;
    k.c_ = c;
    return k;
}

double DecayKernel::retention(std::int64_t age) const {
    if (age < 1)
        throw std::invalid_argument("decay: retention defined for integer age >= 1");
    if (family_ == KernelFamily::constant)
        return c_;
    return 1.0 - lam_pow_ * gamma_ * std::pow(static_cast<double>(age), gamma_ - 1.0);
}

double DecayKernel::survival_factor_unclamped(std::int64_t age, DecayMode mode) const {
    if (mode == DecayMode::per_step)
        return retention(age);
    if (age == 1)
        return retention(1);  // k(0) == 1 by convention
    const double prev = retention(age - 1);
    if (prev <= 0.0)
        return 0.0;  // a fully decayed cohort stays decayed
    return retention(age) / prev;
}

double DecayKernel::conditional_survival(std::int64_t age, DecayMode mode) const {
    const double s = survival_factor_unclamped(age, mode);
    if (s < 0.0)
        return 0.0;
    if (s > 1.0)
        return 1.0;
    return s;
}

KernelTriple KernelTriple::weibull(double lambda_d, double lambda_b, double lambda_s,
                                   double gamma) {
    if (!(lambda_d <= lambda_b && lambda_b <= lambda_s))
        throw std::invalid_argument(
            "decay: kernel ordering violated, need lambda_d <= lambda_b <= lambda_s");
    return {DecayKernel::weibull(lambda_d, gamma), DecayKernel::weibull(lambda_b, gamma),
            DecayKernel::weibull(lambda_s, gamma)};
}

KernelTriple KernelTriple::constant(double c_d, double c_b, double c_s) {
    if (!(c_d <= c_b && c_b <= c_s))
        throw std::invalid_argument("decay: kernel ordering violated, need c_d <= c_b <= c_s");
    return {DecayKernel::constant(c_d), DecayKernel::constant(c_b), DecayKernel::constant(c_s)};
}

const DecayKernel& KernelTriple::for_class(EdgeClass cls) const {
    switch (cls) {
    case EdgeClass::similar: return k_s_;
    case EdgeClass::dissimilar: return k_d_;
    case EdgeClass::biased: return k_b_;
    }
    return k_d_;  // unreachable
}

}  // namespace fragnet
