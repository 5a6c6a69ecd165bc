#include "fragnet/homophily.hpp"

#include <cmath>
#include <stdexcept>

namespace fragnet {

HomophilyFunction::HomophilyFunction(HomophilyFamily family, double param)
    : family_(family), param_(param) {
    if (family_ == HomophilyFamily::log_saturating)
        log_denom_ = std::log1p(param_);
}

HomophilyFunction HomophilyFunction::power(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("homophily: power exponent must lie in (0,1), got " +
                                    std::to_string(alpha));
    return {HomophilyFamily::power, alpha};
}

HomophilyFunction HomophilyFunction::log_saturating(double a) {
    if (!(a > 0.0))
        throw std::invalid_argument("homophily: log curvature parameter must be > 0, got " +
                                    std::to_string(a));
    return {HomophilyFamily::log_saturating, a};
}

HomophilyFunction HomophilyFunction::constant_for_tests(double p) {
    return {HomophilyFamily::constant, p};
}

double HomophilyFunction::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("homophily: argument outside [0,1]");
    switch (family_) {
    case HomophilyFamily::power:
        return std::pow(x, param_);
    case HomophilyFamily::log_saturating:
        return std::log1p(param_ * x) / log_denom_;
    case HomophilyFamily::constant:
        return param_;
    }
    return 0.0;  // unreachable
}

double HomophilyFunction::derivative(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("homophily: argument outside [0,1]");
    switch (family_) {
    case HomophilyFamily::power:
        if (x == 0.0)
            throw std::domain_error("homophily: power derivative diverges at x=0");
        return param_ * std::pow(x, param_ - 1.0);
    case HomophilyFamily::log_saturating:
        return param_ / ((1.0 + param_ * x) * log_denom_);
    case HomophilyFamily::constant:
        return 0.0;
    }
    return 0.0;  // unreachable
}

ValidationReport HomophilyFunction::validate(int grid_points) const {
    ValidationReport report;
    auto flag = [&report](const std::string& msg) {
        report.valid = false;
        report.violations.push_back(msg);
    };

    if (grid_points < 3)
        throw std::invalid_argument("homophily: validation grid needs >= 3 points");

    std::vector<double> fx(static_cast<std::size_t>(grid_points));
    const double h = 1.0 / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i)
        fx[static_cast<std::size_t>(i)] = (*this)(i * h);

    for (int i = 0; i + 1 < grid_points; ++i) {
        if (!(fx[i + 1] > fx[i])) {
            flag("not strictly increasing near x=" + std::to_string(i * h));
            break;
        }
    }
    // midpoint concavity over grid triples: f(mid) > chord
    for (int i = 0; i + 2 < grid_points; ++i) {
        if (!(fx[i + 1] > 0.5 * (fx[i] + fx[i + 2]))) {
            flag("not strictly concave near x=" + std::to_string((i + 1) * h));
            break;
        }
    }
    for (int i = 0; i < grid_points; ++i) {
        if (!(fx[i] >= 0.0 && fx[i] <= 1.0)) {
            flag("range leaves [0,1] at x=" + std::to_string(i * h));
            break;
        }
    }
    if (std::abs(fx[static_cast<std::size_t>(grid_points - 1)] - 1.0) > 1e-12)
        flag("f(1) != 1");
    return report;
}

}  // namespace fragnet
