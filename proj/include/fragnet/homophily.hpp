#pragma once

#include <string>
#include <vector>

namespace fragnet {

enum class HomophilyFamily { power, log_saturating, constant };

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
};

/// Monotone concave response curve mapping a node's dissimilar-neighbor
/// fraction x in [0,1] to the probability that its next primary tie is to a
/// similar node. Families:
///   power:          f(x) = x^alpha,             alpha in (0,1)
///   log_saturating: f(x) = ln(1+a*x)/ln(1+a),   a > 0
/// Both satisfy f(1)=1, f'>0, f''<0 on (0,1]; parameters are validated at
/// construction.
class HomophilyFunction {
public:
    HomophilyFunction() : HomophilyFunction(HomophilyFamily::power, 0.5) {}

    static HomophilyFunction power(double alpha);
    static HomophilyFunction log_saturating(double a);

    // Test hook: fixed response probability, bypasses construction checks.
    // validate() will report the violated shape properties honestly.
    static HomophilyFunction constant_for_tests(double p);

    /// f(x); throws std::domain_error outside [0,1]
    double operator()(double x) const;

    /// f'(x); requires 0 < x <= 1 generally, and throws std::domain_error at
    /// x = 0 for the power family (derivative diverges there)
    double derivative(double x) const;

    /// Grid check of monotonicity, midpoint concavity, range containment and
    /// f(1)=1 on an evenly spaced grid over [0,1].
    ValidationReport validate(int grid_points = 1001) const;

    HomophilyFamily family() const { return family_; }
    double param() const { return param_; }

private:
    HomophilyFunction(HomophilyFamily family, double param);

    HomophilyFamily family_;
    double param_;
    double log_denom_ = 0.0;  // cached ln(1+a) for log_saturating
};

}  // namespace fragnet
