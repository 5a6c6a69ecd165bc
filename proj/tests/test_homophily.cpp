#include <cmath>
#include <doctest.h>
#include <stdexcept>

#include "fragnet/homophily.hpp"
#include "oracles.hpp"

using namespace fragnet;

TEST_CASE("power family evaluates x^alpha") {
    const auto f = HomophilyFunction::power(0.5);
    CHECK(f(1.0) == 1.0);
    CHECK(f(0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f(0.0) == 0.0);
    CHECK(f.family() == HomophilyFamily::power);
    CHECK(f.param() == 0.5);
}

TEST_CASE("log family saturates at f(1) = 1") {
    const auto f = HomophilyFunction::log_saturating(3.0);
    CHECK(f(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f(0.0) == 0.0);
    CHECK(f(0.5) == doctest::Approx(std::log(2.5) / std::log(4.0)).epsilon(1e-15));
}

TEST_CASE("evaluation rejects arguments outside the unit interval") {
    const auto f = HomophilyFunction::power(0.5);
    CHECK_THROWS_AS(f(-0.1), std::domain_error);
    CHECK_THROWS_AS(f(1.1), std::domain_error);
    CHECK_THROWS_AS(f.derivative(-0.5), std::domain_error);
    CHECK_THROWS_AS(f.derivative(2.0), std::domain_error);
}

TEST_CASE("power derivative matches the closed form") {
    const auto f = HomophilyFunction::power(0.5);
    CHECK(f.derivative(0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.derivative(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    // x^(alpha-1) blows up at zero for alpha < 1
    CHECK_THROWS_AS(f.derivative(0.0), std::domain_error);
}

TEST_CASE("derivatives agree with central differences") {
    const auto fp = HomophilyFunction::power(0.5);
    const auto fl = HomophilyFunction::log_saturating(3.0);
    for (double x : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double fd_p =
            oracle::central_diff([&](double v) { return fp(v); }, x, 1e-6);
        const double fd_l =
            oracle::central_diff([&](double v) { return fl(v); }, x, 1e-6);
        CHECK(fp.derivative(x) == doctest::Approx(fd_p).epsilon(1e-6));
        CHECK(fl.derivative(x) == doctest::Approx(fd_l).epsilon(1e-6));
    }
}

TEST_CASE("construction rejects out-of-range parameters") {
    CHECK_THROWS_AS(HomophilyFunction::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(HomophilyFunction::power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(HomophilyFunction::power(1.5), std::invalid_argument);
    CHECK_THROWS_AS(HomophilyFunction::power(-0.3), std::invalid_argument);
    CHECK_THROWS_AS(HomophilyFunction::log_saturating(0.0), std::invalid_argument);
    CHECK_THROWS_AS(HomophilyFunction::log_saturating(-2.0), std::invalid_argument);
}

TEST_CASE("validate passes both real families on the default grid") {
    CHECK(HomophilyFunction::power(0.5).validate().valid);
    CHECK(HomophilyFunction::power(0.17).validate().valid);
    CHECK(HomophilyFunction::log_saturating(3.0).validate().valid);
    CHECK(HomophilyFunction::log_saturating(50.0).validate().valid);
}

TEST_CASE("constant test hook fails validation honestly") {
    const auto f = HomophilyFunction::constant_for_tests(0.7);
    CHECK(f(0.0) == 0.7);
    CHECK(f(1.0) == 0.7);
    const auto report = f.validate();
    CHECK_FALSE(report.valid);
    CHECK_FALSE(report.violations.empty());
}
