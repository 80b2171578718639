#include "doctest.h"

#include <cmath>
#include <complex>

#include "kerrpair/ode.hpp"

using namespace kerrpair;

TEST_CASE("dopri5 matches exp decay to tolerance") {
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = 1.0;
    auto rhs = [](double, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& out) { out = -2.0 * s; };
    integrate(rhs, y, 0.0, 3.0, {});
    CHECK(std::abs(y(0, 0).real() - std::exp(-6.0)) < 1e-9);
}

TEST_CASE("dopri5 oscillator phase accuracy") {
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = 1.0;
    const double w = 40.0;
    auto rhs = [w](double, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& out) {
        out = std::complex<double>(0.0, -w) * s;
    };
    integrate(rhs, y, 0.0, 2.0, {});
    CHECK(std::abs(y(0, 0) - std::exp(std::complex<double>(0.0, -80.0))) < 1e-6);
}

TEST_CASE("breakpoints keep piecewise coefficients consistent") {
    // y' = +y for t < 1, -y after; discontinuity must not leak across
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = 1.0;
    auto rhs = [](double t, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& out) {
        out = (t < 1.0 ? 1.0 : -1.0) * s;
    };
    const double bps[] = {1.0};
    integrate(rhs, y, 0.0, 2.0, {}, bps);
    CHECK(std::abs(y(0, 0).real() - 1.0) < 1e-8);
}

TEST_CASE("step underflow reports last good time") {
    Eigen::MatrixXcd y(1, 1);
    y(0, 0) = 1.0;
    // unbounded stiffness near t = 0.5 forces the controller to collapse
    auto rhs = [](double t, const Eigen::MatrixXcd& s, Eigen::MatrixXcd& out) {
        out = s / (0.5 - t);
    };
    try {
        integrate(rhs, y, 0.0, 1.0, {});
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.last_good_t > 0.0);
        CHECK(e.last_good_t <= 0.5);
    }
}
