#ifndef KERRPAIR_ODE_HPP
#define KERRPAIR_ODE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace kerrpair {

struct StepperConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 0.0; // 0 -> heuristic
    double max_step = std::numeric_limits<double>::infinity();
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double last_good_t)
        : std::runtime_error(what), last_good_t(last_good_t) {}
    double last_good_t;
};

// Dormand-Prince 5(4) with elementwise error control on complex matrices.
// Integrates y' = f(t, y) forward from t0 to t1. Segment boundaries in
// `breakpoints` are honored exactly: no step straddles them, and the
// right-endpoint stage evaluation is nudged inside the segment so that
// piecewise coefficient branches stay consistent within a segment.
template <class Rhs>
void integrate(Rhs&& rhs, Eigen::MatrixXcd& y, double t0, double t1,
               const StepperConfig& cfg, std::span<const double> breakpoints = {}) {
    if (!(t1 > t0))
        throw std::invalid_argument("integrate: need t1 > t0");

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::vector<double> edges{t0};
    for (double b : breakpoints)
        if (b > t0 && b < t1)
            edges.push_back(b);
    edges.push_back(t1);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const auto rows = y.rows();
    const auto cols = y.cols();
    Eigen::MatrixXcd k1(rows, cols), k2(rows, cols), k3(rows, cols),
        k4(rows, cols), k5(rows, cols), k6(rows, cols), k7(rows, cols),
        ynew(rows, cols), work(rows, cols);

    double h = cfg.initial_step;
    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double a = edges[seg];
        const double b = edges[seg + 1];
        const double span = b - a;
        const double nudge = span * 1e-12;
        auto eval = [&](double t, const Eigen::MatrixXcd& state, Eigen::MatrixXcd& out) {
            rhs(std::min(t, b - nudge), state, out);
        };

        double t = a;
        if (h <= 0.0)
            h = std::min(cfg.max_step, span / 100.0);
        h = std::min(h, span);
        eval(t, y, k1); // refreshed at segment start; FSAL reuse within segment
        bool have_k1 = true;

        while (t < b) {
            h = std::min({h, b - t, cfg.max_step});
            if (h < (std::abs(t) + span) * 1e-14)
                throw IntegrationError("integrate: step size underflow", t);
            if (!have_k1)
                eval(t, y, k1);
            have_k1 = true;

            work = y + h * (a21 * k1);
            eval(t + c2 * h, work, k2);
            work = y + h * (a31 * k1 + a32 * k2);
            eval(t + c3 * h, work, k3);
            work = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            eval(t + c4 * h, work, k4);
            work = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            eval(t + c5 * h, work, k5);
            work = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            eval(t + h, work, k6);
            ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            eval(t + h, ynew, k7);

            work = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double err = 0.0;
            for (Eigen::Index j = 0; j < cols; ++j)
                for (Eigen::Index i = 0; i < rows; ++i) {
                    const double scale =
                        cfg.atol + cfg.rtol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
                    err = std::max(err, std::abs(work(i, j)) / scale);
                }

            if (err <= 1.0) {
                t += h;
                y.swap(ynew);
                k1.swap(k7);
                const double grow = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                have_k1 = true; // k1 still valid at unchanged t
            }
        }
    }
}

} // namespace kerrpair

#endif
