#include "kerrpair/analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kerrpair/dynamics.hpp"

namespace kerrpair {

namespace {
constexpr double kPi = std::numbers::pi;
const double kCv = (kPi - 2.0) / 8.0;
const double kCu1 = (kPi - std::sqrt(2.0) * std::sin(kPi / std::sqrt(2.0))) / 16.0;
const double kCu2 = kCv - kCu1;
const double kCu3 = (1.0 + std::cos(kPi / std::sqrt(2.0))) / (8.0 * std::sqrt(2.0));
} // namespace

PerturbationConstants perturbation_constants(double g, double kappa_c, double kappa_i) {
    if (g <= 0.0)
        throw std::invalid_argument("perturbation_constants: g must be positive");
    const double kappa = kappa_c + kappa_i;
    PerturbationConstants c;
    c.C_v = kCv;
    c.C_u1 = kCu1;
    c.C_u2 = kCu2;
    c.C_u3 = kCu3;
    const double rv = 2.0 * kCv * kappa / g;
    const double ru = 2.0 * kCu1 * kappa / g;
    c.eps_v = rv / (1.0 + rv);
    c.eps_u = ru / (1.0 + ru);
    const double kc_over_k = kappa > 0.0 ? kappa_c / kappa : 0.0;
    c.xi_v = kc_over_k * (1.0 - c.eps_v);
    c.xi_u = kc_over_k * (1.0 - c.eps_u);
    c.mu_v = std::sqrt(2.0 * kappa / (1.0 + rv));
    c.mu_u = std::sqrt(2.0 * kappa / (1.0 + ru));
    return c;
}

Complex AnalyticModes::v(double t) const {
    if (t < 0.0)
        return 0.0;
    if (t < tau)
        return mu_v * std::sin(g * t);
    return mu_v / std::sqrt(2.0) * std::exp(-kappa * (t - tau) / 2.0);
}

Complex AnalyticModes::u(double t) const {
    if (t < 0.0)
        return 0.0;
    if (t < tau)
        return mu_u * std::sin(g * t) * std::cos(std::sqrt(2.0) * g * (tau - t));
    return mu_u / std::sqrt(2.0) * std::exp(-kappa * (t - tau) / 2.0);
}

AnalyticModes analytic_temporal_modes(double g, double kappa, double tau) {
    if (g <= 0.0 || kappa <= 0.0)
        throw std::invalid_argument("analytic_temporal_modes: g and kappa must be positive");
    const double tau_ideal = kPi / (4.0 * g);
    if (std::abs(tau - tau_ideal) > 1e-9 * tau_ideal)
        throw std::invalid_argument("analytic_temporal_modes: closed forms require tau = pi/4g");
    AnalyticModes m;
    m.g = g;
    m.kappa = kappa;
    m.tau = tau;
    m.mu_v = std::sqrt(2.0 * kappa / (1.0 + 2.0 * kCv * kappa / g));
    m.mu_u = std::sqrt(2.0 * kappa / (1.0 + 2.0 * kCu1 * kappa / g));
    return m;
}

double perturbative_fidelity(double g, double kappa_c, double kappa_i, double chi_e) {
    const auto c = perturbation_constants(g, kappa_c, kappa_i);
    const double kappa = kappa_c + kappa_i;
    const double xv = c.xi_v, xu = c.xi_u, ev = c.eps_v, eu = c.eps_u;
    const double r2 = (g * g) / (chi_e * chi_e);

    const double m00 =
        (1.0 + (1.0 - xv) * (1.0 - xu)) / 2.0
        + r2 / 2.0 * (1.0 - 2.0 * (1.0 - xv) * (1.0 - xu)
                      + (1.0 - xv) * (1.0 - xv) * (1.0 - 2.0 * xu / 3.0))
        - std::sqrt(2.0 * kappa_c / g) * (std::sqrt(kCv * ev * xv) * (1.0 - xu)
                                          + std::sqrt(kCu1 * eu * xu) * (1.0 - xv))
        + kappa / g * (kCv * (1.0 - xu) + kCu1 * (1.0 - xv)
                       + kCu2 * (1.0 - xv) * (1.0 - xv) * (1.0 - xu)
                       - (kCv - 0.25) - (kCv + 0.25) * (1.0 - xv) * (1.0 - xu));

    const double m11 =
        xv * xu / 2.0
        - r2 * xv * xu * (1.0 - 2.0 * (1.0 - xv) / 3.0)
        + std::sqrt(2.0 * kappa_c * xv * xu / g) * (std::sqrt(kCv * ev * xu)
                                                    + std::sqrt(kCu1 * eu * xv))
        + kappa / g * xv * xu * (2.0 * kCu2 * (1.0 - xv) - (kCv + 0.25));

    const double re01 =
        0.5 * (1.0 - r2) * std::sqrt(xv * xu)
        + std::sqrt(kappa_c / (2.0 * g)) * (std::sqrt(kCv * ev * xu) + std::sqrt(kCu1 * eu * xv)
                                            + std::sqrt(2.0 * kCu3 * kCu3 * eu * xv / kCu1)
                                              * (1.0 - xv) * (1.0 - 2.0 * xu))
        + kappa / g * std::sqrt(xv * xu) * (std::sqrt(2.0) * kCu3 * (1.0 - xv) - kCv);

    const double im01 = -g * std::sqrt(xv * xu) / (2.0 * chi_e);

    return (m00 + m11) / 2.0 + re01 + im01 * im01;
}

double perturbative_infidelity_linearized(double g, double kappa_c, double kappa_i,
                                          double chi_e) {
    const double kappa = kappa_c + kappa_i;
    return 0.02 * kappa_c / g + 0.28 * kappa_i / g + 0.5 * kappa_i / kappa
           + 0.5 * g * g / (chi_e * chi_e);
}

GoldenResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                     double b, double xtol) {
    const double a0 = a, b0 = b;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (d - c > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    GoldenResult res;
    res.x = (fc < fd) ? c : d;
    res.value = std::min(fc, fd);
    const double margin = 2.0 * xtol + 1e-3 * (b0 - a0);
    res.at_edge = (res.x - a0) < margin || (b0 - res.x) < margin;
    return res;
}

OptimizedFidelity perturbative_fidelity_optimized(double kappa_c, double kappa_i,
                                                  double chi_e) {
    const double lo = kTwoPi * 1.0, hi = kTwoPi * 50.0;
    auto res = golden_section_minimize(
        [&](double g) { return -perturbative_fidelity(g, kappa_c, kappa_i, chi_e); }, lo, hi,
        kTwoPi * 1e-4);
    return {-res.value, res.x, res.at_edge};
}

EmpiricalModel default_single_rail_model() {
    return {{{"kappa_c/g", 0.02, 0.01},
             {"kappa_i/g", 0.36, 0.07},
             {"kappa_i/kappa", 0.68, 0.02},
             {"g^2/chi_e^2", 0.18, 0.08}}};
}

EmpiricalModel default_dualrail_prob_model() {
    return {{{"kappa_i/g", 0.23, 0.10},
             {"kappa_i/kappa", 1.51, 0.03},
             {"g^2/chi_c^2", 0.85, 0.16}}};
}

EmpiricalModel default_dualrail_fid_model() {
    return {{{"kappa_c/g", 0.07, 0.01},
             {"kappa_i/g", 0.17, 0.03},
             {"g^2/chi_c^2", 1.29, 0.04}}};
}

static double term_value(const std::string& name, double g, double kappa_c, double kappa_i,
                         double chi_e, double chi_c) {
    const double kappa = kappa_c + kappa_i;
    if (name == "kappa_c/g")
        return kappa_c / g;
    if (name == "kappa_i/g")
        return kappa_i / g;
    if (name == "kappa_i/kappa")
        return kappa > 0.0 ? kappa_i / kappa : 0.0;
    if (name == "g^2/chi_e^2")
        return chi_e > 0.0 ? g * g / (chi_e * chi_e) : 0.0;
    if (name == "g^2/chi_c^2")
        return chi_c > 0.0 ? g * g / (chi_c * chi_c) : 0.0;
    throw std::invalid_argument("unknown empirical term: " + name);
}

double empirical_infidelity_single(double g, double kappa_c, double kappa_i, double chi_e,
                                   const EmpiricalModel& model) {
    double acc = 0.0;
    for (const auto& t : model.coefficients)
        acc += t.value * term_value(t.name, g, kappa_c, kappa_i, chi_e, 0.0);
    return acc;
}

DualRailEstimate empirical_dualrail(double g, double kappa_c, double kappa_i, double chi_c,
                                    const EmpiricalModel& prob, const EmpiricalModel& fid) {
    double one_minus_p = 0.0, one_minus_f = 0.0;
    for (const auto& t : prob.coefficients)
        one_minus_p += t.value * term_value(t.name, g, kappa_c, kappa_i, 0.0, chi_c);
    for (const auto& t : fid.coefficients)
        one_minus_f += t.value * term_value(t.name, g, kappa_c, kappa_i, 0.0, chi_c);
    return {1.0 - one_minus_p, 1.0 - one_minus_f};
}

double optimal_drive(double kappa_c, double kappa_i, double chi_c) {
    if (kappa_c <= 0.0 || chi_c <= 0.0 || kappa_i < 0.0)
        throw std::invalid_argument("optimal_drive: rates must be positive");
    return std::cbrt(chi_c * chi_c * (0.07 * kappa_c + 0.17 * kappa_i) / 2.58);
}

double optimal_drive_probability(double kappa_i, double chi_c) {
    return std::cbrt(0.09 * chi_c * chi_c * kappa_i);
}

TauOffsets optimal_tau_offsets(double g, double kappa_c, double kappa_i) {
    if (g <= 0.0)
        throw std::invalid_argument("optimal_tau_offsets: g must be positive");
    const double kappa = kappa_c + kappa_i;
    TauOffsets out;
    out.tau_single = kPi / (4.0 * g)
                     + kTwoPi * (0.014 * kappa_c / (g * g) - 0.223 * kappa_i / (g * g)
                                 - (kappa > 0.0 ? 0.006 * kappa_i / (kappa * kappa) : 0.0));
    out.tau_dual = kPi / (2.0 * std::sqrt(2.0) * g)
                   + kTwoPi * (0.036 * kappa_c / (g * g) - 0.060 * kappa_i / (g * g));
    return out;
}

double steady_state_ratio(int n, double Delta, double chi, double g, double kappa_a,
                          double kappa_b) {
    if (kappa_a <= 0.0 || kappa_b <= 0.0)
        throw std::invalid_argument("steady_state_ratio: kappa_a, kappa_b must be positive");
    const double det = Delta + 2.0 * chi * static_cast<double>(n);
    return g * g * kappa_a / (kappa_b * (det * det + kappa_a * kappa_a / 4.0));
}

double hybridized_cross_kerr(double chi_q, double g1, double Delta1, double g2, double Delta2) {
    const double r1 = g1 / Delta1, r2 = g2 / Delta2;
    return chi_q * r1 * r1 * r2 * r2;
}

HybridizedModes hybridized_modes(double chi_q, double g1, double Delta1, double g2,
                                 double Delta2) {
    return {g1 / Delta1, g2 / Delta2, hybridized_cross_kerr(chi_q, g1, Delta1, g2, Delta2)};
}

} // namespace kerrpair
