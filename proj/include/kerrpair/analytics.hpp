#ifndef KERRPAIR_ANALYTICS_HPP
#define KERRPAIR_ANALYTICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "kerrpair/fock.hpp"

namespace kerrpair {

// Dimensionless constants and derived ring-down parameters of the
// perturbative output modes. All rates are angular.
struct PerturbationConstants {
    double C_v;  // (pi-2)/8
    double C_u1; // (pi - sqrt(2) sin(pi/sqrt(2)))/16
    double C_u2; // C_v - C_u1
    double C_u3; // (1 + cos(pi/sqrt(2)))/(8 sqrt(2))
    double eps_v, eps_u; // pre-tau fraction of the mode norm
    double xi_v, xi_u;   // capture weight of a cavity photon at tau
    double mu_v, mu_u;   // envelope normalization, 1/sqrt(time)
};

PerturbationConstants perturbation_constants(double g, double kappa_c, double kappa_i);

// Closed-form dominant envelopes v(t), u(t) for tau = pi/(4g) (enforced).
struct AnalyticModes {
    double g, kappa, tau;
    double mu_v, mu_u;
    Complex v(double t) const;
    Complex u(double t) const;
};
AnalyticModes analytic_temporal_modes(double g, double kappa, double tau);

// Full first-order matrix-element expressions composed into the Bell
// fidelity; valid for kappa << g << chi_e, degrading outside.
double perturbative_fidelity(double g, double kappa_c, double kappa_i, double chi_e);

// 4-term linearization 1-F = 0.02 kc/g + 0.28 ki/g + 0.5 ki/k + 0.5 g^2/chi^2.
double perturbative_infidelity_linearized(double g, double kappa_c, double kappa_i,
                                          double chi_e);

struct OptimizedFidelity {
    double fidelity;
    double g_star;
    bool at_bracket_edge;
};
// Maximizes perturbative_fidelity over g/2pi in [1, 50] MHz by golden section.
OptimizedFidelity perturbative_fidelity_optimized(double kappa_c, double kappa_i,
                                                  double chi_e);

struct EmpiricalTerm {
    std::string name; // e.g. "kappa_c/g"
    double value;
    double stderr_ = 0.0;
};
struct EmpiricalModel {
    std::vector<EmpiricalTerm> coefficients;
};

// Appendix C fits.
EmpiricalModel default_single_rail_model();   // 0.02, 0.36, 0.68, 0.18
EmpiricalModel default_dualrail_prob_model(); // 0.23, 1.51, 0.85
EmpiricalModel default_dualrail_fid_model();  // 0.07, 0.17, 1.29

// 1-F = C1 kc/g + C2 ki/g + C3 ki/kappa + C4 g^2/chi_e^2.
double empirical_infidelity_single(double g, double kappa_c, double kappa_i, double chi_e,
                                   const EmpiricalModel& model = default_single_rail_model());

struct DualRailEstimate {
    double p_post;
    double f_post;
};
// Eq-style dual-rail estimates; chi_e -> infinity assumed.
DualRailEstimate empirical_dualrail(double g, double kappa_c, double kappa_i, double chi_c,
                                    const EmpiricalModel& prob = default_dualrail_prob_model(),
                                    const EmpiricalModel& fid = default_dualrail_fid_model());

// g* = (chi_c^2 (0.07 kc + 0.17 ki)/2.58)^(1/3), the fidelity-optimal drive.
double optimal_drive(double kappa_c, double kappa_i, double chi_c);
// Probability-optimal drive (0.09 chi_c^2 ki)^(1/3).
double optimal_drive_probability(double kappa_i, double chi_c);

struct TauOffsets {
    double tau_single; // pi/4g + fitted deviation
    double tau_dual;   // pi/(2 sqrt2 g) + fitted deviation
};
TauOffsets optimal_tau_offsets(double g, double kappa_c, double kappa_i);

// Steady-state occupation ratio p_{n+1}/p_n of the adiabatically eliminated
// model: g^2 ka / (kb ((Delta + 2 chi n)^2 + (ka/2)^2)).
double steady_state_ratio(int n, double Delta, double chi, double g, double kappa_a,
                          double kappa_b);

// Dispersive estimate chi_q (g1/Delta1)^2 (g2/Delta2)^2.
double hybridized_cross_kerr(double chi_q, double g1, double Delta1, double g2, double Delta2);

// Hybridized-mode admixture coefficients, for inspection.
struct HybridizedModes {
    double b1_qubit_weight; // g1/Delta1
    double b2_qubit_weight; // g2/Delta2
    double cross_kerr;
};
HybridizedModes hybridized_modes(double chi_q, double g1, double Delta1, double g2,
                                 double Delta2);

// Derivative-free scalar minimization on [a, b]; used across the project.
struct GoldenResult {
    double x;
    double value;
    bool at_edge;
};
GoldenResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                     double b, double xtol);

} // namespace kerrpair

#endif
