#ifndef KERRPAIR_METRICS_HPP
#define KERRPAIR_METRICS_HPP

#include "kerrpair/fock.hpp"

namespace kerrpair {

struct BellMetrics {
    double fidelity = 0.0;      // vs (|00> + e^{i phi}|11>)/sqrt(2), optimal phi
    double optimal_phase = 0.0; // radians
    double p1 = 0.0;            // <11|rho|11>
    double p2 = 0.0;            // <22|rho|22>
    double blockade_ratio = 0.0;
};

struct PostSelection {
    double probability = 0.0;
    double fidelity_post = 0.0;
    double optimal_phase = 0.0;
};

// rho_out lives on two capture modes (v, u). F = (rho_00,00 + rho_11,11)/2
// + |rho_00,11|; the phase is absorbed into the target Bell state.
BellMetrics bell_fidelity(const DensityMatrix& rho_out);

// Double-pair to single-pair-squared ratio, referenced to the vacuum weight
// so that any TMSV gives exactly 1: (P2 P0) / P1^2. +inf sentinel when the
// single-pair population is empty.
double blockade_ratio(const DensityMatrix& rho_out);

// Dual-rail post-selection: Pi = (1 - |00><00|_{v1 v2})(1 - |00><00|_{u1 u2})
// on capture modes ordered (v1, u1, v2, u2). The fidelity is against
// |Psi+> = (|0011> + |1100>)/sqrt(2) with phase optimization.
PostSelection postselect_dualrail(const DensityMatrix& rho_out);

// Two-mode squeezed vacuum ~ sum tanh^n(r) |n,n>, truncated and renormalized.
DensityMatrix tmsv_state(double r, int dim);

// max_r F(TMSV(r), Bell) = 27/32, located at tanh r = 1/2.
struct SpdcOptimum {
    double fidelity;
    double tanh_r;
};
SpdcOptimum spdc_best_point();
double spdc_best_fidelity();

// Two independent TMSVs on (v1,u1) and (v2,u2), post-selected: the dual-rail
// SPDC trade-off curve.
PostSelection dualrail_tmsv_point(double r, int dim = 3);

// True when (f, p) strictly dominates the dual-rail SPDC trade-off curve,
// i.e. no squeezing value achieves both F >= f and P >= p.
bool beats_dualrail_spdc(double f, double p);

} // namespace kerrpair

#endif
