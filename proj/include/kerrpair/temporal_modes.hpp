#ifndef KERRPAIR_TEMPORAL_MODES_HPP
#define KERRPAIR_TEMPORAL_MODES_HPP

#include <iosfwd>
#include <vector>

#include "kerrpair/dynamics.hpp"
#include "kerrpair/fock.hpp"

namespace kerrpair {

// First-order output correlation g1(t_j, t_k) on a uniform time grid,
// in photon-flux units (kappa_c * intracavity correlation).
struct CorrelationKernel {
    std::vector<double> times;
    Matrix data; // Hermitian, data(j,k) = g1(t_j, t_k)

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

// One output temporal mode: normalized envelope samples and photon occupation.
struct TemporalMode {
    std::vector<double> times;
    Vector envelope;   // sum |envelope|^2 dt = 1
    double occupation; // photons
};

// Builds g1(t,t') = out_coupling * Tr[C^dag Lambda(t,t')(C rho(t'))] via the
// quantum regression theorem, propagating each column probe with the same
// Lindblad map as the state itself. The lower triangle is computed, the upper
// filled by Hermitian symmetry. rho0 is the initial state at times.front().
CorrelationKernel g1_correlation(const Generator& gen, const Matrix& rho0,
                                 const SparseMatrix& mode_op, double out_coupling,
                                 const std::vector<double>& times,
                                 const StepperConfig& cfg = {});

// Builds both requested kernels in one sweep over the trajectory.
struct KernelRequest {
    SparseMatrix mode_op;
    double out_coupling = 0.0;
};
std::vector<CorrelationKernel> g1_correlations(const Generator& gen, const Matrix& rho0,
                                               const std::vector<KernelRequest>& requests,
                                               const std::vector<double>& times,
                                               const StepperConfig& cfg = {});

// Hermitian eigendecomposition of the dt-weighted kernel; modes sorted by
// descending occupation. Small negative eigenvalues (discretization noise)
// are clipped at -1e-8 * lambda_max; anything below that is an error. Each
// envelope is phased so its largest-magnitude sample is real positive.
std::vector<TemporalMode> decompose_modes(const CorrelationKernel& kernel);

// n_1 / sum_i n_i; 1 for (near-)vacuum kernels.
double dominant_fraction(const std::vector<TemporalMode>& modes);

// CSV with columns t, Re/Im per mode; header carries the occupations.
void write_modes_csv(std::ostream& os, const std::vector<TemporalMode>& modes);

} // namespace kerrpair

#endif
