#ifndef KERRPAIR_CASCADE_HPP
#define KERRPAIR_CASCADE_HPP

#include <string>
#include <vector>

#include "kerrpair/analytics.hpp"
#include "kerrpair/dynamics.hpp"
#include "kerrpair/temporal_modes.hpp"

namespace kerrpair {

enum class Scheme { single_rail, dual_rail };

// Hilbert-space truncations used throughout.
enum class TruncationPreset {
    single3,  // (o,e) dim 3, captures dim 3
    single4,  // dim-4 convergence cross-check
    dual2,    // two-level dual rail, 8 modes dim 2
    dual3cap6 // 8 modes dim 3, total photon cap 6
};

Scheme preset_scheme(TruncationPreset preset);
BasisPtr system_basis(TruncationPreset preset);
BasisPtr cascade_basis(TruncationPreset preset);

// Time-dependent downstream coupling g_v(t) = -v*(t)/sqrt(int_0^t |v|^2).
// Near t=0 the denominator is floored at sqrt(1e-10) and |g_v| capped, since
// the captured norm there is negligible. Beyond the sampled grid the
// coupling is zero (the mode has been fully transferred by then).
struct CaptureCoupling {
    std::vector<double> times;
    Vector g_of_t;
    double occupation = 0.0; // of the source mode

    Complex eval(double t) const;
};

CaptureCoupling coupling_from_mode(const TemporalMode& mode, double g_cap);

// Extends a system generator with one capture slot per coupling: adds
// H_casc(t) = (i/2)[sqrt(kappa_oc) g_v^*(t) a^dag a_v + ... - h.c.] and the
// replacement jumps L = sqrt(kappa_c) c + g^*(t) c_cap; intrinsic (and
// thermal) jumps are kept. couplings are ordered (v,u) per rail.
Generator build_cascade_generator(const ModelParams& params,
                                  const std::vector<CaptureCoupling>& couplings,
                                  const BasisPtr& basis, Scheme scheme);

enum class CouplingSource { numeric, analytic };

struct CascadeOptions {
    TruncationPreset preset = TruncationPreset::single3;
    CouplingSource coupling_source = CouplingSource::numeric;
    int grid_points = 400;
    double corr_window = 10.0; // kernel grid ends at tau + corr_window/kappa
    double end_window = 15.0;  // cascade integrates to tau + end_window/kappa
    double g_cap_factor = 50.0;
    StepperConfig stepper{};
};

struct CascadeResult {
    DensityMatrix rho_out;                      // capture modes only
    std::vector<double> captured_photons;       // per capture cavity
    std::vector<double> residual_system_photons;// per system mode at T_end
    double T_end = 0.0;
    double dominant_fraction_optical = 1.0;
    double dominant_fraction_microwave = 1.0;
    double kernel_occupation_total_optical = 0.0;   // sum_i n_i
    double kernel_occupation_total_microwave = 0.0;
    double emitted_photons_optical = 0.0;   // kappa_oc int <n_a> dt
    double emitted_photons_microwave = 0.0; // kappa_ec int <n_b> dt
    std::vector<std::string> flags;

    bool flagged() const { return !flags.empty(); }
};

// Full pipeline: system trajectory -> correlation kernels -> dominant modes
// -> capture couplings -> cascaded master equation -> reduced capture state.
CascadeResult run_cascade(const ModelParams& params, Scheme scheme,
                          const CascadeOptions& options = {});

enum class Side { optical, microwave };

// Ring-down probe of the (system mode, capture cavity) pair with the drive
// off and the analytic post-tau coupling active, starting from the matrix
// element |nL, mL><nR, mR| at t = tau. Returns the capture-mode matrix at
// t -> infinity. The microwave side uses the strong-Kerr effective jumps
// (per-transition decay) so results are comparable with the closed forms.
Matrix decay_channel_probe(int nL, int mL, int nR, int mR, const ModelParams& params,
                           Side side, int system_dim = 4, int capture_dim = 4,
                           const StepperConfig& cfg = {});

} // namespace kerrpair

#endif
