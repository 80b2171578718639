#ifndef KERRPAIR_DYNAMICS_HPP
#define KERRPAIR_DYNAMICS_HPP

#include <functional>
#include <vector>

#include "kerrpair/fock.hpp"
#include "kerrpair/ode.hpp"

namespace kerrpair {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Physical rates as angular frequencies (rad/us); times in us. Config files
// and CSV output use ordinary frequencies nu in MHz with omega = 2*pi*nu.
struct ModelParams {
    double g = 0.0;
    double chi_e = 0.0;
    double chi_c = 0.0;
    double tau = 0.0;
    double kappa_oc = 0.0;
    double kappa_oi = 0.0;
    double kappa_ec = 0.0;
    double kappa_ei = 0.0;
    double n_th = 0.0;

    double kappa_o() const { return kappa_oc + kappa_oi; }
    double kappa_e() const { return kappa_ec + kappa_ei; }

    // Symmetric convention: kappa_oc = kappa_ec = kappa_c, same for intrinsic.
    double kappa_c() const { return kappa_oc; }
    double kappa_i() const { return kappa_oi; }
    double kappa() const { return kappa_oc + kappa_oi; }
    bool symmetric() const { return kappa_oc == kappa_ec && kappa_oi == kappa_ei; }

    static ModelParams symmetric_mhz(double g_mhz, double kappa_c_mhz, double kappa_i_mhz,
                                     double chi_e_mhz, double chi_c_mhz = 0.0,
                                     double tau_us = 0.0, double n_th = 0.0);
    void validate() const; // throws std::invalid_argument
};

// Operator-valued function of time: sum_k coeff_k(t) * part_k with fixed
// sparse parts. Constant terms skip coefficient evaluation.
class TimeDepOperator {
public:
    void add_constant(SparseMatrix op);
    void add_term(SparseMatrix op, std::function<Complex(double)> coeff);

    bool empty() const { return parts_.empty(); }
    bool time_dependent() const;
    Eigen::Index dim() const;

    Matrix dense_at(double t) const;
    SparseMatrix sparse_at(double t) const;

    const std::vector<SparseMatrix>& parts() const { return parts_; }
    std::vector<Complex> coeffs_at(double t) const;

private:
    std::vector<SparseMatrix> parts_;
    std::vector<std::function<Complex(double)>> coeffs_; // null -> constant 1
};

struct Generator {
    BasisPtr basis;
    TimeDepOperator hamiltonian;
    std::vector<TimeDepOperator> jumps;
    std::vector<double> breakpoints;

    Matrix hamiltonian_at(double t) const { return hamiltonian.dense_at(t); }
};

// H(t) = -g (a^dag b^dag + a b) [0 < t < tau] - chi_e b^dag b^dag b b (always).
TimeDepOperator build_entangler_hamiltonian(const ModelParams& params, const BasisPtr& basis,
                                            int optical_mode = 0, int microwave_mode = 1);

// Two synchronously pumped copies on modes (o1,e1,o2,e2) = (0,1,2,3) plus
// chi_c * n_e1 * n_e2.
TimeDepOperator build_dualrail_hamiltonian(const ModelParams& params, const BasisPtr& basis);

// Jump set per system copy: sqrt(kappa_o) a, sqrt(kappa_ec) b,
// sqrt(kappa_ei (1+n_th)) b, sqrt(kappa_ei n_th) b^dag; zero-rate jumps dropped.
std::vector<TimeDepOperator> standard_jumps(const ModelParams& params, const BasisPtr& basis,
                                            int optical_mode = 0, int microwave_mode = 1);
std::vector<TimeDepOperator> standard_jumps_dualrail(const ModelParams& params,
                                                     const BasisPtr& basis);

Generator make_entangler_generator(const ModelParams& params, const BasisPtr& basis);
Generator make_dualrail_generator(const ModelParams& params, const BasisPtr& basis);

// Right-hand side rho -> -i[H,rho] + sum_k D[L_k] rho with preassembled
// sparse structure and reusable workspace.
class LindbladRhs {
public:
    explicit LindbladRhs(const Generator& gen);
    void operator()(double t, const Matrix& rho, Matrix& out);

private:
    const Generator* gen_;
    std::vector<SparseMatrix> const_jumps_;
    std::vector<SparseMatrix> const_jump_sq_; // L^dag L for constant jumps
    std::vector<const TimeDepOperator*> var_jumps_;
    SparseMatrix lt_, lsq_;
    Matrix t1_, t2_, rho_adj_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;
};

// Integrates the master equation from t0 to t1, recording the state at the
// given sample times (which must be sorted and lie within [t0, t1]). rho0 may
// be any matrix on the generator's basis; non-Hermitian probes propagate by
// the same linear map.
Trajectory propagate(const Matrix& rho0, const Generator& gen, double t0, double t1,
                     std::span<const double> sample_times, const StepperConfig& cfg = {});

// Final state only.
Matrix propagate_to(const Matrix& rho0, const Generator& gen, double t0, double t1,
                    const StepperConfig& cfg = {});

} // namespace kerrpair

#endif
