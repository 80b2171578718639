#include "kerrpair/dynamics.hpp"

#include <stdexcept>

namespace kerrpair {

ModelParams ModelParams::symmetric_mhz(double g_mhz, double kappa_c_mhz, double kappa_i_mhz,
                                       double chi_e_mhz, double chi_c_mhz, double tau_us,
                                       double n_th) {
    ModelParams p;
    p.g = kTwoPi * g_mhz;
    p.chi_e = kTwoPi * chi_e_mhz;
    p.chi_c = kTwoPi * chi_c_mhz;
    p.kappa_oc = p.kappa_ec = kTwoPi * kappa_c_mhz;
    p.kappa_oi = p.kappa_ei = kTwoPi * kappa_i_mhz;
    p.tau = tau_us;
    p.n_th = n_th;
    p.validate();
    return p;
}

void ModelParams::validate() const {
    const double rates[] = {g, chi_e, chi_c, kappa_oc, kappa_oi, kappa_ec, kappa_ei};
    for (double r : rates)
        if (r < 0.0 || !std::isfinite(r))
            throw std::invalid_argument("ModelParams: rates must be finite and >= 0");
    if (n_th < 0.0)
        throw std::invalid_argument("ModelParams: n_th must be >= 0");
    if (tau < 0.0 || !std::isfinite(tau))
        throw std::invalid_argument("ModelParams: tau must be >= 0");
}

void TimeDepOperator::add_constant(SparseMatrix op) {
    op.makeCompressed();
    parts_.push_back(std::move(op));
    coeffs_.emplace_back();
}

void TimeDepOperator::add_term(SparseMatrix op, std::function<Complex(double)> coeff) {
    op.makeCompressed();
    parts_.push_back(std::move(op));
    coeffs_.push_back(std::move(coeff));
}

bool TimeDepOperator::time_dependent() const {
    for (const auto& c : coeffs_)
        if (c)
            return true;
    return false;
}

Eigen::Index TimeDepOperator::dim() const {
    return parts_.empty() ? 0 : parts_.front().rows();
}

std::vector<Complex> TimeDepOperator::coeffs_at(double t) const {
    std::vector<Complex> out(parts_.size());
    for (std::size_t k = 0; k < parts_.size(); ++k)
        out[k] = coeffs_[k] ? coeffs_[k](t) : Complex(1.0);
    return out;
}

Matrix TimeDepOperator::dense_at(double t) const {
    Matrix out = Matrix::Zero(dim(), dim());
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        const Complex c = coeffs_[k] ? coeffs_[k](t) : Complex(1.0);
        out += c * Matrix(parts_[k]);
    }
    return out;
}

SparseMatrix TimeDepOperator::sparse_at(double t) const {
    SparseMatrix out(dim(), dim());
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        const Complex c = coeffs_[k] ? coeffs_[k](t) : Complex(1.0);
        out = out + SparseMatrix(c * parts_[k]);
    }
    out.makeCompressed();
    return out;
}

static SparseMatrix to_sparse(const Matrix& m) {
    return m.sparseView(1.0, 1e-300);
}

TimeDepOperator build_entangler_hamiltonian(const ModelParams& params, const BasisPtr& basis,
                                            int optical_mode, int microwave_mode) {
    const Matrix a = annihilation(basis, optical_mode).data;
    const Matrix b = annihilation(basis, microwave_mode).data;
    const Matrix drive = -(a.adjoint() * b.adjoint() + a * b);
    const Matrix kerr = -(b.adjoint() * b.adjoint() * b * b);

    TimeDepOperator h;
    const double g = params.g;
    const double tau = params.tau;
    if (g != 0.0)
        h.add_term(to_sparse(g * drive), [tau](double t) { return Complex(t < tau ? 1.0 : 0.0); });
    if (params.chi_e != 0.0)
        h.add_constant(to_sparse(params.chi_e * kerr));
    if (h.empty())
        h.add_constant(to_sparse(Matrix::Zero(a.rows(), a.cols())));
    return h;
}

TimeDepOperator build_dualrail_hamiltonian(const ModelParams& params, const BasisPtr& basis) {
    if (basis->num_modes() < 4)
        throw std::invalid_argument("dual-rail basis needs modes (o1,e1,o2,e2)");
    const Matrix a1 = annihilation(basis, 0).data;
    const Matrix b1 = annihilation(basis, 1).data;
    const Matrix a2 = annihilation(basis, 2).data;
    const Matrix b2 = annihilation(basis, 3).data;

    Matrix drive = -(a1.adjoint() * b1.adjoint() + a1 * b1);
    drive += -(a2.adjoint() * b2.adjoint() + a2 * b2);
    Matrix kerr = -(b1.adjoint() * b1.adjoint() * b1 * b1);
    kerr += -(b2.adjoint() * b2.adjoint() * b2 * b2);
    const Matrix cross = (b1.adjoint() * b1) * (b2.adjoint() * b2);

    TimeDepOperator h;
    const double g = params.g;
    const double tau = params.tau;
    if (g != 0.0)
        h.add_term(to_sparse(g * drive), [tau](double t) { return Complex(t < tau ? 1.0 : 0.0); });
    Matrix static_part = params.chi_e * kerr + params.chi_c * cross;
    if (static_part.cwiseAbs().maxCoeff() > 0.0 || g == 0.0)
        h.add_constant(to_sparse(static_part));
    return h;
}

std::vector<TimeDepOperator> standard_jumps(const ModelParams& params, const BasisPtr& basis,
                                            int optical_mode, int microwave_mode) {
    std::vector<TimeDepOperator> jumps;
    auto add = [&jumps](const Matrix& m) {
        TimeDepOperator op;
        op.add_constant(to_sparse(m));
        jumps.push_back(std::move(op));
    };
    const Matrix a = annihilation(basis, optical_mode).data;
    const Matrix b = annihilation(basis, microwave_mode).data;
    if (params.kappa_o() > 0.0)
        add(std::sqrt(params.kappa_o()) * a);
    if (params.kappa_ec > 0.0)
        add(std::sqrt(params.kappa_ec) * b);
    if (params.kappa_ei * (1.0 + params.n_th) > 0.0)
        add(std::sqrt(params.kappa_ei * (1.0 + params.n_th)) * b);
    if (params.kappa_ei * params.n_th > 0.0)
        add(std::sqrt(params.kappa_ei * params.n_th) * Matrix(b.adjoint()));
    return jumps;
}

std::vector<TimeDepOperator> standard_jumps_dualrail(const ModelParams& params,
                                                     const BasisPtr& basis) {
    auto jumps = standard_jumps(params, basis, 0, 1);
    auto second = standard_jumps(params, basis, 2, 3);
    for (auto& j : second)
        jumps.push_back(std::move(j));
    return jumps;
}

Generator make_entangler_generator(const ModelParams& params, const BasisPtr& basis) {
    Generator gen;
    gen.basis = basis;
    gen.hamiltonian = build_entangler_hamiltonian(params, basis);
    gen.jumps = standard_jumps(params, basis);
    if (params.g != 0.0)
        gen.breakpoints.push_back(params.tau);
    return gen;
}

Generator make_dualrail_generator(const ModelParams& params, const BasisPtr& basis) {
    Generator gen;
    gen.basis = basis;
    gen.hamiltonian = build_dualrail_hamiltonian(params, basis);
    gen.jumps = standard_jumps_dualrail(params, basis);
    if (params.g != 0.0)
        gen.breakpoints.push_back(params.tau);
    return gen;
}

LindbladRhs::LindbladRhs(const Generator& gen) : gen_(&gen) {
    const auto D = static_cast<Eigen::Index>(gen.basis->size());
    for (const auto& j : gen.jumps) {
        if (j.time_dependent()) {
            var_jumps_.push_back(&j);
        } else {
            SparseMatrix L = j.sparse_at(0.0);
            SparseMatrix Lsq = (SparseMatrix(L.adjoint()) * L).pruned();
            Lsq.makeCompressed();
            const_jumps_.push_back(std::move(L));
            const_jump_sq_.push_back(std::move(Lsq));
        }
    }
    t1_.resize(D, D);
    t2_.resize(D, D);
    rho_adj_.resize(D, D);
}

void LindbladRhs::operator()(double t, const Matrix& rho, Matrix& out) {
    const auto& H = gen_->hamiltonian;
    out.setZero(rho.rows(), rho.cols());

    // -i(H rho - rho H) accumulated part-by-part
    const auto h_coeffs = H.coeffs_at(t);
    for (std::size_t k = 0; k < H.parts().size(); ++k) {
        const Complex c = h_coeffs[k];
        if (c == Complex(0.0))
            continue;
        const auto& P = H.parts()[k];
        t1_.noalias() = P * rho;
        t1_.noalias() -= rho * P;
        out += (Complex(0.0, -1.0) * c) * t1_;
    }

    auto add_dissipator = [&](const SparseMatrix& L, const SparseMatrix& Lsq) {
        t1_.noalias() = L * rho;          // L rho
        t2_.noalias() = t1_ * L.adjoint();
        out += t2_;                        // L rho L^dag
        t1_.noalias() = Lsq * rho;
        out -= 0.5 * t1_;
        t1_.noalias() = rho * Lsq;
        out -= 0.5 * t1_;
    };

    for (std::size_t k = 0; k < const_jumps_.size(); ++k)
        add_dissipator(const_jumps_[k], const_jump_sq_[k]);
    for (const TimeDepOperator* j : var_jumps_) {
        lt_ = j->sparse_at(t);
        lsq_ = (SparseMatrix(lt_.adjoint()) * lt_).pruned();
        add_dissipator(lt_, lsq_);
    }
}

Trajectory propagate(const Matrix& rho0, const Generator& gen, double t0, double t1,
                     std::span<const double> sample_times, const StepperConfig& cfg) {
    if (rho0.rows() != static_cast<Eigen::Index>(gen.basis->size()))
        throw std::invalid_argument("propagate: state dimension does not match basis");
    Trajectory traj;
    LindbladRhs rhs(gen);
    Matrix y = rho0;
    double t = t0;
    for (double ts : sample_times) {
        if (ts < t - 1e-15 || ts > t1 + 1e-15)
            throw std::invalid_argument("propagate: sample times must be sorted within [t0, t1]");
        if (ts > t)
            integrate(rhs, y, t, ts, cfg, gen.breakpoints);
        t = ts;
        traj.times.push_back(ts);
        traj.states.push_back(y);
    }
    if (t < t1)
        integrate(rhs, y, t, t1, cfg, gen.breakpoints);
    if (traj.times.empty() || traj.times.back() < t1) {
        traj.times.push_back(t1);
        traj.states.push_back(std::move(y));
    }
    return traj;
}

Matrix propagate_to(const Matrix& rho0, const Generator& gen, double t0, double t1,
                    const StepperConfig& cfg) {
    LindbladRhs rhs(gen);
    Matrix y = rho0;
    if (t1 > t0)
        integrate(rhs, y, t0, t1, cfg, gen.breakpoints);
    return y;
}

} // namespace kerrpair
