#include "kerrpair/cascade.hpp"

#include <cmath>
#include <stdexcept>

namespace kerrpair {

Scheme preset_scheme(TruncationPreset preset) {
    switch (preset) {
    case TruncationPreset::single3:
    case TruncationPreset::single4:
        return Scheme::single_rail;
    default:
        return Scheme::dual_rail;
    }
}

BasisPtr system_basis(TruncationPreset preset) {
    switch (preset) {
    case TruncationPreset::single3:
        return make_basis({3, 3});
    case TruncationPreset::single4:
        return make_basis({4, 4});
    case TruncationPreset::dual2:
        return make_basis({2, 2, 2, 2});
    case TruncationPreset::dual3cap6:
        return make_basis({3, 3, 3, 3}, 6);
    }
    throw std::invalid_argument("unknown preset");
}

BasisPtr cascade_basis(TruncationPreset preset) {
    switch (preset) {
    case TruncationPreset::single3:
        return make_basis({3, 3, 3, 3});
    case TruncationPreset::single4:
        return make_basis({4, 4, 4, 4});
    case TruncationPreset::dual2:
        return make_basis({2, 2, 2, 2, 2, 2, 2, 2});
    case TruncationPreset::dual3cap6:
        return make_basis({3, 3, 3, 3, 3, 3, 3, 3}, 6);
    }
    throw std::invalid_argument("unknown preset");
}

Complex CaptureCoupling::eval(double t) const {
    if (times.empty() || t > times.back())
        return Complex(0.0);
    if (t <= times.front())
        return g_of_t(0);
    const double dt = times[1] - times[0];
    const double x = (t - times.front()) / dt;
    auto i = static_cast<Eigen::Index>(x);
    if (i >= g_of_t.size() - 1)
        i = g_of_t.size() - 2;
    const double w = x - static_cast<double>(i);
    return g_of_t(i) * (1.0 - w) + g_of_t(i + 1) * w;
}

CaptureCoupling coupling_from_mode(const TemporalMode& mode, double g_cap) {
    const auto N = mode.envelope.size();
    if (N < 2)
        throw std::invalid_argument("coupling_from_mode: degenerate mode grid");
    const double dt = mode.times[1] - mode.times[0];
    double norm = 0.0;
    for (Eigen::Index j = 0; j + 1 < N; ++j)
        norm += (std::norm(mode.envelope(j)) + std::norm(mode.envelope(j + 1))) / 2.0 * dt;
    if (norm < 1e-12)
        throw std::invalid_argument("coupling_from_mode: zero-norm mode");

    CaptureCoupling c;
    c.times = mode.times;
    c.occupation = mode.occupation;
    c.g_of_t.resize(N);
    double cum = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
        if (j > 0)
            cum += (std::norm(mode.envelope(j - 1)) + std::norm(mode.envelope(j))) / 2.0 * dt;
        const double denom = std::sqrt(std::max(cum, 1e-10));
        Complex val = -std::conj(mode.envelope(j)) / denom;
        const double mag = std::abs(val);
        if (mag > g_cap)
            val *= g_cap / mag;
        c.g_of_t(j) = val;
    }
    return c;
}

Generator build_cascade_generator(const ModelParams& params,
                                  const std::vector<CaptureCoupling>& couplings,
                                  const BasisPtr& basis, Scheme scheme) {
    const int rails = scheme == Scheme::dual_rail ? 2 : 1;
    const int n_sys = 2 * rails;
    const int n_cap = 2 * rails;
    if (static_cast<int>(couplings.size()) != n_cap)
        throw std::invalid_argument("build_cascade_generator: need one coupling per capture mode");
    if (basis->num_modes() != n_sys + n_cap)
        throw std::invalid_argument("build_cascade_generator: basis lacks capture slots");

    Generator gen;
    gen.basis = basis;
    gen.hamiltonian = (scheme == Scheme::dual_rail)
                          ? build_dualrail_hamiltonian(params, basis)
                          : build_entangler_hamiltonian(params, basis);
    if (params.g != 0.0)
        gen.breakpoints.push_back(params.tau);

    auto sparse = [](const Matrix& m) { return SparseMatrix(m.sparseView(1.0, 1e-300)); };

    for (int rail = 0; rail < rails; ++rail) {
        const int o = 2 * rail, e = 2 * rail + 1;
        const int v = n_sys + 2 * rail, u = n_sys + 2 * rail + 1;
        const Matrix a = annihilation(basis, o).data;
        const Matrix b = annihilation(basis, e).data;
        const Matrix av = annihilation(basis, v).data;
        const Matrix bu = annihilation(basis, u).data;
        const CaptureCoupling& gv = couplings[static_cast<std::size_t>(2 * rail)];
        const CaptureCoupling& gu = couplings[static_cast<std::size_t>(2 * rail + 1)];

        // H_casc = (i/2)[sqrt(koc) gv* a^dag a_v + sqrt(kec) gu* b^dag b_u - h.c.]
        const double sq_koc = std::sqrt(params.kappa_oc);
        const double sq_kec = std::sqrt(params.kappa_ec);
        gen.hamiltonian.add_term(sparse(a.adjoint() * av), [gv, sq_koc](double t) {
            return Complex(0.0, 0.5) * sq_koc * std::conj(gv.eval(t));
        });
        gen.hamiltonian.add_term(sparse(av.adjoint() * a), [gv, sq_koc](double t) {
            return Complex(0.0, -0.5) * sq_koc * gv.eval(t);
        });
        gen.hamiltonian.add_term(sparse(b.adjoint() * bu), [gu, sq_kec](double t) {
            return Complex(0.0, 0.5) * sq_kec * std::conj(gu.eval(t));
        });
        gen.hamiltonian.add_term(sparse(bu.adjoint() * b), [gu, sq_kec](double t) {
            return Complex(0.0, -0.5) * sq_kec * gu.eval(t);
        });

        // L5 = sqrt(koc) a + gv*(t) a_v, L6 analog; intrinsic losses unchanged.
        if (params.kappa_oc > 0.0) {
            TimeDepOperator l5;
            l5.add_constant(sparse(sq_koc * a));
            l5.add_term(sparse(av), [gv](double t) { return std::conj(gv.eval(t)); });
            gen.jumps.push_back(std::move(l5));
        }
        if (params.kappa_ec > 0.0) {
            TimeDepOperator l6;
            l6.add_constant(sparse(sq_kec * b));
            l6.add_term(sparse(bu), [gu](double t) { return std::conj(gu.eval(t)); });
            gen.jumps.push_back(std::move(l6));
        }
        auto add_const = [&gen, &sparse](const Matrix& m) {
            TimeDepOperator op;
            op.add_constant(sparse(m));
            gen.jumps.push_back(std::move(op));
        };
        if (params.kappa_oi > 0.0)
            add_const(std::sqrt(params.kappa_oi) * a);
        if (params.kappa_ei * (1.0 + params.n_th) > 0.0)
            add_const(std::sqrt(params.kappa_ei * (1.0 + params.n_th)) * b);
        if (params.kappa_ei * params.n_th > 0.0)
            add_const(std::sqrt(params.kappa_ei * params.n_th) * Matrix(b.adjoint()));
    }
    return gen;
}

static std::vector<double> uniform_grid(double t0, double t1, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
    return g;
}

CascadeResult run_cascade(const ModelParams& params, Scheme scheme,
                          const CascadeOptions& options) {
    params.validate();
    if (scheme != preset_scheme(options.preset))
        throw std::invalid_argument("run_cascade: preset does not match scheme");
    if (params.tau <= 0.0)
        throw std::invalid_argument("run_cascade: tau must be positive");
    const double kappa_slow = std::min(params.kappa_o(), params.kappa_e());
    if (kappa_slow <= 0.0)
        throw std::invalid_argument("run_cascade: needs nonzero loss to define the time window");

    const BasisPtr sys = system_basis(options.preset);
    const Generator sys_gen = scheme == Scheme::dual_rail
                                  ? make_dualrail_generator(params, sys)
                                  : make_entangler_generator(params, sys);

    const double T_corr = params.tau + options.corr_window / kappa_slow;
    const auto times = uniform_grid(0.0, T_corr, options.grid_points);
    const double g_cap = options.g_cap_factor * std::max(params.g, params.kappa());

    CascadeResult result;
    std::vector<CaptureCoupling> couplings;

    if (options.coupling_source == CouplingSource::analytic) {
        if (scheme != Scheme::single_rail)
            throw std::invalid_argument("analytic couplings exist for the single-rail scheme only");
        const auto am = analytic_temporal_modes(params.g, params.kappa(), params.tau);
        TemporalMode v, u;
        v.times = u.times = times;
        v.envelope.resize(static_cast<Eigen::Index>(times.size()));
        u.envelope.resize(static_cast<Eigen::Index>(times.size()));
        for (std::size_t j = 0; j < times.size(); ++j) {
            v.envelope(static_cast<Eigen::Index>(j)) = am.v(times[j]);
            u.envelope(static_cast<Eigen::Index>(j)) = am.u(times[j]);
        }
        v.occupation = u.occupation = 0.0;
        couplings = {coupling_from_mode(v, g_cap), coupling_from_mode(u, g_cap)};
        result.dominant_fraction_optical = result.dominant_fraction_microwave = 1.0;
    } else {
        std::vector<KernelRequest> reqs;
        const SparseMatrix a1 = annihilation(sys, 0).data.sparseView();
        const SparseMatrix b1 = annihilation(sys, 1).data.sparseView();
        reqs.push_back({a1, params.kappa_oc});
        reqs.push_back({b1, params.kappa_ec});
        const Matrix rho0 = vacuum_state(sys).data;
        auto kernels = g1_correlations(sys_gen, rho0, reqs, times, options.stepper);

        auto modes_v = decompose_modes(kernels[0]);
        auto modes_u = decompose_modes(kernels[1]);
        result.dominant_fraction_optical = dominant_fraction(modes_v);
        result.dominant_fraction_microwave = dominant_fraction(modes_u);
        for (const auto& m : modes_v)
            result.kernel_occupation_total_optical += std::max(m.occupation, 0.0);
        for (const auto& m : modes_u)
            result.kernel_occupation_total_microwave += std::max(m.occupation, 0.0);
        // independent bookkeeping: kappa_c * int <n> dt from the kernel diagonal
        const double dt = times[1] - times[0];
        for (std::size_t j = 0; j + 1 < times.size(); ++j) {
            result.emitted_photons_optical +=
                (kernels[0].data(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real()
                 + kernels[0].data(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j + 1)).real())
                / 2.0 * dt;
            result.emitted_photons_microwave +=
                (kernels[1].data(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real()
                 + kernels[1].data(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j + 1)).real())
                / 2.0 * dt;
        }

        couplings.reserve(4);
        couplings.push_back(coupling_from_mode(modes_v.front(), g_cap));
        couplings.push_back(coupling_from_mode(modes_u.front(), g_cap));
        if (scheme == Scheme::dual_rail) {
            // rails are pumped synchronously with identical parameters
            couplings.push_back(couplings[0]);
            couplings.push_back(couplings[1]);
        }
    }

    const BasisPtr full = cascade_basis(options.preset);
    const Generator casc_gen = build_cascade_generator(params, couplings, full, scheme);

    result.T_end = params.tau + options.end_window / kappa_slow;
    const Matrix rho_final =
        propagate_to(vacuum_state(full).data, casc_gen, 0.0, result.T_end, options.stepper);

    const int n_sys = scheme == Scheme::dual_rail ? 4 : 2;
    const int n_total = full->num_modes();
    std::vector<int> keep;
    for (int m = n_sys; m < n_total; ++m)
        keep.push_back(m);
    DensityMatrix rho_full{full, rho_final};
    result.rho_out = partial_trace(rho_full, keep);

    for (int m = 0; m < n_sys; ++m)
        result.residual_system_photons.push_back(
            real_expectation(number_op(full, m), rho_full));
    for (int m = n_sys; m < n_total; ++m)
        result.captured_photons.push_back(real_expectation(number_op(full, m), rho_full));

    for (std::size_t m = 0; m < result.residual_system_photons.size(); ++m)
        if (result.residual_system_photons[m] >= 1e-3)
            result.flags.push_back("incomplete_transfer_mode_" + std::to_string(m));
    return result;
}

Matrix decay_channel_probe(int nL, int mL, int nR, int mR, const ModelParams& params,
                           Side side, int system_dim, int capture_dim,
                           const StepperConfig& cfg) {
    if (!params.symmetric())
        throw std::invalid_argument("decay_channel_probe: symmetric loss convention expected");
    const double kappa_c = params.kappa_c();
    const double kappa_i = params.kappa_i();
    const double kappa = kappa_c + kappa_i;
    if (params.g <= 0.0 || kappa <= 0.0)
        throw std::invalid_argument("decay_channel_probe: needs g > 0 and kappa > 0");
    const auto pc = perturbation_constants(params.g, kappa_c, kappa_i);
    const double eps = side == Side::optical ? pc.eps_v : pc.eps_u;
    const double mu = side == Side::optical ? pc.mu_v : pc.mu_u;

    const double tau = params.tau > 0.0 ? params.tau : 0.0;
    // post-tau branch of the closed-form envelope and its cumulative norm
    auto g_of_t = [=](double t) -> Complex {
        const double dtau = std::max(t - tau, 0.0);
        const double env = mu / std::sqrt(2.0) * std::exp(-kappa * dtau / 2.0);
        const double cum = 1.0 - (1.0 - eps) * std::exp(-kappa * dtau);
        return -env / std::sqrt(std::max(cum, 1e-10));
    };

    const auto basis = make_basis({system_dim, capture_dim});
    const Matrix cap = annihilation(basis, 1).data;
    auto sparse = [](const Matrix& m) { return SparseMatrix(m.sparseView(1.0, 1e-300)); };

    Generator gen;
    gen.basis = basis;
    const double sq_kc = std::sqrt(kappa_c);

    // the 0<->1 transition feeds the capture cavity; with strong Kerr the
    // higher microwave transitions are off-resonant and decay separately
    Matrix sys_coupling_op;
    if (side == Side::optical) {
        sys_coupling_op = annihilation(basis, 0).data;
    } else {
        sys_coupling_op = transition_op(basis, 0, 0, 1).data;
    }

    gen.hamiltonian.add_term(sparse(sys_coupling_op.adjoint() * cap), [=](double t) {
        return Complex(0.0, 0.5) * sq_kc * std::conj(g_of_t(t));
    });
    gen.hamiltonian.add_term(sparse(cap.adjoint() * sys_coupling_op), [=](double t) {
        return Complex(0.0, -0.5) * sq_kc * g_of_t(t);
    });

    if (kappa_c > 0.0) {
        TimeDepOperator l;
        l.add_constant(sparse(sq_kc * sys_coupling_op));
        l.add_term(sparse(cap), [=](double t) { return std::conj(g_of_t(t)); });
        gen.jumps.push_back(std::move(l));
    }
    auto add_const = [&gen, &sparse](const Matrix& m) {
        TimeDepOperator op;
        op.add_constant(sparse(m));
        gen.jumps.push_back(std::move(op));
    };
    if (side == Side::optical) {
        if (kappa_i > 0.0)
            add_const(std::sqrt(kappa_i) * annihilation(basis, 0).data);
    } else {
        if (kappa_i > 0.0)
            add_const(std::sqrt(kappa_i) * transition_op(basis, 0, 0, 1).data);
        for (int n = 2; n < system_dim; ++n)
            add_const(std::sqrt(kappa * n) * transition_op(basis, 0, n - 1, n).data);
    }

    const auto D = static_cast<Eigen::Index>(basis->size());
    Matrix rho0 = Matrix::Zero(D, D);
    const std::vector<int> left{nL, mL}, right{nR, mR};
    rho0(static_cast<Eigen::Index>(basis->index_of(left)),
         static_cast<Eigen::Index>(basis->index_of(right))) = 1.0;

    const double T = tau + 35.0 / kappa;
    Matrix rho = propagate_to(rho0, gen, tau, T, cfg);
    DensityMatrix full{basis, std::move(rho)};
    const int keep[] = {1};
    return partial_trace(full, keep).data;
}

} // namespace kerrpair
