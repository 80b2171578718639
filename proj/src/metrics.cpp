#include "kerrpair/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kerrpair/analytics.hpp"

namespace kerrpair {

static Eigen::Index pair_index(const FockBasis& basis, int n_v, int n_u) {
    const int occ[] = {n_v, n_u};
    return static_cast<Eigen::Index>(basis.index_of(occ));
}

BellMetrics bell_fidelity(const DensityMatrix& rho_out) {
    const auto& basis = *rho_out.basis;
    if (basis.num_modes() != 2)
        throw std::invalid_argument("bell_fidelity: expected a two-mode capture state");
    const auto i00 = pair_index(basis, 0, 0);
    const auto i11 = pair_index(basis, 1, 1);
    BellMetrics m;
    const Complex off = rho_out.data(i00, i11);
    m.fidelity = (rho_out.data(i00, i00).real() + rho_out.data(i11, i11).real()) / 2.0
                 + std::abs(off);
    m.optimal_phase = -std::arg(off);
    m.p1 = rho_out.data(i11, i11).real();
    m.p2 = 0.0;
    if (basis.dim(0) > 2 && basis.dim(1) > 2) {
        const auto i22 = pair_index(basis, 2, 2);
        m.p2 = rho_out.data(i22, i22).real();
    }
    m.blockade_ratio = blockade_ratio(rho_out);
    return m;
}

double blockade_ratio(const DensityMatrix& rho_out) {
    const auto& basis = *rho_out.basis;
    if (basis.num_modes() != 2 || basis.dim(0) < 3 || basis.dim(1) < 3)
        throw std::invalid_argument("blockade_ratio: capture dimensions must be >= 3");
    const double p0 = rho_out.data(pair_index(basis, 0, 0), pair_index(basis, 0, 0)).real();
    const double p1 = rho_out.data(pair_index(basis, 1, 1), pair_index(basis, 1, 1)).real();
    const double p2 = rho_out.data(pair_index(basis, 2, 2), pair_index(basis, 2, 2)).real();
    if (p1 < 1e-12)
        return std::numeric_limits<double>::infinity();
    return p2 * p0 / (p1 * p1);
}

PostSelection postselect_dualrail(const DensityMatrix& rho_out) {
    const auto& basis = *rho_out.basis;
    if (basis.num_modes() != 4)
        throw std::invalid_argument("postselect_dualrail: expected capture modes (v1,u1,v2,u2)");
    const auto D = static_cast<Eigen::Index>(basis.size());

    // Pi removes states with both optical captures empty or both microwave
    // captures empty. Diagonal in the Fock basis.
    Eigen::VectorXd pi(D);
    for (Eigen::Index i = 0; i < D; ++i) {
        const auto s = basis.state(static_cast<std::size_t>(i));
        const bool optical_vac = s[0] == 0 && s[2] == 0;
        const bool microwave_vac = s[1] == 0 && s[3] == 0;
        pi(i) = (optical_vac || microwave_vac) ? 0.0 : 1.0;
    }

    double prob = 0.0;
    for (Eigen::Index i = 0; i < D; ++i)
        prob += pi(i) * rho_out.data(i, i).real();

    PostSelection out;
    out.probability = prob;
    if (prob < 1e-12)
        throw std::runtime_error("postselect_dualrail: post-selected fidelity undefined (P < 1e-12)");

    const int a_occ[] = {0, 0, 1, 1}; // |0011> on (v1,u1,v2,u2)
    const int b_occ[] = {1, 1, 0, 0}; // |1100>
    const auto ia = static_cast<Eigen::Index>(basis.index_of(a_occ));
    const auto ib = static_cast<Eigen::Index>(basis.index_of(b_occ));
    // Both components survive Pi, so matrix elements are just rescaled.
    const double paa = rho_out.data(ia, ia).real() / prob;
    const double pbb = rho_out.data(ib, ib).real() / prob;
    const Complex off = rho_out.data(ia, ib) / prob;
    out.fidelity_post = (paa + pbb) / 2.0 + std::abs(off);
    out.optimal_phase = -std::arg(off);
    return out;
}

DensityMatrix tmsv_state(double r, int dim) {
    if (r < 0.0)
        throw std::invalid_argument("tmsv_state: r must be >= 0");
    if (dim < 1)
        throw std::invalid_argument("tmsv_state: dim must be >= 1");
    auto basis = make_basis({dim, dim});
    const double t = std::tanh(r);
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
    for (int n = 0; n < dim; ++n) {
        const int occ[] = {n, n};
        psi(static_cast<Eigen::Index>(basis->index_of(occ))) = std::pow(t, n);
    }
    psi.normalize();
    return {basis, psi * psi.adjoint()};
}

SpdcOptimum spdc_best_point() {
    // F(r) = (1 - t^2)(1 + t)^2 / 2 with t = tanh r; analytic optimum t = 1/2.
    auto res = golden_section_minimize(
        [](double r) {
            const double t = std::tanh(r);
            return -(1.0 - t * t) * (1.0 + t) * (1.0 + t) / 2.0;
        },
        0.0, 3.0, 1e-8);
    return {-res.value, std::tanh(res.x)};
}

double spdc_best_fidelity() { return spdc_best_point().fidelity; }

PostSelection dualrail_tmsv_point(double r, int dim) {
    const DensityMatrix one = tmsv_state(r, dim);
    auto basis = make_basis({dim, dim, dim, dim});
    const auto D1 = one.data.rows();
    Matrix joint = Matrix::Zero(D1 * D1, D1 * D1);
    // kron in (v1,u1) x (v2,u2) ordering matches the 4-mode basis enumeration
    for (Eigen::Index i = 0; i < D1; ++i)
        for (Eigen::Index j = 0; j < D1; ++j)
            joint.block(i * D1, j * D1, D1, D1) = one.data(i, j) * one.data;
    return postselect_dualrail({basis, std::move(joint)});
}

bool beats_dualrail_spdc(double f, double p) {
    if (!(p > 0.0) || !(f > 0.0))
        return false;
    if (p > 1.0 || f > 1.0)
        return true;
    // SPDC curve: P(t) = 1 - (1-t^2)^2 increasing, F(t) decreasing in t.
    // At the squeezing that matches our probability, compare fidelities.
    const double one_minus_t2 = std::sqrt(std::max(1.0 - p, 0.0));
    const double t2 = 1.0 - one_minus_t2;
    const double f_spdc = 2.0 * one_minus_t2 * one_minus_t2 / (2.0 - t2);
    return f > f_spdc;
}

} // namespace kerrpair
