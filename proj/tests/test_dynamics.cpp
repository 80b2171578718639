#include "doctest.h"

#include <cmath>
#include <random>

#include "kerrpair/dynamics.hpp"

using namespace kerrpair;

TEST_CASE("params validation and unit convention") {
    CHECK_THROWS_AS((void)ModelParams::symmetric_mhz(-1, 2, 0, 100), std::invalid_argument);
    const auto p = ModelParams::symmetric_mhz(10, 2, 0.5, 100, 0, 0.0125);
    CHECK(p.g == doctest::Approx(kTwoPi * 10));
    CHECK(p.kappa() == doctest::Approx(kTwoPi * 2.5));
    CHECK(p.kappa_o() == doctest::Approx(p.kappa_e()));
}

TEST_CASE("entangler hamiltonian matrix elements") {
    const auto p = ModelParams::symmetric_mhz(10, 2, 0, 100, 0, 0.0125);
    auto basis = make_basis({3, 3});
    const auto h = build_entangler_hamiltonian(p, basis);

    const Matrix H = h.dense_at(p.tau / 2.0);
    const int s00[] = {0, 0}, s11[] = {1, 1}, s02[] = {0, 2};
    const auto i00 = static_cast<Eigen::Index>(basis->index_of(s00));
    const auto i11 = static_cast<Eigen::Index>(basis->index_of(s11));
    const auto i02 = static_cast<Eigen::Index>(basis->index_of(s02));
    CHECK(H(i11, i00).real() == doctest::Approx(-p.g));
    CHECK(H(i02, i02).real() == doctest::Approx(-2.0 * p.chi_e));
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    const Matrix Hafter = h.dense_at(p.tau * 2.0);
    CHECK(Hafter(i11, i00) == Complex(0.0));
    CHECK(Hafter(i02, i02).real() == doctest::Approx(-2.0 * p.chi_e));
}

TEST_CASE("dual-rail hamiltonian") {
    auto basis = make_basis({2, 2, 2, 2});
    const auto p = ModelParams::symmetric_mhz(10, 0.5, 0, 0, 200, 0.0125);
    const auto h = build_dualrail_hamiltonian(p, basis);
    const Matrix H = h.dense_at(p.tau / 2.0);

    const int e11[] = {0, 1, 0, 1};
    const auto i = static_cast<Eigen::Index>(basis->index_of(e11));
    CHECK(H(i, i).real() == doctest::Approx(p.chi_c));

    SUBCASE("chi_c = 0 is two decoupled copies") {
        auto q = ModelParams::symmetric_mhz(10, 0.5, 0, 0, 0, 0.0125);
        const Matrix H0 = build_dualrail_hamiltonian(q, basis).dense_at(q.tau / 2.0);
        auto sub = make_basis({2, 2});
        const Matrix Hent = build_entangler_hamiltonian(q, sub).dense_at(q.tau / 2.0);
        const Matrix id = Matrix::Identity(4, 4);
        Matrix expected = Matrix::Zero(16, 16);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                expected.block(a * 4, b * 4, 4, 4) = Hent(a, b) * id + (a == b ? Hent : Matrix::Zero(4, 4));
        CHECK((H0 - expected).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("antisymmetric state decouples from the drive") {
        const int s0011[] = {0, 0, 1, 1}, s1100[] = {1, 1, 0, 0}, vac[] = {0, 0, 0, 0};
        Vector anti = Vector::Zero(16);
        anti(static_cast<Eigen::Index>(basis->index_of(s0011))) = 1.0 / std::sqrt(2.0);
        anti(static_cast<Eigen::Index>(basis->index_of(s1100))) = -1.0 / std::sqrt(2.0);
        Vector vacv = Vector::Zero(16);
        vacv(static_cast<Eigen::Index>(basis->index_of(vac))) = 1.0;
        CHECK(std::abs(anti.adjoint().dot(H * vacv)) < 1e-12);
    }
}

TEST_CASE("standard jumps") {
    auto basis = make_basis({3, 3});
    SUBCASE("n_th = 0 gives three jumps") {
        const auto p = ModelParams::symmetric_mhz(10, 2, 0.5, 100);
        CHECK(standard_jumps(p, basis).size() == 3);
    }
    SUBCASE("no intrinsic loss drops L3 and L4") {
        const auto p = ModelParams::symmetric_mhz(10, 2, 0, 100);
        CHECK(standard_jumps(p, basis).size() == 2);
    }
    SUBCASE("thermal bath adds the heating jump") {
        const auto p = ModelParams::symmetric_mhz(10, 2, 0.5, 100, 0, 0, 0.1);
        CHECK(standard_jumps(p, basis).size() == 4);
    }
    SUBCASE("dual-rail doubles the set") {
        auto b4 = make_basis({2, 2, 2, 2});
        const auto p = ModelParams::symmetric_mhz(10, 2, 0, 0, 200);
        CHECK(standard_jumps_dualrail(p, b4).size() == 4);
    }
}

TEST_CASE("propagate: single-mode decay law") {
    auto basis = make_basis({3});
    const double kappa = 4.0;
    Generator gen;
    gen.basis = basis;
    gen.hamiltonian.add_constant(SparseMatrix(3, 3));
    TimeDepOperator L;
    L.add_constant(SparseMatrix((std::sqrt(kappa) * annihilation(basis, 0).data).sparseView()));
    gen.jumps.push_back(std::move(L));

    Matrix rho0 = Matrix::Zero(3, 3);
    rho0(1, 1) = 1.0;
    const auto n = number_op(basis, 0);
    const std::vector<double> samples{0.25, 0.5, 1.0};
    const auto traj = propagate(rho0, gen, 0.0, 1.0, samples);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double expected = std::exp(-kappa * samples[k]);
        CHECK(real_expectation(n, {basis, traj.states[k]}) == doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("propagate: blockaded pi/2 pulse makes a Bell state") {
    // closed system, two-level surrogate for infinite Kerr
    const double g_mhz = 10.0;
    auto p = ModelParams::symmetric_mhz(g_mhz, 0, 0, 0);
    p.tau = std::numbers::pi / (4.0 * p.g);
    auto basis = make_basis({2, 2});
    const auto gen = make_entangler_generator(p, basis);
    CHECK(gen.jumps.empty());

    const Matrix rho0 = vacuum_state(basis).data;
    const Matrix rho = propagate_to(rho0, gen, 0.0, p.tau);

    const int s00[] = {0, 0}, s11[] = {1, 1};
    const auto i00 = static_cast<Eigen::Index>(basis->index_of(s00));
    const auto i11 = static_cast<Eigen::Index>(basis->index_of(s11));
    CHECK(rho(i00, i00).real() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rho(i11, i11).real() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(rho(i00, i11)) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
}

TEST_CASE("closed-system Rabi oscillation sin^2(gt)") {
    auto p = ModelParams::symmetric_mhz(8, 0, 0, 0);
    p.tau = 1.0; // drive on over the whole window
    auto basis = make_basis({2, 2});
    const auto gen = make_entangler_generator(p, basis);
    const int s11[] = {1, 1};
    const auto i11 = static_cast<Eigen::Index>(basis->index_of(s11));

    std::vector<double> samples;
    for (int k = 1; k <= 8; ++k)
        samples.push_back(0.002 * k);
    const auto traj = propagate(vacuum_state(basis).data, gen, 0.0, samples.back(), samples);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double expected = std::pow(std::sin(p.g * samples[k]), 2);
        CHECK(std::abs(traj.states[k](i11, i11).real() - expected) < 1e-8);
    }
}

TEST_CASE("propagation is trace, hermiticity and positivity preserving") {
    const auto p = ModelParams::symmetric_mhz(10, 2, 0.5, 60, 0,
                                              std::numbers::pi / (4.0 * kTwoPi * 10.0));
    auto basis = make_basis({3, 3});
    const auto gen = make_entangler_generator(p, basis);
    const std::vector<double> samples{0.005, 0.02, 0.05, 0.1};
    const auto traj = propagate(vacuum_state(basis).data, gen, 0.0, 0.1, samples);
    for (const auto& s : traj.states) {
        DensityMatrix rho{basis, s};
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
        CHECK(rho.hermiticity_defect() < 1e-9);
        CHECK(rho.min_eigenvalue() > -1e-7);
    }
}

TEST_CASE("propagation is linear") {
    const auto p = ModelParams::symmetric_mhz(6, 1, 0.3, 30, 0, 0.01);
    auto basis = make_basis({2, 2});
    const auto gen = make_entangler_generator(p, basis);

    std::mt19937 rng(3);
    std::normal_distribution<double> gauss;
    auto rand_mat = [&]() {
        Matrix m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                m(i, j) = Complex(gauss(rng), gauss(rng));
        return m;
    };
    const Matrix r1 = rand_mat(), r2 = rand_mat();
    const Complex alpha(0.3, -0.7), beta(-1.1, 0.2);

    const double T = 0.03;
    const Matrix lhs = propagate_to(alpha * r1 + beta * r2, gen, 0.0, T);
    const Matrix rhs = alpha * propagate_to(r1, gen, 0.0, T) + beta * propagate_to(r2, gen, 0.0, T);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("thermal bath reaches n_th occupation") {
    // single lossy microwave mode with thermal jumps only
    ModelParams p;
    p.kappa_ei = 5.0;
    p.n_th = 0.15;
    auto basis = make_basis({1, 4}); // optical slot inert
    Generator gen;
    gen.basis = basis;
    gen.hamiltonian.add_constant(SparseMatrix(4, 4));
    for (auto& j : standard_jumps(p, basis))
        gen.jumps.push_back(std::move(j));
    const Matrix rho = propagate_to(vacuum_state(basis).data, gen, 0.0, 10.0 / p.kappa_ei);
    const auto n = number_op(basis, 1);
    // steady state of the truncated ladder: geometric with q = n_th/(1+n_th)
    const double q = p.n_th / (1.0 + p.n_th);
    double z = 0.0, nbar = 0.0;
    for (int k = 0; k < 4; ++k) {
        z += std::pow(q, k);
        nbar += k * std::pow(q, k);
    }
    nbar /= z;
    CHECK(real_expectation(n, {basis, rho}) == doctest::Approx(nbar).epsilon(1e-4));
}
