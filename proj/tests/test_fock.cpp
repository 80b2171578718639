#include "doctest.h"

#include <random>

#include "kerrpair/fock.hpp"

using namespace kerrpair;

TEST_CASE("basis enumeration and bijection") {
    auto b = make_basis({3, 2, 4});
    CHECK(b->size() == 24);
    for (std::size_t i = 0; i < b->size(); ++i)
        CHECK(b->index_of(b->state(i)) == i);

    // capped: 8 modes, dim 3, total <= 6
    auto capped = make_basis(std::vector<int>(8, 3), 6);
    CHECK(capped->size() == 1711);
    for (std::size_t i = 0; i < capped->size(); ++i) {
        int total = 0;
        for (int m = 0; m < 8; ++m)
            total += capped->occupation(i, m);
        CHECK(total <= 6);
        CHECK(capped->index_of(capped->state(i)) == i);
    }
}

TEST_CASE("basis bijection on randomized dims and caps") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> n_modes(1, 4), dim(1, 4), cap(0, 8);
        std::vector<int> dims;
        const int M = n_modes(rng);
        for (int m = 0; m < M; ++m)
            dims.push_back(dim(rng));
        std::optional<int> c;
        if (trial % 2 == 0)
            c = cap(rng);
        auto b = make_basis(dims, c);
        REQUIRE(b->size() >= 1); // vacuum always present
        for (std::size_t i = 0; i < b->size(); ++i)
            CHECK(b->index_of(b->state(i)) == i);
    }
}

TEST_CASE("annihilation matrix elements") {
    auto b1 = make_basis({3});
    const auto a = annihilation(b1, 0);
    CHECK(a.data(0, 1).real() == doctest::Approx(1.0));
    CHECK(a.data(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(a.data.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

    auto b2 = make_basis({2, 2});
    const auto a2 = annihilation(b2, 1);
    // tensor(I2, a2): |01> -> |00>, |11> -> |10>
    const int s01[] = {0, 1}, s00[] = {0, 0}, s11[] = {1, 1}, s10[] = {1, 0};
    CHECK(a2.data(static_cast<Eigen::Index>(b2->index_of(s00)),
                  static_cast<Eigen::Index>(b2->index_of(s01))).real() == doctest::Approx(1.0));
    CHECK(a2.data(static_cast<Eigen::Index>(b2->index_of(s10)),
                  static_cast<Eigen::Index>(b2->index_of(s11))).real() == doctest::Approx(1.0));

    auto b8 = make_basis(std::vector<int>(8, 3), 6);
    const auto a8 = annihilation(b8, 0);
    std::vector<int> one(8, 0), zero(8, 0);
    one[0] = 1;
    CHECK(a8.data(static_cast<Eigen::Index>(b8->index_of(zero)),
                  static_cast<Eigen::Index>(b8->index_of(one))).real() == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)annihilation(b1, 2), std::invalid_argument);
}

TEST_CASE("a^dag a equals number operator away from the cap boundary") {
    auto b = make_basis({3, 3, 3}, 4);
    for (int mode = 0; mode < 3; ++mode) {
        const auto a = annihilation(b, mode);
        const auto n = number_op(b, mode);
        const Matrix ada = a.data.adjoint() * a.data;
        // lowering then raising stays inside the basis for every state, so
        // a^dag a is exact even with the cap
        CHECK((ada - n.data).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("tensor_embed") {
    auto b = make_basis({2, 3});
    const Matrix id2 = Matrix::Identity(2, 2);
    CHECK((tensor_embed(b, id2, 0).data - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);

    Matrix num3 = Matrix::Zero(3, 3);
    num3(1, 1) = 1.0;
    num3(2, 2) = 2.0;
    const auto n2 = tensor_embed(b, num3, 1);
    const int s01[] = {0, 1};
    const auto i01 = static_cast<Eigen::Index>(b->index_of(s01));
    CHECK(n2.data(i01, i01).real() == doctest::Approx(1.0));

    // vacuum projector composes from per-mode projectors
    Matrix p2 = Matrix::Zero(2, 2), p3 = Matrix::Zero(3, 3);
    p2(0, 0) = 1.0;
    p3(0, 0) = 1.0;
    const Matrix vac = tensor_embed(b, p2, 0).data * tensor_embed(b, p3, 1).data;
    Matrix expected = Matrix::Zero(6, 6);
    const int s00[] = {0, 0};
    const auto i00 = static_cast<Eigen::Index>(b->index_of(s00));
    expected(i00, i00) = 1.0;
    CHECK((vac - expected).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS((void)tensor_embed(b, num3, 0), std::invalid_argument);
}

TEST_CASE("partial trace") {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    auto random_density = [&](int dim) {
        Matrix m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                m(i, j) = Complex(gauss(rng), gauss(rng));
        Matrix rho = m * m.adjoint();
        return Matrix(rho / rho.trace());
    };

    SUBCASE("product state reduces exactly") {
        const Matrix ra = random_density(3), rb = random_density(2);
        auto b = make_basis({3, 2});
        Matrix joint = Matrix::Zero(6, 6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                joint.block(i * 2, j * 2, 2, 2) = ra(i, j) * rb;
        const int keepA[] = {0};
        const auto red = partial_trace({b, joint}, keepA);
        CHECK((red.data - ra).cwiseAbs().maxCoeff() < 1e-12);
        const int keepB[] = {1};
        const auto redB = partial_trace({b, joint}, keepB);
        CHECK((redB.data - rb).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(red.trace() - joint.trace()) < 1e-12);
    }

    SUBCASE("Bell state reduces to maximally mixed") {
        auto b = make_basis({2, 2});
        Vector bell = Vector::Zero(4);
        const int s00[] = {0, 0}, s11[] = {1, 1};
        bell(static_cast<Eigen::Index>(b->index_of(s00))) = 1.0 / std::sqrt(2.0);
        bell(static_cast<Eigen::Index>(b->index_of(s11))) = 1.0 / std::sqrt(2.0);
        const Matrix rho = bell * bell.adjoint();
        const int keep[] = {0};
        const auto red = partial_trace({b, rho}, keep);
        CHECK((red.data - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("empty keep set throws") {
        auto b = make_basis({2, 2});
        CHECK_THROWS_AS((void)partial_trace({b, Matrix::Identity(4, 4)}, std::span<const int>{}),
                        std::invalid_argument);
    }
}
