#include "kerrpair/fock.hpp"

#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace kerrpair {

FockBasis::FockBasis(std::vector<int> mode_dims, std::optional<int> cap)
    : dims_(std::move(mode_dims)), cap_(cap) {
    if (dims_.empty())
        throw std::invalid_argument("FockBasis: no modes");
    for (int d : dims_)
        if (d < 1)
            throw std::invalid_argument("FockBasis: mode dimension must be >= 1");
    if (cap_ && *cap_ < 0)
        throw std::invalid_argument("FockBasis: negative excitation cap");

    const int M = num_modes();
    strides_.assign(static_cast<std::size_t>(M), 1);
    for (int m = M - 2; m >= 0; --m)
        strides_[static_cast<std::size_t>(m)] =
            strides_[static_cast<std::size_t>(m + 1)] * static_cast<std::size_t>(dims_[static_cast<std::size_t>(m + 1)]);
    const std::size_t full = strides_[0] * static_cast<std::size_t>(dims_[0]);
    lookup_.assign(full, -1);

    // Enumerate in mixed-radix order (last mode fastest) so that with the cap
    // disabled the basis index equals the usual tensor-product index.
    std::vector<int> occ(static_cast<std::size_t>(M), 0);
    for (std::size_t raw = 0; raw < full; ++raw) {
        std::size_t rem = raw;
        int total = 0;
        for (int m = 0; m < M; ++m) {
            occ[static_cast<std::size_t>(m)] = static_cast<int>(rem / strides_[static_cast<std::size_t>(m)]);
            rem %= strides_[static_cast<std::size_t>(m)];
            total += occ[static_cast<std::size_t>(m)];
        }
        if (cap_ && total > *cap_)
            continue;
        lookup_[raw] = static_cast<std::ptrdiff_t>(states_.size() / static_cast<std::size_t>(M));
        states_.insert(states_.end(), occ.begin(), occ.end());
    }
}

std::span<const int> FockBasis::state(std::size_t index) const {
    const auto M = static_cast<std::size_t>(num_modes());
    return {states_.data() + index * M, M};
}

int FockBasis::occupation(std::size_t index, int mode) const {
    return states_[index * static_cast<std::size_t>(num_modes()) + static_cast<std::size_t>(mode)];
}

std::optional<std::size_t> FockBasis::find(std::span<const int> occupation) const {
    if (occupation.size() != static_cast<std::size_t>(num_modes()))
        return std::nullopt;
    std::size_t raw = 0;
    for (int m = 0; m < num_modes(); ++m) {
        const int n = occupation[static_cast<std::size_t>(m)];
        if (n < 0 || n >= dims_[static_cast<std::size_t>(m)])
            return std::nullopt;
        raw += static_cast<std::size_t>(n) * strides_[static_cast<std::size_t>(m)];
    }
    const std::ptrdiff_t idx = lookup_[raw];
    if (idx < 0)
        return std::nullopt;
    return static_cast<std::size_t>(idx);
}

std::size_t FockBasis::index_of(std::span<const int> occupation) const {
    auto idx = find(occupation);
    if (!idx)
        throw std::invalid_argument("FockBasis: state outside truncation");
    return *idx;
}

BasisPtr make_basis(std::vector<int> mode_dims, std::optional<int> cap) {
    return std::make_shared<const FockBasis>(std::move(mode_dims), cap);
}

bool QOperator::is_hermitian(double tol) const {
    return (data - data.adjoint()).cwiseAbs().maxCoeff() < tol;
}

QOperator operator*(const QOperator& a, const QOperator& b) {
    return {a.basis, a.data * b.data};
}
QOperator operator+(const QOperator& a, const QOperator& b) {
    return {a.basis, a.data + b.data};
}
QOperator operator*(Complex scale, const QOperator& a) {
    return {a.basis, scale * a.data};
}

double DensityMatrix::hermiticity_defect() const {
    return (data - data.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es((data + data.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

static void check_mode(const BasisPtr& basis, int mode) {
    if (!basis)
        throw std::invalid_argument("null basis");
    if (mode < 0 || mode >= basis->num_modes())
        throw std::invalid_argument("invalid mode index");
}

QOperator annihilation(const BasisPtr& basis, int mode) {
    check_mode(basis, mode);
    const std::size_t D = basis->size();
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    std::vector<int> occ;
    for (std::size_t col = 0; col < D; ++col) {
        auto s = basis->state(col);
        const int n = s[static_cast<std::size_t>(mode)];
        if (n == 0)
            continue;
        occ.assign(s.begin(), s.end());
        occ[static_cast<std::size_t>(mode)] = n - 1;
        // lowering can never leave a capped basis
        const std::size_t row = basis->index_of(occ);
        a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = std::sqrt(static_cast<double>(n));
    }
    return {basis, std::move(a)};
}

QOperator creation(const BasisPtr& basis, int mode) {
    return annihilation(basis, mode).adjoint();
}

QOperator number_op(const BasisPtr& basis, int mode) {
    check_mode(basis, mode);
    const std::size_t D = basis->size();
    Matrix n = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    for (std::size_t i = 0; i < D; ++i)
        n(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = basis->occupation(i, mode);
    return {basis, std::move(n)};
}

QOperator identity_op(const BasisPtr& basis) {
    const auto D = static_cast<Eigen::Index>(basis->size());
    return {basis, Matrix::Identity(D, D)};
}

QOperator transition_op(const BasisPtr& basis, int mode, int m, int n) {
    check_mode(basis, mode);
    Matrix local = Matrix::Zero(basis->dim(mode), basis->dim(mode));
    if (m < 0 || n < 0 || m >= basis->dim(mode) || n >= basis->dim(mode))
        throw std::invalid_argument("transition_op: level outside mode dimension");
    local(m, n) = 1.0;
    return tensor_embed(basis, local, mode);
}

QOperator tensor_embed(const BasisPtr& basis, const Matrix& local_op, int mode) {
    check_mode(basis, mode);
    const int d = basis->dim(mode);
    if (local_op.rows() != d || local_op.cols() != d)
        throw std::invalid_argument("tensor_embed: local operator dimension mismatch");
    const std::size_t D = basis->size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    std::vector<int> occ;
    for (std::size_t col = 0; col < D; ++col) {
        auto s = basis->state(col);
        const int n = s[static_cast<std::size_t>(mode)];
        occ.assign(s.begin(), s.end());
        for (int m = 0; m < d; ++m) {
            const Complex val = local_op(m, n);
            if (val == Complex(0))
                continue;
            occ[static_cast<std::size_t>(mode)] = m;
            if (auto row = basis->find(occ))
                out(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = val;
        }
    }
    return {basis, std::move(out)};
}

DensityMatrix vacuum_state(const BasisPtr& basis) {
    const auto D = static_cast<Eigen::Index>(basis->size());
    Matrix rho = Matrix::Zero(D, D);
    std::vector<int> zero(static_cast<std::size_t>(basis->num_modes()), 0);
    const auto i0 = static_cast<Eigen::Index>(basis->index_of(zero));
    rho(i0, i0) = 1.0;
    return {basis, std::move(rho)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep_modes) {
    if (keep_modes.empty())
        throw std::invalid_argument("partial_trace: empty keep set");
    const auto& basis = *rho.basis;
    const int M = basis.num_modes();
    std::vector<bool> kept(static_cast<std::size_t>(M), false);
    std::vector<int> reduced_dims;
    for (int m : keep_modes) {
        if (m < 0 || m >= M || kept[static_cast<std::size_t>(m)])
            throw std::invalid_argument("partial_trace: bad keep set");
        kept[static_cast<std::size_t>(m)] = true;
        reduced_dims.push_back(basis.dim(m));
    }
    auto reduced = make_basis(reduced_dims);

    const std::size_t D = basis.size();
    // Precompute per-state reduced index and traced-out signature.
    std::vector<std::size_t> ridx(D), sig(D);
    std::vector<int> occ;
    for (std::size_t i = 0; i < D; ++i) {
        auto s = basis.state(i);
        occ.clear();
        for (int m : keep_modes)
            occ.push_back(s[static_cast<std::size_t>(m)]);
        ridx[i] = reduced->index_of(occ);
        std::size_t key = 0;
        for (int m = 0; m < M; ++m)
            if (!kept[static_cast<std::size_t>(m)])
                key = key * static_cast<std::size_t>(basis.dim(m)) + static_cast<std::size_t>(s[static_cast<std::size_t>(m)]);
        sig[i] = key;
    }

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(reduced->size()),
                              static_cast<Eigen::Index>(reduced->size()));
    for (std::size_t r = 0; r < D; ++r)
        for (std::size_t c = 0; c < D; ++c)
            if (sig[r] == sig[c])
                out(static_cast<Eigen::Index>(ridx[r]), static_cast<Eigen::Index>(ridx[c])) +=
                    rho.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return {reduced, std::move(out)};
}

double real_expectation(const QOperator& op, const DensityMatrix& rho) {
    return (op.data * rho.data).trace().real();
}

} // namespace kerrpair
