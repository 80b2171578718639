#ifndef KERRPAIR_FOCK_HPP
#define KERRPAIR_FOCK_HPP

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace kerrpair {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Truncated multi-mode Fock basis. States are multi-indices (n_1,...,n_M)
// with n_i < dim_i and, if a total-excitation cap is set, sum n_i <= cap.
// Cap-excluded states are dropped from the enumeration, not zero-padded.
class FockBasis {
public:
    explicit FockBasis(std::vector<int> mode_dims,
                       std::optional<int> total_excitation_cap = std::nullopt);

    int num_modes() const { return static_cast<int>(dims_.size()); }
    int dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
    const std::vector<int>& mode_dims() const { return dims_; }
    std::optional<int> cap() const { return cap_; }

    std::size_t size() const { return states_.size() / dims_.size(); }

    // Occupation numbers of basis state `index`.
    std::span<const int> state(std::size_t index) const;
    int occupation(std::size_t index, int mode) const;

    // Index of a multi-index; nullopt if outside the truncation.
    std::optional<std::size_t> find(std::span<const int> occupation) const;
    std::size_t index_of(std::span<const int> occupation) const;

    bool same_shape(const FockBasis& other) const {
        return dims_ == other.dims_ && cap_ == other.cap_;
    }

private:
    std::vector<int> dims_;
    std::optional<int> cap_;
    std::vector<int> states_;            // size() * num_modes(), row-major
    std::vector<std::ptrdiff_t> lookup_; // mixed-radix index -> basis index or -1
    std::vector<std::size_t> strides_;   // mixed-radix strides, last mode fastest
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr make_basis(std::vector<int> mode_dims,
                    std::optional<int> total_excitation_cap = std::nullopt);

// Dense operator tied to a basis.
struct QOperator {
    BasisPtr basis;
    Matrix data;

    QOperator adjoint() const { return {basis, data.adjoint()}; }
    bool is_hermitian(double tol = 1e-12) const;
};

QOperator operator*(const QOperator& a, const QOperator& b);
QOperator operator+(const QOperator& a, const QOperator& b);
QOperator operator*(Complex scale, const QOperator& a);

struct DensityMatrix {
    BasisPtr basis;
    Matrix data;

    Complex trace() const { return data.trace(); }
    // Largest deviation from Hermiticity, |rho - rho^dag|_max.
    double hermiticity_defect() const;
    double min_eigenvalue() const;
};

QOperator annihilation(const BasisPtr& basis, int mode);
QOperator creation(const BasisPtr& basis, int mode);
QOperator number_op(const BasisPtr& basis, int mode);
QOperator identity_op(const BasisPtr& basis);

// |m><n| acting on a single mode, identity elsewhere.
QOperator transition_op(const BasisPtr& basis, int mode, int m, int n);

// Embed a dim_i x dim_i operator on mode `mode`, identity on the others,
// restricted to the (possibly capped) basis.
QOperator tensor_embed(const BasisPtr& basis, const Matrix& local_op, int mode);

DensityMatrix vacuum_state(const BasisPtr& basis);

// Reduced matrix on `keep_modes` (in the given order); the traced-out modes
// are summed over. Works for non-Hermitian linear-map probes as well.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep_modes);

double real_expectation(const QOperator& op, const DensityMatrix& rho);

} // namespace kerrpair

#endif
