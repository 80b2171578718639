#include "kerrpair/temporal_modes.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kerrpair/io.hpp"

namespace kerrpair {

static Complex overlap_trace(const SparseMatrix& c, const Matrix& m) {
    // tr(C^dag M) = sum_ij conj(C_ij) M_ij
    Complex acc(0.0);
    for (int k = 0; k < c.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(c, k); it; ++it)
            acc += std::conj(it.value()) * m(it.row(), it.col());
    return acc;
}

std::vector<CorrelationKernel> g1_correlations(const Generator& gen, const Matrix& rho0,
                                               const std::vector<KernelRequest>& requests,
                                               const std::vector<double>& times,
                                               const StepperConfig& cfg) {
    const auto N = times.size();
    if (N < 2)
        throw std::invalid_argument("g1_correlation: need at least two grid points");
    for (std::size_t j = 1; j < N; ++j)
        if (times[j] <= times[j - 1])
            throw std::invalid_argument("g1_correlation: grid must be increasing");

    Trajectory traj = propagate(rho0, gen, times.front(), times.back(), times, cfg);

    std::vector<CorrelationKernel> kernels(requests.size());
    for (auto& k : kernels) {
        k.times = times;
        k.data = Matrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    }

    LindbladRhs rhs(gen);
    for (std::size_t q = 0; q < requests.size(); ++q) {
        const auto& C = requests[q].mode_op;
        const double scale = requests[q].out_coupling;
        for (std::size_t col = 0; col < N; ++col) {
            Matrix probe = C * traj.states[col];
            kernels[q].data(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) =
                scale * overlap_trace(C, probe);
            for (std::size_t row = col + 1; row < N; ++row) {
                integrate(rhs, probe, times[row - 1], times[row], cfg, gen.breakpoints);
                const Complex val = scale * overlap_trace(C, probe);
                kernels[q].data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = val;
                kernels[q].data(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row)) =
                    std::conj(val);
            }
        }
    }
    return kernels;
}

CorrelationKernel g1_correlation(const Generator& gen, const Matrix& rho0,
                                 const SparseMatrix& mode_op, double out_coupling,
                                 const std::vector<double>& times, const StepperConfig& cfg) {
    return g1_correlations(gen, rho0, {{mode_op, out_coupling}}, times, cfg)[0];
}

std::vector<TemporalMode> decompose_modes(const CorrelationKernel& kernel) {
    const auto N = kernel.data.rows();
    if (N < 1 || kernel.times.size() != static_cast<std::size_t>(N))
        throw std::invalid_argument("decompose_modes: malformed kernel");
    const double defect = (kernel.data - kernel.data.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(kernel.data.cwiseAbs().maxCoeff(), 1e-300);
    if (defect > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("decompose_modes: kernel is not Hermitian");

    const double dt = kernel.dt();
    Matrix K = (kernel.data + kernel.data.adjoint()) * (0.5 * dt);
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    const auto& evals = es.eigenvalues();
    const double lmax = std::max(evals.maxCoeff(), 0.0);

    std::vector<TemporalMode> modes;
    modes.reserve(static_cast<std::size_t>(N));
    for (Eigen::Index i = N - 1; i >= 0; --i) { // descending
        double n = evals(i);
        if (n < -1e-8 * std::max(lmax, 1e-300))
            throw std::runtime_error("decompose_modes: kernel has a significant negative eigenvalue");
        if (n < 0.0)
            n = 0.0;
        TemporalMode m;
        m.times = kernel.times;
        m.occupation = n;
        m.envelope = es.eigenvectors().col(i).conjugate() / std::sqrt(dt);
        Eigen::Index peak = 0;
        m.envelope.cwiseAbs().maxCoeff(&peak);
        const Complex z = m.envelope(peak);
        if (std::abs(z) > 0.0)
            m.envelope *= std::conj(z) / std::abs(z);
        modes.push_back(std::move(m));
    }
    return modes;
}

double dominant_fraction(const std::vector<TemporalMode>& modes) {
    if (modes.empty())
        throw std::invalid_argument("dominant_fraction: empty mode list");
    double total = 0.0;
    for (const auto& m : modes)
        total += std::max(m.occupation, 0.0);
    if (total < 1e-12)
        return 1.0;
    return modes.front().occupation / total;
}

void write_modes_csv(std::ostream& os, const std::vector<TemporalMode>& modes) {
    if (modes.empty())
        return;
    os << "t";
    for (std::size_t i = 0; i < modes.size(); ++i)
        os << ",re_mode" << i << "(n=" << format_sig(modes[i].occupation) << ")"
           << ",im_mode" << i;
    os << "\n";
    for (std::size_t j = 0; j < modes.front().times.size(); ++j) {
        os << format_sig(modes.front().times[j]);
        for (const auto& m : modes)
            os << "," << format_sig(m.envelope(static_cast<Eigen::Index>(j)).real()) << ","
               << format_sig(m.envelope(static_cast<Eigen::Index>(j)).imag());
        os << "\n";
    }
}

} // namespace kerrpair
