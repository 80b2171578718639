#include "kerrpair/fitscan.hpp"

#include <atomic>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "kerrpair/io.hpp"

namespace kerrpair {

std::size_t ScanSpec::grid_size() const {
    const auto& chi = scheme == Scheme::dual_rail ? chi_c_mhz : chi_e_mhz;
    return g_mhz.size() * kappa_c_mhz.size() * kappa_i_mhz.size() * chi.size();
}

void ScanSpec::validate() const {
    const auto& chi = scheme == Scheme::dual_rail ? chi_c_mhz : chi_e_mhz;
    if (g_mhz.empty() || kappa_c_mhz.empty() || kappa_i_mhz.empty() || chi.empty())
        throw std::invalid_argument("ScanSpec: every axis needs at least one value");
    if (scheme != preset_scheme(cascade.preset))
        throw std::invalid_argument("ScanSpec: preset does not match scheme");
    if (tau_policy == TauPolicy::fixed && tau_fixed_us <= 0.0)
        throw std::invalid_argument("ScanSpec: fixed tau policy needs tau_fixed_us > 0");
}

static double resolve_tau(const ModelParams& p, Scheme scheme, TauPolicy policy,
                          double tau_fixed, Objective objective,
                          const CascadeOptions& options) {
    switch (policy) {
    case TauPolicy::fixed:
        return tau_fixed;
    case TauPolicy::formula: {
        const auto off = optimal_tau_offsets(p.g, p.kappa_c(), p.kappa_i());
        return scheme == Scheme::dual_rail ? off.tau_dual : off.tau_single;
    }
    case TauPolicy::optimize:
        return optimize_pulse(p, scheme, objective, options).tau_star;
    }
    throw std::logic_error("unreachable");
}

ScanRecord evaluate_point(const ModelParams& params_in, const ScanSpec& spec) {
    ScanRecord rec;
    rec.g_mhz = params_in.g / kTwoPi;
    rec.kappa_c_mhz = params_in.kappa_c() / kTwoPi;
    rec.kappa_i_mhz = params_in.kappa_i() / kTwoPi;
    rec.chi_e_mhz = params_in.chi_e / kTwoPi;
    rec.chi_c_mhz = params_in.chi_c / kTwoPi;

    ModelParams params = params_in;
    params.tau = resolve_tau(params, spec.scheme, spec.tau_policy, spec.tau_fixed_us,
                             spec.objective, spec.cascade);
    rec.tau_us = params.tau;

    const CascadeResult res = run_cascade(params, spec.scheme, spec.cascade);
    if (spec.scheme == Scheme::dual_rail) {
        const auto post = postselect_dualrail(res.rho_out);
        rec.fidelity = post.fidelity_post;
        rec.p_post = post.probability;
        // single-pair populations on rail captures are not defined dual-rail;
        // keep the Bell-pair diagnostics of rail 1 via the reduced state
        const int keep[] = {0, 1};
        const auto rail1 = partial_trace(res.rho_out, keep);
        const auto i11 = rail1.basis->index_of(std::vector<int>{1, 1});
        rec.p1 = rail1.data(static_cast<Eigen::Index>(i11), static_cast<Eigen::Index>(i11)).real();
        if (rail1.basis->dim(0) > 2) {
            const auto i22 = rail1.basis->index_of(std::vector<int>{2, 2});
            rec.p2 = rail1.data(static_cast<Eigen::Index>(i22), static_cast<Eigen::Index>(i22)).real();
        }
    } else {
        const auto bell = bell_fidelity(res.rho_out);
        rec.fidelity = bell.fidelity;
        rec.p1 = bell.p1;
        rec.p2 = bell.p2;
    }
    rec.dominant_fraction =
        std::min(res.dominant_fraction_optical, res.dominant_fraction_microwave);
    std::string joined;
    for (const auto& f : res.flags)
        joined += (joined.empty() ? "" : ";") + f;
    rec.flags = joined;
    return rec;
}

PulseOptimum optimize_pulse(const ModelParams& params, Scheme scheme, Objective objective,
                            const CascadeOptions& options) {
    if (objective == Objective::both)
        throw std::invalid_argument("optimize_pulse: pick one objective");
    const double tau_ideal = scheme == Scheme::dual_rail
                                 ? std::numbers::pi / (2.0 * std::sqrt(2.0) * params.g)
                                 : std::numbers::pi / (4.0 * params.g);
    auto score = [&](double tau) {
        ModelParams p = params;
        p.tau = tau;
        const auto res = run_cascade(p, scheme, options);
        if (scheme == Scheme::dual_rail) {
            const auto post = postselect_dualrail(res.rho_out);
            return -(objective == Objective::probability ? post.probability
                                                         : post.fidelity_post);
        }
        return -bell_fidelity(res.rho_out).fidelity;
    };
    const double xtol = 1e-4 / params.g;
    auto res = golden_section_minimize(score, 0.5 * tau_ideal, 1.5 * tau_ideal, xtol);
    if (res.at_edge)
        res = golden_section_minimize(score, 0.25 * tau_ideal, 2.5 * tau_ideal, xtol);
    return {res.x, -res.value, res.at_edge};
}

DriveOptimum optimize_drive(const ModelParams& params_without_g, Scheme scheme,
                            const DriveOptions& options) {
    double tau_used = 0.0;
    auto score = [&](double g) {
        ModelParams p = params_without_g;
        p.g = g;
        if (options.source == DriveObjectiveSource::empirical_model) {
            if (scheme == Scheme::dual_rail) {
                const auto est = empirical_dualrail(g, p.kappa_c(), p.kappa_i(), p.chi_c);
                return -(options.objective == Objective::probability ? est.p_post : est.f_post);
            }
            return empirical_infidelity_single(g, p.kappa_c(), p.kappa_i(), p.chi_e);
        }
        ScanSpec spec;
        spec.scheme = scheme;
        spec.cascade = options.cascade;
        spec.tau_policy = options.tau_policy;
        spec.objective = options.objective;
        const auto rec = evaluate_point(p, spec);
        tau_used = rec.tau_us;
        return -(options.objective == Objective::probability ? rec.p_post : rec.fidelity);
    };
    const double lo = kTwoPi * options.g_lo_mhz, hi = kTwoPi * options.g_hi_mhz;
    const auto res = golden_section_minimize(score, lo, hi, options.rel_tol * (hi - lo));
    // re-evaluate at the optimum so tau_used matches g_star
    const double value = -score(res.x);
    return {res.x, value, tau_used, res.at_edge};
}

std::vector<ScanRecord> run_scan(const ScanSpec& spec, int workers) {
    spec.validate();
    const auto& chi_axis = spec.scheme == Scheme::dual_rail ? spec.chi_c_mhz : spec.chi_e_mhz;

    struct Point {
        double g, kc, ki, chi;
    };
    std::vector<Point> points;
    points.reserve(spec.grid_size());
    for (double g : spec.g_mhz)
        for (double kc : spec.kappa_c_mhz)
            for (double ki : spec.kappa_i_mhz)
                for (double chi : chi_axis)
                    points.push_back({g, kc, ki, chi});

    std::vector<ScanRecord> records(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size())
                return;
            const auto& pt = points[i];
            try {
                const ModelParams p = ModelParams::symmetric_mhz(
                    pt.g, pt.kc, pt.ki, spec.scheme == Scheme::dual_rail ? 0.0 : pt.chi,
                    spec.scheme == Scheme::dual_rail ? pt.chi : 0.0);
                records[i] = evaluate_point(p, spec);
            } catch (const std::exception& e) {
                ScanRecord rec;
                rec.g_mhz = pt.g;
                rec.kappa_c_mhz = pt.kc;
                rec.kappa_i_mhz = pt.ki;
                if (spec.scheme == Scheme::dual_rail)
                    rec.chi_c_mhz = pt.chi;
                else
                    rec.chi_e_mhz = pt.chi;
                rec.failed = true;
                rec.flags = std::string("error:") + e.what();
                records[i] = std::move(rec);
            }
        }
    };

    const int n_workers = std::max(1, workers);
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    return records;
}

void write_scan_csv(std::ostream& os, Scheme scheme, const std::vector<ScanRecord>& records) {
    os << "scheme,g,kappa_c,kappa_i,chi_e,chi_c,tau,F,P_post,P1,P2,dominant_fraction,flags\n";
    const char* name = scheme == Scheme::dual_rail ? "dual_rail" : "single_rail";
    for (const auto& r : records) {
        os << name << ',' << format_sig(r.g_mhz) << ',' << format_sig(r.kappa_c_mhz) << ','
           << format_sig(r.kappa_i_mhz) << ',' << format_sig(r.chi_e_mhz) << ','
           << format_sig(r.chi_c_mhz) << ',' << format_sig(r.tau_us) << ','
           << format_sig(r.fidelity) << ',' << format_sig(r.p_post) << ','
           << format_sig(r.p1) << ',' << format_sig(r.p2) << ','
           << format_sig(r.dominant_fraction) << ',' << r.flags << '\n';
    }
}

std::vector<ScanRecord> read_scan_csv(std::istream& is) {
    std::vector<ScanRecord> records;
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("scan CSV: missing header");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() < 12)
            throw std::invalid_argument("scan CSV: malformed row: " + line);
        ScanRecord r;
        r.g_mhz = std::stod(fields[1]);
        r.kappa_c_mhz = std::stod(fields[2]);
        r.kappa_i_mhz = std::stod(fields[3]);
        r.chi_e_mhz = std::stod(fields[4]);
        r.chi_c_mhz = std::stod(fields[5]);
        r.tau_us = std::stod(fields[6]);
        r.fidelity = std::stod(fields[7]);
        r.p_post = std::stod(fields[8]);
        r.p1 = std::stod(fields[9]);
        r.p2 = std::stod(fields[10]);
        r.dominant_fraction = std::stod(fields[11]);
        if (fields.size() > 12)
            r.flags = fields[12];
        r.failed = r.flags.rfind("error:", 0) == 0;
        records.push_back(std::move(r));
    }
    return records;
}

static double record_term(const ScanRecord& r, const std::string& name) {
    const double kappa = r.kappa_c_mhz + r.kappa_i_mhz;
    if (name == "kappa_c/g")
        return r.kappa_c_mhz / r.g_mhz;
    if (name == "kappa_i/g")
        return r.kappa_i_mhz / r.g_mhz;
    if (name == "kappa_i/kappa")
        return kappa > 0.0 ? r.kappa_i_mhz / kappa : 0.0;
    if (name == "g^2/chi_e^2")
        return r.chi_e_mhz > 0.0 ? r.g_mhz * r.g_mhz / (r.chi_e_mhz * r.chi_e_mhz) : 0.0;
    if (name == "g^2/chi_c^2")
        return r.chi_c_mhz > 0.0 ? r.g_mhz * r.g_mhz / (r.chi_c_mhz * r.chi_c_mhz) : 0.0;
    throw std::invalid_argument("fit_model: unknown term " + name);
}

FitResult fit_model(const std::vector<ScanRecord>& records,
                    const std::vector<std::string>& terms, FitResponse response) {
    std::vector<const ScanRecord*> ok;
    for (const auto& r : records)
        if (!r.failed)
            ok.push_back(&r);
    const auto n = static_cast<Eigen::Index>(ok.size());
    const auto p = static_cast<Eigen::Index>(terms.size());
    if (n <= p)
        throw std::invalid_argument("fit_model: need more records than terms");

    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j)
            X(i, j) = record_term(*ok[static_cast<std::size_t>(i)], terms[static_cast<std::size_t>(j)]);
        const auto& r = *ok[static_cast<std::size_t>(i)];
        y(i) = response == FitResponse::infidelity ? 1.0 - r.fidelity : 1.0 - r.p_post;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p)
        throw std::runtime_error("fit_model: design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * beta;
    const double sigma2 = resid.squaredNorm() / static_cast<double>(n - p);
    const Eigen::MatrixXd cov = sigma2 * (X.transpose() * X).inverse();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const double cond = svd.singularValues()(0) / svd.singularValues()(p - 1);

    FitResult out;
    out.terms = terms;
    out.n_records = static_cast<std::size_t>(n);
    out.residual_norm = resid.norm();
    out.condition_number = cond;
    for (Eigen::Index j = 0; j < p; ++j) {
        out.coefficients.push_back(beta(j));
        out.stderrs.push_back(std::sqrt(std::max(cov(j, j), 0.0)));
    }
    return out;
}

} // namespace kerrpair
