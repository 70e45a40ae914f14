#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmod/identities.hpp"
#include "qmod/numerics.hpp"

namespace qmod {

struct OrbitDatum {
    SL2 gamma;
    long width = 1;
};

enum class Verdict { CERTIFIED, CERTIFIED_WITH_DISCREPANCY, FAILED };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::CERTIFIED: return "CERTIFIED";
        case Verdict::CERTIFIED_WITH_DISCREPANCY: return "CERTIFIED_WITH_DISCREPANCY";
        default: return "FAILED";
    }
}

struct Certificate {
    std::string family;
    long k = 0;
    long order = 0;
    double tol = 0.0;
    ComplexMatrix rho_T;
    ComplexMatrix rho_S_solved;
    std::optional<ComplexMatrix> rho_S_closed_form;
    double residual_max = 0.0;
    double constancy_dev = 0.0;
    double dev_S2 = 0.0;
    double dev_ST3 = 0.0;
    std::vector<double> exponents_solved;
    std::vector<Rational> exponents_exact;
    std::optional<double> closed_form_deviation;
    Verdict verdict = Verdict::FAILED;
};

struct CertifyConfig {
    long order = 200;        // exactness order for series bodies and the exact gate
    double tol = 1e-8;       // verdict tolerance; residuals are reported raw
    double eval_tol = 1e-12; // numeric evaluation tolerance
    long k_cap = 6;
    double x0 = 0.1;         // real part of the radial exponent-extraction line
    double fd_step = 1e-4;   // finite-difference step for theta
};

struct LocalSystemConfig {
    SL2 chart = SL2::identity();  // samples live in the u = chart(tau) variable
    double fd_step = 1e-4;
    double eval_tol = 1e-12;
    double cond_threshold = kCondThreshold;
};

struct LocalSystemResult {
    std::vector<ComplexMatrix> A_samples;
    ComplexMatrix A_at_zero;
    std::vector<double> exponents;  // eigenvalue real parts, ascending
    std::vector<double> conds;      // cond(Phi) per sample, same order as samples
};

namespace detail {

// Phi(u) with column j = f(h_j^{-1} tau), tau = chart^{-1} u.
inline ComplexMatrix build_phi(const NormalizedVector& v, const std::vector<SL2>& translates,
                               const SL2& chart, Complex u, double eval_tol) {
    const long r = v.size();
    ComplexMatrix phi(r, static_cast<long>(translates.size()));
    const Complex tau = chart.inverse().apply(u);
    for (size_t j = 0; j < translates.size(); ++j) {
        const Complex w = translates[j].inverse().apply(tau);
        if (!(w.imag() > 0.0)) throw DomainError("build_phi: translate left the half-plane");
        phi.col(static_cast<long>(j)) = eval_vector(v, {w.real(), w.imag()}, eval_tol);
    }
    return phi;
}

inline std::vector<HalfPlanePoint> sorted_by_im(std::vector<HalfPlanePoint> samples) {
    std::sort(samples.begin(), samples.end(),
              [](const HalfPlanePoint& a, const HalfPlanePoint& b) { return a.im < b.im; });
    return samples;
}

} // namespace detail

// Local fundamental matrix and its logarithmic q-derivative system, in the
// width-1 chart q_c = e^{2 pi i u}, u = chart(tau): A = (theta_c Phi) Phi^{-1}.
// A at q_c = 0 comes from a linear-in-q_c fit through the two samples highest
// in the chart; its eigenvalues are the local exponents. (A width-w chart
// would rescale A by w; callers compare against exponents in the width-1
// normalization.)
inline LocalSystemResult local_system_matrix(const NormalizedVector& v,
                                             const std::vector<SL2>& translates,
                                             const std::vector<HalfPlanePoint>& samples,
                                             const LocalSystemConfig& cfg = {}) {
    if (static_cast<long>(translates.size()) != v.size())
        throw Error("local_system_matrix: need exactly r translates");
    if (samples.size() < 2) throw Error("local_system_matrix: need at least 2 radial samples");

    const auto pts = detail::sorted_by_im(samples);
    LocalSystemResult out;
    for (const auto& p : pts) {
        const Complex u = p.value();
        const ComplexMatrix phi = detail::build_phi(v, translates, cfg.chart, u, cfg.eval_tol);
        const double cond = condition_number(phi);
        out.conds.push_back(cond);
        if (cond > cfg.cond_threshold)
            throw SingularPhiError("local_system_matrix: cond(Phi) = " + std::to_string(cond));

        const auto diff = [&](double step) -> ComplexMatrix {
            const ComplexMatrix fp =
                detail::build_phi(v, translates, cfg.chart, u + step, cfg.eval_tol);
            const ComplexMatrix fm =
                detail::build_phi(v, translates, cfg.chart, u - step, cfg.eval_tol);
            return (fp - fm) / (2.0 * step * Complex(0.0, kTwoPi));
        };
        const ComplexMatrix d1 = diff(cfg.fd_step);
        const ComplexMatrix d2 = diff(cfg.fd_step / 2.0);
        const ComplexMatrix theta_phi = (4.0 * d2 - d1) / 3.0;
        // A Phi = theta Phi  <=>  Phi^T A^T = (theta Phi)^T
        out.A_samples.push_back(
            phi.transpose().partialPivLu().solve(theta_phi.transpose()).transpose());
    }

    // linear extrapolation to q_c = 0 from the two samples nearest the cusp
    const size_t na = pts.size() - 1, nb = pts.size() - 2;
    const Complex qa = std::exp(Complex(0.0, kTwoPi) * pts[na].value());
    const Complex qb = std::exp(Complex(0.0, kTwoPi) * pts[nb].value());
    out.A_at_zero = (qb * out.A_samples[na] - qa * out.A_samples[nb]) / (qb - qa);

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(out.A_at_zero);
    for (long j = 0; j < out.A_at_zero.rows(); ++j)
        out.exponents.push_back(eig.eigenvalues()(j).real());
    std::sort(out.exponents.begin(), out.exponents.end());
    return out;
}

namespace detail {

inline double exponent_spread(const NormalizedVector& v) {
    double lo = v.components.front().alpha.to_double();
    double hi = lo;
    for (const auto& c : v.components) {
        lo = std::min(lo, c.alpha.to_double());
        hi = std::max(hi, c.alpha.to_double());
    }
    return hi - lo;
}

// Radial ladder in the chart variable. The base {2,3,4,6} suits an exponent
// spread of 1/5; wider spreads shrink the ladder so cond(Phi) ~ |q|^{-spread}
// keeps the same profile instead of blowing past the SingularPhi threshold.
inline std::vector<HalfPlanePoint> radial_samples(const NormalizedVector& v, double x0) {
    const double spread = std::max(exponent_spread(v), 1e-9);
    const double scale = std::min(1.0, 0.45 / spread);
    std::vector<HalfPlanePoint> pts;
    for (double y : {2.0, 3.0, 4.0, 6.0}) pts.push_back({x0, y * scale});
    return pts;
}

// Match each exact exponent to the nearest solved eigenvalue (greedy).
inline std::vector<double> align_exponents(const std::vector<double>& solved,
                                           const std::vector<Rational>& exact) {
    std::vector<double> aligned;
    std::vector<bool> used(solved.size(), false);
    for (const auto& a : exact) {
        const double target = a.to_double();
        size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < solved.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(solved[j] - target);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        aligned.push_back(solved[best]);
    }
    return aligned;
}

} // namespace detail

// Exact diagonal T-multiplier diag(e^{2 pi i alpha_j}).
inline ComplexMatrix rho_T_exact(const NormalizedVector& v) {
    ComplexMatrix m = ComplexMatrix::Zero(v.size(), v.size());
    for (long j = 0; j < v.size(); ++j) {
        const double a = v.components[static_cast<size_t>(j)].alpha.to_double();
        m(j, j) = std::exp(Complex(0.0, kTwoPi * a));
    }
    return m;
}

// (2/sqrt5) [[sin(2pi/5), sin(pi/5)], [sin(pi/5), -sin(2pi/5)]]
inline ComplexMatrix rr_rho_S_closed_form() {
    const double c = 2.0 / std::sqrt(5.0);
    const double s1 = std::sin(std::numbers::pi / 5.0);
    const double s2 = std::sin(2.0 * std::numbers::pi / 5.0);
    ComplexMatrix m(2, 2);
    m << c * s2, c * s1, c * s1, -c * s2;
    return m;
}

// The printed k x k S-matrix sqrt(2/(2k+1)) sin(pi i j / (2k+1)). Attached to
// certificates as a comparison target only: its rows have norm below 1, so it
// cannot satisfy M^2 = I, and at k = 2 it disagrees with the level-5 matrix
// above. The certificate reports the deviation instead of assuming the value.
inline ComplexMatrix ag_rho_S_printed(long k) {
    const long M = 2 * k + 1;
    const double c = std::sqrt(2.0 / static_cast<double>(M));
    ComplexMatrix m(k, k);
    for (long i = 1; i <= k; ++i)
        for (long j = 1; j <= k; ++j)
            m(i - 1, j - 1) = c * std::sin(std::numbers::pi * static_cast<double>(i * j) /
                                           static_cast<double>(M));
    return m;
}

// End-to-end certification: exact differential-system gate, numeric multiplier
// solves for T and S, group relations, closed-form comparison, and exponent
// extraction at the cusp.
inline Certificate certify_family(VectorFamily family, long k, const CertifyConfig& cfg = {}) {
    if (family == VectorFamily::RR && k != 2) throw Error("certify_family: RR requires k = 2");
    if (k < 2 || k > cfg.k_cap) throw Error("certify_family: k out of range");

    Certificate cert;
    cert.family = family == VectorFamily::RR ? "rr" : "ag";
    cert.k = k;
    cert.order = cfg.order;
    cert.tol = cfg.tol;

    // exact gate: the q-differential system behind the T-law, checked
    // coefficientwise in the ring
    bool exact_ok;
    if (family == VectorFamily::RR) {
        exact_ok = run_suite("rr-theta-system", {}, cfg.order).all_passed;
    } else {
        exact_ok = run_suite("ag-log-deriv", {{"k_min", k}, {"k_max", k}}, cfg.order).all_passed;
    }

    const NormalizedVector v = normalized_vector(family, k, cfg.order);
    for (const auto& c : v.components) cert.exponents_exact.push_back(c.alpha);
    cert.rho_T = rho_T_exact(v);

    const auto grid = default_sample_grid();
    const MultiplierSolve t_solve = solve_multiplier(v, SL2::T(), grid, cfg.eval_tol);
    const MultiplierSolve s_solve = solve_multiplier(v, SL2::S(), grid, cfg.eval_tol);
    cert.rho_S_solved = s_solve.M;
    cert.residual_max = std::max(t_solve.residual_max, s_solve.residual_max);
    cert.constancy_dev = std::max(t_solve.constancy_dev, s_solve.constancy_dev);

    const RelationReport rel = check_group_relations(s_solve.M, cert.rho_T, cfg.tol);
    cert.dev_S2 = rel.dev_S2;
    cert.dev_ST3 = rel.dev_ST3;

    const ComplexMatrix closed =
        family == VectorFamily::RR ? rr_rho_S_closed_form() : ag_rho_S_printed(k);
    cert.rho_S_closed_form = closed;
    cert.closed_form_deviation = entrywise_max_abs(s_solve.M - closed);

    std::vector<SL2> translates;
    for (long j = 0; j < v.size(); ++j) translates.push_back(SL2::T_pow(j));
    LocalSystemConfig lcfg;
    lcfg.fd_step = cfg.fd_step;
    lcfg.eval_tol = cfg.eval_tol;
    const LocalSystemResult ls =
        local_system_matrix(v, translates, detail::radial_samples(v, cfg.x0), lcfg);
    cert.exponents_solved = detail::align_exponents(ls.exponents, cert.exponents_exact);

    const bool base_ok = exact_ok && rel.passed && cert.residual_max <= cfg.tol &&
                         cert.constancy_dev <= cfg.tol;
    if (!base_ok)
        cert.verdict = Verdict::FAILED;
    else if (*cert.closed_form_deviation <= cfg.tol)
        cert.verdict = Verdict::CERTIFIED;
    else
        cert.verdict = Verdict::CERTIFIED_WITH_DISCREPANCY;
    return cert;
}

// --- goodness report ---------------------------------------------------------

struct GoodnessDatumReport {
    SL2 gamma;
    long width = 1;
    double min_cond = 0.0;
    double max_cond = 0.0;
    bool fundamental_ok = false;              // (i)
    double growth_ratio_max = 0.0;            // (ii) boundedness proxy
    double exponent_match = 0.0;              // (ii) max |solved - alpha|
    std::map<long, double> transition_dev;    // (iii) gamma vs gamma T^n constancy
    std::optional<double> t_phase_dev;        // width-1 periodicity at the identity datum
};

struct GoodnessReport {
    std::vector<GoodnessDatumReport> items;
    bool all_local_checks_passed = false;
    // Coverage of every monodromy orbit is part of the definition but has no
    // finite decision procedure; only the local checks above are machine-run.
    bool orbit_coverage_checked = false;
    std::string note = "orbit coverage not machine-checked; local data only";
};

inline GoodnessReport goodness_check(const NormalizedVector& v, const std::vector<OrbitDatum>& orbit,
                                     const CertifyConfig& cfg = {}) {
    if (orbit.empty()) throw Error("goodness_check: empty orbit");
    GoodnessReport report;
    bool all_ok = true;

    for (const auto& datum : orbit) {
        GoodnessDatumReport item;
        item.gamma = datum.gamma;
        item.width = datum.width;

        std::vector<SL2> translates;
        for (long j = 0; j < v.size(); ++j) translates.push_back(datum.gamma * SL2::T_pow(j));
        const auto pts = detail::sorted_by_im(detail::radial_samples(v, cfg.x0));

        std::vector<double> conds;
        bool ok = true;
        for (const auto& p : pts) {
            ComplexMatrix phi;
            try {
                phi = detail::build_phi(v, translates, datum.gamma, p.value(), cfg.eval_tol);
            } catch (const Error&) {
                ok = false;
                break;
            }
            conds.push_back(condition_number(phi));
        }
        if (conds.empty()) {
            item.min_cond = item.max_cond = std::numeric_limits<double>::infinity();
            ok = false;
        } else {
            item.min_cond = *std::min_element(conds.begin(), conds.end());
            item.max_cond = *std::max_element(conds.begin(), conds.end());
            ok = ok && item.max_cond <= kCondThreshold;
        }
        item.fundamental_ok = ok;

        if (ok) {
            LocalSystemConfig lcfg;
            lcfg.chart = datum.gamma;
            lcfg.fd_step = cfg.fd_step;
            lcfg.eval_tol = cfg.eval_tol;
            const LocalSystemResult ls = local_system_matrix(v, translates, pts, lcfg);

            for (size_t s = 0; s + 1 < ls.A_samples.size(); ++s) {
                const double lo = entrywise_max_abs(ls.A_samples[s]);
                const double hi = entrywise_max_abs(ls.A_samples[s + 1]);
                if (lo > 0.0) item.growth_ratio_max = std::max(item.growth_ratio_max, hi / lo);
            }
            std::vector<Rational> exact;
            for (const auto& c : v.components) exact.push_back(c.alpha);
            const auto aligned = detail::align_exponents(ls.exponents, exact);
            for (size_t j = 0; j < aligned.size(); ++j)
                item.exponent_match = std::max(
                    item.exponent_match, std::abs(aligned[j] - exact[j].to_double()));

            // (iii): the gamma T^n data must be related to the gamma data by a
            // matrix constant across the radial samples
            for (long n = -2; n <= 2; ++n) {
                std::vector<SL2> shifted;
                for (long j = 0; j < v.size(); ++j)
                    shifted.push_back(datum.gamma * SL2::T_pow(n) * SL2::T_pow(j));
                std::optional<ComplexMatrix> c0;
                double dev = 0.0;
                for (const auto& p : pts) {
                    const ComplexMatrix phi =
                        detail::build_phi(v, translates, datum.gamma, p.value(), cfg.eval_tol);
                    const ComplexMatrix phin =
                        detail::build_phi(v, shifted, datum.gamma, p.value(), cfg.eval_tol);
                    const ComplexMatrix c =
                        phi.transpose().partialPivLu().solve(phin.transpose()).transpose();
                    if (!c0)
                        c0 = c;
                    else
                        dev = std::max(dev, entrywise_max_abs(c - *c0));
                }
                item.transition_dev[n] = dev;
            }

            if (datum.gamma.is_identity_mobius()) {
                // q-expansion periodicity: f(u+1) picks up exactly the exponent phases
                double d = 0.0;
                for (const auto& p : pts) {
                    const ComplexVector f0 = eval_vector(v, p, cfg.eval_tol);
                    const ComplexVector f1 = eval_vector(v, {p.re + 1.0, p.im}, cfg.eval_tol);
                    for (long j = 0; j < v.size(); ++j) {
                        const Complex phase = std::exp(
                            Complex(0.0, kTwoPi * v.components[static_cast<size_t>(j)].alpha.to_double()));
                        d = std::max(d, std::abs(f1(j) - phase * f0(j)) / std::abs(f0(j)));
                    }
                }
                item.t_phase_dev = d;
            }
        }

        all_ok = all_ok && item.fundamental_ok;
        report.items.push_back(std::move(item));
    }
    report.all_local_checks_passed = all_ok;
    return report;
}

} // namespace qmod
