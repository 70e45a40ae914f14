#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <vector>

#include "qmod/specials.hpp"

namespace qmod {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;
inline constexpr double kDefaultQMax = 0.2;
inline constexpr double kDefaultYMin = 0.5;
inline constexpr double kCondThreshold = 1e8;

// tau = re + i*im in the upper half-plane.
struct HalfPlanePoint {
    double re = 0.0;
    double im = 1.0;

    Complex value() const { return {re, im}; }

    // Both tau and -1/tau stay inside |q| <= e^{-2 pi y_min}.
    bool certification_safe(double y_min = kDefaultYMin) const {
        const double norm2 = re * re + im * im;
        return im >= y_min && im / norm2 >= y_min;
    }
};

struct EvalResult {
    Complex value{0.0, 0.0};
    double tail_bound = 0.0;
    long terms_used = 0;
};

// Integer 2x2 matrix with det 1 acting on the half-plane by Mobius maps.
struct SL2 {
    long a = 1, b = 0, c = 0, d = 1;

    SL2() = default;
    SL2(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {
        if (a * d - b * c != 1) throw Error("SL2: determinant must be 1");
    }

    static SL2 identity() { return {}; }
    static SL2 T() { return {1, 1, 0, 1}; }
    static SL2 S() { return {0, -1, 1, 0}; }
    static SL2 T_pow(long n) { return {1, n, 0, 1}; }

    SL2 inverse() const { return {d, -b, -c, a}; }

    friend SL2 operator*(const SL2& x, const SL2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    bool is_identity_mobius() const {
        return (a == 1 && b == 0 && c == 0 && d == 1) || (a == -1 && b == 0 && c == 0 && d == -1);
    }

    Complex apply(Complex tau) const {
        return (static_cast<double>(a) * tau + static_cast<double>(b)) /
               (static_cast<double>(c) * tau + static_cast<double>(d));
    }

    std::string to_string() const {
        return "[" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) + "," +
               std::to_string(d) + "]";
    }
};

// Sum of a coefficient series at a complex point |q| < 1.
//
// Stopping rule: once the ten most recent terms all have magnitude below
// tol/100, bound the tail geometrically using the largest of the last ten
// coefficient growth ratios g: the terms beyond t_m (the last nonzero one)
// are dominated by t_m (g|q|)^j, so
//   tail <= |t_m| (g|q|)^{n+1-m} / (1 - g|q|).
// The bound is a validated heuristic; the order-doubling invariant in the
// tests cross-checks it.
inline EvalResult eval_qseries_at(const QSeries& s, Complex q, double tol) {
    const double absq = std::abs(q);
    if (absq >= 1.0) throw DomainError("eval: |q| >= 1");

    Complex value{0.0, 0.0};
    Complex qpow = std::pow(q, static_cast<double>(s.offset()));
    int consecutive_small = 0;
    double prev_coeff_mag = 0.0;
    std::deque<double> ratios;
    double last_nonzero_term_mag = 0.0;
    long last_nonzero_index = s.offset();

    for (long n = s.offset(); n <= s.order(); ++n, qpow *= q) {
        const double cn = s.coeff(n).to_double();
        const double term_mag = std::abs(cn) * std::abs(qpow);
        if (cn != 0.0) {
            value += cn * qpow;
            if (prev_coeff_mag > 0.0) {
                ratios.push_back(std::abs(cn) / prev_coeff_mag);
                if (ratios.size() > 10) ratios.pop_front();
            }
            prev_coeff_mag = std::abs(cn);
            last_nonzero_term_mag = term_mag;
            last_nonzero_index = n;
        }
        consecutive_small = term_mag < tol / 100.0 ? consecutive_small + 1 : 0;
        if (consecutive_small >= 10) {
            double g = 1.0;
            for (double r : ratios) g = std::max(g, r);
            if (g * absq < 1.0) {
                const double gq = g * absq;
                const double tail =
                    last_nonzero_term_mag * std::pow(gq, static_cast<double>(n + 1 - last_nonzero_index)) /
                    (1.0 - gq);
                if (tail <= tol) return {value, tail, n + 1};
            }
        }
    }
    throw ToleranceNotMetError("eval: stopping rule not satisfied within exact order " +
                               std::to_string(s.order()));
}

// f(tau) = e^{2 pi i alpha tau} * body(e^{2 pi i tau}). The prefactor is
// computed from alpha*tau directly, so no branch choice is involved.
inline EvalResult eval_series(const NormalizedSeries& s, HalfPlanePoint tau, double tol,
                              double q_max = kDefaultQMax) {
    if (!(tau.im > 0.0)) throw DomainError("eval: tau not in the upper half-plane");
    const Complex t = tau.value();
    const Complex q = std::exp(Complex(0.0, kTwoPi) * t);
    if (std::abs(q) > q_max) throw DomainError("eval: |q| exceeds q_max");
    const Complex prefactor = std::exp(Complex(0.0, kTwoPi) * s.alpha.to_double() * t);
    EvalResult body = eval_qseries_at(s.body, q, tol);
    body.value *= prefactor;
    body.tail_bound *= std::abs(prefactor);
    return body;
}

inline ComplexVector eval_vector(const NormalizedVector& v, HalfPlanePoint tau, double tol,
                                 double q_max = kDefaultQMax) {
    ComplexVector out(v.size());
    for (long j = 0; j < v.size(); ++j)
        out(j) = eval_series(v.components[static_cast<size_t>(j)], tau, tol, q_max).value;
    return out;
}

// theta f = (1/2 pi i) df/dtau by central difference with one Richardson step
// (fourth order in the step size).
inline ComplexVector numeric_theta(const NormalizedVector& v, HalfPlanePoint tau, double h = 1e-4,
                                   double tol = 1e-12) {
    const auto diff = [&](double step) -> ComplexVector {
        const ComplexVector fp = eval_vector(v, {tau.re + step, tau.im}, tol);
        const ComplexVector fm = eval_vector(v, {tau.re - step, tau.im}, tol);
        return (fp - fm) / (2.0 * step * Complex(0.0, kTwoPi));
    };
    const ComplexVector d1 = diff(h);
    const ComplexVector d2 = diff(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

inline double condition_number(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

inline double entrywise_max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Sample grid for multiplier solving, chosen so tau and -1/tau both satisfy
// the |q| constraint. The first few points walk the grid diagonal so that the
// r samples a solve consumes are well separated.
inline std::vector<HalfPlanePoint> default_sample_grid(double y_min = kDefaultYMin) {
    const std::array<double, 4> xs = {-0.35, -0.15, 0.1, 0.3};
    const std::array<double, 4> ys = {0.7, 0.9, 1.2, 1.5};
    std::vector<HalfPlanePoint> grid;
    for (size_t i = 0; i < 4; ++i) grid.push_back({xs[i], ys[i]});
    for (size_t ix = 0; ix < 4; ++ix)
        for (size_t iy = 0; iy < 4; ++iy)
            if (ix != iy) grid.push_back({xs[ix], ys[iy]});
    std::erase_if(grid, [&](const HalfPlanePoint& p) { return !p.certification_safe(y_min); });
    return grid;
}

struct MultiplierSolve {
    ComplexMatrix M;
    double residual_max = 0.0;
    double constancy_dev = 0.0;
};

// Finds the constant matrix with f(gamma tau) = M f(tau) across the samples.
// M is solved from the first r samples; the remaining samples report the
// relative residual, and re-solving from shifted sample windows reports how
// constant M actually is.
inline MultiplierSolve solve_multiplier(const NormalizedVector& v, const SL2& gamma,
                                        const std::vector<HalfPlanePoint>& samples, double tol,
                                        double cond_threshold = kCondThreshold) {
    const long r = v.size();
    const long n = static_cast<long>(samples.size());
    if (n < r + 1) throw Error("solve_multiplier: need at least r+1 samples");

    std::vector<ComplexVector> f_tau, f_gamma_tau;
    f_tau.reserve(samples.size());
    f_gamma_tau.reserve(samples.size());
    for (const auto& p : samples) {
        f_tau.push_back(eval_vector(v, p, tol));
        const Complex gt = gamma.apply(p.value());
        if (!(gt.imag() > 0.0)) throw DomainError("solve_multiplier: gamma tau left the half-plane");
        f_gamma_tau.push_back(eval_vector(v, {gt.real(), gt.imag()}, tol));
    }

    const auto solve_window = [&](long start) -> ComplexMatrix {
        ComplexMatrix F(r, r), G(r, r);
        for (long j = 0; j < r; ++j) {
            F.col(j) = f_tau[static_cast<size_t>(start + j)];
            G.col(j) = f_gamma_tau[static_cast<size_t>(start + j)];
        }
        if (condition_number(F) > cond_threshold)
            throw SingularSamplesError("solve_multiplier: sample columns ill-conditioned");
        // M F = G  <=>  F^T M^T = G^T
        return F.transpose().partialPivLu().solve(G.transpose()).transpose();
    };

    MultiplierSolve out;
    out.M = solve_window(0);
    for (long j = r; j < n; ++j) {
        const double res =
            (f_gamma_tau[static_cast<size_t>(j)] - out.M * f_tau[static_cast<size_t>(j)]).norm() /
            f_tau[static_cast<size_t>(j)].norm();
        out.residual_max = std::max(out.residual_max, res);
    }
    for (long start = 1; start + r <= n; ++start) {
        try {
            const ComplexMatrix M2 = solve_window(start);
            out.constancy_dev = std::max(out.constancy_dev, entrywise_max_abs(M2 - out.M));
        } catch (const SingularSamplesError&) {
            // skip windows that happen to be ill-conditioned
        }
    }
    return out;
}

struct RelationReport {
    double dev_S2 = 0.0;
    double dev_ST3 = 0.0;
    bool passed = false;
};

// rho(S)^2 = I and (rho(S) rho(T))^3 = I, measured entrywise.
inline RelationReport check_group_relations(const ComplexMatrix& M_S, const ComplexMatrix& M_T,
                                            double tol) {
    if (M_S.rows() != M_S.cols() || M_T.rows() != M_T.cols() || M_S.rows() != M_T.rows())
        throw Error("check_group_relations: need square matrices of equal size");
    const ComplexMatrix I = ComplexMatrix::Identity(M_S.rows(), M_S.cols());
    RelationReport rep;
    rep.dev_S2 = entrywise_max_abs(M_S * M_S - I);
    const ComplexMatrix P = M_S * M_T;
    rep.dev_ST3 = entrywise_max_abs(P * P * P - I);
    rep.passed = rep.dev_S2 <= tol && rep.dev_ST3 <= tol;
    return rep;
}

// Given rho(T) = diag(t1, t2) with |t_j| = 1 and t1 != t2, solve for the
// symmetric involution rho(S) = (a b; b -a), a^2 + b^2 = 1 (so det = -1),
// with (rho(S) rho(T))^3 = I.
//
// M := rho(S) rho(T) has det = -t1 t2 and trace a (t1 - t2). M^3 = I with M
// not scalar forces the eigenvalues to be two distinct cube roots of unity,
// which pins det M to one of {1, w, w^2} and the trace to the pair sum; the
// determinant picks the pair, the trace then determines a, and b follows from
// a^2 + b^2 = 1 with the sign convention Re b >= 0.
inline ComplexMatrix solve_symmetric_involution(const ComplexMatrix& rho_T, double tol = 1e-8) {
    if (rho_T.rows() != 2 || rho_T.cols() != 2)
        throw Error("solve_symmetric_involution: need a 2x2 matrix");
    const Complex t1 = rho_T(0, 0), t2 = rho_T(1, 1);
    if (std::abs(rho_T(0, 1)) > tol || std::abs(rho_T(1, 0)) > tol)
        throw Error("solve_symmetric_involution: rho_T must be diagonal");
    if (std::abs(std::abs(t1) - 1.0) > tol || std::abs(std::abs(t2) - 1.0) > tol)
        throw NoSolutionError("solve_symmetric_involution: entries must have unit modulus");
    if (std::abs(t1 - t2) <= tol)
        throw NoSolutionError("solve_symmetric_involution: t1 = t2");

    const Complex w = std::exp(Complex(0.0, kTwoPi / 3.0));
    const std::array<std::pair<Complex, Complex>, 3> pairs = {
        std::pair{Complex(1.0, 0.0), w}, std::pair{Complex(1.0, 0.0), w * w}, std::pair{w, w * w}};
    const Complex det_M = -t1 * t2;
    for (const auto& [l1, l2] : pairs) {
        if (std::abs(l1 * l2 - det_M) > tol) continue;
        const Complex a = (l1 + l2) / (t1 - t2);
        Complex b = std::sqrt(Complex(1.0, 0.0) - a * a);
        if (b.real() < 0.0 || (b.real() == 0.0 && b.imag() < 0.0)) b = -b;
        ComplexMatrix M(2, 2);
        M << a, b, b, -a;
        const ComplexMatrix P = M * rho_T;
        if (entrywise_max_abs(P * P * P - ComplexMatrix::Identity(2, 2)) > std::sqrt(tol))
            continue;
        return M;
    }
    throw NoSolutionError("solve_symmetric_involution: phases admit no symmetric involution");
}

struct EisensteinInversionResult {
    ComplexMatrix R;
    double residual_max = 0.0;
    // Entrywise distance from (1/sqrt 5) [[1,2],[2,-1]]. Reported, not asserted:
    // E2 is only quasimodular, so the transformation need not be exactly linear
    // and the held-out residual is the honest signal.
    double reference_deviation = 0.0;
};

// Solves (E+, Echi)(-1/tau) = tau^2 R (E+, Echi)(tau) from the first two
// samples and reports how well the remaining samples obey the same R.
inline EisensteinInversionResult eisenstein_inversion(const std::vector<HalfPlanePoint>& samples,
                                                      double tol, long order = 200,
                                                      double cond_threshold = kCondThreshold) {
    if (samples.size() < 2) throw Error("eisenstein_inversion: need at least 2 samples");
    const QSeries eplus = eisenstein(EisensteinKind::EPlus, order);
    const QSeries echi = eisenstein(EisensteinKind::EChi, order);

    const auto pair_at = [&](Complex t) -> ComplexVector {
        const Complex q = std::exp(Complex(0.0, kTwoPi) * t);
        if (std::abs(q) > kDefaultQMax) throw DomainError("eisenstein_inversion: |q| too large");
        ComplexVector out(2);
        out(0) = eval_qseries_at(eplus, q, tol).value;
        out(1) = eval_qseries_at(echi, q, tol).value;
        return out;
    };

    std::vector<ComplexVector> at_tau, at_inv_scaled;
    for (const auto& p : samples) {
        const Complex t = p.value();
        if (!(t.imag() > 0.0)) throw DomainError("eisenstein_inversion: tau not in half-plane");
        const Complex it = -1.0 / t;
        at_tau.push_back(pair_at(t));
        at_inv_scaled.push_back(pair_at(it) / (t * t));
    }

    ComplexMatrix V(2, 2), W(2, 2);
    V.col(0) = at_tau[0];
    V.col(1) = at_tau[1];
    W.col(0) = at_inv_scaled[0];
    W.col(1) = at_inv_scaled[1];
    if (condition_number(V) > cond_threshold)
        throw SingularSamplesError("eisenstein_inversion: training samples degenerate");

    EisensteinInversionResult out;
    out.R = V.transpose().partialPivLu().solve(W.transpose()).transpose();
    for (size_t j = 2; j < samples.size(); ++j) {
        const double res = (at_inv_scaled[j] - out.R * at_tau[j]).norm() / at_tau[j].norm();
        out.residual_max = std::max(out.residual_max, res);
    }
    ComplexMatrix ref(2, 2);
    const double s5 = 1.0 / std::sqrt(5.0);
    ref << s5, 2 * s5, 2 * s5, -s5;
    out.reference_deviation = entrywise_max_abs(out.R - ref);
    return out;
}

} // namespace qmod
