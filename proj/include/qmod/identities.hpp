#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmod/specials.hpp"

namespace qmod {

struct Mismatch {
    long exponent = 0;
    Rational lhs;
    Rational rhs;
};

struct IdentityReport {
    std::string identity_id;
    long order_checked = 0;
    bool passed = false;
    std::optional<Mismatch> first_mismatch;
};

struct SuiteReport {
    std::string suite_id;
    long order = 0;
    std::vector<IdentityReport> reports;
    bool all_passed = true;

    void add(IdentityReport r) {
        all_passed = all_passed && r.passed;
        reports.push_back(std::move(r));
    }
};

// Coefficientwise exact comparison for exponents 0..order; reports the
// smallest differing exponent. Both inputs must be exact through the order.
inline IdentityReport compare_series(const QSeries& lhs, const QSeries& rhs, long order,
                                     std::string identity_id = {}) {
    if (lhs.order() < order || rhs.order() < order)
        throw InsufficientOrderError("compare_series: operands exact through " +
                                     std::to_string(std::min(lhs.order(), rhs.order())) +
                                     " < requested " + std::to_string(order));
    IdentityReport rep;
    rep.identity_id = std::move(identity_id);
    rep.order_checked = order;
    rep.passed = true;
    for (long n = 0; n <= order; ++n) {
        if (lhs.coeff(n) != rhs.coeff(n)) {
            rep.passed = false;
            rep.first_mismatch = Mismatch{n, lhs.coeff(n), rhs.coeff(n)};
            break;
        }
    }
    return rep;
}

// A lowest-nonzero-exponent claim, used for the O(q^m) approximation lemmas.
inline IdentityReport check_offset_at_least(const QSeries& diff, long m, long order,
                                            std::string identity_id) {
    IdentityReport rep;
    rep.identity_id = std::move(identity_id);
    rep.order_checked = order;
    const auto fn = diff.first_nonzero();
    rep.passed = !fn.has_value() || *fn >= m;
    if (!rep.passed) rep.first_mismatch = Mismatch{*fn, diff.coeff(*fn), Rational(0)};
    return rep;
}

using SuiteParams = std::map<std::string, long>;

namespace detail {

inline long param_or(const SuiteParams& p, const std::string& key, long fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline SuiteReport suite_rr_sum_product(long order) {
    SuiteReport s{"rr-sum-product", order};
    const QSeries gprod =
        series_invert(pochhammer(1, 5, kInfinity, order) * pochhammer(4, 5, kInfinity, order), order);
    const QSeries hprod =
        series_invert(pochhammer(2, 5, kInfinity, order) * pochhammer(3, 5, kInfinity, order), order);
    s.add(compare_series(rr_series(RRKind::G, order), gprod, order, "G = 1/((q;q^5)(q^4;q^5))"));
    s.add(compare_series(rr_series(RRKind::H, order), hprod, order, "H = 1/((q^2;q^5)(q^3;q^5))"));
    return s;
}

inline SuiteReport suite_rr_log_deriv(long order) {
    SuiteReport s{"rr-log-deriv", order};
    const QSeries g = rr_series(RRKind::G, order);
    const QSeries h = rr_series(RRKind::H, order);
    s.add(compare_series(log_theta_derivative(g, order),
                         lambert_weighted(1, 5, order) + lambert_weighted(4, 5, order), order,
                         "thetaG/G = S1+S4"));
    s.add(compare_series(log_theta_derivative(h, order),
                         lambert_weighted(2, 5, order) + lambert_weighted(3, 5, order), order,
                         "thetaH/H = S2+S3"));
    return s;
}

inline SuiteReport suite_schur_approx(long order, long m_max) {
    SuiteReport s{"schur-approx", order};
    const QSeries g = rr_series(RRKind::G, order);
    const QSeries h = rr_series(RRKind::H, order);
    for (long m = 0; m <= m_max; ++m) {
        s.add(check_offset_at_least(schur_polynomial(SchurKind::A, m, order) - g, m, order,
                                    "A_" + std::to_string(m) + " - G = O(q^" + std::to_string(m) + ")"));
        s.add(check_offset_at_least(schur_polynomial(SchurKind::B, m, order) - h, m, order,
                                    "B_" + std::to_string(m) + " - H = O(q^" + std::to_string(m) + ")"));
    }
    return s;
}

inline SuiteReport suite_schur_companion(long order, long m_max) {
    SuiteReport s{"schur-companion", order};
    for (long m = 0; m <= m_max; ++m) {
        s.add(check_offset_at_least(
            schur_polynomial(SchurKind::A, m, order) - companion_product(CompanionKind::P, m, order),
            m, order, "A_" + std::to_string(m) + " - P_" + std::to_string(m)));
        s.add(check_offset_at_least(
            schur_polynomial(SchurKind::B, m, order) - companion_product(CompanionKind::Q, m, order),
            m, order, "B_" + std::to_string(m) + " - Q_" + std::to_string(m)));
    }
    return s;
}

inline SuiteReport suite_q_pascal(long order, long r_max) {
    SuiteReport s{"q-pascal", order};
    for (long r = 1; r <= r_max; ++r) {
        for (long n = 1; n <= r; ++n) {
            QSeries rhs = q_binomial(r - 1, n, order);
            const long sh = r - n;
            if (sh <= order) rhs.add_shifted(q_binomial(r - 1, n - 1, order), sh);
            s.add(compare_series(q_binomial(r, n, order), rhs, order,
                                 "qbinom(" + std::to_string(r) + "," + std::to_string(n) + ")"));
        }
    }
    return s;
}

inline SuiteReport suite_eisenstein_decomp(long order) {
    SuiteReport s{"eisenstein-decomp", order};
    // a1 = -1/60 + S1+S4 and a2 = 11/60 + S2+S3; the Eisenstein parts
    // a1 + 1/10 and a2 - 1/10 decompose over (E+, Echi) with constant rows
    // (-1/48, 1/2) and (-1/48, -1/2).
    const QSeries eplus = eisenstein(EisensteinKind::EPlus, order);
    const QSeries echi = eisenstein(EisensteinKind::EChi, order);
    QSeries a1 = lambert_weighted(1, 5, order) + lambert_weighted(4, 5, order);
    a1.add_shifted(QSeries::monomial(Rational(-1, 60), 0, order));
    QSeries a2 = lambert_weighted(2, 5, order) + lambert_weighted(3, 5, order);
    a2.add_shifted(QSeries::monomial(Rational(11, 60), 0, order));
    QSeries at1 = a1;
    at1.add_shifted(QSeries::monomial(Rational(1, 10), 0, order));
    QSeries at2 = a2;
    at2.add_shifted(QSeries::monomial(Rational(-1, 10), 0, order));
    const QSeries rhs1 = Rational(-1, 48) * eplus + Rational(1, 2) * echi;
    const QSeries rhs2 = Rational(-1, 48) * eplus + Rational(-1, 2) * echi;
    s.add(compare_series(at1, rhs1, order, "a1 + 1/10 = -E+/48 + Echi/2"));
    s.add(compare_series(at2, rhs2, order, "a2 - 1/10 = -E+/48 - Echi/2"));
    return s;
}

inline SuiteReport suite_sigma_dissection(long order) {
    SuiteReport s{"sigma-dissection", order};
    const auto sig = detail::sigma1_table(order);
    std::vector<Rational> c(static_cast<size_t>(order) + 1);
    for (long m = 1; m <= order; ++m) {
        long v = sig[static_cast<size_t>(m)];
        if (m % 5 == 0) v -= 5 * sig[static_cast<size_t>(m / 5)];
        c[static_cast<size_t>(m)] = Rational(v);
    }
    const QSeries lhs(0, std::move(c));
    QSeries rhs = Rational(-1, 24) * eisenstein(EisensteinKind::EPlus, order);
    rhs.add_shifted(QSeries::monomial(Rational(-4, 24), 0, order));
    s.add(compare_series(lhs, rhs, order, "sum sigma1 q^m - 5 sum sigma1 q^5m = (-4 - E+)/24"));
    return s;
}

inline SuiteReport suite_ag_sum_product(long order, long k_max) {
    SuiteReport s{"ag-sum-product", order};
    for (long k = 2; k <= k_max; ++k)
        for (long i = 1; i <= k; ++i)
            s.add(compare_series(ag_sum(k, i, order), ag_product(k, i, order), order,
                                 "F(" + std::to_string(k) + "," + std::to_string(i) + ") sum = product"));
    return s;
}

inline SuiteReport suite_ag_log_deriv(long order, long k_max, long k_min = 2) {
    SuiteReport s{"ag-log-deriv", order};
    for (long k = k_min; k <= k_max; ++k) {
        const long M = 2 * k + 1;
        for (long i = 1; i <= k; ++i) {
            const QSeries f = ag_product(k, i, order);
            QSeries rhs = QSeries::zero(order);
            for (long r = 1; r < M; ++r) {
                if (r == i || r == M - i) continue;
                rhs.add_shifted(lambert_weighted(r, M, order));
            }
            s.add(compare_series(log_theta_derivative(f, order), rhs, order,
                                 "thetaF/F (" + std::to_string(k) + "," + std::to_string(i) + ")"));
        }
    }
    return s;
}

inline SuiteReport suite_rr_theta_system(long order) {
    SuiteReport s{"rr-theta-system", order};
    // theta applied to each body equals the Lambert part of its coefficient
    // times the body; the constant exponent cancels against the prefactor.
    const QSeries g = rr_series(RRKind::G, order);
    const QSeries h = rr_series(RRKind::H, order);
    const QSeries lam1 = lambert_weighted(1, 5, order) + lambert_weighted(4, 5, order);
    const QSeries lam2 = lambert_weighted(2, 5, order) + lambert_weighted(3, 5, order);
    s.add(compare_series(series_theta(g), (lam1 * g).truncated(order), order, "theta G = (S1+S4) G"));
    s.add(compare_series(series_theta(h), (lam2 * h).truncated(order), order, "theta H = (S2+S3) H"));
    return s;
}

} // namespace detail

// Runs one of the built-in exact identity suites. Recognized params:
//   schur-approx / schur-companion: m_max (default 40)
//   q-pascal: r_max (default 12)
//   ag-sum-product / ag-log-deriv: k_max (default 4), k_min (default 2)
inline SuiteReport run_suite(const std::string& suite_id, const SuiteParams& params, long order) {
    using namespace detail;
    if (suite_id == "rr-sum-product") return suite_rr_sum_product(order);
    if (suite_id == "rr-log-deriv") return suite_rr_log_deriv(order);
    if (suite_id == "schur-approx") return suite_schur_approx(order, param_or(params, "m_max", 40));
    if (suite_id == "schur-companion")
        return suite_schur_companion(order, param_or(params, "m_max", 40));
    if (suite_id == "q-pascal") return suite_q_pascal(order, param_or(params, "r_max", 12));
    if (suite_id == "eisenstein-decomp") return suite_eisenstein_decomp(order);
    if (suite_id == "sigma-dissection") return suite_sigma_dissection(order);
    if (suite_id == "ag-sum-product")
        return suite_ag_sum_product(order, param_or(params, "k_max", 4));
    if (suite_id == "ag-log-deriv")
        return suite_ag_log_deriv(order, param_or(params, "k_max", 4), param_or(params, "k_min", 2));
    if (suite_id == "rr-theta-system") return suite_rr_theta_system(order);
    throw UnknownSuiteError("unknown suite '" + suite_id + "'");
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "rr-sum-product",   "rr-log-deriv",     "schur-approx",  "schur-companion",
        "q-pascal",         "eisenstein-decomp", "sigma-dissection", "ag-sum-product",
        "ag-log-deriv",     "rr-theta-system"};
    return names;
}

} // namespace qmod
