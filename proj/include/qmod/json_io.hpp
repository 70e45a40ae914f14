#pragma once

#include <json.hpp>

#include "qmod/certify.hpp"
#include "qmod/identities.hpp"

namespace qmod {

using Json = nlohmann::ordered_json;

// Rationals travel as ["num", "den"] string pairs so nothing is rounded.
inline Json rational_json(const Rational& r) { return Json::array({r.num_str(), r.den_str()}); }

inline Json qseries_json(const QSeries& s) {
    Json coeffs = Json::array();
    for (long n = s.offset(); n <= s.order(); ++n) {
        const Rational& c = s.coeff(n);
        if (c.is_zero()) continue;
        coeffs.push_back(Json{{"exponent", n}, {"numerator", c.num_str()}, {"denominator", c.den_str()}});
    }
    return Json{{"offset", s.offset()}, {"order", s.order()}, {"coefficients", std::move(coeffs)}};
}

inline Json suite_report_json(const SuiteReport& s) {
    Json reports = Json::array();
    for (const auto& r : s.reports) {
        Json item{{"id", r.identity_id}, {"passed", r.passed}};
        if (r.first_mismatch) {
            item["mismatch"] = Json{{"exponent", r.first_mismatch->exponent},
                                    {"lhs", rational_json(r.first_mismatch->lhs)},
                                    {"rhs", rational_json(r.first_mismatch->rhs)}};
        }
        reports.push_back(std::move(item));
    }
    return Json{{"suite_id", s.suite_id},
                {"order", s.order},
                {"reports", std::move(reports)},
                {"all_passed", s.all_passed}};
}

inline Json complex_matrix_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json certificate_json(const Certificate& c) {
    Json j;
    j["family"] = c.family;
    j["k"] = c.k;
    j["order"] = c.order;
    j["tol"] = c.tol;
    j["rho_T"] = complex_matrix_json(c.rho_T);
    j["rho_S_solved"] = complex_matrix_json(c.rho_S_solved);
    j["rho_S_closed_form"] = c.rho_S_closed_form ? complex_matrix_json(*c.rho_S_closed_form) : Json();
    j["residual_max"] = c.residual_max;
    j["constancy_dev"] = c.constancy_dev;
    j["dev_S2"] = c.dev_S2;
    j["dev_ST3"] = c.dev_ST3;
    j["exponents_solved"] = c.exponents_solved;
    Json exact = Json::array();
    for (const auto& a : c.exponents_exact) exact.push_back(rational_json(a));
    j["exponents_exact"] = std::move(exact);
    j["closed_form_deviation"] = c.closed_form_deviation ? Json(*c.closed_form_deviation) : Json();
    j["verdict"] = to_string(c.verdict);
    return j;
}

} // namespace qmod
