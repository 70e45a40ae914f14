#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmod/json_io.hpp"

namespace qmod::cli {

// Exit codes: 0 success / CERTIFIED / all checks passed, 1 identity failure or
// FAILED verdict, 2 usage error, 3 CERTIFIED_WITH_DISCREPANCY.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiscrepancy = 3;

namespace detail {

inline void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error("cannot open output file '" + out_path + "'");
        f << text;
        if (!text.empty() && text.back() != '\n') f << '\n';
    }
}

// "x+yi" / "x-yi" with decimal reals.
inline HalfPlanePoint parse_tau(const std::string& s) {
    if (s.empty() || s.back() != 'i') throw Error("tau literal must end in 'i', e.g. 0.1+0.9i");
    const std::string body = s.substr(0, s.size() - 1);
    // split at the sign that separates real and imaginary parts (not an
    // exponent sign and not a leading sign)
    for (size_t pos = body.size(); pos-- > 1;) {
        const char ch = body[pos];
        if ((ch == '+' || ch == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
            const std::string re = body.substr(0, pos);
            const std::string im = body.substr(pos);  // keeps the sign
            try {
                return {std::stod(re), std::stod(im)};
            } catch (const std::exception&) {
                throw Error("cannot parse tau literal '" + s + "'");
            }
        }
    }
    throw Error("cannot parse tau literal '" + s + "' (expected x+yi)");
}

inline std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(15);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

inline std::string suite_report_text(const SuiteReport& rep) {
    std::ostringstream os;
    os << "suite " << rep.suite_id << " order " << rep.order << "\n";
    for (const auto& r : rep.reports) {
        os << "  [" << (r.passed ? "PASS" : "FAIL") << "] " << r.identity_id;
        if (r.first_mismatch)
            os << "  (first mismatch at q^" << r.first_mismatch->exponent << ": "
               << r.first_mismatch->lhs << " vs " << r.first_mismatch->rhs << ")";
        os << "\n";
    }
    os << (rep.all_passed ? "all passed" : "FAILURES present") << "\n";
    return os.str();
}

inline std::string certificate_text(const Certificate& c) {
    std::ostringstream os;
    os.precision(12);
    os << "family " << c.family << " k=" << c.k << " order=" << c.order << " tol=" << c.tol << "\n";
    os << "residual_max   " << c.residual_max << "\n";
    os << "constancy_dev  " << c.constancy_dev << "\n";
    os << "dev_S2         " << c.dev_S2 << "\n";
    os << "dev_ST3        " << c.dev_ST3 << "\n";
    if (c.closed_form_deviation)
        os << "closed_form_deviation " << *c.closed_form_deviation << "\n";
    os << "exponents_exact ";
    for (const auto& a : c.exponents_exact) os << a << " ";
    os << "\nexponents_solved ";
    for (double e : c.exponents_solved) os << e << " ";
    os << "\nverdict " << to_string(c.verdict) << "\n";
    return os.str();
}

} // namespace detail

inline int run(const std::vector<std::string>& args) {
    CLI::App app{"q-series identity checking and vector-valued modularity certification"};
    app.require_subcommand(1);

    std::string series_id, suite_id, family_str = "rr", tau_str, format = "text", out_path;
    long order = 200;
    long k = 2, i = 1, m = -1, L = -1;
    double tol = 1e-9;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--order", order, "series exactness order");
        cmd->add_option("--format", format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--out", out_path, "write output to a file instead of stdout");
        cmd->add_option("--tol", tol, "numeric tolerance");
    };

    auto* expand = app.add_subcommand("expand", "expand a named series");
    expand->add_option("--series", series_id, "series id, e.g. G, A_5, SW:1,5, AG:3,2")->required();
    add_common(expand);

    auto* check = app.add_subcommand("check", "run an exact identity suite");
    check->add_option("--suite", suite_id, "suite id, e.g. rr-log-deriv")->required();
    check->add_option("--m", m, "m_max for schur suites / r_max for q-pascal");
    check->add_option("--k", k, "k_max for ag suites");
    add_common(check);

    auto* certify = app.add_subcommand("certify", "solve multipliers and certify modularity");
    certify->add_option("--family", family_str, "rr or ag")
        ->check(CLI::IsMember({"rr", "ag"}));
    certify->add_option("--k", k, "Andrews-Gordon index (>= 2)");
    add_common(certify);

    auto* eval = app.add_subcommand("eval", "evaluate a series at a point tau");
    eval->add_option("--series", series_id, "series id");
    eval->add_option("--family", family_str, "rr or ag (normalized vector)");
    eval->add_option("--k", k, "Andrews-Gordon index");
    eval->add_option("--tau", tau_str, "point as x+yi, e.g. 0.1+0.9i")->required();
    add_common(eval);

    try {
        std::vector<const char*> argv;
        argv.push_back("qmodular");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (expand->parsed()) {
            const QSeries s = series_from_id(series_id, order);
            if (format == "json") {
                Json j;
                j["series"] = series_id;
                j.update(qseries_json(s));
                detail::emit(j.dump(2), out_path);
            } else {
                detail::emit(s.to_string(), out_path);
            }
            return kExitOk;
        }

        if (check->parsed()) {
            SuiteParams params;
            if (m >= 0) {
                params["m_max"] = m;
                params["r_max"] = m;
            }
            if (check->count("--k")) params["k_max"] = k;
            const SuiteReport rep = run_suite(suite_id, params, order);
            detail::emit(format == "json" ? suite_report_json(rep).dump(2)
                                          : detail::suite_report_text(rep),
                         out_path);
            return rep.all_passed ? kExitOk : kExitFailure;
        }

        if (certify->parsed()) {
            CertifyConfig cfg;
            cfg.order = order;
            cfg.tol = tol;
            const VectorFamily fam = family_str == "rr" ? VectorFamily::RR : VectorFamily::AG;
            const Certificate cert = certify_family(fam, fam == VectorFamily::RR ? 2 : k, cfg);
            // certificates default to JSON; they are meant to be stored
            const bool as_json = format == "json" || !certify->count("--format");
            detail::emit(as_json ? certificate_json(cert).dump(2) : detail::certificate_text(cert),
                         out_path);
            switch (cert.verdict) {
                case Verdict::CERTIFIED: return kExitOk;
                case Verdict::CERTIFIED_WITH_DISCREPANCY: return kExitDiscrepancy;
                default: return kExitFailure;
            }
        }

        if (eval->parsed()) {
            const HalfPlanePoint tau = detail::parse_tau(tau_str);
            std::ostringstream os;
            Json j = Json::array();
            if (eval->count("--series")) {
                const QSeries s = series_from_id(series_id, order);
                const Complex q = std::exp(Complex(0.0, kTwoPi) * tau.value());
                const EvalResult r = eval_qseries_at(s, q, tol);
                os << series_id << "(" << tau_str << ") = " << detail::format_complex(r.value)
                   << "  tail_bound " << r.tail_bound << "  terms " << r.terms_used << "\n";
                j.push_back(Json{{"series", series_id},
                                 {"value", {r.value.real(), r.value.imag()}},
                                 {"tail_bound", r.tail_bound},
                                 {"terms_used", r.terms_used}});
            } else {
                const VectorFamily fam = family_str == "rr" ? VectorFamily::RR : VectorFamily::AG;
                const NormalizedVector v =
                    normalized_vector(fam, fam == VectorFamily::RR ? 2 : k, order);
                for (long c = 0; c < v.size(); ++c) {
                    const EvalResult r =
                        eval_series(v.components[static_cast<size_t>(c)], tau, tol);
                    os << "f" << (c + 1) << "(" << tau_str << ") = "
                       << detail::format_complex(r.value) << "  tail_bound " << r.tail_bound
                       << "  terms " << r.terms_used << "\n";
                    j.push_back(Json{{"component", c + 1},
                                     {"value", {r.value.real(), r.value.imag()}},
                                     {"tail_bound", r.tail_bound},
                                     {"terms_used", r.terms_used}});
                }
            }
            detail::emit(format == "json" ? j.dump(2) : os.str(), out_path);
            return kExitOk;
        }
    } catch (const UnknownSuiteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace qmod::cli
