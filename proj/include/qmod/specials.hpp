#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qmod/qseries.hpp"

namespace qmod {

enum class SchurKind { A, B };
enum class RRKind { G, H };
enum class CompanionKind { P, Q };
enum class EisensteinKind { E2, EPlus, EChi };
enum class VectorFamily { RR, AG };

namespace detail {

inline long isqrt_floor(long n) {
    if (n < 0) return -1;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace detail

// Schur polynomials by their second-order recurrences
//   A_m = A_{m-1} + q^{m-1} A_{m-2},  B_m = B_{m-1} + q^m B_{m-2},
// from A_0 = A_1 = 1 and B_0 = B_1 = 1. (B_1 = 1 is forced by the direct
// q-binomial definition below and by B_m = H + O(q^m); see schur tests.)
inline QSeries schur_polynomial(SchurKind kind, long m, long order) {
    if (m < 0) throw Error("schur_polynomial: m must be >= 0");
    QSeries prev = QSeries::one(order);  // index m-2
    QSeries cur = QSeries::one(order);   // index m-1
    if (m <= 1) return cur;
    for (long mm = 2; mm <= m; ++mm) {
        const long shift = kind == SchurKind::A ? mm - 1 : mm;
        QSeries next = cur;
        if (shift <= order) next.add_shifted(prev, shift);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

// Independent route: A_m = sum_n q^{n^2} qbinom(m-n, n) and the q^{n(n+1)}
// analogue for B_m. Kept separate from the recurrence so the two can be
// checked against each other.
inline QSeries schur_polynomial_direct(SchurKind kind, long m, long order) {
    if (m < 0) throw Error("schur_polynomial_direct: m must be >= 0");
    QSeries acc = QSeries::zero(order);
    for (long n = 0; n <= m - n; ++n) {
        const long lead = kind == SchurKind::A ? n * n : n * (n + 1);
        if (lead > order) break;
        acc.add_shifted(q_binomial(m - n, n, order), lead);
    }
    return acc;
}

// Rogers-Ramanujan sums: G = sum q^{n^2}/(q;q)_n, H = sum q^{n(n+1)}/(q;q)_n.
// The reciprocal Pochhammer factor is grown incrementally, one geometric
// factor per n.
inline QSeries rr_series(RRKind kind, long order) {
    QSeries acc = QSeries::zero(order);
    QSeries recip = QSeries::one(order);  // 1/(q;q)_n
    for (long n = 0;; ++n) {
        const long lead = kind == RRKind::G ? n * n : n * (n + 1);
        if (lead > order) break;
        if (n > 0) recip.div_one_minus_pow(n);
        acc.add_shifted(recip, lead);
    }
    return acc;
}

// P_m = prod_{j=1}^m 1/((1-q^{5j-4})(1-q^{5j-1})), Q_m with 5j-3, 5j-2.
inline QSeries companion_product(CompanionKind kind, long m, long order) {
    if (m < 0) throw Error("companion_product: m must be >= 0");
    QSeries r = QSeries::one(order);
    for (long j = 1; j <= m; ++j) {
        const long e1 = kind == CompanionKind::P ? 5 * j - 4 : 5 * j - 3;
        const long e2 = kind == CompanionKind::P ? 5 * j - 1 : 5 * j - 2;
        if (e1 > order) break;
        r.div_one_minus_pow(e1);
        if (e2 <= order) r.div_one_minus_pow(e2);
    }
    return r;
}

// sum over n >= 1, n = r (mod M) of n q^n/(1-q^n); the coefficient of q^N is
// the sum of divisors of N lying in class r. For r = 0 the sum starts at n = M.
inline QSeries lambert_weighted(long r, long M, long order) {
    if (M < 1 || r < 0 || r >= M) throw Error("lambert_weighted: need 0 <= r < M");
    std::vector<Rational> c(static_cast<size_t>(order) + 1);
    const long start = r == 0 ? M : r;
    for (long n = start; n <= order; n += M)
        for (long m = n; m <= order; m += n) c[static_cast<size_t>(m)] += Rational(n);
    return QSeries(0, std::move(c));
}

// Unweighted variant: coefficient of q^N counts divisors of N in class r.
inline QSeries lambert_unweighted(long r, long M, long order) {
    if (M < 1 || r < 0 || r >= M) throw Error("lambert_unweighted: need 0 <= r < M");
    std::vector<Rational> c(static_cast<size_t>(order) + 1);
    const long start = r == 0 ? M : r;
    for (long n = start; n <= order; n += M)
        for (long m = n; m <= order; m += n) c[static_cast<size_t>(m)] += Rational(1);
    return QSeries(0, std::move(c));
}

namespace detail {

inline std::vector<long> sigma1_table(long order) {
    std::vector<long> s(static_cast<size_t>(order) + 1, 0);
    for (long d = 1; d <= order; ++d)
        for (long m = d; m <= order; m += d) s[static_cast<size_t>(m)] += d;
    return s;
}

// quadratic character mod 5 (Legendre symbol): 1, -1, -1, 1 on classes 1..4.
inline long chi5(long n) {
    switch (n % 5) {
        case 1: case 4: return 1;
        case 2: case 3: return -1;
        default: return 0;
    }
}

} // namespace detail

// E2 = 1 - 24 sum sigma_1(m) q^m;  E+ = E2(tau) - 5 E2(5 tau);
// Echi has coefficients sum_{d|m} chi(d) d with chi the character mod 5.
inline QSeries eisenstein(EisensteinKind kind, long order) {
    std::vector<Rational> c(static_cast<size_t>(order) + 1);
    switch (kind) {
        case EisensteinKind::E2: {
            const auto sig = detail::sigma1_table(order);
            c[0] = Rational(1);
            for (long m = 1; m <= order; ++m) c[static_cast<size_t>(m)] = Rational(-24 * sig[static_cast<size_t>(m)]);
            break;
        }
        case EisensteinKind::EPlus: {
            const auto sig = detail::sigma1_table(order);
            c[0] = Rational(-4);
            for (long m = 1; m <= order; ++m) {
                long v = -24 * sig[static_cast<size_t>(m)];
                if (m % 5 == 0) v += 5 * 24 * sig[static_cast<size_t>(m / 5)];
                c[static_cast<size_t>(m)] = Rational(v);
            }
            break;
        }
        case EisensteinKind::EChi: {
            for (long d = 1; d <= order; ++d) {
                const long x = detail::chi5(d);
                if (x == 0) continue;
                for (long m = d; m <= order; m += d) c[static_cast<size_t>(m)] += Rational(x * d);
            }
            break;
        }
    }
    return QSeries(0, std::move(c));
}

// Andrews-Gordon sum F_{k,i} over (n_1,...,n_{k-1}) >= 0 with N_1 <= L, where
// N_j = n_j + ... + n_{k-1}:
//   sum q^{N_1^2 + ... + N_{k-1}^2 + (N_i + ... + N_{k-1})} / prod (q;q)_{n_j}.
// Enumerates decreasing chains N_1 >= ... >= N_{k-1} >= 0 depth first. The
// running product of reciprocal Pochhammers is updated in place with exact
// geometric factors and undone on backtrack, so prefixes are shared.
inline QSeries ag_sum(long k, long i, long order, long L = kInfinity) {
    if (k < 2 || i < 1 || i > k) throw Error("ag_sum: need k >= 2 and 1 <= i <= k");
    if (L < 0) throw Error("ag_sum: L must be >= 0");
    QSeries acc = QSeries::zero(order);
    QSeries prod = QSeries::one(order);

    // level j has N_j chosen and its exponent contribution accounted for
    std::function<void(long, long, long)> descend = [&](long j, long Nj, long exp) {
        if (j == k - 1) {
            // last variable: n_{k-1} = N_{k-1}
            for (long t = 1; t <= Nj; ++t) prod.div_one_minus_pow(t);
            acc.add_shifted(prod, exp);
            for (long t = 1; t <= Nj; ++t) prod.mul_one_minus_pow(t);
            return;
        }
        for (long next = 0; next <= Nj; ++next) {
            const long e = exp + next * next + (j + 1 >= i ? next : 0);
            if (e > order) break;
            const long nj = Nj - next;
            for (long t = 1; t <= nj; ++t) prod.div_one_minus_pow(t);
            descend(j + 1, next, e);
            for (long t = 1; t <= nj; ++t) prod.mul_one_minus_pow(t);
        }
    };

    long top = detail::isqrt_floor(order);
    if (L != kInfinity) top = std::min(top, L);
    for (long N1 = 0; N1 <= top; ++N1) {
        const long e = N1 * N1 + (1 >= i ? N1 : 0);
        if (e > order) break;
        descend(1, N1, e);
    }
    return acc;
}

// Product side of the Andrews-Gordon identity with M = 2k+1:
//   (q^M;q^M)_inf (q^i;q^M)_inf (q^{M-i};q^M)_inf / (q;q)_inf.
inline QSeries ag_product(long k, long i, long order) {
    if (k < 2 || i < 1 || i > k) throw Error("ag_product: need k >= 2 and 1 <= i <= k");
    const long M = 2 * k + 1;
    QSeries r = pochhammer(M, M, kInfinity, order);
    r = r * pochhammer(i, M, kInfinity, order);
    r = r * pochhammer(M - i, M, kInfinity, order);
    return (r * series_invert(pochhammer(1, 1, kInfinity, order), order)).truncated(order);
}

// Leading exponent alpha_{k,i} = h_{1,i} - c/24 with
//   c = 1 - 6(2k-1)^2/(2(2k+1)),  h_{1,i} = ((2k+1-2i)^2 - (2k-1)^2)/(8(2k+1)).
inline Rational ag_exponent(long k, long i) {
    if (k < 2 || i < 1 || i > k) throw Error("ag_exponent: need k >= 2 and 1 <= i <= k");
    const Rational c = Rational(1) - Rational(6 * (2 * k - 1) * (2 * k - 1), 2 * (2 * k + 1));
    const Rational h = Rational((2 * k + 1 - 2 * i) * (2 * k + 1 - 2 * i) - (2 * k - 1) * (2 * k - 1),
                                8 * (2 * k + 1));
    return h - c / Rational(24);
}

// Ordered tuple of normalized components with pairwise distinct exponents.
struct NormalizedVector {
    std::vector<NormalizedSeries> components;
    long level = 0;

    long size() const { return static_cast<long>(components.size()); }
};

// RR: (q^{-1/60} G, q^{11/60} H), level 5.
// AG: (q^{alpha_{k,i}} F_{k,i})_{i=1..k}, level 2k+1. Note the k = 2 case puts
// the H-like component first, the opposite of the RR ordering.
inline NormalizedVector normalized_vector(VectorFamily family, long k, long order) {
    NormalizedVector v;
    if (family == VectorFamily::RR) {
        if (k != 2) throw Error("normalized_vector: RR family requires k = 2");
        v.level = 5;
        v.components.emplace_back(Rational(-1, 60), rr_series(RRKind::G, order));
        v.components.emplace_back(Rational(11, 60), rr_series(RRKind::H, order));
    } else {
        if (k < 2) throw Error("normalized_vector: AG family requires k >= 2");
        v.level = 2 * k + 1;
        for (long i = 1; i <= k; ++i)
            v.components.emplace_back(ag_exponent(k, i), ag_sum(k, i, order));
    }
    return v;
}

// --- CLI-facing series ids -------------------------------------------------
//
// "G", "H", "A_m", "B_m", "P_m", "Q_m", "SW:r,M", "SU:r,M", "E2", "E+",
// "Echi", "AG:k,i", "AGprod:k,i"

inline QSeries series_from_id(const std::string& id, long order) {
    auto parse_long = [](const std::string& s) -> long {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw Error("series id: bad integer '" + s + "'");
        return v;
    };
    auto split2 = [&](const std::string& s) -> std::pair<long, long> {
        const auto comma = s.find(',');
        if (comma == std::string::npos) throw Error("series id: expected two parameters");
        return {parse_long(s.substr(0, comma)), parse_long(s.substr(comma + 1))};
    };

    if (id == "G") return rr_series(RRKind::G, order);
    if (id == "H") return rr_series(RRKind::H, order);
    if (id == "E2") return eisenstein(EisensteinKind::E2, order);
    if (id == "E+") return eisenstein(EisensteinKind::EPlus, order);
    if (id == "Echi") return eisenstein(EisensteinKind::EChi, order);
    if (id.size() > 2 && id[1] == '_') {
        const long m = parse_long(id.substr(2));
        switch (id[0]) {
            case 'A': return schur_polynomial(SchurKind::A, m, order);
            case 'B': return schur_polynomial(SchurKind::B, m, order);
            case 'P': return companion_product(CompanionKind::P, m, order);
            case 'Q': return companion_product(CompanionKind::Q, m, order);
            default: break;
        }
    }
    if (id.rfind("SW:", 0) == 0) {
        const auto [r, M] = split2(id.substr(3));
        return lambert_weighted(r, M, order);
    }
    if (id.rfind("SU:", 0) == 0) {
        const auto [r, M] = split2(id.substr(3));
        return lambert_unweighted(r, M, order);
    }
    if (id.rfind("AGprod:", 0) == 0) {
        const auto [k, i] = split2(id.substr(7));
        return ag_product(k, i, order);
    }
    if (id.rfind("AG:", 0) == 0) {
        const auto [k, i] = split2(id.substr(3));
        return ag_sum(k, i, order);
    }
    throw Error("unknown series id '" + id + "'");
}

} // namespace qmod
