#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmod/errors.hpp"
#include "qmod/rational.hpp"

namespace qmod {

// Marker for "infinitely many factors" in Pochhammer products. The expansion
// order always truncates the product after finitely many factors anyway.
inline constexpr long kInfinity = std::numeric_limits<long>::max();

// Truncated formal power series in q with exact rational coefficients.
//
// `order` is the exactness bound: the coefficient of q^n is known exactly for
// every n <= order. `offset` is a lower bound witness: coefficients below it
// are exactly zero. Storage is dense from exponent 0 (orders stay small enough
// that sparse bookkeeping would only add noise).
//
// Order propagation under multiplication: a product of (exact <= Na, offset oa)
// and (exact <= Nb, offset ob) is exact through min(Na + ob, Nb + oa); sums are
// exact through min(Na, Nb). Polynomial constructors take an explicit order and
// zero-pad, so callers control how far downstream results stay exact.
class QSeries {
public:
    QSeries() : offset_(0), order_(0), c_(1) {}

    QSeries(long offset, std::vector<Rational> coeffs)
        : offset_(offset), order_(offset + static_cast<long>(coeffs.size()) - 1) {
        if (offset < 0 || coeffs.empty()) throw Error("QSeries: bad construction");
        c_.assign(static_cast<size_t>(order_) + 1, Rational(0));
        for (size_t i = 0; i < coeffs.size(); ++i)
            c_[static_cast<size_t>(offset) + i] = std::move(coeffs[i]);
    }

    static QSeries zero(long order) {
        QSeries s;
        s.order_ = check_order(order);
        s.c_.assign(static_cast<size_t>(order) + 1, Rational(0));
        return s;
    }

    static QSeries one(long order) {
        QSeries s = zero(order);
        s.c_[0] = Rational(1);
        return s;
    }

    static QSeries monomial(Rational coeff, long exponent, long order) {
        if (exponent < 0) throw Error("QSeries: negative exponent");
        QSeries s = zero(order);
        if (exponent <= order) {
            s.c_[static_cast<size_t>(exponent)] = std::move(coeff);
            s.offset_ = std::min(exponent, order);
        } else {
            s.offset_ = order;  // all retained coefficients are zero
        }
        return s;
    }

    // Coefficients given from exponent 0; treated as an exact polynomial, so the
    // result may be declared exact through any requested order.
    static QSeries polynomial(const std::vector<Rational>& coeffs, long order) {
        QSeries s = zero(order);
        for (size_t i = 0; i < coeffs.size() && static_cast<long>(i) <= order; ++i)
            s.c_[i] = coeffs[i];
        return s;
    }

    long offset() const { return offset_; }
    long order() const { return order_; }

    const Rational& coeff(long n) const {
        static const Rational kZero(0);
        if (n < 0) return kZero;
        if (n > order_)
            throw InsufficientOrderError("QSeries: coefficient of q^" + std::to_string(n) +
                                         " beyond exactness bound " + std::to_string(order_));
        return c_[static_cast<size_t>(n)];
    }

    // Smallest exponent <= order with nonzero coefficient, if any.
    std::optional<long> first_nonzero() const {
        for (long n = offset_; n <= order_; ++n)
            if (!c_[static_cast<size_t>(n)].is_zero()) return n;
        return std::nullopt;
    }

    bool is_zero_through_order() const { return !first_nonzero().has_value(); }

    bool is_unit() const { return offset_ == 0 && !c_[0].is_zero(); }

    QSeries truncated(long order) const {
        if (order > order_)
            throw InsufficientOrderError("QSeries: cannot truncate to order " +
                                         std::to_string(order) + ", exact only through " +
                                         std::to_string(order_));
        QSeries s = zero(order);
        for (long n = 0; n <= order; ++n) s.c_[static_cast<size_t>(n)] = c_[static_cast<size_t>(n)];
        s.offset_ = std::min(offset_, order);
        return s;
    }

    // Declares coefficients beyond the current order exactly zero. Only valid
    // when the caller knows the series is the polynomial it looks like.
    QSeries padded_as_polynomial(long order) const {
        if (order < order_) return truncated(order);
        QSeries s = zero(order);
        for (long n = 0; n <= order_; ++n) s.c_[static_cast<size_t>(n)] = c_[static_cast<size_t>(n)];
        s.offset_ = offset_;
        return s;
    }

    // q^shift * (*this)
    QSeries shifted(long shift) const {
        if (shift < 0) throw Error("QSeries: negative shift");
        QSeries s = zero(order_ + shift);
        for (long n = offset_; n <= order_; ++n)
            s.c_[static_cast<size_t>(n + shift)] = c_[static_cast<size_t>(n)];
        s.offset_ = offset_ + shift;
        return s;
    }

    QSeries& scale(const Rational& r) {
        for (auto& c : c_) c *= r;
        return *this;
    }

    // In-place multiply by the exact polynomial (1 - q^m); order is unchanged.
    QSeries& mul_one_minus_pow(long m) {
        if (m < 1) throw Error("QSeries: factor exponent must be >= 1");
        for (long e = order_; e >= m; --e)
            c_[static_cast<size_t>(e)] -= c_[static_cast<size_t>(e - m)];
        return *this;
    }

    // In-place multiply by 1/(1 - q^m) = sum_t q^{mt}; order is unchanged.
    QSeries& div_one_minus_pow(long m) {
        if (m < 1) throw Error("QSeries: factor exponent must be >= 1");
        for (long e = m; e <= order_; ++e)
            c_[static_cast<size_t>(e)] += c_[static_cast<size_t>(e - m)];
        return *this;
    }

    // Accumulate q^shift * t into *this, keeping this->order. Requires t to be
    // exact far enough that the retained coefficients stay exact.
    QSeries& add_shifted(const QSeries& t, long shift = 0) {
        if (t.order_ + shift < order_)
            throw InsufficientOrderError("QSeries::add_shifted: addend exact only through " +
                                         std::to_string(t.order_ + shift));
        for (long e = std::max(t.offset_ + shift, long{0}); e <= order_; ++e)
            c_[static_cast<size_t>(e)] += t.c_[static_cast<size_t>(e - shift)];
        offset_ = std::min(offset_, std::max(long{0}, std::min(t.offset_ + shift, order_)));
        return *this;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        const long order = std::min(a.order_, b.order_);
        QSeries s = zero(order);
        for (long n = 0; n <= order; ++n)
            s.c_[static_cast<size_t>(n)] =
                a.c_[static_cast<size_t>(n)] + b.c_[static_cast<size_t>(n)];
        s.offset_ = std::min({a.offset_, b.offset_, order});
        return s;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) {
        const long order = std::min(a.order_, b.order_);
        QSeries s = zero(order);
        for (long n = 0; n <= order; ++n)
            s.c_[static_cast<size_t>(n)] =
                a.c_[static_cast<size_t>(n)] - b.c_[static_cast<size_t>(n)];
        s.offset_ = std::min({a.offset_, b.offset_, order});
        return s;
    }

    friend QSeries operator-(const QSeries& a) {
        QSeries s = a;
        for (auto& c : s.c_) c = -c;
        return s;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        const long order = std::min(a.order_ + b.offset_, b.order_ + a.offset_);
        QSeries s = zero(std::max(order, long{0}));
        for (long i = a.offset_; i <= std::min(a.order_, s.order_); ++i) {
            const Rational& ai = a.c_[static_cast<size_t>(i)];
            if (ai.is_zero()) continue;
            const long jmax = std::min(b.order_, s.order_ - i);
            for (long j = b.offset_; j <= jmax; ++j) {
                const Rational& bj = b.c_[static_cast<size_t>(j)];
                if (bj.is_zero()) continue;
                s.c_[static_cast<size_t>(i + j)] += ai * bj;
            }
        }
        s.offset_ = std::min(a.offset_ + b.offset_, s.order_);
        return s;
    }

    friend QSeries operator*(const Rational& r, const QSeries& a) {
        QSeries s = a;
        s.scale(r);
        return s;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (long n = offset_; n <= order_; ++n) {
            const Rational& c = c_[static_cast<size_t>(n)];
            if (c.is_zero()) continue;
            const Rational a = c.sign() < 0 ? -c : c;
            if (first) {
                if (c.sign() < 0) os << "-";
                first = false;
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
            }
            const bool unit_coeff = a.is_one();
            if (n == 0) {
                os << a.to_string();
            } else {
                if (!unit_coeff) {
                    if (a.den() == 1) os << a.to_string();
                    else os << "(" << a.to_string() << ")";
                }
                os << "q";
                if (n > 1) os << "^" << n;
            }
        }
        if (first) os << "0";
        return os.str();
    }

private:
    static long check_order(long order) {
        if (order < 0) throw Error("QSeries: negative order");
        return order;
    }

    long offset_;
    long order_;
    std::vector<Rational> c_;  // dense from exponent 0; entries below offset_ are zero
};

// theta := q d/dq, the logarithmic q-derivative: coefficient of q^n times n.
inline QSeries series_theta(const QSeries& a) {
    const long off = std::min(std::max(a.offset(), long{1}), a.order());
    std::vector<Rational> c;
    c.reserve(static_cast<size_t>(a.order() - off) + 1);
    for (long n = off; n <= a.order(); ++n) c.push_back(Rational(n) * a.coeff(n));
    return QSeries(off, std::move(c));
}

// Multiplicative inverse through the requested order by back substitution:
// b_0 = 1/a_0, b_n = -(1/a_0) sum_{j=1..n} a_j b_{n-j}.
inline QSeries series_invert(const QSeries& a, long order) {
    if (!a.is_unit()) throw NonUnitError("series_invert: constant term is zero");
    if (a.order() < order)
        throw InsufficientOrderError("series_invert: operand exact only through " +
                                     std::to_string(a.order()));
    const Rational inv0 = Rational(1) / a.coeff(0);
    std::vector<Rational> b(static_cast<size_t>(order) + 1);
    b[0] = inv0;
    for (long n = 1; n <= order; ++n) {
        Rational s(0);
        for (long j = 1; j <= n; ++j) {
            const Rational& aj = a.coeff(j);
            if (!aj.is_zero()) s += aj * b[static_cast<size_t>(n - j)];
        }
        b[static_cast<size_t>(n)] = -(inv0 * s);
    }
    return QSeries(0, std::move(b));
}

// theta(a)/a truncated at the requested order.
inline QSeries log_theta_derivative(const QSeries& a, long order) {
    if (!a.is_unit()) throw NonUnitError("log_theta_derivative: not a unit");
    return (series_theta(a) * series_invert(a, order)).truncated(order);
}

// prod_{j=0}^{n-1} (1 - q^{s+tj}) expanded through `order`. Factors whose lead
// exponent exceeds the order are 1 + O(q^{order+1}) and are dropped, which also
// handles n = kInfinity.
inline QSeries pochhammer(long s, long t, long n, long order) {
    if (s < 1 || t < 1 || n < 0 || order < 0) throw Error("pochhammer: bad parameters");
    QSeries r = QSeries::one(order);
    for (long j = 0; j < n; ++j) {
        const long m = s + t * j;
        if (m > order) break;
        r.mul_one_minus_pow(m);
    }
    return r;
}

// Gaussian binomial coefficient as a q-series: (q;q)_r / ((q;q)_n (q;q)_{r-n})
// for 0 <= n <= r, zero otherwise. The quotient is exact, so padding the result
// out to `order` is legitimate even past the polynomial's degree.
inline QSeries q_binomial(long r, long n, long order) {
    if (n < 0 || n > r) return QSeries::zero(order);
    const QSeries num = pochhammer(1, 1, r, order);
    QSeries den = pochhammer(1, 1, n, order);
    for (long j = 0; j < r - n; ++j) {
        const long m = 1 + j;
        if (m > order) break;
        den.mul_one_minus_pow(m);
    }
    return (num * series_invert(den, order)).truncated(order);
}

// Keep only exponents congruent to r mod M; other coefficients become zero.
inline QSeries dissect(const QSeries& a, long M, long r) {
    if (M < 1 || r < 0 || r >= M) throw Error("dissect: bad residue class");
    long off = a.offset() + ((r - a.offset()) % M + M) % M;  // first exponent >= offset in class r
    off = std::min(off, a.order());
    std::vector<Rational> c(static_cast<size_t>(a.order() - off) + 1);
    for (long n = off; n <= a.order(); ++n)
        if (n % M == r) c[static_cast<size_t>(n - off)] = a.coeff(n);
    return QSeries(off, std::move(c));
}

// q -> q^m substitution. Intermediate exponents are exactly zero, so exactness
// carries to m * order.
inline QSeries substitute_power(const QSeries& a, long m) {
    if (m < 1) throw Error("substitute_power: m must be >= 1");
    if (m == 1) return a;
    std::vector<Rational> c(static_cast<size_t>((a.order() - a.offset()) * m) + 1);
    for (long n = a.offset(); n <= a.order(); ++n)
        c[static_cast<size_t>((n - a.offset()) * m)] = a.coeff(n);
    return QSeries(a.offset() * m, std::move(c));
}

// q^alpha prefactor plus a unit body: f = q^alpha (1 + a_1 q + a_2 q^2 + ...).
struct NormalizedSeries {
    Rational alpha;
    QSeries body;

    NormalizedSeries(Rational a, QSeries b) : alpha(std::move(a)), body(std::move(b)) {
        if (!(body.offset() == 0 && body.coeff(0).is_one()))
            throw Error("NormalizedSeries: body must have constant term 1");
    }
};

} // namespace qmod
