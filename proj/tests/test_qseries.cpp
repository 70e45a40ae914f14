#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qmod/qseries.hpp"

using namespace qmod;

namespace {

QSeries poly(std::initializer_list<long> coeffs, long order) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return QSeries::polynomial(c, order);
}

void require_coeffs(const QSeries& s, std::initializer_list<long> expected) {
    long n = 0;
    for (long e : expected) {
        CAPTURE(n);
        REQUIRE(s.coeff(n) == Rational(e));
        ++n;
    }
}

// brute-force count of partitions of n into parts lying in the given residue
// classes mod M — kept independent of the series code on purpose
std::vector<long> partition_counts(const std::vector<long>& classes, long M, long order) {
    std::vector<long> dp(static_cast<size_t>(order) + 1, 0);
    dp[0] = 1;
    for (long part = 1; part <= order; ++part) {
        bool ok = false;
        for (long c : classes) ok = ok || (part % M == c);
        if (!ok) continue;
        for (long n = part; n <= order; ++n) dp[static_cast<size_t>(n)] += dp[static_cast<size_t>(n - part)];
    }
    return dp;
}

std::mt19937 rng(20240817);

QSeries random_poly(long order, bool unit = false) {
    std::uniform_int_distribution<long> coeff(-6, 6);
    std::vector<Rational> c;
    for (long n = 0; n <= order; ++n) c.emplace_back(coeff(rng));
    if (unit && c[0].is_zero()) c[0] = Rational(1);
    return QSeries::polynomial(c, order);
}

} // namespace

TEST_CASE("series_mul on small polynomials") {
    const QSeries a = poly({1, -1}, 8);
    const QSeries b = poly({1, 0, -1}, 8);
    require_coeffs(a * b, {1, -1, -1, 1, 0});

    const QSeries c = poly({1, 0, 0, -1}, 8);
    require_coeffs((a * b) * c, {1, -1, -1, 0, 1, 1, -1, 0, 0});

    const QSeries one = QSeries::one(8);
    const QSeries prod = b * one;
    for (long n = 0; n <= 8; ++n) REQUIRE(prod.coeff(n) == b.coeff(n));
}

TEST_CASE("series_mul order propagation") {
    // exact(<=3) with offset 0 times exact(<=5) with offset 2
    const QSeries a = poly({1, 1, 1, 1}, 3);
    const QSeries b = QSeries::monomial(Rational(1), 2, 5);
    const QSeries p = a * b;
    REQUIRE(p.offset() == 2);
    REQUIRE(p.order() == 5);  // min(3+2, 5+0)
}

TEST_CASE("series_invert") {
    const QSeries geo = series_invert(poly({1, -1}, 4), 4);
    require_coeffs(geo, {1, 1, 1, 1, 1});

    // back substitution: b_n = -sum_{j>=1} a_j b_{n-j}
    const QSeries inv = series_invert(poly({1, 1, 1, 1, 2}, 4), 4);
    require_coeffs(inv, {1, -1, 0, 0, -1});

    SECTION("round trip for random units") {
        for (int trial = 0; trial < 25; ++trial) {
            const QSeries u = random_poly(32, true);
            const QSeries prod = u * series_invert(u, 32);
            REQUIRE(prod.coeff(0) == Rational(1) / u.coeff(0) * u.coeff(0));
            for (long n = 1; n <= 32; ++n) REQUIRE(prod.coeff(n) == Rational(0));
        }
    }

    SECTION("non-units are rejected") {
        REQUIRE_THROWS_AS(series_invert(poly({0, 1}, 4), 4), NonUnitError);
        REQUIRE_THROWS_AS(series_invert(QSeries::monomial(Rational(1), 2, 6), 6), NonUnitError);
    }

    SECTION("insufficient exactness is rejected") {
        REQUIRE_THROWS_AS(series_invert(poly({1, -1}, 4), 9), InsufficientOrderError);
    }
}

TEST_CASE("series_theta") {
    QSeries s = QSeries::zero(5);
    s.add_shifted(QSeries::monomial(Rational(1), 0, 5));
    s.add_shifted(QSeries::monomial(Rational(1), 1, 5));
    s.add_shifted(QSeries::monomial(Rational(1), 4, 5));
    const QSeries t = series_theta(s);
    require_coeffs(t, {0, 1, 0, 0, 4, 0});

    require_coeffs(series_theta(QSeries::one(4)), {0, 0, 0, 0, 0});

    SECTION("theta is a derivation") {
        for (int trial = 0; trial < 20; ++trial) {
            const QSeries a = random_poly(24);
            const QSeries b = random_poly(24);
            const QSeries lhs = series_theta(a * b);
            const QSeries rhs = series_theta(a) * b + a * series_theta(b);
            for (long n = 0; n <= std::min(lhs.order(), rhs.order()); ++n)
                REQUIRE(lhs.coeff(n) == rhs.coeff(n));
        }
    }
}

TEST_CASE("log_theta_derivative") {
    require_coeffs(log_theta_derivative(poly({1, -1}, 4), 4), {0, -1, -1, -1, -1});

    // G = 1 + q + q^2 + q^3 + 2q^4 + ...
    const QSeries g = poly({1, 1, 1, 1, 2}, 4);
    require_coeffs(log_theta_derivative(g, 4), {0, 1, 1, 1, 5});

    SECTION("additive over products of units") {
        for (int trial = 0; trial < 15; ++trial) {
            const QSeries a = random_poly(20, true);
            const QSeries b = random_poly(20, true);
            const QSeries lhs = log_theta_derivative(a * b, 20);
            const QSeries rhs = log_theta_derivative(a, 20) + log_theta_derivative(b, 20);
            for (long n = 0; n <= 20; ++n) REQUIRE(lhs.coeff(n) == rhs.coeff(n));
        }
    }
}

TEST_CASE("pochhammer") {
    require_coeffs(pochhammer(1, 1, 3, 6), {1, -1, -1, 0, 1, 1, -1});
    require_coeffs(pochhammer(1, 1, 0, 5), {1, 0, 0, 0, 0, 0});

    SECTION("infinite product against the partition oracle") {
        const long order = 8;
        const QSeries prod = pochhammer(1, 5, kInfinity, order) * pochhammer(4, 5, kInfinity, order);
        const QSeries g = series_invert(prod, order);
        const auto parts = partition_counts({1, 4}, 5, order);
        for (long n = 0; n <= order; ++n) REQUIRE(g.coeff(n) == Rational(parts[static_cast<size_t>(n)]));
        require_coeffs(g, {1, 1, 1, 1, 2, 2, 3, 3, 4});
    }

    SECTION("finite and infinite agree once factors leave the window") {
        const QSeries a = pochhammer(2, 3, 50, 12);
        const QSeries b = pochhammer(2, 3, kInfinity, 12);
        for (long n = 0; n <= 12; ++n) REQUIRE(a.coeff(n) == b.coeff(n));
    }
}

TEST_CASE("q_binomial") {
    require_coeffs(q_binomial(4, 2, 6), {1, 1, 2, 1, 1, 0, 0});
    REQUIRE(q_binomial(3, 5, 6).is_zero_through_order());
    require_coeffs(q_binomial(5, 0, 3), {1, 0, 0, 0});
    require_coeffs(q_binomial(5, 5, 3), {1, 0, 0, 0});

    SECTION("q-Pascal identity") {
        const long order = 40;
        for (long r = 1; r <= 12; ++r) {
            for (long n = 1; n <= r; ++n) {
                QSeries rhs = q_binomial(r - 1, n, order);
                rhs.add_shifted(q_binomial(r - 1, n - 1, order), r - n);
                const QSeries lhs = q_binomial(r, n, order);
                for (long e = 0; e <= order; ++e) REQUIRE(lhs.coeff(e) == rhs.coeff(e));
            }
        }
    }
}

TEST_CASE("dissect") {
    const QSeries s = poly({1, 1, 1, 1, 1, 1}, 5);
    const QSeries d = dissect(s, 5, 0);
    require_coeffs(d, {1, 0, 0, 0, 0, 1});

    SECTION("channels partition the series") {
        for (long M = 1; M <= 7; ++M) {
            const QSeries a = random_poly(30);
            QSeries sum = QSeries::zero(30);
            for (long r = 0; r < M; ++r) sum.add_shifted(dissect(a, M, r));
            for (long n = 0; n <= 30; ++n) REQUIRE(sum.coeff(n) == a.coeff(n));
        }
    }

    SECTION("offset moves up to the residue class") {
        const QSeries m = QSeries::monomial(Rational(3), 4, 20);
        REQUIRE(dissect(m, 3, 1).coeff(4) == Rational(3));
        REQUIRE(dissect(m, 3, 1).offset() >= 4);
        REQUIRE(dissect(m, 3, 0).is_zero_through_order());
    }
}

TEST_CASE("substitute_power") {
    require_coeffs(substitute_power(poly({1, 1}, 1), 5), {1, 0, 0, 0, 0, 1});
    const QSeries a = random_poly(17);
    const QSeries same = substitute_power(a, 1);
    for (long n = 0; n <= 17; ++n) REQUIRE(same.coeff(n) == a.coeff(n));

    // E2 under q -> q^5: 1 - 24 q^5 - 72 q^10 ...
    const QSeries e2 = poly({1, -24, -72}, 2);
    const QSeries e2_5 = substitute_power(e2, 5);
    REQUIRE(e2_5.order() == 10);
    REQUIRE(e2_5.coeff(0) == Rational(1));
    REQUIRE(e2_5.coeff(5) == Rational(-24));
    REQUIRE(e2_5.coeff(10) == Rational(-72));
    for (long n : {1, 2, 3, 4, 6, 7, 8, 9}) REQUIRE(e2_5.coeff(n) == Rational(0));
}

TEST_CASE("ring laws on random truncated polynomials") {
    for (int trial = 0; trial < 20; ++trial) {
        const QSeries a = random_poly(48);
        const QSeries b = random_poly(64);
        const QSeries c = random_poly(56);

        const QSeries ab = a * b;
        const QSeries ba = b * a;
        for (long n = 0; n <= std::min(ab.order(), ba.order()); ++n)
            REQUIRE(ab.coeff(n) == ba.coeff(n));

        const QSeries lhs = (a * b) * c;
        const QSeries rhs = a * (b * c);
        for (long n = 0; n <= std::min(lhs.order(), rhs.order()); ++n)
            REQUIRE(lhs.coeff(n) == rhs.coeff(n));

        const QSeries dl = a * (b + c);
        const QSeries dr = a * b + a * c;
        for (long n = 0; n <= std::min(dl.order(), dr.order()); ++n)
            REQUIRE(dl.coeff(n) == dr.coeff(n));

        const QSeries sl = (a + b) + c;
        const QSeries sr = a + (b + c);
        for (long n = 0; n <= std::min(sl.order(), sr.order()); ++n)
            REQUIRE(sl.coeff(n) == sr.coeff(n));
    }
}

TEST_CASE("order propagation soundness under order doubling") {
    // the same pipeline run at order N and order 2N must agree through N
    const long N = 24;
    const auto pipeline = [](long order) {
        const QSeries u = pochhammer(1, 2, kInfinity, order);
        const QSeries w = series_invert(pochhammer(1, 1, kInfinity, order), order);
        return log_theta_derivative((u * w).truncated(order), order);
    };
    const QSeries at_n = pipeline(N);
    const QSeries at_2n = pipeline(2 * N);
    for (long n = 0; n <= N; ++n) REQUIRE(at_n.coeff(n) == at_2n.coeff(n));
}

TEST_CASE("coefficient access beyond the exactness bound throws") {
    const QSeries a = poly({1, 2, 3}, 2);
    REQUIRE(a.coeff(2) == Rational(3));
    REQUIRE_THROWS_AS(a.coeff(3), InsufficientOrderError);
}

TEST_CASE("normalized series validates its body") {
    REQUIRE_NOTHROW(NormalizedSeries(Rational(-1, 60), QSeries::one(4)));
    REQUIRE_THROWS_AS(NormalizedSeries(Rational(1), poly({2, 1}, 3)), Error);
    REQUIRE_THROWS_AS(NormalizedSeries(Rational(1), QSeries::monomial(Rational(1), 1, 3)), Error);
}

TEST_CASE("rational basics") {
    REQUIRE(Rational(2, 4) == Rational(1, 2));
    REQUIRE(Rational(-2, -4) == Rational(1, 2));
    REQUIRE(Rational(2, -4) == Rational(-1, 2));
    REQUIRE((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    REQUIRE((Rational(1, 3) * Rational(3, 7)) == Rational(1, 7));
    REQUIRE(Rational::from_string("-11/60") == Rational(-11, 60));
    REQUIRE(Rational::from_string("7") == Rational(7));
    REQUIRE(Rational(-11, 60).to_string() == "-11/60");
    REQUIRE(Rational(5, 1).to_string() == "5");
    REQUIRE_THROWS_AS(Rational(1, 0), Error);
    REQUIRE_THROWS_AS(Rational(1) / Rational(0), Error);
}
