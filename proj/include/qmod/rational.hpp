#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "qmod/errors.hpp"

namespace qmod {

// Exact rational number. Thin value wrapper over GMP's mpq_class that keeps
// the representation canonical: gcd(num, den) = 1 and den > 0 at all times.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw Error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
    explicit Rational(const mpz_class& n) : v_(n) {}

    // Accepts "p" or "p/q" with arbitrary-precision decimal digits.
    static Rational from_string(const std::string& s) {
        const auto pos = s.find('/');
        mpq_class v;
        if (pos == std::string::npos) {
            v = mpq_class(mpz_class(s));
        } else {
            mpz_class den(s.substr(pos + 1));
            if (den == 0) throw Error("Rational: zero denominator");
            v = mpq_class(mpz_class(s.substr(0, pos)), den);
        }
        return Rational(std::move(v));
    }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }
    std::string num_str() const { return v_.get_num().get_str(); }
    std::string den_str() const { return v_.get_den().get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }
    double to_double() const { return v_.get_d(); }

    std::string to_string() const {
        return v_.get_den() == 1 ? num_str() : num_str() + "/" + den_str();
    }

    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }
    friend Rational operator+(const Rational& a, const Rational& b) { return wrap(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return wrap(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return wrap(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw Error("Rational: division by zero");
        return wrap(a.v_ / b.v_);
    }

    Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
    Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
    Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
    Rational& operator/=(const Rational& b) { *this = *this / b; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.to_string();
    }

private:
    // GMP arithmetic keeps canonical operands canonical; skip re-normalizing.
    static Rational wrap(mpq_class v) {
        Rational r;
        r.v_ = std::move(v);
        return r;
    }

    mpq_class v_;
};

} // namespace qmod
