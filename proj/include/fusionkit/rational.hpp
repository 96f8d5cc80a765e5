#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fusionkit {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator (cpp_rational canonicalizes on every operation).
class Scalar {
public:
    Scalar() : v_(0) {}
    Scalar(long n) : v_(n) {}                     // NOLINT(google-explicit-constructor)
    Scalar(const BigInt& n) : v_(n) {}            // NOLINT(google-explicit-constructor)
    Scalar(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::domain_error("Scalar: zero denominator");
        v_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den)
                     : boost::multiprecision::cpp_rational(num, den);
    }
    Scalar(long num, long den) : Scalar(BigInt(num), BigInt(den)) {}

    static Scalar parse(const std::string& s);

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return denominator(v_) == 1; }

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    Scalar operator-() const { return Scalar(boost::multiprecision::cpp_rational(-v_)); }
    Scalar& operator+=(const Scalar& o) { v_ += o.v_; return *this; }
    Scalar& operator-=(const Scalar& o) { v_ -= o.v_; return *this; }
    Scalar& operator*=(const Scalar& o) { v_ *= o.v_; return *this; }
    Scalar& operator/=(const Scalar& o) {
        if (o.is_zero()) throw std::domain_error("Scalar: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return a.v_ != b.v_; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }

    /// Serializes as "p" or "p/q"; parse() round-trips losslessly.
    std::string str() const;

private:
    explicit Scalar(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}
    boost::multiprecision::cpp_rational v_;
};

/// Generalized binomial coefficient binom(n, j) for integer n (possibly
/// negative) and j >= 0:  n (n-1) ... (n-j+1) / j!.
Scalar binomial(long n, long j);

/// Integer power w^e for e of either sign (w must be nonzero when e < 0).
Scalar pow_scalar(const Scalar& w, long e);

/// (-1)^e as a Scalar.
inline Scalar sign_pow(long e) { return (e % 2 == 0) ? Scalar(1) : Scalar(-1); }

BigInt factorial(long n);

}  // namespace fusionkit
