#include "fusionkit/rational.hpp"

namespace fusionkit {

Scalar Scalar::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Scalar(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::domain_error("Scalar::parse: zero denominator in '" + s + "'");
    return Scalar(num, den);
}

std::string Scalar::str() const {
    if (is_integer()) return num().str();
    return num().str() + "/" + den().str();
}

Scalar binomial(long n, long j) {
    if (j < 0) return Scalar(0);
    BigInt num = 1;
    for (long i = 0; i < j; ++i) num *= BigInt(n - i);
    return Scalar(num, factorial(j));
}

Scalar pow_scalar(const Scalar& w, long e) {
    if (e == 0) return Scalar(1);
    if (w.is_zero()) {
        if (e < 0) throw std::domain_error("pow_scalar: 0 raised to negative power");
        return Scalar(0);
    }
    Scalar base = e > 0 ? w : Scalar(1) / w;
    long k = e > 0 ? e : -e;
    Scalar acc(1);
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

BigInt factorial(long n) {
    BigInt f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace fusionkit
