#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dlab {

// The constants of the bound formulas overflow every machine type almost
// immediately (exponents like S^2 reach the hundreds), so everything that
// touches them is exact arbitrary precision. No floating point anywhere.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt bigpow(const BigInt& base, std::int64_t exp) {
    if (exp < 0) throw std::invalid_argument("bigpow: negative exponent");
    return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

inline BigInt binomial(std::int64_t n, std::int64_t r) {
    if (r < 0 || r > n) return 0;
    BigInt num = 1;
    for (std::int64_t i = 0; i < r; ++i) {
        num *= n - i;
        num /= i + 1; // exact at every step: product of j consecutive ints is divisible by j!
    }
    return num;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

// Rationals render as "p/q", or plain "p" when integral. Never scientific.
inline std::string to_decimal(const BigRat& v) {
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace dlab
