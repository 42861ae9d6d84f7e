#pragma once

// Arbitrary-precision integer/rational helpers shared by every module.
// All closed-form counts are computed exactly; divisions that the formulas
// promise to be exact are checked and a failure throws, since a nonzero
// remainder means a transcribed formula is wrong.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chowcensus {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, std::uint64_t e) {
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline BigRat rat_pow(const BigRat& base, std::uint64_t e) {
    BigRat r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= BigInt(n - k + i);
        r /= BigInt(i);  // always exact at this point
    }
    return r;
}

inline BigInt factorial(std::uint64_t n) {
    BigInt r = 1;
    for (std::uint64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

// Quotient of an exact division; throws if the division leaves a remainder.
inline BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
    BigInt q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0)
        throw std::logic_error(std::string("inexact division in ") + what);
    return q;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

// Decomposes q = p^m with p prime; returns false if q is not a prime power.
inline bool prime_power_decompose(std::uint64_t q, std::uint64_t& p, std::uint64_t& m) {
    if (q < 2) return false;
    auto ps = prime_factors(q);
    if (ps.size() != 1) return false;
    p = ps[0];
    m = 0;
    while (q > 1) {
        if (q % p != 0) return false;
        q /= p;
        ++m;
    }
    return true;
}

inline bool is_prime_power(std::uint64_t q) {
    std::uint64_t p, m;
    return prime_power_decompose(q, p, m);
}

// floor of the integer square root
inline BigInt isqrt_floor(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    return boost::multiprecision::sqrt(n);
}

// Number of decimal digits of |n| (0 has one digit).
inline std::size_t decimal_digits(const BigInt& n) {
    if (n == 0) return 1;
    return boost::multiprecision::abs(n).convert_to<std::string>().size();
}

}  // namespace chowcensus
