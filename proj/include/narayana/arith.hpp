#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>

namespace narayana {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

/// a + b mod m for a, b in [0, m). Wrap-aware, so any m <= 2^64 - 1 works.
inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    if (s < a || s >= m) s -= m;
    return s;
}

inline bigint add_mod(const bigint& a, const bigint& b, const bigint& m) {
    bigint s = a + b;
    if (s >= m) s -= m;
    return s;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// floor(a / b) for signed a and positive b.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    std::int64_t r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

// 3^40 < 2^64 < 3^41
inline constexpr unsigned max_pow3_exp_u64 = 40;

inline std::uint64_t pow3_u64(unsigned e) {
    if (e > max_pow3_exp_u64)
        throw std::invalid_argument("pow3_u64: exponent exceeds 64-bit range");
    std::uint64_t r = 1;
    while (e--) r *= 3;
    return r;
}

inline bigint pow3_big(unsigned e) {
    return boost::multiprecision::pow(bigint(3), e);
}

/// Largest j with base^j <= x, for x >= 1 and base >= 2.
inline unsigned floor_log(std::uint64_t base, std::uint64_t x) {
    if (base < 2 || x < 1) throw std::invalid_argument("floor_log: base >= 2, x >= 1");
    unsigned j = 0;
    std::uint64_t p = 1;
    while (p <= x / base) {
        p *= base;
        ++j;
    }
    return j;
}

inline bool is_prime_u64(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// floor(sqrt(x)) for x >= 0.
inline bigint isqrt(const bigint& x) {
    if (x < 0) throw std::domain_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(x);
}

} // namespace narayana
