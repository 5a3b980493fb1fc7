#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "arith.hpp"
#include "valuation.hpp"

namespace narayana {

namespace detail {

inline void require_prime(std::uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("p must be prime");
}

} // namespace detail

/// v_p(x) for machine integers; sign is ignored, v_p(0) = inf.
inline valuation vp(std::int64_t x, std::uint64_t p) {
    detail::require_prime(p);
    if (x == 0) return valuation::infinity();
    // two's complement safe |x|, INT64_MIN included
    std::uint64_t u = x < 0 ? ~static_cast<std::uint64_t>(x) + 1 : static_cast<std::uint64_t>(x);
    std::uint64_t v = 0;
    while (u % p == 0) {
        u /= p;
        ++v;
    }
    return valuation(v);
}

/// v_p(x) for big integers. Strips the largest power of p fitting a word
/// per division round, so huge valuations stay cheap.
inline valuation vp(bigint x, std::uint64_t p) {
    detail::require_prime(p);
    if (x == 0) return valuation::infinity();
    if (x < 0) x = -x;
    unsigned chunk = 1;
    bigint pc = p;
    const bigint limit = bigint(1) << 62;
    while (pc * p <= limit) {
        pc *= p;
        ++chunk;
    }
    std::uint64_t v = 0;
    bigint q, r;
    for (;;) {
        boost::multiprecision::divide_qr(x, pc, q, r);
        if (r != 0) break;
        x = std::move(q);
        v += chunk;
    }
    const bigint pb = p;
    for (;;) {
        boost::multiprecision::divide_qr(x, pb, q, r);
        if (r != 0) break;
        x = std::move(q);
        ++v;
    }
    return valuation(v);
}

/// v_p(m!) by the floor-sum formula. Exact, never overflows: the sum is
/// below m/(p-1) <= m.
inline valuation vp_factorial(std::uint64_t m, std::uint64_t p) {
    detail::require_prime(p);
    std::uint64_t total = 0;
    for (std::uint64_t q = m / p; q > 0; q /= p) total += q;
    return valuation(total);
}

/// Exact rational sandwich for v_p(m!), m >= 1:
///   m/(p-1) - floor(log_p m) - 1  <=  v_p(m!)  <=  (m-1)/(p-1).
inline std::pair<bigrat, bigrat> vp_factorial_bounds(std::uint64_t m, std::uint64_t p) {
    detail::require_prime(p);
    if (m < 1) throw std::invalid_argument("vp_factorial_bounds: m >= 1 required");
    const unsigned lg = floor_log(p, m);
    bigrat lower = bigrat(m, p - 1) - lg - 1;
    bigrat upper = bigrat(m - 1, p - 1);
    return {std::move(lower), std::move(upper)};
}

} // namespace narayana
