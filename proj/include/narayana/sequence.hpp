#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace narayana {

// Below this index the splitting identity costs more than plain iteration.
inline constexpr std::uint64_t fast_path_threshold = 32;

/// Sliding window (a_k, a_{k+1}, a_{k+2}) over the sequence
/// a_0 = 0, a_1 = a_2 = 1, a_n = a_{n-1} + a_{n-3}.
struct window {
    std::uint64_t index = 0;
    std::array<bigint, 3> values{bigint(0), bigint(1), bigint(1)};

    void step() {
        bigint next = values[2] + values[0];
        values[0] = std::move(values[1]);
        values[1] = std::move(values[2]);
        values[2] = std::move(next);
        ++index;
    }

    void advance(std::uint64_t steps) {
        while (steps--) step();
    }
};

/// a_n by plain iteration from (0, 1, 1).
inline bigint narayana(std::uint64_t n) {
    window w;
    w.advance(n);
    return w.values[0];
}

inline window narayana_window(std::uint64_t n) {
    window w;
    w.advance(n);
    return w;
}

/// a_n mod m for m >= 2. T is std::uint64_t or bigint.
template <class T>
T narayana_mod(std::uint64_t n, const T& m) {
    if (m < T(2)) throw std::invalid_argument("narayana_mod: modulus must be >= 2");
    T a = T(0), b = T(1), c = T(1);
    while (n--) {
        T next = add_mod(c, a, m);
        a = std::move(b);
        b = std::move(c);
        c = std::move(next);
    }
    return a;
}

namespace detail {

// Seven consecutive terms a_j .. a_{j+6}: enough to halve an index with
// a_{m+n} = a_{m-1} a_{n+2} + a_{m-3} a_{n+1} + a_{m-2} a_n  (m >= 3, n >= 0).
inline std::array<bigint, 7> seven_terms(std::uint64_t j) {
    std::array<bigint, 7> r;
    if (j < fast_path_threshold) {
        window w;
        w.advance(j);
        r[0] = w.values[0];
        r[1] = w.values[1];
        r[2] = w.values[2];
    } else {
        const std::uint64_t m = j / 2;  // left split point, m >= 16
        const std::uint64_t h = m - 3;
        const std::size_t d = static_cast<std::size_t>(j - m - h);  // 3 or 4
        const auto s = seven_terms(h);
        // s[0..4] = a_{m-3} .. a_{m+1}, s[d..d+2] = a_n .. a_{n+2} with n = j - m
        r[0] = s[2] * s[d + 2] + s[0] * s[d + 1] + s[1] * s[d];
        r[1] = s[3] * s[d + 2] + s[1] * s[d + 1] + s[2] * s[d];
        r[2] = s[4] * s[d + 2] + s[2] * s[d + 1] + s[3] * s[d];
    }
    for (std::size_t k = 3; k < 7; ++k) r[k] = r[k - 1] + r[k - 3];
    return r;
}

// Same splitting scheme carried out mod m in 64-bit words.
inline std::array<std::uint64_t, 7> seven_terms_mod(std::uint64_t j, std::uint64_t m) {
    std::array<std::uint64_t, 7> r;
    if (j < fast_path_threshold) {
        std::uint64_t a = 0, b = 1 % m, c = 1 % m;
        while (j--) {
            std::uint64_t next = add_mod(c, a, m);
            a = b;
            b = c;
            c = next;
        }
        r[0] = a;
        r[1] = b;
        r[2] = c;
    } else {
        const std::uint64_t mid = j / 2;
        const std::uint64_t h = mid - 3;
        const std::size_t d = static_cast<std::size_t>(j - mid - h);
        const auto s = seven_terms_mod(h, m);
        for (std::size_t t = 0; t < 3; ++t) {
            std::uint64_t acc = mul_mod(s[2 + t], s[d + 2], m);
            acc = add_mod(acc, mul_mod(s[t], s[d + 1], m), m);
            acc = add_mod(acc, mul_mod(s[1 + t], s[d], m), m);
            r[t] = acc;
        }
    }
    for (std::size_t k = 3; k < 7; ++k) r[k] = add_mod(r[k - 1], r[k - 3], m);
    return r;
}

} // namespace detail

/// a_n via the index-splitting identity. Same value as narayana(n), but
/// O(log n) rounds of big multiplications instead of n additions.
inline bigint narayana_fast(std::uint64_t n) {
    if (n < fast_path_threshold) return narayana(n);
    return detail::seven_terms(n)[0];
}

/// Window positioned at n without walking there.
inline window fast_window(std::uint64_t n) {
    if (n < fast_path_threshold) return narayana_window(n);
    auto s = detail::seven_terms(n);
    window w;
    w.index = n;
    w.values = {std::move(s[0]), std::move(s[1]), std::move(s[2])};
    return w;
}

/// Window mod m positioned at n, for 64-bit moduli.
inline std::array<std::uint64_t, 3> fast_window_mod(std::uint64_t n, std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("fast_window_mod: modulus must be >= 2");
    auto s = detail::seven_terms_mod(n, m);
    return {s[0], s[1], s[2]};
}

/// Rational bracket of the real root of x^3 - x^2 - 1 (~1.4655712).
/// f(lower) < 0 < f(upper), upper - lower = 2^-precision_bits.
struct alpha_interval {
    bigrat lower;
    bigrat upper;
    unsigned precision_bits = 0;
};

namespace detail {

// sign of f(p / 2^e) for f(x) = x^3 - x^2 - 1, via the integer
// p^3 - p^2 2^e - 2^{3e}
inline int alpha_poly_sign(const bigint& p, unsigned e) {
    bigint v = p * p * p - ((p * p) << e) - (bigint(1) << (3 * e));
    return v.sign();
}

// lower endpoint numerator after `bits` bisection steps: lower = p / 2^bits
inline bigint alpha_dyadic(unsigned bits) {
    bigint p = 1;  // [1, 2] to start; f(1) = -1 < 0 < 3 = f(2)
    for (unsigned e = 1; e <= bits; ++e) {
        bigint mid = 2 * p + 1;
        // the root is irrational, so the sign at a dyadic point is never 0
        if (alpha_poly_sign(mid, e) < 0)
            p = std::move(mid);
        else
            p = 2 * p;
    }
    return p;
}

} // namespace detail

/// Bisect [1, 2] down to width 2^-precision_bits. Requires precision_bits >= 8.
inline alpha_interval alpha(unsigned precision_bits) {
    if (precision_bits < 8)
        throw std::invalid_argument("alpha: at least 8 precision bits required");
    bigint p = detail::alpha_dyadic(precision_bits);
    bigint den = bigint(1) << precision_bits;
    return {bigrat(p, den), bigrat(p + 1, den), precision_bits};
}

struct growth_violation {
    std::uint64_t n = 0;
    bool lower_side = false;  // true: a_n < alpha^{n-3} certified
};

struct growth_report {
    std::uint64_t n_max = 0;
    unsigned precision_bits = 0;  // precision at which the sweep completed
    std::vector<growth_violation> violations;
    bool clean() const { return violations.empty(); }
};

namespace detail {

// One certified pass; false means some comparison was inconclusive at
// this precision and the caller should retry with a wider bracket.
inline bool growth_sweep(std::uint64_t n_max, unsigned bits, growth_report& rep) {
    const bigint lo = alpha_dyadic(bits);  // lower = lo / 2^bits < alpha < (lo + 1) / 2^bits
    const bigint hi = lo + 1;
    const bigint one = 1;

    // n = 1, 2: a_n = 1 and the exponents n-3 are negative. Both sides
    // reduce to lower >= 1, which lo >= 2^bits certifies.
    if (lo < (one << bits)) return false;
    if (n_max <= 2) return true;

    window w;
    w.advance(3);
    // powers of the bracket endpoints at exponents n-3 and n-1
    bigint lo3 = 1, hi3 = 1;      // denominator 2^{bits (n-3)}
    bigint lo1 = lo * lo;         // denominator 2^{bits (n-1)}
    bigint hi1 = hi * hi;
    for (std::uint64_t n = 3; n <= n_max; ++n) {
        const bigint& an = w.values[0];
        const std::uint64_t e3 = bits * (n - 3);
        const std::uint64_t e1 = bits * (n - 1);
        bigint an3 = an << e3;
        bigint an1 = an << e1;
        if (an3 < hi3) {
            if (an3 < lo3)
                rep.violations.push_back({n, true});
            else
                return false;
        }
        if (an1 > lo1) {
            if (an1 > hi1)
                rep.violations.push_back({n, false});
            else
                return false;
        }
        w.step();
        lo3 *= lo;
        hi3 *= hi;
        lo1 *= lo;
        hi1 *= hi;
    }
    return true;
}

} // namespace detail

/// Certify alpha^{n-3} <= a_n <= alpha^{n-1} for 1 <= n <= n_max.
/// Inconclusive comparisons double the bracket precision and rerun the
/// sweep; only certified failures are ever reported as violations.
inline growth_report check_growth_bounds(std::uint64_t n_max, unsigned start_bits = 64) {
    if (n_max < 1) throw std::invalid_argument("check_growth_bounds: n_max >= 1");
    if (start_bits < 8) start_bits = 8;
    for (unsigned bits = start_bits;; bits *= 2) {
        growth_report rep;
        rep.n_max = n_max;
        rep.precision_bits = bits;
        if (detail::growth_sweep(n_max, bits, rep)) return rep;
        if (bits > 4096)
            throw std::runtime_error("check_growth_bounds: undecided at 4096 bits");
    }
}

} // namespace narayana
