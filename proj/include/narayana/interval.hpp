#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "arith.hpp"

namespace narayana {

/// Closed rational interval [lo, hi]; carries certified brackets of
/// irrational quantities through exact arithmetic.
struct rat_interval {
    bigrat lo;
    bigrat hi;

    rat_interval() = default;
    rat_interval(bigrat l, bigrat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("rat_interval: lo > hi");
    }

    bool contains(const bigrat& x) const { return lo <= x && x <= hi; }
    bigrat width() const { return hi - lo; }

    friend rat_interval operator+(const rat_interval& a, const rat_interval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }

    friend rat_interval operator+(const rat_interval& a, const bigrat& c) {
        return {a.lo + c, a.hi + c};
    }

    /// Scale by an exact rational of either sign.
    friend rat_interval operator*(const bigrat& c, const rat_interval& a) {
        if (c >= 0) return {c * a.lo, c * a.hi};
        return {c * a.hi, c * a.lo};
    }

    rat_interval negate() const { return {-hi, -lo}; }
};

namespace detail {

// atanh(z) for rational 0 <= z < 1/2, bracketed by the truncated odd
// series plus the tail bound z^{2T+1} / ((2T+1)(1 - z^2)).
inline rat_interval atanh_bracket(const bigrat& z, unsigned terms) {
    if (z < 0 || z >= bigrat(1, 2))
        throw std::domain_error("atanh_bracket: need 0 <= z < 1/2");
    if (terms < 1) terms = 1;
    const bigrat z2 = z * z;
    bigrat pw = z;  // z^{2j+1}
    bigrat s = 0;
    for (unsigned j = 0; j < terms; ++j) {
        s += pw / (2 * j + 1);
        pw *= z2;
    }
    bigrat tail = pw / ((2 * terms + 1) * (1 - z2));
    return {s, s + tail};
}

} // namespace detail

/// ln 2 = 2 atanh(1/3), certified. Memoized per term count.
inline rat_interval ln2_bracket(unsigned terms = 24) {
    static std::map<unsigned, rat_interval> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(terms);
    if (it == cache.end())
        it = cache.emplace(terms, bigrat(2) * detail::atanh_bracket(bigrat(1, 3), terms)).first;
    return it->second;
}

/// ln 3 = ln 2 + 2 atanh(1/5), certified. Memoized per term count.
inline rat_interval ln3_bracket(unsigned terms = 24) {
    static std::map<unsigned, rat_interval> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(terms);
    if (it == cache.end())
        it = cache.emplace(terms, ln2_bracket(terms) +
                                      bigrat(2) * detail::atanh_bracket(bigrat(1, 5), terms)).first;
    return it->second;
}

/// Largest multiple of 2^-bits that is <= x.
inline bigrat dyadic_below(const bigrat& x, unsigned bits) {
    bigint num = boost::multiprecision::numerator(x) << bits;
    const bigint den = boost::multiprecision::denominator(x);
    bigint q = num / den;
    if (q * den != num && num < 0) --q;
    return bigrat(q, bigint(1) << bits);
}

inline bigrat dyadic_above(const bigrat& x, unsigned bits) { return -dyadic_below(-x, bits); }

/// Outward dyadic rounding. Keeps a bracket sound while capping the
/// size of the rationals fed into further series expansions.
inline rat_interval coarsen(const rat_interval& iv, unsigned bits) {
    return {dyadic_below(iv.lo, bits), dyadic_above(iv.hi, bits)};
}

/// Certified bracket of ln x for rational x > 0. The argument is scaled
/// into [3/4, 3/2) by powers of two, putting z = (x-1)/(x+1) in [-1/7, 1/5].
inline rat_interval ln_bracket(bigrat x, unsigned terms = 24) {
    if (x <= 0) throw std::domain_error("ln_bracket: positive argument required");
    long k = 0;
    const bigrat three_halves(3, 2), three_quarters(3, 4);
    while (x >= three_halves) {
        x /= 2;
        ++k;
    }
    while (x < three_quarters) {
        x *= 2;
        --k;
    }
    const bigrat z = (x - 1) / (x + 1);
    rat_interval lnr = z >= 0 ? bigrat(2) * detail::atanh_bracket(z, terms)
                              : (bigrat(2) * detail::atanh_bracket(-z, terms)).negate();
    return lnr + bigrat(k) * ln2_bracket(terms);
}

} // namespace narayana
