#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "interval.hpp"
#include "laws.hpp"
#include "padic.hpp"
#include "sequence.hpp"
#include "valuation.hpp"

namespace narayana {

/// v3(a_n^2 - 1) = v3(a_n - 1) + v3(a_n + 1), read off the corrected
/// tables. Exact and finite for n >= 4.
inline valuation combined_v3_upper(std::uint64_t n) {
    if (n < 4)
        throw std::invalid_argument("combined_v3_upper: n >= 4 required (a_n - 1 vanishes below)");
    static const valuation_law minus = v3_of_a_minus_one_law(law_variant::corrected);
    static const valuation_law plus = v3_of_a_plus_one_law(law_variant::corrected);
    return law_eval_strict(minus, n) + law_eval_strict(plus, n);
}

/// Incremental factorial walker. Queries must be non-decreasing; each
/// query advances by at most a few multiplications, so a whole scan costs
/// one multiplication per factorial step, not per query.
class factorial_cursor {
public:
    /// m with m! == x, if any. After a miss the cursor brackets x:
    /// (m() - 1)! < x < m()!.
    std::optional<std::uint64_t> is_factorial(const bigint& x) {
        if (queried_ && x < last_)
            throw std::logic_error("factorial_cursor: queries must be non-decreasing");
        queried_ = true;
        last_ = x;
        while (fact_ < x) {
            ++m_;
            fact_ *= m_;
            ++muls_;
        }
        if (fact_ == x) return m_;
        return std::nullopt;
    }

    std::uint64_t m() const { return m_; }
    const bigint& factorial() const { return fact_; }
    std::uint64_t multiplications() const { return muls_; }

private:
    std::uint64_t m_ = 0;
    bigint fact_ = 1;
    bigint last_ = 0;
    bool queried_ = false;
    std::uint64_t muls_ = 0;
};

struct search_outcome {
    std::uint64_t lo = 0, hi = 0;  // inclusive scan range (n or m, per search)
    std::vector<std::pair<std::uint64_t, bigint>> solutions;  // (m, u) with m! + 1 = u^2
    std::uint64_t candidates = 0;
    std::uint64_t undershoot = 0;  // misses closer to the bracket's lower end
    std::uint64_t overshoot = 0;
};

inline const std::vector<std::pair<std::uint64_t, bigint>>& classical_brocard_solutions() {
    static const std::vector<std::pair<std::uint64_t, bigint>> v{
        {4, bigint(5)}, {5, bigint(11)}, {7, bigint(71)}};
    return v;
}

namespace detail {

// fresh, independent recomputation for solution records
inline bool recheck_solution(std::uint64_t m, const bigint& u) {
    bigint f = 1;
    for (std::uint64_t k = 2; k <= m; ++k) f *= k;
    return f + 1 == u * u;
}

inline search_outcome search_narayana_range(std::uint64_t lo, std::uint64_t hi) {
    search_outcome out;
    out.lo = lo;
    out.hi = hi;
    window w = fast_window(lo);
    factorial_cursor cur;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        const bigint& an = w.values[0];
        bigint t = an * an - 1;
        ++out.candidates;
        if (auto m = cur.is_factorial(t)) {
            if (!recheck_solution(*m, an))
                throw std::logic_error("search_narayana: cursor hit failed exact recheck");
            out.solutions.emplace_back(*m, an);
        } else {
            // bracket (m-1)! < t < m!
            bigint below = cur.factorial() / cur.m();
            if (t - below <= cur.factorial() - t)
                ++out.undershoot;
            else
                ++out.overshoot;
        }
        w.step();
    }
    return out;
}

} // namespace detail

/// Scan 4 <= n <= n_max for a_n^2 - 1 landing on a factorial. With
/// jobs > 1 the range splits into contiguous chunks, each jump-started
/// by the fast window; results merge in index order.
inline search_outcome search_narayana(std::uint64_t n_max, unsigned jobs = 1) {
    if (n_max < 4) throw std::invalid_argument("search_narayana: n_max >= 4 required");
    const std::uint64_t lo = 4;
    if (jobs < 2 || n_max - lo < 64) return detail::search_narayana_range(lo, n_max);

    jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, n_max - lo + 1));
    std::vector<search_outcome> parts(jobs);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n_max - lo + jobs) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
        const std::uint64_t clo = lo + j * chunk;
        const std::uint64_t chi = std::min(n_max, clo + chunk - 1);
        if (clo > n_max) break;
        pool.emplace_back([clo, chi, &parts, j] { parts[j] = detail::search_narayana_range(clo, chi); });
    }
    for (auto& t : pool) t.join();
    search_outcome out;
    out.lo = lo;
    out.hi = n_max;
    for (const auto& part : parts) {
        out.candidates += part.candidates;
        out.undershoot += part.undershoot;
        out.overshoot += part.overshoot;
        out.solutions.insert(out.solutions.end(), part.solutions.begin(), part.solutions.end());
    }
    return out;
}

/// Scan 1 <= m <= m_max for m! + 1 being a perfect square, using an
/// incremental factorial and an exact integer square root test.
inline search_outcome search_general(std::uint64_t m_max) {
    if (m_max < 1) throw std::invalid_argument("search_general: m_max >= 1 required");
    search_outcome out;
    out.lo = 1;
    out.hi = m_max;
    bigint f = 1;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        f *= m;
        bigint t = f + 1;
        bigint u = isqrt(t);
        ++out.candidates;
        if (u * u == t) {
            if (!detail::recheck_solution(m, u))
                throw std::logic_error("search_general: square hit failed exact recheck");
            out.solutions.emplace_back(m, u);
        } else {
            if (t - u * u <= (u + 1) * (u + 1) - t)
                ++out.undershoot;
            else
                ++out.overshoot;
        }
    }
    return out;
}

/// Why a_n^2 - 1 is not a factorial, with machine-checkable data:
/// either it falls strictly between consecutive factorials, or the
/// 3-adic valuation pins m! to a magnitude window that misses it.
struct nonsolution_certificate {
    enum class method { factorial_gap, valuation_gap };

    std::uint64_t n = 0;
    bigint t;                    // a_n^2 - 1
    method how = method::factorial_gap;
    std::uint64_t below_m = 0;   // below_m! < t < (below_m + 1)!

    valuation t_v3;              // v3(t), from the combined tables
    std::uint64_t v3_m_lo = 0, v3_m_hi = 0;  // m range with v3(m!) == t_v3
    bool v3_interval_empty = false;
    bool v3_excludes = false;    // every admissible m! misses t by magnitude
};

/// Certificate for one index, or nullopt exactly when (m, a_n) solves
/// m! + 1 = u^2 for some m.
inline std::optional<nonsolution_certificate> certify_nonsolution(std::uint64_t n) {
    if (n < 4) throw std::invalid_argument("certify_nonsolution: n >= 4 required");
    nonsolution_certificate cert;
    cert.n = n;
    const bigint an = narayana_fast(n);
    cert.t = an * an - 1;

    factorial_cursor cur;
    const auto hit = cur.is_factorial(cert.t);

    cert.t_v3 = combined_v3_upper(n);
    const std::uint64_t v = cert.t_v3.finite();
    // v3(m!) is a nondecreasing step function of m; bisect for the
    // admissible window. v3((2v + 64)!) > v, so the range below suffices.
    const std::uint64_t span = 2 * v + 64;
    auto first_with = [&](std::uint64_t target) {
        std::uint64_t lo = 0, hi = span;
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (vp_factorial(mid, 3).finite() >= target)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    };
    cert.v3_m_lo = first_with(v);
    cert.v3_m_hi = first_with(v + 1) - 1;
    cert.v3_interval_empty = vp_factorial(cert.v3_m_lo, 3).finite() != v;
    if (cert.v3_interval_empty) {
        cert.v3_excludes = true;
    } else {
        bigint f = 1;
        for (std::uint64_t k = 2; k <= cert.v3_m_hi; ++k) {
            f *= k;
            if (f > cert.t) break;
        }
        // f is now min((v3_m_hi)!, first prefix factorial above t)
        bigint flo = 1;
        for (std::uint64_t k = 2; k <= cert.v3_m_lo; ++k) flo *= k;
        cert.v3_excludes = f < cert.t || flo > cert.t;
    }

    if (hit) return std::nullopt;
    cert.below_m = cur.m() - 1;
    cert.how = nonsolution_certificate::method::factorial_gap;
    return cert;
}

/// Recheck a certificate from scratch: plain iteration for a_n, fresh
/// factorial products, Legendre sums for the valuation window.
inline bool verify_certificate(const nonsolution_certificate& cert) {
    const bigint an = narayana(cert.n);
    if (an * an - 1 != cert.t) return false;
    if (cert.how == nonsolution_certificate::method::factorial_gap) {
        bigint f = 1;
        for (std::uint64_t k = 2; k <= cert.below_m; ++k) f *= k;
        if (!(f < cert.t)) return false;
        if (!(f * (cert.below_m + 1) > cert.t)) return false;
    }
    if (vp(cert.t, 3) != cert.t_v3) return false;
    if (cert.v3_interval_empty) {
        if (vp_factorial(cert.v3_m_lo, 3) <= cert.t_v3) return false;
        if (cert.v3_m_lo > 0 && vp_factorial(cert.v3_m_lo - 1, 3) >= cert.t_v3) return false;
    } else {
        if (vp_factorial(cert.v3_m_lo, 3) != cert.t_v3) return false;
        if (vp_factorial(cert.v3_m_hi, 3) != cert.t_v3) return false;
        if (vp_factorial(cert.v3_m_hi + 1, 3) == cert.t_v3) return false;
        if (cert.v3_m_lo > 0 && vp_factorial(cert.v3_m_lo - 1, 3) == cert.t_v3) return false;
        if (cert.v3_excludes) {
            bigint f = 1;
            for (std::uint64_t k = 2; k <= cert.v3_m_hi; ++k) {
                f *= k;
                if (f > cert.t) break;
            }
            bigint flo = 1;
            for (std::uint64_t k = 2; k <= cert.v3_m_lo; ++k) flo *= k;
            if (!(f < cert.t || flo > cert.t)) return false;
        }
    }
    return true;
}

struct bound_probe {
    std::uint64_t m = 0;
    std::int64_t lhs = 0;   // floor((m - 2 floor(log3 m) - 34) / 18)
    bool budget_ok = false; // lhs <= factor budget
    bool subst_ok = false;  // certified lhs <= (34 + 1.33 m ln(m/2)) / ln 3
    bool strict_ok = false; // certified lhs <= log3(34 + 1.33 m ln(m/2))
    bigrat subst_rhs_lo, subst_rhs_hi;
    bigrat strict_rhs_lo, strict_rhs_hi;
};

struct bound_result {
    std::uint64_t m_max = 0;         // factor-budget crossover
    std::uint64_t n_max = 0;         // largest n below 4 + 1.33 m_max ln(m_max / 2)
    std::uint64_t m_max_strict = 0;  // crossover of the fully logarithmic chain
    std::uint64_t n_max_strict = 0;

    unsigned factor_count = 0;       // linear factors across the combined tables
    std::int64_t addend_sum = 0;
    std::int64_t max_offset = 0;
    std::vector<std::int64_t> offsets;
    std::vector<std::int64_t> offsets_alt;  // alternate reading of one factor; same bounds
    std::string offsets_note;

    bool subst_form_crosses = false;  // the division-form comparison never fails
    std::uint64_t predicate_horizon = 0;
    std::uint64_t budget_horizon = 0;
    std::uint64_t budget_reentries = 0;

    bigrat n_bound_lo, n_bound_hi;  // bracket of 4 + 1.33 m_max ln(m_max / 2)
    std::vector<bound_probe> trace;
};

namespace detail {

enum class cert3 { yes, no, undecided };

// certified comparison lhs <= rhs for exact lhs and bracketed rhs
inline cert3 cmp_le(const bigrat& lhs, const rat_interval& rhs) {
    if (lhs <= rhs.lo) return cert3::yes;
    if (lhs > rhs.hi) return cert3::no;
    return cert3::undecided;
}

inline std::int64_t budget_lhs(std::uint64_t m) {
    return floor_div(static_cast<std::int64_t>(m) - 2 * static_cast<std::int64_t>(floor_log(3, m)) - 34, 18);
}

// bracket of 34 + 1.33 m ln(m / 2)
inline rat_interval bound_inner(std::uint64_t m, unsigned terms) {
    rat_interval ln_half_m = ln_bracket(bigrat(m, 2), terms);
    return bigrat(133 * m, 100) * ln_half_m + bigrat(34);
}

inline rat_interval div_pos(const rat_interval& a, const rat_interval& b) {
    // b0 > 0 assumed; a may straddle zero
    const bigrat lo = a.lo >= 0 ? a.lo / b.hi : a.lo / b.lo;
    const bigrat hi = a.hi >= 0 ? a.hi / b.lo : a.hi / b.hi;
    return {lo, hi};
}

inline rat_interval ln_of_interval(const rat_interval& a, unsigned terms) {
    rat_interval lo = ln_bracket(a.lo, terms);
    rat_interval hi = ln_bracket(a.hi, terms);
    return {lo.lo, hi.hi};
}

struct predicate_eval {
    cert3 subst = cert3::undecided;
    cert3 strict = cert3::undecided;
    rat_interval subst_rhs, strict_rhs;
};

inline predicate_eval eval_predicates(std::uint64_t m, std::int64_t lhs) {
    // the comparison margins are ~0.3 at the crossovers, so the ladder
    // starts with a short series; exact rationals at high term counts pay
    // a gcd per operation on multi-thousand-bit denominators
    for (unsigned terms = 4; terms <= 384; terms *= 2) {
        // coarsening caps the rational sizes before the second ln; the
        // margins dwarf the 2^-32 widening
        const rat_interval inner = coarsen(bound_inner(m, terms), 32);
        const rat_interval l3 = ln3_bracket(terms);
        predicate_eval ev;
        ev.subst_rhs = div_pos(inner, l3);
        ev.strict_rhs = div_pos(ln_of_interval(inner, terms), l3);
        ev.subst = cmp_le(bigrat(lhs), ev.subst_rhs);
        ev.strict = cmp_le(bigrat(lhs), ev.strict_rhs);
        if (ev.subst != cert3::undecided && ev.strict != cert3::undecided) return ev;
    }
    throw std::runtime_error("derive_bounds: predicate undecided at 384 series terms");
}

} // namespace detail

/// Derive the search cutoffs from the combined valuation tables and the
/// growth constants. The factor-budget predicate
///   floor((m - 2 floor(log3 m) - 34) / 18) <= factor count
/// yields the headline m_max; the trace also carries the two readings of
/// the transcendental comparison, which cross at a different point (the
/// fully logarithmic chain) or never (the division form), so the choice
/// is visible in the output rather than buried.
inline bound_result derive_bounds() {
    bound_result res;
    const auto minus = v3_of_a_minus_one_law(law_variant::corrected);
    const auto plus = v3_of_a_plus_one_law(law_variant::corrected);
    for (const auto& law : {minus, plus}) {
        for (const auto& row : law.rows) {
            res.factor_count += static_cast<unsigned>(row.formula.linear_factors());
            res.addend_sum += row.formula.value;
            for (std::int64_t off : row.formula.offsets) {
                res.offsets.push_back(off);
                res.max_offset = std::max(res.max_offset, off);
            }
        }
    }
    res.offsets_alt = res.offsets;
    for (auto& off : res.offsets_alt)
        if (off == 5) off = 15;
    res.offsets_note =
        "one factor admits an alternate reading (offset 15 for 5); every offset stays within "
        "[-3, 30], and only the largest offset enters the bound, so both readings give the "
        "same cutoffs";

    // factor-budget crossover, scanned far past the cutoff to rule out re-entry
    res.budget_horizon = 1000000;
    std::uint64_t last_ok = 0;
    for (std::uint64_t m = 4; m <= res.budget_horizon; ++m) {
        if (detail::budget_lhs(m) <= static_cast<std::int64_t>(res.factor_count)) {
            if (last_ok != 0 && m != last_ok + 1 && last_ok >= 4) ++res.budget_reentries;
            last_ok = m;
        }
    }
    res.m_max = last_ok;

    // transcendental forms on a horizon past double the last crossover,
    // wide enough to show both behaviors
    res.predicate_horizon = 512;
    std::uint64_t strict_last_ok = 0;
    bool subst_failed = false;
    for (std::uint64_t m = 4; m <= res.predicate_horizon; ++m) {
        const auto ev = detail::eval_predicates(m, detail::budget_lhs(m));
        if (ev.strict == detail::cert3::yes) strict_last_ok = m;
        if (ev.subst == detail::cert3::no) subst_failed = true;
    }
    res.m_max_strict = strict_last_ok;
    res.subst_form_crosses = subst_failed;

    // n cutoff: largest integer strictly below 4 + 1.33 m ln(m / 2)
    auto n_cut = [](std::uint64_t m) {
        for (unsigned terms = 24; terms <= 384; terms *= 2) {
            rat_interval nb = bigrat(133 * m, 100) * ln_bracket(bigrat(m, 2), terms) + bigrat(4);
            const bigint flo = boost::multiprecision::numerator(nb.lo) /
                               boost::multiprecision::denominator(nb.lo);
            const bigint fhi = boost::multiprecision::numerator(nb.hi) /
                               boost::multiprecision::denominator(nb.hi);
            if (flo == fhi && nb.hi != bigrat(fhi))
                return std::pair<std::uint64_t, rat_interval>(static_cast<std::uint64_t>(fhi), nb);
        }
        throw std::runtime_error("derive_bounds: n cutoff undecided at 384 series terms");
    };
    auto [nmax, nbr] = n_cut(res.m_max);
    res.n_max = nmax;
    res.n_bound_lo = nbr.lo;
    res.n_bound_hi = nbr.hi;
    res.n_max_strict = n_cut(res.m_max_strict).first;

    // probes around both crossovers
    std::vector<std::uint64_t> probes{res.m_max_strict - 1, res.m_max_strict,
                                      res.m_max_strict + 1, res.m_max - 1,
                                      res.m_max,            res.m_max + 1};
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    for (std::uint64_t m : probes) {
        bound_probe p;
        p.m = m;
        p.lhs = detail::budget_lhs(m);
        p.budget_ok = p.lhs <= static_cast<std::int64_t>(res.factor_count);
        const auto ev = detail::eval_predicates(m, p.lhs);
        p.subst_ok = ev.subst == detail::cert3::yes;
        p.strict_ok = ev.strict == detail::cert3::yes;
        p.subst_rhs_lo = ev.subst_rhs.lo;
        p.subst_rhs_hi = ev.subst_rhs.hi;
        p.strict_rhs_lo = ev.strict_rhs.lo;
        p.strict_rhs_hi = ev.strict_rhs.hi;
        res.trace.push_back(std::move(p));
    }
    return res;
}

} // namespace narayana
