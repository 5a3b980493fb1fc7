#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "arith.hpp"
#include "padic.hpp"
#include "sequence.hpp"
#include "valuation.hpp"

namespace narayana {

enum class law_target { a, a_minus_1, a_plus_1 };
enum class law_variant { literal, corrected };

inline const char* to_string(law_target t) {
    switch (t) {
        case law_target::a: return "a";
        case law_target::a_minus_1: return "a-1";
        case law_target::a_plus_1: return "a+1";
    }
    return "?";
}

inline const char* to_string(law_variant v) {
    return v == law_variant::literal ? "literal" : "corrected";
}

/// One formula shape from the valuation tables: a constant, a shifted
/// valuation v_p(i + offset) + addend, or a product of shifted factors.
struct law_formula {
    enum class shape { constant, shift_v3, shift_v2, product_v3 };

    shape kind = shape::constant;
    std::int64_t value = 0;  // the constant, or the addend for shifted shapes
    std::vector<std::int64_t> offsets;

    friend bool operator==(const law_formula&, const law_formula&) = default;

    valuation eval(std::uint64_t i) const {
        if (kind == shape::constant) return valuation(static_cast<std::uint64_t>(value));
        if (i > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) - 64)
            throw std::overflow_error("law_formula::eval: index too large");
        const std::uint64_t p = kind == shape::shift_v2 ? 2 : 3;
        valuation acc(static_cast<std::uint64_t>(value));
        for (std::int64_t off : offsets)
            acc = acc + vp(static_cast<std::int64_t>(i) + off, p);
        return acc;
    }

    std::size_t linear_factors() const {
        return kind == shape::constant ? 0 : offsets.size();
    }

    std::string str() const {
        if (kind == shape::constant) return std::to_string(value);
        auto term = [](std::int64_t off) {
            if (off == 0) return std::string("i");
            if (off > 0) return "i+" + std::to_string(off);
            return "i" + std::to_string(off);
        };
        std::string vf = kind == shape::shift_v2 ? "v2" : "v3";
        std::string inner;
        if (offsets.size() == 1) {
            inner = term(offsets[0]);
        } else {
            for (std::int64_t off : offsets) inner += "(" + term(off) + ")";
        }
        return vf + "(" + inner + ")+" + std::to_string(value);
    }
};

/// A table row: a formula attached to residue classes of one modulus.
struct law_row {
    law_formula formula;
    std::uint32_t modulus = 0;
    std::vector<std::uint32_t> residues;

    bool matches(std::uint64_t i) const {
        const std::uint32_t r = static_cast<std::uint32_t>(i % modulus);
        return std::find(residues.begin(), residues.end(), r) != residues.end();
    }
};

/// Cover defect of a table at one index: no row (matches = 0) or more
/// than one row (matches >= 2) claims the class.
struct table_defect {
    std::uint64_t index = 0;
    std::uint32_t residue_mod_24 = 0;
    unsigned matches = 0;
};

struct valuation_law {
    law_target target = law_target::a;
    law_variant variant = law_variant::corrected;
    std::vector<law_row> rows;
};

using law_result = std::variant<valuation, table_defect>;

/// Evaluate the table at i. A defect is data, not an exception: the
/// printed tables are kept verbatim, defects included.
inline law_result law_eval(const valuation_law& law, std::uint64_t i) {
    const law_row* hit = nullptr;
    unsigned matches = 0;
    for (const auto& row : law.rows) {
        if (row.matches(i)) {
            ++matches;
            hit = &row;
        }
    }
    if (matches != 1)
        return table_defect{i, static_cast<std::uint32_t>(i % 24), matches};
    return hit->formula.eval(i);
}

/// Same, but a defect throws. For callers that require a total table.
inline valuation law_eval_strict(const valuation_law& law, std::uint64_t i) {
    law_result r = law_eval(law, i);
    if (const auto* d = std::get_if<table_defect>(&r))
        throw std::runtime_error("valuation table defect at i = " + std::to_string(d->index) +
                                 " (class " + std::to_string(d->residue_mod_24) + " mod 24, " +
                                 std::to_string(d->matches) + " rows match)");
    return std::get<valuation>(r);
}

namespace detail {

inline law_row row_const(std::uint32_t mod, std::initializer_list<std::uint32_t> res, std::int64_t c) {
    return {{law_formula::shape::constant, c, {}}, mod, res};
}

inline law_row row_v3(std::uint32_t mod, std::initializer_list<std::uint32_t> res, std::int64_t off,
                      std::int64_t add) {
    return {{law_formula::shape::shift_v3, add, {off}}, mod, res};
}

inline law_row row_v2(std::uint32_t mod, std::initializer_list<std::uint32_t> res, std::int64_t off,
                      std::int64_t add) {
    return {{law_formula::shape::shift_v2, add, {off}}, mod, res};
}

inline law_row row_v3_prod(std::uint32_t mod, std::initializer_list<std::uint32_t> res,
                           std::initializer_list<std::int64_t> offs, std::int64_t add) {
    return {{law_formula::shape::product_v3, add, offs}, mod, res};
}

} // namespace detail

/// Table for v3(a_i). The literal variant reproduces the printed table,
/// including its v2 rows, its doubled "0 mod 24" class, and its missing
/// "16 mod 24" class. The corrected variant is the minimal repair that
/// the modular oracle confirms: v2 becomes v3 and the second "0 mod 24"
/// row moves to the uncovered class.
inline valuation_law v3_of_a_law(law_variant variant) {
    using namespace detail;
    valuation_law law;
    law.target = law_target::a;
    law.variant = variant;
    law.rows.push_back(row_const(8, {1, 2, 3, 4, 6}, 0));
    law.rows.push_back(row_const(24, {5, 7, 13, 15}, 1));
    law.rows.push_back(row_const(24, {8}, 2));
    if (variant == law_variant::literal) {
        law.rows.push_back(row_v2(24, {23}, 1, 1));
        law.rows.push_back(row_v2(24, {21}, 3, 1));
        law.rows.push_back(row_v2(24, {0}, 0, 2));
        law.rows.push_back(row_v2(24, {0}, 8, 2));
    } else {
        law.rows.push_back(row_v3(24, {23}, 1, 1));
        law.rows.push_back(row_v3(24, {21}, 3, 1));
        law.rows.push_back(row_v3(24, {0}, 0, 2));
        law.rows.push_back(row_v3(24, {16}, 8, 2));
    }
    return law;
}

/// Table for v3(a_i - 1). The printed table needs no repair; the only
/// reading choice is the "18 mod 24" row, which is a two-factor product
/// v3((i+6)(i+30)) + 2, and both variants use it.
inline valuation_law v3_of_a_minus_one_law(law_variant variant) {
    using namespace detail;
    valuation_law law;
    law.target = law_target::a_minus_1;
    law.variant = variant;
    law.rows.push_back(row_const(8, {0, 4, 5, 7}, 0));
    law.rows.push_back(row_v3(8, {1}, -1, 1));
    law.rows.push_back(row_v3(8, {6}, 2, 1));
    law.rows.push_back(row_v3(24, {2}, -2, 2));
    law.rows.push_back(row_const(24, {10}, 2));
    law.rows.push_back(row_v3_prod(24, {18}, {6, 30}, 2));
    law.rows.push_back(row_v3(24, {3}, -3, 2));
    law.rows.push_back(row_v3(24, {11}, 13, 2));
    law.rows.push_back(row_v3(24, {19}, 5, 2));
    return law;
}

/// Table for v3(a_i + 1). Printed and corrected agree.
inline valuation_law v3_of_a_plus_one_law(law_variant variant) {
    using namespace detail;
    valuation_law law;
    law.target = law_target::a_plus_1;
    law.variant = variant;
    law.rows.push_back(row_const(8, {0, 1, 2, 3, 5, 6, 7}, 0));
    law.rows.push_back(row_const(24, {4, 12}, 1));
    law.rows.push_back(row_v3(24, {20}, 4, 1));
    return law;
}

inline valuation_law law_for(law_target t, law_variant v) {
    switch (t) {
        case law_target::a: return v3_of_a_law(v);
        case law_target::a_minus_1: return v3_of_a_minus_one_law(v);
        case law_target::a_plus_1: return v3_of_a_plus_one_law(v);
    }
    throw std::invalid_argument("law_for: bad target");
}

/// Largest finite value the table can produce on [1, i_max]; sizes the
/// oracle modulus so a single modular pass resolves almost every index.
inline unsigned max_table_value(const valuation_law& law, std::uint64_t i_max) {
    std::uint64_t best = 0;
    for (const auto& row : law.rows) {
        const auto& f = row.formula;
        std::uint64_t v = static_cast<std::uint64_t>(f.value);
        for (std::int64_t off : f.offsets) {
            const std::uint64_t x = i_max + static_cast<std::uint64_t>(off > 0 ? off : 0);
            if (x >= 2) v += floor_log(f.kind == law_formula::shape::shift_v2 ? 2 : 3, x);
        }
        best = std::max(best, v);
    }
    return static_cast<unsigned>(std::min<std::uint64_t>(best, 63));
}

struct oracle_result {
    valuation value;       // exact when !saturated, else a lower bound (>= cap)
    bool saturated = false;
    unsigned cap = 0;
};

/// Ground truth by modular computation: v3 of a_i (shifted per target)
/// read off a_i mod 3^cap. A zero residue only says the valuation is at
/// least cap; that is reported as saturation, never as a value.
inline oracle_result v3_oracle(law_target t, std::uint64_t i, unsigned cap) {
    if (cap < 1) throw std::invalid_argument("v3_oracle: cap >= 1 required");
    if (t == law_target::a_minus_1 && i >= 1 && i <= 3) {
        // exact: a_1 = a_2 = a_3 = 1, so the target value is 0
        if (narayana(i) != 1) throw std::logic_error("v3_oracle: base terms corrupted");
        return {valuation::infinity(), false, cap};
    }
    if (t == law_target::a && i == 0) return {valuation::infinity(), false, cap};

    std::uint64_t v = 0;
    bool zero = false;
    if (cap <= max_pow3_exp_u64) {
        const std::uint64_t m = pow3_u64(cap);
        std::uint64_t x = narayana_mod(i, m);
        if (t == law_target::a_minus_1) x = add_mod(x, m - 1, m);
        if (t == law_target::a_plus_1) x = add_mod(x, 1, m);
        zero = x == 0;
        while (!zero && x % 3 == 0) {
            x /= 3;
            ++v;
        }
    } else {
        const bigint m = pow3_big(cap);
        bigint x = narayana_mod(i, m);
        if (t == law_target::a_minus_1) x = add_mod(x, m - 1, m);
        if (t == law_target::a_plus_1) x = add_mod(x, bigint(1), m);
        zero = x == 0;
        if (!zero) v = vp(x, 3).finite();
    }
    if (zero) return {valuation(cap), true, cap};
    return {valuation(v), false, cap};
}

/// Oracle with the escalation policy: start at max(hint + 3, 8), double
/// on saturation, refuse past cap 64 with a diagnostic.
inline valuation v3_oracle_auto(law_target t, std::uint64_t i,
                                std::optional<valuation> hint = std::nullopt) {
    unsigned cap = 8;
    if (hint && !hint->is_infinite())
        cap = std::max<unsigned>(static_cast<unsigned>(std::min<std::uint64_t>(hint->finite(), 61)) + 3, 8);
    for (; cap <= 64; cap *= 2) {
        oracle_result r = v3_oracle(t, i, cap);
        if (!r.saturated) return r.value;
    }
    throw std::runtime_error("v3_oracle_auto: saturated past cap 64 at i = " + std::to_string(i) +
                             ", target " + to_string(t));
}

struct discrepancy {
    enum class kind { mismatch, gap, duplicate };
    std::uint64_t index = 0;
    kind what = kind::mismatch;
    std::optional<valuation> law_value;  // absent on cover defects
    valuation oracle_value;
};

inline const char* to_string(discrepancy::kind k) {
    switch (k) {
        case discrepancy::kind::mismatch: return "mismatch";
        case discrepancy::kind::gap: return "gap";
        case discrepancy::kind::duplicate: return "duplicate";
    }
    return "?";
}

struct discrepancy_report {
    law_target target = law_target::a;
    law_variant variant = law_variant::corrected;
    std::uint64_t i_max = 0;
    unsigned cap_used = 0;
    std::uint64_t checked = 0;
    std::uint64_t mismatches = 0, gaps = 0, duplicates = 0;
    std::vector<discrepancy> entries;
    bool clean() const { return entries.empty(); }
};

namespace detail {

inline void verify_law_range(const valuation_law& law, std::uint64_t lo, std::uint64_t hi,
                             std::uint64_t m, unsigned cap, discrepancy_report& out) {
    auto wv = fast_window_mod(lo, m);
    std::uint64_t x0 = wv[0], x1 = wv[1], x2 = wv[2];
    for (std::uint64_t i = lo; i <= hi; ++i) {
        std::uint64_t x = x0;
        if (law.target == law_target::a_minus_1) x = add_mod(x, m - 1, m);
        if (law.target == law_target::a_plus_1) x = add_mod(x, 1, m);

        law_result lr = law_eval(law, i);

        valuation oracle;
        bool oracle_exact = false;
        if (law.target == law_target::a_minus_1 && i <= 3) {
            oracle = valuation::infinity();
            oracle_exact = true;
        } else if (x != 0) {
            std::uint64_t v = 0;
            while (x % 3 == 0) {
                x /= 3;
                ++v;
            }
            oracle = valuation(v);
            oracle_exact = true;
        }

        if (const auto* d = std::get_if<table_defect>(&lr)) {
            if (!oracle_exact)
                oracle = v3_oracle_auto(law.target, i, valuation(cap));
            discrepancy e;
            e.index = i;
            e.what = d->matches == 0 ? discrepancy::kind::gap : discrepancy::kind::duplicate;
            e.oracle_value = oracle;
            out.entries.push_back(e);
            if (e.what == discrepancy::kind::gap)
                ++out.gaps;
            else
                ++out.duplicates;
        } else {
            const valuation lv = std::get<valuation>(lr);
            if (!oracle_exact)
                oracle = v3_oracle_auto(law.target, i, lv);
            if (lv != oracle) {
                out.entries.push_back({i, discrepancy::kind::mismatch, lv, oracle});
                ++out.mismatches;
            }
        }
        ++out.checked;

        std::uint64_t next = add_mod(x2, x0, m);
        x0 = x1;
        x1 = x2;
        x2 = next;
    }
}

} // namespace detail

/// Compare a table against the modular oracle on [1, i_max]. One modular
/// pass at a cap sized from the table's own range; residues that saturate
/// the pass escalate to the per-index oracle.
inline discrepancy_report verify_law(const valuation_law& law, std::uint64_t i_max,
                                     unsigned initial_cap = 8, unsigned jobs = 1) {
    if (i_max < 1) throw std::invalid_argument("verify_law: i_max >= 1 required");
    unsigned need = std::max(max_table_value(law, i_max),
                             max_table_value(law_for(law.target, law_variant::corrected), i_max));
    unsigned cap = std::clamp<unsigned>(std::max(initial_cap, need + 3), 8, max_pow3_exp_u64);
    const std::uint64_t m = pow3_u64(cap);

    discrepancy_report rep;
    rep.target = law.target;
    rep.variant = law.variant;
    rep.i_max = i_max;
    rep.cap_used = cap;

    if (jobs < 2 || i_max < 4096) {
        detail::verify_law_range(law, 1, i_max, m, cap, rep);
        return rep;
    }

    jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, i_max));
    std::vector<discrepancy_report> parts(jobs);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (i_max + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
        const std::uint64_t lo = 1 + j * chunk;
        const std::uint64_t hi = std::min(i_max, lo + chunk - 1);
        if (lo > i_max) break;
        pool.emplace_back([&law, lo, hi, m, cap, &parts, j] {
            detail::verify_law_range(law, lo, hi, m, cap, parts[j]);
        });
    }
    for (auto& t : pool) t.join();
    for (auto& part : parts) {
        rep.checked += part.checked;
        rep.mismatches += part.mismatches;
        rep.gaps += part.gaps;
        rep.duplicates += part.duplicates;
        rep.entries.insert(rep.entries.end(), part.entries.begin(), part.entries.end());
    }
    return rep;
}

/// The two congruence families for indices 8 s 3^n + r, r in {0, 1, 2}:
/// weak holds mod 3^{n+3} for n >= 1, strong holds mod 3^{n+4} for n >= 2.
enum class congruence_family { weak, strong };

inline const char* to_string(congruence_family f) {
    return f == congruence_family::weak ? "weak" : "strong";
}

struct congruence_mismatch {
    std::uint32_t s = 0, n = 0, r = 0;
    std::uint64_t index = 0;
    std::uint64_t expected = 0, got = 0;
};

struct congruence_report {
    congruence_family family = congruence_family::weak;
    std::uint32_t s_max = 0, n_max = 0;
    std::uint64_t checked = 0;  // congruences, three per (s, n) pair
    std::vector<congruence_mismatch> entries;
    bool clean() const { return entries.empty(); }
};

/// Check the closed-form residues of a_{8 s 3^n + r} for all s <= s_max
/// and all n up to n_max, entirely in modular arithmetic.
inline congruence_report verify_congruences(congruence_family f, std::uint32_t s_max,
                                            std::uint32_t n_max) {
    if (s_max < 1) throw std::invalid_argument("verify_congruences: s_max >= 1 required");
    congruence_report rep;
    rep.family = f;
    rep.s_max = s_max;
    rep.n_max = n_max;
    const unsigned c = f == congruence_family::weak ? 3 : 4;
    const std::uint32_t n0 = f == congruence_family::weak ? 1 : 2;
    for (std::uint32_t n = n0; n <= n_max; ++n) {
        if (n + c > max_pow3_exp_u64)
            throw std::invalid_argument("verify_congruences: modulus exceeds the 64-bit range");
        const std::uint64_t m = pow3_u64(n + c);
        const std::uint64_t p1 = pow3_u64(n + 1);
        const std::uint64_t p2 = pow3_u64(n + 2);
        const std::uint64_t stride = 8 * pow3_u64(n);
        for (std::uint64_t s = 1; s <= s_max; ++s) {
            if (stride > (std::numeric_limits<std::uint64_t>::max() - 2) / s)
                throw std::overflow_error("verify_congruences: index overflows 64 bits");
            const std::uint64_t idx = stride * s;
            const auto got = fast_window_mod(idx, m);
            std::uint64_t e0, e1, e2;
            if (f == congruence_family::weak) {
                e0 = mul_mod(2 * s, p2, m);
                e1 = add_mod(add_mod(e0, mul_mod(s, p1, m), m), 1, m);
                e2 = add_mod(e0, 1, m);
            } else {
                const std::uint64_t p3 = pow3_u64(n + 3) % m;
                const std::uint64_t t3 = mul_mod(2 * s, p3, m);
                const std::uint64_t t2 = mul_mod(5 * s, p2, m);
                e0 = add_mod(t3, mul_mod(2 * s, p2, m), m);
                e1 = add_mod(add_mod(t2, mul_mod(s, p1, m), m), 1, m);
                e2 = add_mod(add_mod(t3, t2, m), 1, m);
            }
            const std::uint64_t want[3] = {e0, e1, e2};
            for (std::uint32_t r = 0; r < 3; ++r) {
                if (got[r] != want[r])
                    rep.entries.push_back({static_cast<std::uint32_t>(s), n, r, idx + r,
                                           want[r], got[r]});
                ++rep.checked;
            }
        }
    }
    return rep;
}

struct corollary_violation {
    std::uint64_t index = 0;
    std::uint32_t residue_mod_24 = 0;
    std::uint64_t a_mod_9 = 0;
};

struct corollary_report {
    std::uint64_t i_max = 0;
    std::uint64_t checked = 0;
    std::vector<corollary_violation> violations;
    bool clean() const { return violations.empty(); }
};

/// Divisibility corollaries: 9 | a_i when i = 16 or 21 mod 24, and
/// 3 | a_i when i = 7 mod 24.
inline corollary_report corollary_32_check(std::uint64_t i_max) {
    corollary_report rep;
    rep.i_max = i_max;
    std::uint64_t x0 = 0, x1 = 1, x2 = 1;
    for (std::uint64_t i = 0; i <= i_max; ++i) {
        const std::uint32_t r = static_cast<std::uint32_t>(i % 24);
        if (r == 16 || r == 21) {
            ++rep.checked;
            if (x0 % 9 != 0) rep.violations.push_back({i, r, x0});
        } else if (r == 7) {
            ++rep.checked;
            if (x0 % 3 != 0) rep.violations.push_back({i, r, x0});
        }
        const std::uint64_t next = add_mod(x2, x0, 9);
        x0 = x1;
        x1 = x2;
        x2 = next;
    }
    return rep;
}

/// One adjudicated row of the v3(a_i) table: the printed rule(s) for a
/// class, the rule the oracle confirms, and the damage count under the
/// printed reading.
struct errata_row {
    std::string klass;
    std::string printed;
    std::string corrected;
    std::string note;
    std::uint64_t printed_disagreements = 0;
};

struct errata_report {
    std::uint64_t i_max = 0;
    std::vector<errata_row> a_rows;
    discrepancy_report a_literal;
    discrepancy_report a_corrected;
    discrepancy_report minus_corrected;
    discrepancy_report plus_corrected;
    std::string product_note;
    bool corrected_clean() const {
        return a_corrected.clean() && minus_corrected.clean() && plus_corrected.clean();
    }
};

namespace detail {

inline std::string class_str(const law_row& row) {
    std::string s = "i = ";
    for (std::size_t k = 0; k < row.residues.size(); ++k) {
        if (k) s += ", ";
        s += std::to_string(row.residues[k]);
    }
    return s + " mod " + std::to_string(row.modulus);
}

} // namespace detail

/// Adjudicate the printed v3(a_i) table against the oracle and sweep the
/// corrected tables for all three targets.
inline errata_report build_errata(std::uint64_t i_max = 100000, unsigned initial_cap = 8,
                                  unsigned jobs = 1) {
    errata_report rep;
    rep.i_max = i_max;
    const auto lit = v3_of_a_law(law_variant::literal);
    const auto cor = v3_of_a_law(law_variant::corrected);
    rep.a_literal = verify_law(lit, i_max, initial_cap, jobs);
    rep.a_corrected = verify_law(cor, i_max, initial_cap, jobs);
    rep.minus_corrected = verify_law(v3_of_a_minus_one_law(law_variant::corrected), i_max,
                                     initial_cap, jobs);
    rep.plus_corrected = verify_law(v3_of_a_plus_one_law(law_variant::corrected), i_max,
                                    initial_cap, jobs);

    for (const auto& row : cor.rows) {
        errata_row er;
        er.klass = detail::class_str(row);
        er.corrected = row.formula.str();
        std::vector<const law_row*> printed;
        for (const auto& lrow : lit.rows)
            if (lrow.modulus == row.modulus && lrow.residues == row.residues)
                printed.push_back(&lrow);
        if (printed.empty()) {
            er.printed = "(no rule)";
            er.note = "class not covered by the printed table";
        } else if (printed.size() == 1 && printed[0]->formula == row.formula) {
            er.printed = er.corrected;
            er.note = "as printed";
        } else if (printed.size() == 1) {
            er.printed = printed[0]->formula.str();
            er.note = "formula replaced";
        } else {
            for (std::size_t k = 0; k < printed.size(); ++k) {
                if (k) er.printed += " / ";
                er.printed += printed[k]->formula.str();
            }
            er.note = "printed table assigns this class twice; second rule reassigned";
        }
        for (const auto& e : rep.a_literal.entries)
            if (row.matches(e.index)) ++er.printed_disagreements;
        rep.a_rows.push_back(std::move(er));
    }
    rep.product_note =
        "the i = 18 mod 24 rule of the a-1 table is the two-factor product v3((i+6)(i+30))+2";
    return rep;
}

} // namespace narayana
