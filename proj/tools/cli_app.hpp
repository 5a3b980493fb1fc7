#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <narayana/narayana.hpp>

namespace narayana::cli {

using nlohmann::json;

inline constexpr const char* version_string = "narayana-verify 0.1.0";

// exact `to` range is capped so a typo cannot ask for gigabytes of digits
inline constexpr std::uint64_t seq_term_cap = 1u << 20;

namespace detail {

inline std::string rat_str(const bigrat& r) { return r.str(); }

inline double rat_approx(const bigrat& r) { return r.convert_to<double>(); }

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline law_target parse_target(const std::string& s) {
    if (s == "a") return law_target::a;
    if (s == "a-1") return law_target::a_minus_1;
    if (s == "a+1") return law_target::a_plus_1;
    throw std::invalid_argument("target must be one of a, a-1, a+1");
}

inline law_variant parse_variant(const std::string& s) {
    if (s == "literal") return law_variant::literal;
    if (s == "corrected") return law_variant::corrected;
    throw std::invalid_argument("table must be literal or corrected");
}

inline json discrepancy_json(const discrepancy& e) {
    json j;
    j["index"] = e.index;
    j["kind"] = to_string(e.what);
    j["class_mod_24"] = e.index % 24;
    j["law_value"] = e.law_value ? json(e.law_value->str()) : json(nullptr);
    j["oracle_value"] = e.oracle_value.str();
    return j;
}

inline std::string law_value_cell(const discrepancy& e) {
    if (e.law_value) return e.law_value->str();
    return e.what == discrepancy::kind::gap ? "gap" : "duplicate";
}

} // namespace detail

struct command_output {
    json result = json::object();
    json discrepancies = json::array();
    std::string plain;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
};

namespace handlers {

inline command_output seq(std::uint64_t from, std::uint64_t to, std::uint64_t mod, bool has_mod) {
    if (to < from) throw std::invalid_argument("seq: --to must be >= --from");
    if (to - from + 1 > seq_term_cap) throw std::invalid_argument("seq: range too large");
    command_output out;
    out.result["from"] = from;
    out.result["to"] = to;
    if (has_mod) out.result["mod"] = mod;
    json terms = json::array();
    std::ostringstream plain;
    out.csv_header = {"n", "value"};
    if (has_mod) {
        if (mod < 2) throw std::invalid_argument("seq: --mod must be >= 2");
        auto wv = fast_window_mod(from, mod);
        std::uint64_t x0 = wv[0], x1 = wv[1], x2 = wv[2];
        for (std::uint64_t n = from; n <= to; ++n) {
            terms.push_back({{"n", n}, {"value", std::to_string(x0)}});
            plain << n << "\t" << x0 << "\n";
            out.csv_rows.push_back({std::to_string(n), std::to_string(x0)});
            std::uint64_t next = add_mod(x2, x0, mod);
            x0 = x1;
            x1 = x2;
            x2 = next;
        }
    } else {
        window w = fast_window(from);
        for (std::uint64_t n = from; n <= to; ++n) {
            std::string v = w.values[0].str();
            terms.push_back({{"n", n}, {"value", v}});
            plain << n << "\t" << v << "\n";
            out.csv_rows.push_back({std::to_string(n), v});
            w.step();
        }
    }
    out.result["terms"] = std::move(terms);
    out.plain = plain.str();
    return out;
}

inline command_output val(const std::string& target_s, std::uint64_t index,
                          const std::string& variant_s, bool with_oracle) {
    command_output out;
    const law_target target = detail::parse_target(target_s);
    const law_variant variant = detail::parse_variant(variant_s);
    const valuation_law law = law_for(target, variant);
    out.result["target"] = target_s;
    out.result["index"] = index;
    out.result["table"] = variant_s;

    std::ostringstream plain;
    law_result lr = law_eval(law, index);
    std::string law_cell;
    if (const auto* d = std::get_if<table_defect>(&lr)) {
        out.result["law_value"] = nullptr;
        out.result["defect"] = {{"class_mod_24", d->residue_mod_24},
                                {"rows_matching", d->matches}};
        law_cell = d->matches == 0 ? "gap" : "duplicate";
        json e;
        e["index"] = index;
        e["kind"] = d->matches == 0 ? "gap" : "duplicate";
        e["class_mod_24"] = d->residue_mod_24;
        out.discrepancies.push_back(e);
        plain << "table defect: class " << d->residue_mod_24 << " mod 24 has " << d->matches
              << " matching rows\n";
    } else {
        const valuation v = std::get<valuation>(lr);
        out.result["law_value"] = v.str();
        law_cell = v.str();
        plain << "v3(" << target_s << ") at index " << index << " [" << variant_s
              << " table] = " << v.str() << "\n";
    }
    out.csv_header = {"index", "class", "law_value", "oracle_value"};
    std::string oracle_cell = "";
    if (with_oracle) {
        std::optional<valuation> hint;
        if (const auto* v = std::get_if<valuation>(&lr)) hint = *v;
        const valuation ov = v3_oracle_auto(target, index, hint);
        out.result["oracle_value"] = ov.str();
        oracle_cell = ov.str();
        const bool agree = std::holds_alternative<valuation>(lr) && std::get<valuation>(lr) == ov;
        out.result["agree"] = agree;
        plain << "oracle = " << ov.str() << (agree ? " (agrees)" : " (DISAGREES)") << "\n";
        if (!agree && std::holds_alternative<valuation>(lr)) {
            json e;
            e["index"] = index;
            e["kind"] = "mismatch";
            e["law_value"] = std::get<valuation>(lr).str();
            e["oracle_value"] = ov.str();
            out.discrepancies.push_back(e);
        }
    }
    out.csv_rows.push_back({std::to_string(index), std::to_string(index % 24), law_cell, oracle_cell});
    out.plain = plain.str();
    return out;
}

inline command_output verify_laws(const std::string& target_s, std::uint64_t i_max,
                                  const std::string& table_s, unsigned cap) {
    command_output out;
    const law_target target = detail::parse_target(target_s);
    const law_variant variant = detail::parse_variant(table_s);
    const discrepancy_report rep = verify_law(law_for(target, variant), i_max, cap);

    out.result["target"] = target_s;
    out.result["table"] = table_s;
    out.result["i_max"] = rep.i_max;
    out.result["cap_used"] = rep.cap_used;
    out.result["checked"] = rep.checked;
    out.result["mismatches"] = rep.mismatches;
    out.result["gaps"] = rep.gaps;
    out.result["duplicates"] = rep.duplicates;

    out.csv_header = {"index", "class", "law_value", "oracle_value"};
    for (const auto& e : rep.entries) {
        out.discrepancies.push_back(detail::discrepancy_json(e));
        out.csv_rows.push_back({std::to_string(e.index), std::to_string(e.index % 24),
                                detail::law_value_cell(e), e.oracle_value.str()});
    }

    std::ostringstream plain;
    plain << "table " << table_s << " / target " << target_s << " vs oracle on [1, " << rep.i_max
          << "] (cap " << rep.cap_used << ")\n"
          << "checked " << rep.checked << ", mismatches " << rep.mismatches << ", gaps "
          << rep.gaps << ", duplicates " << rep.duplicates << "\n";
    std::size_t shown = 0;
    for (const auto& e : rep.entries) {
        if (shown == 20) {
            plain << "... " << rep.entries.size() - shown << " more\n";
            break;
        }
        plain << "  i=" << e.index << " class=" << e.index % 24 << " " << to_string(e.what)
              << " law=" << detail::law_value_cell(e) << " oracle=" << e.oracle_value.str() << "\n";
        ++shown;
    }
    out.plain = plain.str();
    return out;
}

inline command_output verify_congruences_cmd(const std::string& prop, std::uint32_t s_max,
                                             std::uint32_t n_max) {
    command_output out;
    congruence_family fam;
    if (prop == "3.3")
        fam = congruence_family::weak;
    else if (prop == "3.4")
        fam = congruence_family::strong;
    else
        throw std::invalid_argument("--prop must be 3.3 or 3.4");
    const congruence_report rep = verify_congruences(fam, s_max, n_max);
    out.result["prop"] = prop;
    out.result["family"] = to_string(rep.family);
    out.result["s_max"] = rep.s_max;
    out.result["n_max"] = rep.n_max;
    out.result["checked"] = rep.checked;
    out.result["mismatches"] = rep.entries.size();
    out.csv_header = {"s", "n", "r", "index", "expected", "got"};
    for (const auto& e : rep.entries) {
        out.discrepancies.push_back({{"s", e.s},
                                     {"n", e.n},
                                     {"r", e.r},
                                     {"index", e.index},
                                     {"expected", std::to_string(e.expected)},
                                     {"got", std::to_string(e.got)}});
        out.csv_rows.push_back({std::to_string(e.s), std::to_string(e.n), std::to_string(e.r),
                                std::to_string(e.index), std::to_string(e.expected),
                                std::to_string(e.got)});
    }
    std::ostringstream plain;
    plain << "family " << to_string(rep.family) << " (prop " << prop << "): s <= " << rep.s_max
          << ", n <= " << rep.n_max << "\n"
          << "checked " << rep.checked << " congruences, " << rep.entries.size()
          << " mismatches\n";
    out.plain = plain.str();
    return out;
}

inline command_output corollary(std::uint64_t i_max) {
    command_output out;
    const corollary_report rep = corollary_32_check(i_max);
    out.result["i_max"] = rep.i_max;
    out.result["checked"] = rep.checked;
    out.result["violations"] = rep.violations.size();
    out.csv_header = {"index", "class", "a_mod_9"};
    for (const auto& v : rep.violations) {
        out.discrepancies.push_back(
            {{"index", v.index}, {"class_mod_24", v.residue_mod_24}, {"a_mod_9", v.a_mod_9}});
        out.csv_rows.push_back({std::to_string(v.index), std::to_string(v.residue_mod_24),
                                std::to_string(v.a_mod_9)});
    }
    std::ostringstream plain;
    plain << "divisibility classes on [0, " << rep.i_max << "]: checked " << rep.checked
          << ", violations " << rep.violations.size() << "\n";
    out.plain = plain.str();
    return out;
}

inline command_output growth(std::uint64_t n_max) {
    command_output out;
    const growth_report rep = check_growth_bounds(n_max);
    out.result["n_max"] = rep.n_max;
    out.result["precision_bits"] = rep.precision_bits;
    out.result["violations"] = rep.violations.size();
    out.csv_header = {"n", "side"};
    for (const auto& v : rep.violations) {
        out.discrepancies.push_back({{"n", v.n}, {"side", v.lower_side ? "lower" : "upper"}});
        out.csv_rows.push_back({std::to_string(v.n), v.lower_side ? "lower" : "upper"});
    }
    std::ostringstream plain;
    plain << "growth envelope on [1, " << rep.n_max << "] certified at " << rep.precision_bits
          << " bits: " << rep.violations.size() << " violations\n";
    out.plain = plain.str();
    return out;
}

inline command_output bounds() {
    command_output out;
    const bound_result res = derive_bounds();
    out.result["m_max"] = res.m_max;
    out.result["n_max"] = res.n_max;
    out.result["m_max_strict"] = res.m_max_strict;
    out.result["n_max_strict"] = res.n_max_strict;
    out.result["factor_count"] = res.factor_count;
    out.result["addend_sum"] = res.addend_sum;
    out.result["max_offset"] = res.max_offset;
    out.result["offsets"] = res.offsets;
    out.result["offsets_alt"] = res.offsets_alt;
    out.result["offsets_note"] = res.offsets_note;
    out.result["subst_form_crosses"] = res.subst_form_crosses;
    out.result["predicate_horizon"] = res.predicate_horizon;
    out.result["budget_horizon"] = res.budget_horizon;
    out.result["budget_reentries"] = res.budget_reentries;
    out.result["n_bound"] = {{"lo", detail::rat_str(res.n_bound_lo)},
                             {"hi", detail::rat_str(res.n_bound_hi)},
                             {"lo_approx", detail::rat_approx(res.n_bound_lo)},
                             {"hi_approx", detail::rat_approx(res.n_bound_hi)}};
    json trace = json::array();
    out.csv_header = {"m",       "lhs",          "budget_ok",     "subst_rhs_lo", "subst_rhs_hi",
                      "subst_ok", "strict_rhs_lo", "strict_rhs_hi", "strict_ok"};
    for (const auto& p : res.trace) {
        trace.push_back({{"m", p.m},
                         {"lhs", p.lhs},
                         {"budget_ok", p.budget_ok},
                         {"subst_ok", p.subst_ok},
                         {"strict_ok", p.strict_ok},
                         {"subst_rhs_approx", {detail::rat_approx(p.subst_rhs_lo),
                                               detail::rat_approx(p.subst_rhs_hi)}},
                         {"strict_rhs_approx", {detail::rat_approx(p.strict_rhs_lo),
                                                detail::rat_approx(p.strict_rhs_hi)}}});
        std::ostringstream slo, shi, tlo, thi;
        slo << std::setprecision(10) << detail::rat_approx(p.subst_rhs_lo);
        shi << std::setprecision(10) << detail::rat_approx(p.subst_rhs_hi);
        tlo << std::setprecision(10) << detail::rat_approx(p.strict_rhs_lo);
        thi << std::setprecision(10) << detail::rat_approx(p.strict_rhs_hi);
        out.csv_rows.push_back({std::to_string(p.m), std::to_string(p.lhs),
                                p.budget_ok ? "1" : "0", slo.str(), shi.str(),
                                p.subst_ok ? "1" : "0", tlo.str(), thi.str(),
                                p.strict_ok ? "1" : "0"});
    }
    out.result["trace"] = std::move(trace);

    std::ostringstream plain;
    plain << "m_max = " << res.m_max << " (factor budget " << res.factor_count << "), n_max = "
          << res.n_max << "\n"
          << "n cutoff bracket: [" << std::setprecision(12) << detail::rat_approx(res.n_bound_lo)
          << ", " << detail::rat_approx(res.n_bound_hi) << "]\n"
          << "fully logarithmic chain crosses at m = " << res.m_max_strict << " (n <= "
          << res.n_max_strict << ")\n"
          << "division-form comparison "
          << (res.subst_form_crosses ? "crosses" : "never fails") << " up to m = "
          << res.predicate_horizon << "\n"
          << "budget predicate re-entries after crossover, scanned to " << res.budget_horizon
          << ": " << res.budget_reentries << "\n"
          << "trace (m, lhs, budget/subst/strict):\n";
    for (const auto& p : res.trace)
        plain << "  m=" << p.m << " lhs=" << p.lhs << " " << (p.budget_ok ? "ok" : "FAIL") << "/"
              << (p.subst_ok ? "ok" : "FAIL") << "/" << (p.strict_ok ? "ok" : "FAIL") << "\n";
    plain << res.offsets_note << "\n";
    out.plain = plain.str();
    return out;
}

inline command_output search(std::uint64_t n_max, unsigned jobs) {
    command_output out;
    const search_outcome res = search_narayana(n_max, jobs);
    out.result["lo"] = res.lo;
    out.result["hi"] = res.hi;
    out.result["jobs"] = jobs;
    out.result["candidates"] = res.candidates;
    out.result["undershoot"] = res.undershoot;
    out.result["overshoot"] = res.overshoot;
    json sols = json::array();
    for (const auto& [m, u] : res.solutions) {
        sols.push_back({{"m", m}, {"u", u.str()}});
        out.discrepancies.push_back(
            {{"kind", "unexpected_solution"}, {"m", m}, {"u", u.str()}});
    }
    out.result["solutions"] = std::move(sols);
    out.csv_header = {"key", "value"};
    out.csv_rows = {{"lo", std::to_string(res.lo)},
                    {"hi", std::to_string(res.hi)},
                    {"candidates", std::to_string(res.candidates)},
                    {"undershoot", std::to_string(res.undershoot)},
                    {"overshoot", std::to_string(res.overshoot)},
                    {"solutions", std::to_string(res.solutions.size())}};
    std::ostringstream plain;
    plain << "scanned n in [" << res.lo << ", " << res.hi << "]: " << res.candidates
          << " candidates, " << res.solutions.size() << " factorial hits\n"
          << "misses: " << res.undershoot << " undershoot, " << res.overshoot << " overshoot\n";
    for (const auto& [m, u] : res.solutions)
        plain << "  SOLUTION m=" << m << " u=" << u.str() << "\n";
    out.plain = plain.str();
    return out;
}

inline command_output search_general_cmd(std::uint64_t m_max) {
    command_output out;
    const search_outcome res = search_general(m_max);
    out.result["lo"] = res.lo;
    out.result["hi"] = res.hi;
    out.result["candidates"] = res.candidates;
    out.result["undershoot"] = res.undershoot;
    out.result["overshoot"] = res.overshoot;
    json sols = json::array();
    const auto& classical = classical_brocard_solutions();
    for (const auto& [m, u] : res.solutions) {
        const bool known =
            std::find(classical.begin(), classical.end(),
                      std::pair<std::uint64_t, bigint>(m, u)) != classical.end();
        sols.push_back({{"m", m}, {"u", u.str()}, {"classical", known}});
        if (!known)
            out.discrepancies.push_back({{"kind", "new_solution"}, {"m", m}, {"u", u.str()}});
    }
    out.result["solutions"] = std::move(sols);
    out.csv_header = {"m", "u", "classical"};
    for (const auto& s : out.result["solutions"])
        out.csv_rows.push_back({s["m"].dump(), std::string(s["u"]),
                                s["classical"].get<bool>() ? "1" : "0"});
    std::ostringstream plain;
    plain << "scanned m in [" << res.lo << ", " << res.hi << "]: " << res.solutions.size()
          << " squares among " << res.candidates << " candidates\n";
    for (const auto& [m, u] : res.solutions) plain << "  m=" << m << " u=" << u.str() << "\n";
    plain << "misses: " << res.undershoot << " undershoot, " << res.overshoot << " overshoot\n";
    out.plain = plain.str();
    return out;
}

inline command_output errata(std::uint64_t i_max, unsigned cap) {
    command_output out;
    const errata_report rep = build_errata(i_max, cap);
    out.result["i_max"] = rep.i_max;
    json rows = json::array();
    for (const auto& r : rep.a_rows)
        rows.push_back({{"class", r.klass},
                        {"printed", r.printed},
                        {"corrected", r.corrected},
                        {"note", r.note},
                        {"printed_disagreements", r.printed_disagreements}});
    out.result["a_table"] = std::move(rows);
    auto sweep_json = [](const discrepancy_report& r) {
        return json{{"target", to_string(r.target)},
                    {"table", to_string(r.variant)},
                    {"checked", r.checked},
                    {"mismatches", r.mismatches},
                    {"gaps", r.gaps},
                    {"duplicates", r.duplicates}};
    };
    out.result["sweeps"] = {sweep_json(rep.a_literal), sweep_json(rep.a_corrected),
                            sweep_json(rep.minus_corrected), sweep_json(rep.plus_corrected)};
    out.result["product_note"] = rep.product_note;
    out.result["corrected_clean"] = rep.corrected_clean();

    for (const auto& r : {rep.a_corrected, rep.minus_corrected, rep.plus_corrected})
        for (const auto& e : r.entries) out.discrepancies.push_back(detail::discrepancy_json(e));

    out.csv_header = {"class", "printed", "corrected", "note", "printed_disagreements"};
    for (const auto& r : rep.a_rows)
        out.csv_rows.push_back({detail::csv_escape(r.klass), detail::csv_escape(r.printed),
                                detail::csv_escape(r.corrected), detail::csv_escape(r.note),
                                std::to_string(r.printed_disagreements)});

    std::ostringstream plain;
    plain << "adjudicated v3(a_i) table, oracle sweep on [1, " << rep.i_max << "]:\n";
    for (const auto& r : rep.a_rows) {
        plain << "  " << std::left << std::setw(26) << r.klass << " printed: " << std::setw(14)
              << r.printed << " adopted: " << std::setw(14) << r.corrected << " [" << r.note;
        if (r.printed_disagreements)
            plain << "; " << r.printed_disagreements << " indices disagree as printed";
        plain << "]\n";
    }
    plain << "sweeps: a/literal " << rep.a_literal.mismatches << " mismatches, " << rep.a_literal.gaps
          << " gaps, " << rep.a_literal.duplicates << " duplicates; a/corrected "
          << rep.a_corrected.entries.size() << "; a-1/corrected "
          << rep.minus_corrected.entries.size() << "; a+1/corrected "
          << rep.plus_corrected.entries.size() << "\n"
          << rep.product_note << "\n";
    out.plain = plain.str();
    return out;
}

} // namespace handlers

/// Parse and run one invocation. Returns the process exit code: 0 clean,
/// 1 when the discrepancy list is non-empty, 2 on usage errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"verification toolkit for the cubic recurrence a(n) = a(n-1) + a(n-3)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version_string));

    std::string format = "plain";
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    auto* seed_opt = app.add_option("--seed", seed, "reserved; accepted and echoed, not used");
    app.add_flag("--quiet", quiet, "suppress report output, keep exit codes");

    auto* c_seq = app.add_subcommand("seq", "print sequence terms");
    std::uint64_t seq_from = 0, seq_to = 0, seq_mod = 0;
    c_seq->add_option("--from", seq_from)->required();
    c_seq->add_option("--to", seq_to)->required();
    auto* seq_mod_opt = c_seq->add_option("--mod", seq_mod);

    auto* c_val = app.add_subcommand("val", "evaluate a valuation table at one index");
    std::string val_target, val_law = "corrected";
    std::uint64_t val_index = 0;
    bool val_oracle = false;
    c_val->add_option("--target", val_target)->required()->check(CLI::IsMember({"a", "a-1", "a+1"}));
    c_val->add_option("--index", val_index)->required();
    c_val->add_option("--law", val_law)->check(CLI::IsMember({"literal", "corrected"}));
    c_val->add_flag("--oracle", val_oracle);

    auto* c_vlaws = app.add_subcommand("verify-laws", "sweep a valuation table against the oracle");
    std::string vl_target, vl_table;
    std::uint64_t vl_max = 0;
    unsigned vl_cap = 8;
    c_vlaws->add_option("--target", vl_target)->required()->check(CLI::IsMember({"a", "a-1", "a+1"}));
    c_vlaws->add_option("--max", vl_max)->required();
    c_vlaws->add_option("--table", vl_table)->required()->check(CLI::IsMember({"literal", "corrected"}));
    c_vlaws->add_option("--cap", vl_cap);

    auto* c_vcong = app.add_subcommand("verify-congruences", "check the residue families");
    std::string vc_prop;
    std::uint32_t vc_smax = 0, vc_nmax = 0;
    c_vcong->add_option("--prop", vc_prop)->required()->check(CLI::IsMember({"3.3", "3.4"}));
    c_vcong->add_option("--s-max", vc_smax)->required();
    c_vcong->add_option("--n-max", vc_nmax)->required();

    auto* c_cor = app.add_subcommand("corollary", "check the divisibility classes");
    std::uint64_t cor_max = 0;
    c_cor->add_option("--max", cor_max)->required();

    auto* c_growth = app.add_subcommand("growth", "certify the growth envelope");
    std::uint64_t growth_max = 0;
    c_growth->add_option("--max", growth_max)->required();

    auto* c_bounds = app.add_subcommand("bounds", "derive the search cutoffs");

    auto* c_search = app.add_subcommand("search", "scan a_n^2 - 1 for factorials");
    std::uint64_t search_nmax = 0;
    unsigned search_jobs = 1;
    c_search->add_option("--n-max", search_nmax)->required();
    c_search->add_option("--jobs", search_jobs);

    auto* c_sg = app.add_subcommand("search-general", "scan m! + 1 for squares");
    std::uint64_t sg_mmax = 0;
    c_sg->add_option("--m-max", sg_mmax)->required();

    auto* c_err = app.add_subcommand("errata", "adjudicate the printed tables");
    std::uint64_t err_max = 100000;
    unsigned err_cap = 8;
    c_err->add_option("--max", err_max);
    c_err->add_option("--cap", err_cap);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("narayana-verify");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version_string << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    command_output co;
    std::string command;
    json params = json::object();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (*c_seq) {
            command = "seq";
            params = {{"from", seq_from}, {"to", seq_to}};
            if (*seq_mod_opt) params["mod"] = seq_mod;
            co = handlers::seq(seq_from, seq_to, seq_mod, seq_mod_opt->count() > 0);
        } else if (*c_val) {
            command = "val";
            params = {{"target", val_target}, {"index", val_index}, {"law", val_law},
                      {"oracle", val_oracle}};
            co = handlers::val(val_target, val_index, val_law, val_oracle);
        } else if (*c_vlaws) {
            command = "verify-laws";
            params = {{"target", vl_target}, {"max", vl_max}, {"table", vl_table}, {"cap", vl_cap}};
            co = handlers::verify_laws(vl_target, vl_max, vl_table, vl_cap);
        } else if (*c_vcong) {
            command = "verify-congruences";
            params = {{"prop", vc_prop}, {"s_max", vc_smax}, {"n_max", vc_nmax}};
            co = handlers::verify_congruences_cmd(vc_prop, vc_smax, vc_nmax);
        } else if (*c_cor) {
            command = "corollary";
            params = {{"max", cor_max}};
            co = handlers::corollary(cor_max);
        } else if (*c_growth) {
            command = "growth";
            params = {{"max", growth_max}};
            co = handlers::growth(growth_max);
        } else if (*c_bounds) {
            command = "bounds";
            co = handlers::bounds();
        } else if (*c_search) {
            command = "search";
            params = {{"n_max", search_nmax}, {"jobs", search_jobs}};
            co = handlers::search(search_nmax, search_jobs);
        } else if (*c_sg) {
            command = "search-general";
            params = {{"m_max", sg_mmax}};
            co = handlers::search_general_cmd(sg_mmax);
        } else if (*c_err) {
            command = "errata";
            params = {{"max", err_max}, {"cap", err_cap}};
            co = handlers::errata(err_max, err_cap);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (seed_opt->count() > 0) params["seed"] = seed;

    const int exit_code = co.discrepancies.empty() ? 0 : 1;
    if (quiet) return exit_code;

    if (format == "json") {
        json report;
        report["command"] = command;
        report["params"] = params;
        report["result"] = co.result;
        report["discrepancies"] = co.discrepancies;
        report["elapsed_ms"] = elapsed;
        report["version"] = version_string;
        out << report.dump(2) << "\n";
    } else if (format == "csv") {
        std::string line;
        for (std::size_t k = 0; k < co.csv_header.size(); ++k) {
            if (k) line += ",";
            line += detail::csv_escape(co.csv_header[k]);
        }
        out << line << "\n";
        for (const auto& row : co.csv_rows) {
            line.clear();
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (k) line += ",";
                line += detail::csv_escape(row[k]);
            }
            out << line << "\n";
        }
    } else {
        out << "# " << command << " (" << version_string << ")\n";
        out << co.plain;
        if (!co.discrepancies.empty())
            out << "discrepancies: " << co.discrepancies.size() << "\n";
        out << "elapsed: " << std::fixed << std::setprecision(1) << elapsed << " ms\n";
    }
    return exit_code;
}

} // namespace narayana::cli
