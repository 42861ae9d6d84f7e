#pragma once

// Verification suites: one per acceptance criterion, each producing a
// CheckReport with one line per sub-check.  The CLI `verify` subcommand and
// the acceptance test binary both run these.

#include "chowcensus/census.hpp"
#include "chowcensus/report.hpp"

#include <functional>
#include <sstream>

namespace chowcensus {

// Rigorous rational bracket of e from the factorial series: the tail after
// n terms is below 2/(n+1)!.
inline std::pair<BigRat, BigRat> euler_bracket(int terms = 130) {
    BigRat s = 0;
    BigInt f = 1;
    for (int k = 0; k <= terms; ++k) {
        if (k) f *= k;
        s += BigRat(BigInt(1), f);
    }
    return {s, s + BigRat(BigInt(2), f * (terms + 1))};
}

// Directionally rounded to the given number of decimals (lo down, hi up).
inline std::pair<BigRat, BigRat> euler_bracket_rounded(int decimals) {
    auto [lo, hi] = euler_bracket();
    BigInt scale = big_pow(BigInt(10), static_cast<std::uint64_t>(decimals));
    BigRat lo_scaled = lo * BigRat(scale);
    BigInt lo_n = boost::multiprecision::numerator(lo_scaled) /
                  boost::multiprecision::denominator(lo_scaled);
    BigRat hi_scaled = hi * BigRat(scale);
    BigInt q, r;
    boost::multiprecision::divide_qr(boost::multiprecision::numerator(hi_scaled),
                                     boost::multiprecision::denominator(hi_scaled), q, r);
    BigInt hi_n = (r == 0) ? q : q + 1;
    return {BigRat(lo_n, scale), BigRat(hi_n, scale)};
}

inline BigRat parse_scientific(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty decimal rendering");
    std::size_t epos = s.find('e');
    if (epos == std::string::npos) return BigRat(BigInt(s));
    std::string mant = s.substr(0, epos);
    long long e10 = std::stoll(s.substr(epos + 1));
    std::size_t dot = mant.find('.');
    long long frac_digits = 0;
    if (dot != std::string::npos) {
        frac_digits = static_cast<long long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    BigRat v{BigInt(mant)};
    long long shift = e10 - frac_digits;
    if (shift >= 0) return v * BigRat(big_pow(BigInt(10), static_cast<std::uint64_t>(shift)));
    return v / BigRat(big_pow(BigInt(10), static_cast<std::uint64_t>(-shift)));
}

// ----- criterion 1: exact planar counting ------------------------------------

inline CheckReport suite_lemma_counting() {
    CheckReport rep;
    rep.name = "lemma-counting";
    BigInt v232 = planar_curves_count(2, 3, 2).value;
    rep.add("planar_count_2_3_2_equals_875", v232 == 875,
            "formula=" + v232.convert_to<std::string>());
    struct Cell { int d, r; std::uint64_t q; };
    for (Cell c : {Cell{2, 3, 2}, Cell{2, 3, 3}, Cell{3, 3, 2}}) {
        BigInt formula = planar_curves_count(c.d, c.r, c.q).value;
        BigInt census = planar_in_Pr_census(c.d, c.r, c.q).value;
        std::ostringstream id;
        id << "planar_formula_equals_pair_census_d" << c.d << "_r" << c.r << "_q" << c.q;
        rep.add(id.str(), formula == census,
                "formula=" + formula.convert_to<std::string>() +
                    " census=" + census.convert_to<std::string>());
    }
    return rep;
}

// ----- criterion 2: census classification -------------------------------------

inline CheckReport suite_census_classification() {
    CheckReport rep;
    rep.name = "census-classification";
    auto r22 = classify_census(2, 2);
    rep.add("census_2_2_counts", r22.reducible == 28 && r22.rel_irred == 7 && r22.abs_irred == 28,
            "got " + std::to_string(r22.reducible) + "/" + std::to_string(r22.rel_irred) + "/" +
                std::to_string(r22.abs_irred));
    auto r23 = classify_census(2, 3);
    rep.add("census_2_3_counts", r23.reducible == 91 && r23.rel_irred == 39 && r23.abs_irred == 234,
            "got " + std::to_string(r23.reducible) + "/" + std::to_string(r23.rel_irred) + "/" +
                std::to_string(r23.abs_irred));
    for (std::uint64_t q : {2, 3, 5}) {
        auto r = classify_census(2, q);
        BigInt expect = smooth_conic_count(q).value;
        rep.add("abs_irred_conics_q" + std::to_string(q), BigInt(r.abs_irred) == expect,
                "census=" + std::to_string(r.abs_irred) + " formula=" +
                    expect.convert_to<std::string>());
    }
    return rep;
}

// ----- criterion 3: plane reducibility bounds ----------------------------------

inline CheckReport suite_plane_reducible() {
    CheckReport rep;
    rep.name = "plane-reducible";
    struct Cell { int d; std::uint64_t q; };
    for (Cell c : {Cell{3, 2}, Cell{3, 3}, Cell{3, 5}, Cell{4, 2}, Cell{4, 3}, Cell{5, 2}}) {
        auto census = classify_census(c.d, c.q);
        BoundInterval iv = plane_reducible_interval(c.d, c.q);
        BigRat red{BigInt(census.reducible)};
        bool pass = red >= *iv.lower.exact_value() && red <= *iv.upper.exact_value();
        rep.add("plane_reducible_d" + std::to_string(c.d) + "_q" + std::to_string(c.q), pass,
                "count=" + std::to_string(census.reducible) + " in [" + iv.lower.decimal(6) +
                    ", " + iv.upper.decimal(6) + "]");
    }
    return rep;
}

// ----- criterion 4: codimension closed form -------------------------------------

inline CheckReport suite_codim() {
    CheckReport rep;
    rep.name = "codim";
    std::uint64_t cells = 0, failures = 0;
    std::string first_fail;
    for (int r = 3; r <= 10; ++r) {
        for (int d = 4 * r - 8; d <= 300; ++d) {
            ++cells;
            try {
                reducible_codim(d, r);  // throws if min u(k) != closed form
            } catch (const std::exception& e) {
                ++failures;
                if (first_fail.empty())
                    first_fail = "(d=" + std::to_string(d) + ",r=" + std::to_string(r) + "): " + e.what();
            }
        }
    }
    rep.add("codim_closed_form_equals_min_u", failures == 0,
            std::to_string(cells) + " cells" + (first_fail.empty() ? "" : "; first failure " + first_fail));
    auto c43 = reducible_codim(4, 3);
    rep.add("codim_4_3", c43.codim == 1 && c43.dim == 16,
            "codim=" + std::to_string(c43.codim) + " dim=" + std::to_string(c43.dim));
    auto c73 = reducible_codim(7, 3);
    rep.add("codim_7_3_u_table",
            c73.codim == 4 && c73.u_table.size() == 3 && c73.u_table[0].u == 4 &&
                c73.u_table[1].u == 7 && c73.u_table[2].u == 9 && c73.argmin_k == 1,
            "u={4,7,9} argmin=1 expected");
    return rep;
}

// ----- criterion 5: g-coefficient identities -------------------------------------

inline CheckReport suite_g_identities() {
    CheckReport rep;
    rep.name = "g-identities";
    std::uint64_t cells = 0, failures = 0;
    std::string first_fail;
    for (int d = 1; d <= 40; ++d)
        for (int r = 3; r <= 12; ++r) {
            ++cells;
            try {
                g_coeff(d, r);  // throws on identity disagreement or non-integrality
            } catch (const std::exception& e) {
                ++failures;
                if (first_fail.empty())
                    first_fail = "(d=" + std::to_string(d) + ",r=" + std::to_string(r) + "): " + e.what();
            }
        }
    rep.add("g_identities_agree_and_integral", failures == 0,
            std::to_string(cells) + " cells" + (first_fail.empty() ? "" : "; first failure " + first_fail));
    rep.add("g_values_r3", g_coeff(1, 3) == 3 && g_coeff(2, 3) == 6 && g_coeff(3, 3) == 10,
            "g_{1,3}=3, g_{2,3}=6, g_{3,3}=10");
    return rep;
}

// ----- criterion 6: Chow support recovery ----------------------------------------

inline CheckReport suite_chow_support(std::uint64_t seed = 20240601) {
    CheckReport rep;
    rep.name = "chow-support";
    for (std::uint64_t q : {2, 3}) {
        const Field& F = make_field(q == 2 ? 2 : 3, 1);
        auto lines = Line::all_lines(F, 3);
        for (std::uint64_t s : {1, 2}) {
            std::size_t bad = 0;
            for (const Line& L : lines) {
                if (support_points(line_chow_form(L), s) != L.points(s)) ++bad;
            }
            rep.add("line_support_q" + std::to_string(q) + "_s" + std::to_string(s), bad == 0,
                    std::to_string(lines.size()) + " lines, " + std::to_string(bad) + " mismatches");
        }
    }
    // 50 random two-line cycles: support equals the union of the lines' points
    std::size_t bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Field& F = make_field(trial % 2 ? 3 : 2, 1);
        auto lines = Line::all_lines(F, 3);
        std::uint64_t u1 = splitmix64(seed + 2 * trial), u2 = splitmix64(seed + 2 * trial + 1);
        const Line& a = lines[u1 % lines.size()];
        const Line& b = lines[u2 % lines.size()];
        if (a == b) continue;
        LineCycle cyc{{{a, 1}, {b, 1}}};
        auto sup = support_points(cycle_chow_form(cyc), 1);
        std::set<ProjPoint> expect;
        for (auto& P : a.points(1)) expect.insert(P);
        for (auto& P : b.points(1)) expect.insert(P);
        if (std::set<ProjPoint>(sup.begin(), sup.end()) != expect) ++bad;
    }
    rep.add("cycle_support_is_union", bad == 0, "50 random two-line cycles");
    return rep;
}

// ----- criterion 7: norm map and relative irreducibility ---------------------------

inline CheckReport suite_norm_rel_irr(std::uint64_t seed = 20240602) {
    CheckReport rep;
    rep.name = "norm-rel-irr";
    const Field& F2 = make_field(2, 1);
    const Field& F4 = make_field(2, 2);
    std::size_t chow_ok = 0, chow_total = 0, planar_ok = 0, planar_total = 0;
    std::uint64_t ctr = seed;
    auto next = [&ctr] { return splitmix64(ctr++); };
    while (chow_total < 50) {
        // random F4-line in P^3 whose Chow form is not F2-definable
        ProjPoint x(4), y(4);
        for (int i = 0; i < 4; ++i) x[i] = next() % 4;
        for (int i = 0; i < 4; ++i) y[i] = next() % 4;
        std::vector<std::vector<std::uint64_t>> m{x, y};
        if (rref(F4, m) != 2) continue;
        Line L(F4, m[0], m[1]);
        ChowForm cf = line_chow_form(L);
        if (&field_of_definition(cf) != &F4) continue;
        ++chow_total;
        ChowForm nm = norm_map(cf, F2);
        if (&field_of_definition(nm) == &F2 && nm.bidegree() == 2) ++chow_ok;
    }
    while (planar_total < 50) {
        // random ternary F4-linear form with a coefficient outside F2
        std::vector<std::uint32_t> c(3);
        for (int i = 0; i < 3; ++i) c[i] = static_cast<std::uint32_t>(next() % 4);
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
        HomogeneousForm l(F4, 3, 1, c);
        bool outside = false;
        for (std::uint32_t ci : l.coeffs())
            if (!F4.in_subfield(ci, 1)) outside = true;
        if (!outside) continue;
        ++planar_total;
        HomogeneousForm nrm = norm_product(l, F2);
        IrreducibilityClass cls = classify(nrm);
        if (cls.kind == FormClass::RelativelyIrreducible && cls.splitting_degree == 2) ++planar_ok;
    }
    rep.add("norm_map_descends_to_base", chow_ok == 50, std::to_string(chow_ok) + "/50");
    rep.add("planar_norms_classify_relatively_irreducible", planar_ok == 50,
            std::to_string(planar_ok) + "/50");
    return rep;
}

// ----- criterion 8: point statistics -----------------------------------------------

inline CheckReport suite_point_statistics() {
    CheckReport rep;
    rep.name = "point-statistics";
    for (std::uint64_t q : {2, 3, 5}) {
        auto st = point_statistics(2, q, FormClass::AbsolutelyIrreducible);
        bool pass = st.histogram.size() == 1 && st.histogram.count(q + 1) == 1 &&
                    st.max_deviation == 0 && BigInt(st.population) == smooth_conic_count(q).value;
        rep.add("conic_points_q" + std::to_string(q), pass,
                "population=" + std::to_string(st.population) + " all with q+1 points");
    }
    struct Cell { std::uint64_t q, bound; };
    for (Cell c : {Cell{3, 3}, Cell{5, 4}}) {  // floor((d-1)(d-2)sqrt(q)) for d=3
        auto st = point_statistics(3, c.q, FormClass::AbsolutelyIrreducible);
        rep.add("cubic_weil_deviation_q" + std::to_string(c.q), st.max_deviation <= c.bound,
                "max deviation=" + std::to_string(st.max_deviation) + " <= " +
                    std::to_string(c.bound));
    }
    return rep;
}

// ----- criterion 9: interval and rendering consistency ------------------------------

inline CheckReport suite_interval_consistency(std::uint64_t seed = 20240603) {
    CheckReport rep;
    rep.name = "interval-consistency";
    std::uint64_t ctr = seed;
    auto next = [&ctr] { return splitmix64(ctr++); };
    const std::vector<std::uint64_t> qs = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27,
                                           32, 49, 64, 81, 121, 125, 128, 243, 256, 1024};

    auto interval_ok = [](const BoundInterval& iv) {
        if (iv.lower.is_zero()) return true;
        return compare_scaled(iv.lower, iv.upper) <= 0;
    };

    std::uint64_t trials = 0, bad_interval = 0, bad_exponent = 0;
    while (trials < 10000) {
        int r = 3 + static_cast<int>(next() % 4);
        std::uint64_t q = qs[next() % qs.size()];
        int pick = static_cast<int>(next() % 3);
        if (pick == 0) {
            int d = 4 * r - 8 + static_cast<int>(next() % 20);
            if (d < 2) continue;
            ++trials;
            if (!interval_ok(prob_reducible_interval(d, r, q))) ++bad_interval;
        } else if (pick == 1) {
            int d = 4 * r - 8 + static_cast<int>(next() % 20);
            if (d < 2) continue;
            ++trials;
            RelIrrReport rel = rel_irr_interval(d, r, q);
            const long long b = chow_dim_value(d, r);
            for (const auto& reg : rel.regimes) {
                if (!interval_ok(reg.count) || !interval_ok(reg.probability)) ++bad_interval;
                if (reg.probability.q_exponent != reg.count.q_exponent - b) ++bad_exponent;
            }
        } else {
            int d = 2 + static_cast<int>(next() % 39);
            ++trials;
            if (!interval_ok(plane_reducible_interval(d, q))) ++bad_interval;
        }
    }
    rep.add("intervals_lower_le_upper", bad_interval == 0,
            "10000 randomized (d,r,q) draws, " + std::to_string(bad_interval) + " violations");
    rep.add("probability_exponent_identity", bad_exponent == 0,
            "probability exponent = count exponent - b on every drawn regime");

    // UP/DOWN renderings: bracket the represented value, stay within 1e-6 of
    // it, and genuinely bracket the e-valued bound between rigorous rational
    // e-brackets from the factorial series.
    auto [e_lo, e_hi] = euler_bracket_rounded(30);
    bool e_consts_ok = euler_approx(Round::Down) < e_lo && e_hi < euler_approx(Round::Up);
    rep.add("e_constants_bracket_series", e_consts_ok,
            "directed e rationals enclose the 200-digit factorial-series bracket");
    std::uint64_t render_bad = 0, bracket_bad = 0, render_trials = 0;
    for (int t = 0; t < 200; ++t) {
        // random exact rational power with exponent <= 1e4
        BigRat coeff(BigInt(1 + next() % 1000), BigInt(1 + next() % 1000));
        BigRat base(BigInt(2 + next() % 50), BigInt(1 + next() % 20));
        std::uint64_t e = 1 + next() % 10000;
        if (std::abs(log10_rat(base)) * static_cast<double>(e) > 15000) continue;
        ++render_trials;
        ScaledPower up(coeff, base, BigInt(e), Round::Up);
        ScaledPower down(coeff, base, BigInt(e), Round::Down);
        BigRat exact = *up.exact_value(40000);
        BigRat pu = parse_scientific(up.decimal(10, 40000));
        BigRat pd = parse_scientific(down.decimal(10, 40000));
        if (!(pd <= exact && exact <= pu)) ++render_bad;
        if ((pu - exact) > exact / 1000000 || (exact - pd) > exact / 1000000) ++render_bad;
    }
    rep.add("directed_renderings_bracket_exact_value", render_bad == 0,
            std::to_string(render_trials) + " rational powers, 10-digit renderings within 1e-6");
    for (int t = 0; t < 12; ++t) {
        int d = 1 + static_cast<int>(next() % 6);
        int r = 3;
        ScaledPower up = chow_degree_upper(d, r, Round::Up);
        ScaledPower down = chow_degree_upper(d, r, Round::Down);
        if (up.exponent() > 10000) continue;
        std::uint64_t E = up.exponent().convert_to<std::uint64_t>();
        BigRat true_lo = rat_pow(BigRat(2) * e_lo * d, E);
        BigRat true_hi = rat_pow(BigRat(2) * e_hi * d, E);
        BigRat vd = *down.exact_value(100000), vu = *up.exact_value(100000);
        if (!(vd <= true_lo && true_hi <= vu)) ++bracket_bad;
    }
    rep.add("up_down_bracket_true_bound", bracket_bad == 0,
            "directed powers enclose the series-valued bound");
    return rep;
}

// ----- criterion 10: determinism ------------------------------------------------------

inline CheckReport suite_determinism() {
    CheckReport rep;
    rep.name = "determinism";
    for (auto [d, q] : exhaustive_grid()) {
        std::string base = census_report_bytes(classify_census(d, q, 1));
        bool same = true;
        for (int w : {4, 8})
            if (census_report_bytes(classify_census(d, q, w)) != base) same = false;
        rep.add("census_bytes_d" + std::to_string(d) + "_q" + std::to_string(q), same,
                "workers {1,4,8} byte-identical");
    }
    return rep;
}

// ----- registry ------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, std::function<CheckReport()>>>& all_suites() {
    static const std::vector<std::pair<std::string, std::function<CheckReport()>>> suites = {
        {"lemma-counting", [] { return suite_lemma_counting(); }},
        {"census-classification", [] { return suite_census_classification(); }},
        {"plane-reducible", [] { return suite_plane_reducible(); }},
        {"codim", [] { return suite_codim(); }},
        {"g-identities", [] { return suite_g_identities(); }},
        {"chow-support", [] { return suite_chow_support(); }},
        {"norm-rel-irr", [] { return suite_norm_rel_irr(); }},
        {"weil", [] { return suite_point_statistics(); }},
        {"intervals", [] { return suite_interval_consistency(); }},
        {"determinism", [] { return suite_determinism(); }},
    };
    return suites;
}

}  // namespace chowcensus
