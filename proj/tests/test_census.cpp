#include "chowcensus/census.hpp"
#include "chowcensus/report.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace chowcensus;

namespace {

// Independent oracle for the conic census over F_q: line products are counted
// from the line set, the relatively irreducible classes are the norms of the
// non-rational lines of the quadratic extension, and the remainder must be
// the smooth conics.
struct ConicOracle {
    std::uint64_t reducible, rel_irred, abs_irred;
};

ConicOracle conic_census_oracle(std::uint64_t q) {
    std::uint64_t p, m;
    REQUIRE(prime_power_decompose(q, p, m));
    const Field& F = make_field(p, m);
    const Field& K = make_field(p, 2 * m);
    FormIndexer lines(F, 3, 1);
    FormIndexer quads(F, 3, 2);
    std::set<std::uint64_t> products;
    const std::uint64_t nl = lines.class_count();
    for (std::uint64_t i = 0; i < nl; ++i)
        for (std::uint64_t j = i; j < nl; ++j)
            products.insert(quads.encode(lines.form(i) * lines.form(j)));
    FormIndexer klines(K, 3, 1);
    std::set<std::uint64_t> norms;
    for (std::uint64_t i = 0; i < klines.class_count(); ++i) {
        HomogeneousForm l = klines.form(i);
        if (l.galois_conjugate(m) == l) continue;  // rational line
        norms.insert(quads.encode(norm_product(l, F)));
    }
    std::uint64_t total = quads.class_count();
    return {products.size(), norms.size(),
            total - products.size() - norms.size()};
}

}  // namespace

TEST_CASE("conic census against the construction oracle") {
    for (std::uint64_t q : {2, 3, 5}) {
        CAPTURE(q);
        ConicOracle oracle = conic_census_oracle(q);
        CensusReport census = classify_census(2, q);
        CHECK(census.reducible == oracle.reducible);
        CHECK(census.rel_irred == oracle.rel_irred);
        CHECK(census.abs_irred == oracle.abs_irred);
        CHECK(BigInt(census.abs_irred) == smooth_conic_count(q).value);
        // line powers are exactly the p_2(q) classes d*L
        CHECK(BigInt(census.line_powers) == proj_space_count(2, q).value);
    }
}

TEST_CASE("frozen conic census values") {
    auto r22 = classify_census(2, 2);
    CHECK(r22.reducible == 28);   // products of the 7 rational lines
    CHECK(r22.rel_irred == 7);    // conjugate line pairs over F4
    CHECK(r22.abs_irred == 28);   // q^5 - q^2
    auto r23 = classify_census(2, 3);
    CHECK(r23.reducible == 91);   // C(13,2) + 13
    CHECK(r23.rel_irred == 39);   // (91 - 13)/2 conjugate pairs over F9
    CHECK(r23.abs_irred == 234);
}

TEST_CASE("classification partition sums to the class total") {
    for (auto [d, q] : {std::pair<int, std::uint64_t>{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
        CensusReport r = classify_census(d, q);
        CHECK(BigInt(r.reducible) + r.rel_irred + r.abs_irred == r.total);
        CHECK(r.total == plane_curve_space_count(d, q).value);
        for (auto [ell, cnt] : r.rel_by_ell) {
            CHECK(d % ell == 0);
            CHECK(is_prime_u64(ell));
        }
    }
}

TEST_CASE("census classifier agrees with per-form classification") {
    const auto& cl = PlaneCensusClassifier::get(3, 3);
    // sampled cross-check of the set-based classifier against trial division
    std::uint64_t step = cl.total() / 997;
    for (std::uint64_t i = 0; i < cl.total(); i += step + 1) {
        int ell = 0;
        FormClass k = cl.classify_index(i, &ell);
        IrreducibilityClass c = classify(cl.indexer().form(i));
        CHECK(c.kind == k);
        if (k == FormClass::RelativelyIrreducible) CHECK(c.splitting_degree == ell);
    }
}

TEST_CASE("worker partitioning does not change the report") {
    CensusReport base = classify_census(3, 3, 1);
    for (int w : {2, 3, 5}) {
        CensusReport r = classify_census(3, 3, w);
        CHECK(r == base);
        CHECK(census_report_bytes(r) == census_report_bytes(base));
    }
}

TEST_CASE("degree-1 census: every class is a line") {
    CensusReport r = classify_census(1, 2);
    CHECK(r.total == 7);
    CHECK(r.abs_irred == 7);
    CHECK(r.line_powers == 7);
}

TEST_CASE("sampled census") {
    CensusReport a = sample_census(2, 2, 2000, 7);
    CensusReport b = sample_census(2, 2, 2000, 7);
    CHECK(a == b);
    CensusReport c = sample_census(2, 2, 2000, 8);
    CHECK_FALSE(a == c);  // different seed, different draws
    CHECK(a.reducible + a.rel_irred + a.abs_irred == 2000);
    // the Wilson interval covers the exact fraction 28/63
    double exact = 28.0 / 63.0;
    CHECK(a.wilson.at("reducible").lo <= exact);
    CHECK(exact <= a.wilson.at("reducible").hi);
    CHECK_THROWS_AS(sample_census(2, 2, 10, 1), std::invalid_argument);  // N >= 1000
}

TEST_CASE("pair-dedup planar census") {
    CHECK(planar_in_Pr_census(2, 3, 2).value == 875);
    CHECK(planar_in_Pr_census(1, 3, 2).value == 35);  // every degree-1 class is a line
    CHECK(planar_in_Pr_census(2, 3, 3).value == planar_curves_count(2, 3, 3).value);
    CHECK(planar_in_Pr_census(3, 3, 2).value == planar_curves_count(3, 3, 2).value);
    CHECK_THROWS_AS(planar_in_Pr_census(2, 4, 2), std::invalid_argument);  // r = 3 only
    CHECK_THROWS_AS(planar_in_Pr_census(9, 3, 5), std::invalid_argument);  // pair cap
}

TEST_CASE("point statistics") {
    for (std::uint64_t q : {2, 3}) {
        PointStats st = point_statistics(2, q, FormClass::AbsolutelyIrreducible);
        CHECK(st.histogram.size() == 1);
        CHECK(st.histogram.count(q + 1) == 1);
        CHECK(st.max_deviation == 0);
        CHECK(st.mean == BigRat(q + 1));
    }
    PointStats red = point_statistics(2, 2, FormClass::FqReducible);
    CHECK(red.histogram.size() == 2);
    CHECK(red.histogram.at(3) == 7);   // double lines
    CHECK(red.histogram.at(5) == 21);  // distinct line pairs
    CHECK(red.population == 28);
    CHECK(red.mean == BigRat(BigInt(3 * 7 + 5 * 21), BigInt(28)));
}

TEST_CASE("bound verification report") {
    CheckReport rep = verify_bounds(3, 3, 2);
    CHECK(rep.ok());
    bool saw_interval = false, saw_equality = false;
    for (const auto& l : rep.lines) {
        if (l.id == "plane_reducible_in_interval") saw_interval = l.status == "PASS";
        if (l.id == "planar_count_formula_equals_census") saw_equality = l.status == "PASS";
    }
    CHECK(saw_interval);
    CHECK(saw_equality);

    CheckReport rep43 = verify_bounds(4, 3, 2);
    CHECK(rep43.ok());
    bool saw_vacuous = false;
    for (const auto& l : rep43.lines)
        if (l.id == "prob_reducible_interval" && l.status == "VACUOUS") saw_vacuous = true;
    CHECK(saw_vacuous);

    CHECK_THROWS_AS(verify_bounds(99, 3, 2), std::invalid_argument);  // census cap
}
