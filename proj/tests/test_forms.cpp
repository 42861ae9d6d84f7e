#include "chowcensus/forms.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace chowcensus;

namespace {

std::uint64_t rng_state = 0xfeedface12345678ull;
std::uint64_t rnd() {
    rng_state += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = rng_state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

HomogeneousForm sum(const Field& F, std::initializer_list<HomogeneousForm> terms) {
    auto it = terms.begin();
    std::vector<std::uint32_t> c = it->coeffs();
    int n = it->nvars(), d = it->degree();
    for (++it; it != terms.end(); ++it)
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = static_cast<std::uint32_t>(F.add(c[i], it->coeffs()[i]));
    return HomogeneousForm(F, n, d, std::move(c));
}

HomogeneousForm random_form(const Field& F, int n, int d) {
    FormIndexer ix(F, n, d);
    return ix.form(rnd() % ix.class_count());
}

}  // namespace

TEST_CASE("evaluation") {
    const Field& F2 = make_field(2, 1);
    const Field& F4 = make_field(2, 2);
    auto X0X1 = HomogeneousForm::monomial(F2, 3, {1, 1, 0});
    CHECK(X0X1.evaluate({F2.one(), F2.one(), F2.zero()}).idx == 1);

    // X0^2 + X0X1 + X1^2 vanishes at (w, 1, 0) over F4
    auto conj = sum(F2, {HomogeneousForm::monomial(F2, 3, {2, 0, 0}),
                         HomogeneousForm::monomial(F2, 3, {1, 1, 0}),
                         HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    CHECK(conj.evaluate({F4.element(2), F4.one(), F4.zero()}).is_zero());

    CHECK_THROWS_AS(X0X1.evaluate({F2.one(), F2.one()}), std::invalid_argument);
}

TEST_CASE("homogeneity under scaling") {
    const Field& F9 = make_field(3, 2);
    for (int trial = 0; trial < 200; ++trial) {
        int d = 1 + static_cast<int>(rnd() % 4);
        HomogeneousForm f = random_form(F9, 3, d);
        std::uint64_t lam = 1 + rnd() % 8;
        std::vector<Element> pt, scaled;
        for (int i = 0; i < 3; ++i) {
            std::uint64_t x = rnd() % 9;
            pt.push_back(F9.element(x));
            scaled.push_back(F9.element(F9.mul(lam, x)));
        }
        Element lhs = f.evaluate(scaled);
        Element rhs = F9.element(F9.mul(F9.pow(lam, d), f.evaluate(pt).idx));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("multiplication") {
    const Field& F2 = make_field(2, 1);
    const Field& F4 = make_field(2, 2);
    auto X0 = HomogeneousForm::monomial(F2, 3, {1, 0, 0});
    auto X1 = HomogeneousForm::monomial(F2, 3, {0, 1, 0});
    CHECK(X0 * X1 == HomogeneousForm::monomial(F2, 3, {1, 1, 0}));

    // (X0 + w X1)(X0 + w^2 X1) = X0^2 + X0X1 + X1^2 over F4
    HomogeneousForm l1(F4, 3, 1, {1, 2, 0});
    HomogeneousForm l2(F4, 3, 1, {1, 3, 0});
    auto conj = sum(F2, {HomogeneousForm::monomial(F2, 3, {2, 0, 0}),
                         HomogeneousForm::monomial(F2, 3, {1, 1, 0}),
                         HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    CHECK(l1 * l2 == conj.embedded(F4));

    // evaluation is multiplicative
    const Field& F3 = make_field(3, 1);
    for (int trial = 0; trial < 200; ++trial) {
        HomogeneousForm f = random_form(F3, 3, 1 + static_cast<int>(rnd() % 2));
        HomogeneousForm g = random_form(F3, 3, 1 + static_cast<int>(rnd() % 2));
        std::vector<Element> pt;
        for (int i = 0; i < 3; ++i) pt.push_back(F3.element(rnd() % 3));
        CHECK((f * g).evaluate(pt) == Element{&F3, F3.mul(f.evaluate(pt).idx, g.evaluate(pt).idx)});
    }
    CHECK_THROWS_AS(X0 * HomogeneousForm::monomial(F2, 2, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(X0 * HomogeneousForm::monomial(F4, 3, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("factorization by trial division") {
    const Field& F2 = make_field(2, 1);
    const Field& F4 = make_field(2, 2);
    auto X0X1 = HomogeneousForm::monomial(F2, 3, {1, 1, 0});
    auto fac = factor(X0X1, F2);
    REQUIRE(fac.factors.size() == 2);
    CHECK(fac.factors[0].second == 1);
    CHECK(fac.factors[1].second == 1);
    CHECK(fac.product() == X0X1);

    auto conj = sum(F2, {HomogeneousForm::monomial(F2, 3, {2, 0, 0}),
                         HomogeneousForm::monomial(F2, 3, {1, 1, 0}),
                         HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    auto f2 = factor(conj, F2);
    CHECK(f2.total_multiplicity() == 1);  // irreducible over F2
    auto f4 = factor(conj, F4);
    REQUIRE(f4.factors.size() == 2);  // conjugate lines over F4
    CHECK(f4.product() == conj.embedded(F4));

    CHECK_THROWS_AS(factor(HomogeneousForm::monomial(F2, 4, {1, 1, 1, 1}), F2),
                    std::invalid_argument);  // quaternary unsupported
    CHECK_THROWS_AS(factor(random_form(F2, 3, 7), F2), std::invalid_argument);  // degree cap
    CHECK_THROWS_AS(factor(conj.embedded(F4), F2), std::invalid_argument);  // not embeddable
}

TEST_CASE("construct-then-factor round trips") {
    const Field& F3 = make_field(3, 1);
    const auto& quad_irr = irreducible_forms(F3, 3, 2);
    FormIndexer lines(F3, 3, 1);
    for (int trial = 0; trial < 100; ++trial) {
        HomogeneousForm l1 = lines.form(rnd() % lines.class_count());
        HomogeneousForm l2 = lines.form(rnd() % lines.class_count());
        const HomogeneousForm& g = quad_irr[rnd() % quad_irr.size()];
        HomogeneousForm prod = l1 * l2 * g;
        auto fac = factor(prod, F3);
        CHECK(fac.product() == prod);
        CHECK(fac.total_multiplicity() == 3);
        std::multiset<std::vector<std::uint32_t>> expect{l1.coeffs(), l2.coeffs(), g.coeffs()};
        std::multiset<std::vector<std::uint32_t>> got;
        for (auto& [f, m] : fac.factors)
            for (int i = 0; i < m; ++i) got.insert(f.coeffs());
        CHECK(got == expect);
    }
}

TEST_CASE("factorization round trip over an exhaustive degree-3 census") {
    const Field& F2 = make_field(2, 1);
    FormIndexer ix(F2, 3, 3);
    for (std::uint64_t i = 0; i < ix.class_count(); ++i) {
        HomogeneousForm f = ix.form(i);
        auto fac = factor(f, F2);
        REQUIRE(fac.product() == f);
        int degsum = 0;
        for (auto& [g, m] : fac.factors) degsum += g.degree() * m;
        REQUIRE(degsum == 3);
    }
}

TEST_CASE("classification") {
    const Field& F2 = make_field(2, 1);
    CHECK(classify(HomogeneousForm::monomial(F2, 3, {2, 0, 0})).kind == FormClass::FqReducible);
    auto conj = sum(F2, {HomogeneousForm::monomial(F2, 3, {2, 0, 0}),
                         HomogeneousForm::monomial(F2, 3, {1, 1, 0}),
                         HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    auto c = classify(conj);
    CHECK(c.kind == FormClass::RelativelyIrreducible);
    CHECK(c.splitting_degree == 2);
    auto conic = sum(F2, {HomogeneousForm::monomial(F2, 3, {1, 0, 1}),
                          HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    CHECK(classify(conic).kind == FormClass::AbsolutelyIrreducible);
    // degree-1 forms are absolutely irreducible by convention
    CHECK(classify(HomogeneousForm::monomial(F2, 3, {1, 0, 0})).kind ==
          FormClass::AbsolutelyIrreducible);
}

TEST_CASE("absolutely irreducible forms stay irreducible over prime extensions") {
    const Field& F3 = make_field(3, 1);
    FormIndexer ix(F3, 3, 3);
    const Field& F27 = make_field(3, 3);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        HomogeneousForm f = ix.form(rnd() % ix.class_count());
        if (classify(f).kind != FormClass::AbsolutelyIrreducible) continue;
        ++checked;
        if (checked > 40) break;  // full factoring over F27 is the slow oracle; sample it
        auto fac = factor(f, F27);
        CHECK(fac.total_multiplicity() == 1);
    }
    CHECK(checked > 0);
}

TEST_CASE("splitting degree divides the form degree") {
    const Field& F2 = make_field(2, 1);
    FormIndexer ix(F2, 3, 4);
    for (std::uint64_t i = 0; i < ix.class_count(); i += 7) {
        auto c = classify(ix.form(i));
        if (c.kind == FormClass::RelativelyIrreducible) CHECK(4 % c.splitting_degree == 0);
    }
}

TEST_CASE("powers of lines") {
    const Field& F2 = make_field(2, 1);
    auto X0 = HomogeneousForm::monomial(F2, 3, {1, 0, 0});
    auto lp = is_power_of_line(HomogeneousForm::monomial(F2, 3, {3, 0, 0}));
    REQUIRE(lp.has_value());
    CHECK(*lp == X0);
    CHECK_FALSE(is_power_of_line(HomogeneousForm::monomial(F2, 3, {1, 1, 0})));
    // (X0+X1)^2 = X0^2 + X1^2 in characteristic 2
    auto frob_sq = sum(F2, {HomogeneousForm::monomial(F2, 3, {2, 0, 0}),
                            HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    auto l = is_power_of_line(frob_sq);
    REQUIRE(l.has_value());
    CHECK(*l == sum(F2, {HomogeneousForm::monomial(F2, 3, {1, 0, 0}),
                         HomogeneousForm::monomial(F2, 3, {0, 1, 0})}));
}

TEST_CASE("projective point counts") {
    const Field& F2 = make_field(2, 1);
    const Field& F3 = make_field(3, 1);
    CHECK(point_count(HomogeneousForm::monomial(F2, 3, {1, 0, 0}), 1) == 3);
    auto conic3 = sum(F3, {HomogeneousForm::monomial(F3, 3, {1, 0, 1}),
                           HomogeneousForm::monomial(F3, 3, {0, 2, 0})});
    CHECK(point_count(conic3, 1) == 4);
    CHECK(point_count(HomogeneousForm::monomial(F2, 3, {1, 1, 0}), 1) == 5);

    // inclusion-exclusion: #V(fg) = #V(f) + #V(g) - #V(f,g)
    for (int trial = 0; trial < 20; ++trial) {
        HomogeneousForm f = random_form(F3, 3, 1 + static_cast<int>(rnd() % 2));
        HomogeneousForm g = random_form(F3, 3, 1 + static_cast<int>(rnd() % 2));
        std::uint64_t both = 0;
        for_each_projective_point(F3, 3, [&](const std::vector<std::uint64_t>& x) {
            std::vector<Element> pt{F3.element(x[0]), F3.element(x[1]), F3.element(x[2])};
            if (f.evaluate(pt).is_zero() && g.evaluate(pt).is_zero()) ++both;
        });
        CHECK(point_count(f * g, 1) == point_count(f, 1) + point_count(g, 1) - both);
    }
}

TEST_CASE("class enumeration is a bijection") {
    const Field& F3 = make_field(3, 1);
    FormIndexer ix(F3, 3, 2);
    REQUIRE(ix.class_count() == 364);
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t i = 0; i < 364; ++i) {
        HomogeneousForm f = ix.form(i);
        CHECK(ix.encode(f) == i);
        seen.insert(f.coeffs());
    }
    CHECK(seen.size() == 364);
}

TEST_CASE("text serialization round trip") {
    const Field& F4 = make_field(2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        HomogeneousForm f = random_form(F4, 3, 1 + static_cast<int>(rnd() % 3));
        CHECK(HomogeneousForm::from_text(f.to_text()) == f);
    }
    CHECK_THROWS_AS(HomogeneousForm::from_text("nonsense"), std::exception);
}

TEST_CASE("norms of conjugate forms descend") {
    const Field& F2 = make_field(2, 1);
    const Field& F4 = make_field(2, 2);
    HomogeneousForm l(F4, 3, 1, {1, 2, 0});  // X0 + w X1
    auto nrm = norm_product(l, F2);
    auto conj = sum(F2, {HomogeneousForm::monomial(F2, 3, {2, 0, 0}),
                         HomogeneousForm::monomial(F2, 3, {1, 1, 0}),
                         HomogeneousForm::monomial(F2, 3, {0, 2, 0})});
    CHECK(nrm == conj);
    CHECK(classify(nrm).kind == FormClass::RelativelyIrreducible);
}
