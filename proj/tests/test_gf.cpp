#include "chowcensus/gf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace chowcensus;

namespace {

// Independent oracle: irreducibility of a monic polynomial over F_p by trial
// division against every monic divisor of degree <= deg/2.
bool trial_division_irreducible(const std::vector<std::uint32_t>& coeffs_low_first,
                                std::uint64_t p) {
    using detail::UPoly;
    UPoly f(coeffs_low_first.begin(), coeffs_low_first.end());
    const std::size_t m = f.size() - 1;
    for (std::size_t k = 1; 2 * k <= m; ++k) {
        // all monic degree-k candidates
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < k; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            UPoly g(k + 1, 0);
            g[k] = 1;
            std::uint64_t t = idx;
            for (std::size_t i = 0; i < k; ++i) {
                g[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            if (detail::upoly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

// smallest monic irreducible of degree m over F_p, coefficients compared
// low-degree-first: the oracle the deterministic modulus must match
std::vector<std::uint32_t> smallest_irreducible_oracle(std::uint64_t p, std::uint64_t m) {
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i < m; ++i) total *= p;
    for (std::uint64_t k = 0; k < total; ++k) {
        std::vector<std::uint32_t> f(m + 1, 0);
        f[m] = 1;
        std::uint64_t rem = k, div = total / p;
        for (std::uint64_t i = 0; i < m; ++i) {
            f[i] = static_cast<std::uint32_t>(rem / div);
            rem %= div;
            div /= p;
        }
        if (trial_division_irreducible(f, p)) return {f.begin(), f.begin() + m};
    }
    FAIL("no irreducible polynomial found");
    return {};
}

std::uint64_t rng_state = 0x1234567890abcdefull;
std::uint64_t rnd() {
    rng_state += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = rng_state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

TEST_CASE("prime fields have no modulus") {
    const Field& F2 = make_field(2, 1);
    CHECK(F2.size() == 2);
    CHECK(F2.modulus().empty());
}

TEST_CASE("modulus selection matches the trial-division oracle") {
    CHECK(make_field(2, 2).modulus() == std::vector<std::uint32_t>{1, 1});  // t^2+t+1
    struct Cell { std::uint64_t p, m; };
    for (Cell c : {Cell{2, 2}, Cell{2, 3}, Cell{2, 4}, Cell{2, 6}, Cell{3, 2}, Cell{3, 3},
                   Cell{5, 2}, Cell{5, 3}, Cell{7, 2}}) {
        CAPTURE(c.p, c.m);
        CHECK(make_field(c.p, c.m).modulus() == smallest_irreducible_oracle(c.p, c.m));
    }
}

TEST_CASE("make_field is deterministic and interned") {
    const Field& a = make_field(3, 4);
    const Field& b = make_field(3, 4);
    CHECK(&a == &b);
    CHECK(a.modulus() == b.modulus());
}

TEST_CASE("basic arithmetic") {
    const Field& F4 = make_field(2, 2);
    Element w = F4.element(2);  // root of t^2+t+1
    CHECK((w * w).idx == 3);    // w^2 = w + 1
    const Field& F5 = make_field(5, 1);
    CHECK(F5.inv(2) == 3);
    CHECK_THROWS_AS(F5.inv(0), std::domain_error);
    const Field& F9 = make_field(3, 2);
    CHECK_THROWS_AS(F9.element(1) + F5.element(1), std::invalid_argument);
}

TEST_CASE("Fermat identity on random elements") {
    for (auto [p, m] : {std::pair<std::uint64_t, std::uint64_t>{2, 4}, {3, 3}, {5, 2}, {2, 10}}) {
        const Field& F = make_field(p, m);
        for (int i = 0; i < 50; ++i) {
            std::uint64_t x = rnd() % F.size();
            CHECK(F.pow(x, F.size()) == x);
            if (x) CHECK(F.pow(x, F.size() - 1) == 1);
        }
    }
}

TEST_CASE("frobenius fixes exactly the base subfield") {
    const Field& F4 = make_field(2, 2);
    CHECK(F4.frobenius(2, 1) == 3);  // w -> w^2 = w+1
    CHECK(F4.frobenius(0, 1) == 0);
    CHECK(F4.frobenius(1, 1) == 1);

    const Field& F64 = make_field(2, 6);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t x = rnd() % F64.size();
        std::uint64_t y = x;
        for (int j = 0; j < 3; ++j) y = F64.frobenius(y, 2);  // (x^{p^2})^3 = x^{p^6}
        CHECK(y == x);
    }
    CHECK_THROWS_AS(F64.frobenius(1, 4), std::invalid_argument);  // 4 does not divide 6
}

TEST_CASE("embeddings are ring homomorphisms") {
    const Field& F2 = make_field(2, 1);
    const Field& F4 = make_field(2, 2);
    const Field& F16 = make_field(2, 4);
    CHECK(F16.embed_from(F2, 1) == 1);
    CHECK(F16.embed_from(F2, 0) == 0);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t a = rnd() % 4, b = rnd() % 4;
        CHECK(F16.embed_from(F4, F4.add(a, b)) ==
              F16.add(F16.embed_from(F4, a), F16.embed_from(F4, b)));
        CHECK(F16.embed_from(F4, F4.mul(a, b)) ==
              F16.mul(F16.embed_from(F4, a), F16.embed_from(F4, b)));
    }
    // the image is fixed by the relative Frobenius
    for (std::uint64_t a = 0; a < 4; ++a) {
        std::uint64_t img = F16.embed_from(F4, a);
        CHECK(F16.frobenius(img, 2) == img);
        CHECK(F16.project_to(F4, img) == a);
    }
    for (std::uint64_t a = 0; a < 2; ++a) {
        std::uint64_t img = F16.embed_from(F2, a);
        CHECK(F16.frobenius(img, 1) == img);
    }
    CHECK_THROWS_AS(F16.embed_from(make_field(2, 3), 1), std::invalid_argument);  // 3 ∤ 4
}

TEST_CASE("embedding an odd-characteristic tower") {
    const Field& F3 = make_field(3, 1);
    const Field& F9 = make_field(3, 2);
    const Field& F81 = make_field(3, 4);
    for (std::uint64_t a = 0; a < 9; ++a)
        for (std::uint64_t b = 0; b < 9; ++b) {
            CHECK(F81.embed_from(F9, F9.mul(a, b)) ==
                  F81.mul(F81.embed_from(F9, a), F81.embed_from(F9, b)));
        }
    for (std::uint64_t a = 0; a < 3; ++a) {
        CHECK(F9.project_to(F3, F9.embed_from(F3, a)) == a);
    }
}

TEST_CASE("field construction validates inputs") {
    CHECK_THROWS_AS(make_field(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_field(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_field(2, 25), std::invalid_argument);
    CHECK_THROWS_AS(make_field(3, 24), std::invalid_argument);  // 3^24 > 2^40
}

TEST_CASE("large fallback field works without tables") {
    const Field& F = make_field(2, 24);
    std::uint64_t a = 12345677;
    CHECK(F.mul(a, F.inv(a)) == 1);
    CHECK(F.pow(a, F.size()) == a);
    CHECK(F.coords(a).size() == 24);
    CHECK(F.from_coords(F.coords(a)) == a);
}
