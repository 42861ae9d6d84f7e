#pragma once

// Calculators for the dimension, codimension, degree-bound, probability and
// point-count estimates.  Bound values that involve Euler's number are kept
// as ScaledPower objects: an exact rational scalar times an exact rational
// base raised to an integer exponent, where the base bakes in a directed
// rational approximation of e.  An UP value therefore never under-estimates
// the true bound and a DOWN value never over-estimates it, no matter how the
// result is later rendered.

#include "chowcensus/numbers.hpp"
#include "chowcensus/qcount.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace chowcensus {

enum class Round { Up, Down };

// Directed rational approximations of e = 2.718281828459045...
inline BigRat euler_approx(Round dir) {
    static const BigRat up(BigInt(2718281829), BigInt(1000000000));
    static const BigRat down(BigInt(2718281828), BigInt(1000000000));
    return dir == Round::Up ? up : down;
}

// log10 with ~1e-14 relative accuracy, safe for huge integers
inline double log10_big(const BigInt& n) {
    if (n <= 0) throw std::invalid_argument("log10 of nonpositive value");
    std::string s = n.convert_to<std::string>();
    const std::size_t take = std::min<std::size_t>(17, s.size());
    double lead = std::stod(s.substr(0, take));
    return std::log10(lead) + static_cast<double>(s.size() - take);
}

inline double log10_rat(const BigRat& v) {
    return log10_big(boost::multiprecision::numerator(v)) -
           log10_big(boost::multiprecision::denominator(v));
}

// Directed decimal rendering of an exact positive rational with `sig`
// significant digits, as "m.mmm...e+K".
inline std::string decimal_directed(const BigRat& v, int sig, Round dir) {
    if (v == 0) return "0";
    if (v < 0) throw std::invalid_argument("negative value in directed rendering");
    const BigInt N = boost::multiprecision::numerator(v);
    const BigInt D = boost::multiprecision::denominator(v);
    // e10 = floor(log10 v): largest e with 10^e <= v
    long long e10 = static_cast<long long>(decimal_digits(N)) -
                    static_cast<long long>(decimal_digits(D));
    auto cmp_pow = [&](long long e) {
        // sign of v - 10^e
        BigInt lhs = N, rhs = D;
        if (e >= 0)
            rhs *= big_pow(BigInt(10), static_cast<std::uint64_t>(e));
        else
            lhs *= big_pow(BigInt(10), static_cast<std::uint64_t>(-e));
        return lhs.compare(rhs);
    };
    while (cmp_pow(e10) < 0) --e10;
    while (cmp_pow(e10 + 1) >= 0) ++e10;
    // mantissa = v / 10^{e10 - sig + 1}, rounded in the requested direction
    long long shift = sig - 1 - e10;
    BigInt num = N, den = D;
    if (shift >= 0)
        num *= big_pow(BigInt(10), static_cast<std::uint64_t>(shift));
    else
        den *= big_pow(BigInt(10), static_cast<std::uint64_t>(-shift));
    BigInt mant, rem;
    boost::multiprecision::divide_qr(num, den, mant, rem);
    if (dir == Round::Up && rem != 0) ++mant;
    std::string ms = mant.convert_to<std::string>();
    if (static_cast<int>(ms.size()) > sig) {  // rounding carried over, e.g. 999->1000
        ms = ms.substr(0, sig);
        ++e10;
    }
    std::string out = ms.substr(0, 1);
    if (sig > 1) out += "." + ms.substr(1);
    out += (e10 >= 0 ? "e+" : "e-") + std::to_string(e10 >= 0 ? e10 : -e10);
    return out;
}

// coeff * base^exp with a rounding direction.  coeff >= 0 exact rational,
// base > 0 exact rational, exp >= 0.
class ScaledPower {
public:
    ScaledPower() : coeff_(0), base_(1), exp_(0), dir_(Round::Down) {}
    ScaledPower(BigRat coeff, BigRat base, BigInt exp, Round dir)
        : coeff_(std::move(coeff)), base_(std::move(base)), exp_(std::move(exp)), dir_(dir) {
        if (coeff_ < 0) throw std::invalid_argument("ScaledPower coefficient must be >= 0");
        if (base_ <= 0) throw std::invalid_argument("ScaledPower base must be > 0");
        if (exp_ < 0) throw std::invalid_argument("ScaledPower exponent must be >= 0");
    }
    static ScaledPower exact(BigRat v, Round dir) { return {std::move(v), BigRat(1), BigInt(0), dir}; }

    const BigRat& coeff() const { return coeff_; }
    const BigRat& base() const { return base_; }
    const BigInt& exponent() const { return exp_; }
    Round rounding() const { return dir_; }
    bool is_zero() const { return coeff_ == 0; }

    ScaledPower times(const BigRat& r) const {
        if (r < 0) throw std::invalid_argument("negative scalar");
        return {coeff_ * r, base_, exp_, dir_};
    }

    // multiply by q^e (exact); negative e allowed
    ScaledPower times_q_power(std::uint64_t q, long long e) const {
        BigRat f = (e >= 0) ? BigRat(big_pow(q, static_cast<std::uint64_t>(e)))
                            : BigRat(BigInt(1), big_pow(q, static_cast<std::uint64_t>(-e)));
        return times(f);
    }

    double log10_approx() const {
        if (coeff_ == 0) return -std::numeric_limits<double>::infinity();
        return log10_rat(coeff_) + exp_.convert_to<double>() * log10_rat(base_);
    }

    // exact value when the decimal expansion stays within the digit budget
    std::optional<BigRat> exact_value(std::size_t max_digits = 200000) const {
        if (coeff_ == 0) return BigRat(0);
        if (exp_ > BigInt(std::uint64_t(1) << 62)) return std::nullopt;
        double coeff_digits = std::abs(log10_rat(coeff_));
        double base_digits = std::abs(log10_rat(base_)) * exp_.convert_to<double>();
        if (coeff_digits + base_digits > static_cast<double>(max_digits)) return std::nullopt;
        return coeff_ * rat_pow(base_, exp_.convert_to<std::uint64_t>());
    }

    // directed decimal with `sig` significant digits; empty when out of budget
    std::string decimal(int sig = 10, std::size_t max_digits = 200000) const {
        auto v = exact_value(max_digits);
        if (!v) return {};
        return decimal_directed(*v, sig, dir_);
    }

    std::string describe() const {
        std::ostringstream os;
        os << "(" << coeff_.convert_to<std::string>() << ") * ("
           << base_.convert_to<std::string>() << ")^" << exp_.convert_to<std::string>()
           << " [log10 ~ " << log10_approx() << ", " << (dir_ == Round::Up ? "UP" : "DOWN") << "]";
        return os.str();
    }

private:
    BigRat coeff_;
    BigRat base_;
    BigInt exp_;
    Round dir_;
};

// lower <= value <= upper, both scaled by q^{q_exponent}
struct BoundInterval {
    ScaledPower lower;
    ScaledPower upper;
    long long q_exponent = 0;
    bool lower_clamped = false;
    std::string formula_id;
};

// Compares two ScaledPowers: -1/0/+1.  Values that are far apart are decided
// on log10; near-equal values fall back to exact expansion (throws if the
// expansion is out of budget, which no interval produced here triggers).
inline int compare_scaled(const ScaledPower& a, const ScaledPower& b) {
    if (a.is_zero() && b.is_zero()) return 0;
    if (a.is_zero()) return -1;
    if (b.is_zero()) return 1;
    double la = a.log10_approx(), lb = b.log10_approx();
    if (std::abs(la - lb) > 1e-3) return la < lb ? -1 : 1;
    auto va = a.exact_value(100000), vb = b.exact_value(100000);
    if (va && vb) return va->compare(*vb);
    throw std::logic_error("ScaledPower comparison is numerically inconclusive");
}

// ----- dimensions and codimension -----------------------------------------

// dim dG(1,r) = 2d(r-1), dim P(d,r) = 3(r-2) + d(d+3)/2.
inline std::pair<long long, long long> component_dims(int d, int r) {
    if (d < 2 || r < 3) throw std::invalid_argument("requires d >= 2 and r >= 3");
    long long lines = 2LL * d * (r - 1);
    long long planar = 3LL * (r - 2) + static_cast<long long>(d) * (d + 3) / 2;
    return {lines, planar};
}

// b_{d,r} for d >= 1 (a single line locus has dimension 2(r-1)).
inline long long chow_dim_value(int d, int r) {
    if (d < 1 || r < 3) throw std::invalid_argument("requires d >= 1 and r >= 3");
    if (d == 1) return 2LL * (r - 1);
    auto [lines, planar] = component_dims(d, r);
    return std::max(lines, planar);
}

struct DimensionReport {
    int d, r;
    long long dim_lines, dim_planar;
    long long b;  // dim of the Chow variety
    enum class Tag { Planar, Lines, Tie } tag;
    bool exceptional;  // (2,3) or (3,3)
};

inline const char* dimension_tag_name(DimensionReport::Tag t) {
    switch (t) {
        case DimensionReport::Tag::Planar: return "PLANAR";
        case DimensionReport::Tag::Lines: return "LINES";
        case DimensionReport::Tag::Tie: return "TIE";
    }
    return "?";
}

inline DimensionReport chow_dim(int d, int r) {
    auto [lines, planar] = component_dims(d, r);
    DimensionReport rep;
    rep.d = d;
    rep.r = r;
    rep.dim_lines = lines;
    rep.dim_planar = planar;
    rep.b = std::max(lines, planar);
    rep.exceptional = (r == 3 && (d == 2 || d == 3));
    if (rep.exceptional)
        rep.tag = DimensionReport::Tag::Tie;
    else
        rep.tag = (d >= 4 * r - 8) ? DimensionReport::Tag::Planar : DimensionReport::Tag::Lines;
    return rep;
}

struct CodimReport {
    int d, r;
    long long codim;  // of the reducible locus inside the Chow variety
    long long dim;    // of the reducible locus
    struct URow {
        int k;
        long long u;       // b_{d,r} - b_{k,r} - b_{d-k,r}
        char partition;    // '1'/'2'/'3': k >= 4r-8 / middle / d-k < 4r-8
    };
    std::vector<URow> u_table;
    int argmin_k;
};

inline CodimReport reducible_codim(int d, int r) {
    if (r < 3) throw std::invalid_argument("requires r >= 3");
    if (d < 4 * r - 8) throw std::invalid_argument("requires d >= 4r-8");
    CodimReport rep;
    rep.d = d;
    rep.r = r;
    if (d == 4 * r - 8) {
        rep.codim = r - 2;
        rep.dim = 8LL * (r - 1) * (r - 2);
    } else {
        rep.codim = static_cast<long long>(d) - 2 * r + 3;
        rep.dim = 5LL * r - 9 + static_cast<long long>(d) * (d + 1) / 2;
    }
    const long long b = chow_dim_value(d, r);
    long long best = std::numeric_limits<long long>::max();
    int best_k = 0;
    for (int k = 1; 2 * k <= d; ++k) {
        long long u = b - chow_dim_value(k, r) - chow_dim_value(d - k, r);
        char part = (k >= 4 * r - 8) ? '1' : ((d - k < 4 * r - 8) ? '3' : '2');
        rep.u_table.push_back({k, u, part});
        if (u < best) {
            best = u;
            best_k = k;
        }
    }
    rep.argmin_k = best_k;
    if (best != rep.codim)
        throw std::logic_error("codimension closed form disagrees with direct minimization");
    if (rep.dim != b - rep.codim)
        throw std::logic_error("reducible-locus dimension is inconsistent with the codimension");
    return rep;
}

// ----- the graded-piece coefficient g_{d,r} ---------------------------------

// Computed by four equivalent routes; any disagreement or non-integrality
// throws, since it would mean a transcription error.
inline BigInt g_coeff(int d, int r) {
    if (d < 1 || r < 3) throw std::invalid_argument("requires d >= 1 and r >= 3");
    BigRat a = BigRat(binomial(r + d - 2, d)) * BigRat(binomial(r + d - 2, d)) *
               BigRat(BigInt(r + d - 1), BigInt(r - 1) * BigInt(d + 1));
    BigRat b = BigRat(binomial(r + d - 2, d) * binomial(r + d - 2, d) -
                      binomial(r + d - 2, d - 1) * binomial(r + d - 2, d + 1));
    BigRat c = BigRat(binomial(d + r - 2, r - 2) * binomial(d + r - 1, r - 1), BigInt(d + 1));
    BigRat prod = 1;
    for (int i = 1; i <= r - 2; ++i) {
        prod *= BigRat(BigInt(d + r - i - 1), BigInt(r - i - 1));
        prod *= BigRat(BigInt(d + r - i), BigInt(r - i));
    }
    if (a != b || b != c || c != prod)
        throw std::logic_error("the g-coefficient identities disagree");
    if (boost::multiprecision::denominator(a) != 1)
        throw std::logic_error("the g-coefficient is not an integer");
    return boost::multiprecision::numerator(a);
}

// ----- Chow-variety degree bounds -------------------------------------------

inline BigInt chow_exponent(int d, int r, int g_multiplier) {
    // r(r+1)(d^2+1) + g_multiplier * r * g_{d,r}
    return BigInt(r) * (r + 1) * (BigInt(d) * d + 1) + BigInt(g_multiplier) * r * g_coeff(d, r);
}

struct ChowDegreeBounds {
    ScaledPower restricted;  // nondegenerate absolutely irreducible components
    ScaledPower hat;         // all absolutely-irreducible-generic components
    ScaledPower full;        // the whole Chow variety: c_{d,r}
    bool restricted_in_domain;  // its theorem needs d >= r >= 3
};

// c_{d,r} = (2ed)^{r(r+1)(d^2+1) + 4r g_{d,r}}, rounded in direction dir.
inline ScaledPower chow_degree_upper(int d, int r, Round dir) {
    if (d < 1 || r < 3) throw std::invalid_argument("requires d >= 1 and r >= 3");
    BigRat base = BigRat(2) * euler_approx(dir) * d;
    return {BigRat(1), base, chow_exponent(d, r, 4), dir};
}

// 1 / c_{d,r} as a DOWN (or UP) value: the reciprocal base uses the
// oppositely-directed e so the quotient stays on the safe side.
inline ScaledPower chow_degree_upper_reciprocal(int d, int r, Round dir) {
    Round opp = (dir == Round::Up) ? Round::Down : Round::Up;
    BigRat base = BigRat(1) / (BigRat(2) * euler_approx(opp) * d);
    return {BigRat(1), base, chow_exponent(d, r, 4), dir};
}

inline ChowDegreeBounds chow_degree_bounds(int d, int r) {
    if (d < 1 || r < 3) throw std::invalid_argument("requires d >= 1 and r >= 3");
    BigInt e3 = chow_exponent(d, r, 3);
    BigRat ed = euler_approx(Round::Up) * d;
    ChowDegreeBounds out{
        ScaledPower(BigRat(1), ed, e3, Round::Up),
        ScaledPower(BigRat(2), ed, e3, Round::Up),
        chow_degree_upper(d, r, Round::Up),
        d >= r,
    };
    return out;
}

// D_{ell,d,r} = (ed/ell)^{r(r+1)(d^2/ell^2+1) + 4r g_{d/ell,r}}
inline ScaledPower rel_irr_degree_bound(int ell, int d, int r, Round dir = Round::Up) {
    if (r < 3) throw std::invalid_argument("requires r >= 3");
    if (ell < 2 || !is_prime_u64(static_cast<std::uint64_t>(ell)) || d % ell != 0)
        throw std::invalid_argument("ell must be a prime divisor of d");
    const int dl = d / ell;
    BigRat base = euler_approx(dir) * d / ell;
    return {BigRat(1), base, chow_exponent(dl, r, 4), dir};
}

// ----- generic degree-bound calculators -------------------------------------

enum class DegreeBoundKind { Bezout, HeintzSchnorr, ComponentsCodim, Image };

inline ScaledPower degree_bound_calculator(DegreeBoundKind kind, const std::vector<BigInt>& in) {
    auto need = [&](std::size_t n, const char* what) {
        if (in.size() != n) throw std::invalid_argument(std::string("expected inputs: ") + what);
    };
    switch (kind) {
        case DegreeBoundKind::Bezout:  // deg(V cap W) <= deg V * deg W
            need(2, "degV, degW");
            return ScaledPower::exact(BigRat(in[0] * in[1]), Round::Up);
        case DegreeBoundKind::HeintzSchnorr:  // degV1 * (max deg)^{dim V1}
            need(3, "degV1, maxdeg, dimV1");
            return {BigRat(in[0]), BigRat(in[1]), in[2], Round::Up};
        case DegreeBoundKind::ComponentsCodim:  // deg(U cap V_s) <= d^s
            need(2, "d, s");
            return {BigRat(1), BigRat(in[0]), in[1], Round::Up};
        case DegreeBoundKind::Image:  // deg F(V) <= deg V * d^m
            need(3, "degV, d, m");
            return {BigRat(in[0]), BigRat(in[1]), in[2], Round::Up};
    }
    throw std::invalid_argument("unknown degree bound kind");
}

// ----- probability and count intervals --------------------------------------

// Probability that a uniformly random degree-d cycle in P^r over F_q is
// F_q-reducible: two cases split on d = 4r-8 versus d >= 4r-7.
inline BoundInterval prob_reducible_interval(int d, int r, std::uint64_t q) {
    if (r < 3 || d < 4 * r - 8) throw std::invalid_argument("requires r >= 3 and d >= 4r-8");
    require_prime_power(q);
    const bool threshold_case = (d == 4 * r - 8);
    long long qexp = threshold_case ? -(static_cast<long long>(r) - 2)
                                    : -(static_cast<long long>(d) - 2 * r + 3);
    ScaledPower upper = chow_degree_upper(d, r, Round::Up);
    ScaledPower inv_c = chow_degree_upper_reciprocal(d, r, Round::Down);
    bool clamped = false;
    ScaledPower lower = inv_c;
    if (threshold_case) {
        lower = inv_c.times(BigRat(BigInt(1), BigInt(2) * factorial(static_cast<std::uint64_t>(d))));
    } else {
        // (1 - 13 q^{2-d}) / 2, clamped at 0 when negative
        BigRat head = BigRat(1) - BigRat(BigInt(13), big_pow(q, static_cast<std::uint64_t>(d - 2)));
        if (head <= 0) {
            lower = ScaledPower::exact(BigRat(0), Round::Down);
            clamped = true;
        } else {
            lower = inv_c.times(head / 2);
        }
    }
    return {lower, upper, qexp, clamped, "prob_reducible_interval"};
}

// Fraction of non-planar curves: <= 2 c_{d,r} / q.
inline ScaledPower nonplanar_fraction_bound(int d, int r, std::uint64_t q) {
    if (r < 3 || d < 4 * r - 8) throw std::invalid_argument("requires r >= 3 and d >= 4r-8");
    require_prime_power(q);
    return chow_degree_upper(d, r, Round::Up).times(BigRat(BigInt(2), BigInt(q)));
}

// Two-regime bounds for the number (and fraction) of relatively
// F_q-irreducible curves; both regimes are reported when they overlap.
struct RelIrrRegimeReport {
    char regime;  // 'A' (d/ell <= 4r-7) or 'B' (d/ell >= 4r-8)
    BoundInterval count;
    BoundInterval probability;
};

struct RelIrrReport {
    int ell;  // smallest prime divisor of d
    std::vector<RelIrrRegimeReport> regimes;
    bool overlap;
};

inline RelIrrReport rel_irr_interval(int d, int r, std::uint64_t q) {
    if (r < 3 || d < 4 * r - 8) throw std::invalid_argument("requires r >= 3 and d >= 4r-8");
    if (d < 2) throw std::invalid_argument("requires d >= 2");
    require_prime_power(q);
    const int ell = static_cast<int>(prime_factors(static_cast<std::uint64_t>(d)).front());
    const int dl = d / ell;
    RelIrrReport rep;
    rep.ell = ell;
    const bool regime_a = dl <= 4 * r - 7;
    const bool regime_b = dl >= 4 * r - 8;
    rep.overlap = regime_a && regime_b;
    ScaledPower D_up = rel_irr_degree_bound(ell, d, r, Round::Up);
    ScaledPower inv_c = chow_degree_upper_reciprocal(d, r, Round::Down);
    const long long b_full = chow_dim_value(d, r);

    auto make_regime = [&](char tag) {
        RelIrrRegimeReport rr;
        rr.regime = tag;
        BigRat head;  // 1 - small term, exact
        long long count_exp, prob_exp;
        BigRat mult;  // upper multiplier: 2 or 3
        if (tag == 'A') {
            count_exp = 2LL * d * (r - 1);
            prob_exp = (2LL * d - 3) * (r - 2) - static_cast<long long>(d) * (d - 1) / 2;
            // 1 - 4 q^{2(1-d)(r-1)}
            std::uint64_t e = static_cast<std::uint64_t>(2LL * (d - 1) * (r - 1));
            head = BigRat(1) - BigRat(BigInt(4), big_pow(q, e));
            mult = 2;
        } else {
            count_exp = static_cast<long long>(ell) * chow_dim_value(dl, r);
            prob_exp = 3LL * (ell - 1) * (r - 2) -
                       static_cast<long long>(d) * d * (ell - 1) / (2LL * ell);
            head = BigRat(1) - BigRat(BigInt(16), big_pow(q, static_cast<std::uint64_t>(d - ell)));
            mult = 3;
        }
        bool clamped = head <= 0;
        ScaledPower count_lower =
            clamped ? ScaledPower::exact(BigRat(0), Round::Down) : ScaledPower::exact(head, Round::Down);
        ScaledPower count_upper = D_up.times(mult);
        rr.count = {count_lower, count_upper, count_exp, clamped, "rel_irr_count_interval"};
        ScaledPower prob_lower =
            clamped ? ScaledPower::exact(BigRat(0), Round::Down) : inv_c.times(head / 2);
        rr.probability = {prob_lower, D_up.times(mult), prob_exp, clamped, "rel_irr_prob_interval"};
        // consistency: probability exponent = count exponent - b_{d,r}
        if (prob_exp != count_exp - b_full)
            throw std::logic_error("probability exponent disagrees with count exponent minus b");
        return rr;
    };
    if (regime_a) rep.regimes.push_back(make_regime('A'));
    if (regime_b) rep.regimes.push_back(make_regime('B'));
    return rep;
}

// ----- average-point/Weil bounds ---------------------------------------------

struct AvgWeilReport {
    ScaledPower weil_term;        // d^2 sqrt(q), UP
    ScaledPower tail_term;        // 3 d c_{d,r} q^{-(d-2r+2)}, UP
    std::string expectation_bound_decimal;  // UP rendering of the sum (may be empty)
    ScaledPower concentration_complement;   // 2 c_{d,r} q^{-(d-2r+3)}, UP
    BigRat concentration_lower;   // max(0, 1 - complement), exact when computable
    bool concentration_vacuous;   // complement >= 1
    bool in_guarantee_regime;     // q >= 15 d^{13/3}
};

inline BigRat sqrt_rational_up(std::uint64_t q, int digits = 12) {
    BigInt scale = big_pow(BigInt(10), static_cast<std::uint64_t>(digits));
    BigInt s = isqrt_floor(BigInt(q) * scale * scale);
    // s <= sqrt(q)*10^digits < s+1
    return BigRat(s + 1, scale);
}

inline AvgWeilReport avg_weil_bounds(int d, int r, std::uint64_t q) {
    if (r < 3 || d <= 4 * r - 7) throw std::invalid_argument("requires r >= 3 and d > 4r-7");
    require_prime_power(q);
    AvgWeilReport rep{
        ScaledPower::exact(BigRat(BigInt(d) * d) * sqrt_rational_up(q), Round::Up),
        chow_degree_upper(d, r, Round::Up)
            .times(BigRat(3) * d)
            .times_q_power(q, -(static_cast<long long>(d) - 2 * r + 2)),
        {},
        chow_degree_upper(d, r, Round::Up)
            .times(2)
            .times_q_power(q, -(static_cast<long long>(d) - 2 * r + 3)),
        BigRat(0),
        true,
        false,
    };
    auto wt = rep.weil_term.exact_value();
    auto tt = rep.tail_term.exact_value();
    if (wt && tt) rep.expectation_bound_decimal = decimal_directed(*wt + *tt, 10, Round::Up);
    auto comp = rep.concentration_complement.exact_value();
    if (comp) {
        if (*comp < 1) {
            rep.concentration_lower = BigRat(1) - *comp;
            rep.concentration_vacuous = false;
        }
    } else {
        // complement of astronomic size: vacuous iff its log10 is positive
        rep.concentration_vacuous = rep.concentration_complement.log10_approx() > 0;
        if (!rep.concentration_vacuous) rep.concentration_lower = BigRat(0);  // conservatively
    }
    // q >= 15 d^{13/3}  <=>  q^3 >= 15^3 d^13
    rep.in_guarantee_regime = big_pow(BigInt(q), 3) >= BigInt(3375) * big_pow(BigInt(d), 13);
    return rep;
}

// ----- planar reducibility over F_q ------------------------------------------

// #P(d,2) (q-3) q^{-d} <= #R(d,2) <= #P(d,2) (q+2) q^{-d}, lower clamped at 0.
inline BoundInterval plane_reducible_interval(int d, std::uint64_t q) {
    if (d < 2) throw std::invalid_argument("requires d >= 2");
    require_prime_power(q);
    BigInt P = plane_curve_space_count(d, q).value;
    BigRat qd = BigRat(big_pow(q, static_cast<std::uint64_t>(d)));
    BigRat lower = BigRat(P) * (BigRat(q) - 3) / qd;
    BigRat upper = BigRat(P) * (BigRat(q) + 2) / qd;
    bool clamped = lower < 0;
    if (clamped) lower = 0;
    return {ScaledPower::exact(lower, Round::Down), ScaledPower::exact(upper, Round::Up), 0,
            clamped, "plane_reducible_interval"};
}

// ----- count bounds -----------------------------------------------------------

struct CountBounds {
    BigInt p_lower, p_upper;  // q^b <= #P(d,r) <= 7 q^b
    BigInt r_upper;           // #R(d,r) <= 13 q^{b-d+1}
    BigInt c_lower;           // q^b <= #C_{d,r}(F_q)
    ScaledPower c_upper;      // #C_{d,r}(F_q) < 2 c_{d,r} q^b
    long long b;
};

inline CountBounds count_bounds(int d, int r, std::uint64_t q) {
    if (r < 3 || d < 4 * r - 8) throw std::invalid_argument("requires r >= 3 and d >= 4r-8");
    require_prime_power(q);
    const long long b = chow_dim_value(d, r);
    BigInt qb = big_pow(q, static_cast<std::uint64_t>(b));
    return {qb,
            7 * qb,
            13 * big_pow(q, static_cast<std::uint64_t>(b - d + 1)),
            qb,
            chow_degree_upper(d, r, Round::Up).times(BigRat(2) * qb),
            b};
}

}  // namespace chowcensus
