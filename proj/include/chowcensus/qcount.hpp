#pragma once

// Exact q-analog counts: projective spaces, Grassmannians, plane-curve
// spaces, and the planar-curve locus P(d,r)(F_q) with its incidence-fiber
// correction.  Everything is computed in exact integers; the formulas'
// divisions are checked to be exact.

#include "chowcensus/numbers.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chowcensus {

struct ExactCount {
    BigInt value;
    std::string formula_id;
};

inline void require_prime_power(std::uint64_t q) {
    if (!is_prime_power(q)) throw std::invalid_argument("q must be a prime power");
}

// p_r = q^r + ... + q + 1 = (q^{r+1} - 1)/(q - 1)
inline ExactCount proj_space_count(int r, std::uint64_t q) {
    if (r < 0) throw std::invalid_argument("projective dimension must be >= 0");
    require_prime_power(q);
    BigInt v = exact_div(big_pow(q, r + 1) - 1, BigInt(q) - 1, "proj_space_count");
    return {v, "proj_space_count"};
}

// Number of k-planes of P^r over F_q: the Gaussian binomial
// prod_{i=0..k} (q^{r+1} - q^i) / (q^{k+1} - q^i).
inline ExactCount grassmannian_count(int k, int r, std::uint64_t q) {
    if (k < 0 || r < 0 || k > r) throw std::invalid_argument("requires 0 <= k <= r");
    require_prime_power(q);
    BigInt num = 1, den = 1;
    for (int i = 0; i <= k; ++i) {
        num *= big_pow(q, r + 1) - big_pow(q, i);
        den *= big_pow(q, k + 1) - big_pow(q, i);
    }
    return {exact_div(num, den, "grassmannian_count"), "grassmannian_count"};
}

// Projective classes of nonzero ternary degree-d forms:
// (q^{(d+2)(d+1)/2} - 1)/(q - 1).
inline ExactCount plane_curve_space_count(int d, std::uint64_t q) {
    if (d < 1) throw std::invalid_argument("requires d >= 1");
    require_prime_power(q);
    std::uint64_t D = static_cast<std::uint64_t>(d + 2) * (d + 1) / 2;
    BigInt v = exact_div(big_pow(q, D) - 1, BigInt(q) - 1, "plane_curve_space_count");
    return {v, "plane_curve_space_count"};
}

// Number of 2-planes of P^r containing a fixed line:
// (q^{r+1} - q^2)/(q^3 - q^2).
inline ExactCount line_power_fiber(int r, std::uint64_t q) {
    if (r < 2) throw std::invalid_argument("requires r >= 2");
    require_prime_power(q);
    BigInt v = exact_div(big_pow(q, r + 1) - big_pow(q, 2), big_pow(q, 3) - big_pow(q, 2),
                         "line_power_fiber");
    return {v, "line_power_fiber"};
}

// Exact #P(d,r)(F_q): incidence count #P(d,2) * #G(2,r) minus the overcount
// of the d*L classes, whose incidence fiber is every 2-plane through L.
inline ExactCount planar_curves_count(int d, int r, std::uint64_t q) {
    if (d < 2) throw std::invalid_argument("requires d >= 2");
    if (r < 3) throw std::invalid_argument("requires r >= 3");
    require_prime_power(q);
    BigInt incidence = plane_curve_space_count(d, q).value * grassmannian_count(2, r, q).value;
    BigInt overcount = grassmannian_count(1, r, q).value * (line_power_fiber(r, q).value - 1);
    return {incidence - overcount, "planar_curves_count"};
}

// Independent oracle for the census of absolutely irreducible conics.
inline ExactCount smooth_conic_count(std::uint64_t q) {
    require_prime_power(q);
    return {big_pow(q, 5) - big_pow(q, 2), "smooth_conic_count"};
}

}  // namespace chowcensus
