#pragma once

// JSON serialization for every report object the CLI and the verification
// suites emit.  Key order is sorted (nlohmann default), so serialized output
// is byte-stable for identical inputs; a timestamp is added only on request.

#include "chowcensus/bounds.hpp"
#include "chowcensus/census.hpp"
#include "chowcensus/qcount.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <string>

namespace chowcensus {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline Json json_envelope(bool timestamp) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    if (timestamp) j["generated_at"] = iso8601_now();
    return j;
}

inline Json to_json(const BigInt& v) { return v.convert_to<std::string>(); }

inline Json to_json(const BigRat& v) {
    Json j;
    j["num"] = boost::multiprecision::numerator(v).convert_to<std::string>();
    j["den"] = boost::multiprecision::denominator(v).convert_to<std::string>();
    j["approx"] = v.convert_to<double>();
    return j;
}

inline Json to_json(const ExactCount& c) {
    Json j;
    j["value"] = to_json(c.value);
    j["formula_id"] = c.formula_id;
    return j;
}

inline Json to_json(const ScaledPower& s) {
    Json j;
    j["coeff"] = to_json(s.coeff());
    j["base"] = to_json(s.base());
    j["exponent"] = to_json(s.exponent());
    j["rounding"] = s.rounding() == Round::Up ? "UP" : "DOWN";
    j["log10"] = s.log10_approx();
    std::string dec = s.decimal(10, 20000);
    if (!dec.empty()) j["decimal"] = dec;
    return j;
}

inline Json to_json(const BoundInterval& iv) {
    Json j;
    j["lower"] = to_json(iv.lower);
    j["upper"] = to_json(iv.upper);
    j["q_exponent"] = iv.q_exponent;
    j["lower_clamped"] = iv.lower_clamped;
    j["formula_id"] = iv.formula_id;
    return j;
}

inline Json to_json(const DimensionReport& r) {
    Json j;
    j["d"] = r.d;
    j["r"] = r.r;
    j["dim_lines_component"] = r.dim_lines;
    j["dim_planar_component"] = r.dim_planar;
    j["b"] = r.b;
    j["dominant"] = dimension_tag_name(r.tag);
    j["exceptional_pair"] = r.exceptional;
    j["formula_id"] = "chow_dim";
    return j;
}

inline Json to_json(const CodimReport& r) {
    Json j;
    j["d"] = r.d;
    j["r"] = r.r;
    j["codim"] = r.codim;
    j["dim"] = r.dim;
    Json u = Json::object();
    for (const auto& row : r.u_table) {
        u[std::to_string(row.k)] = {{"u", row.u}, {"partition", std::string(1, row.partition)}};
    }
    j["u_table"] = u;
    j["argmin_k"] = r.argmin_k;
    j["formula_id"] = "reducible_codim";
    return j;
}

inline Json to_json(const ChowDegreeBounds& b) {
    Json j;
    j["restricted"] = to_json(b.restricted);
    j["restricted_in_domain"] = b.restricted_in_domain;
    j["hat"] = to_json(b.hat);
    j["full"] = to_json(b.full);
    j["formula_id"] = "chow_degree_bounds";
    return j;
}

inline Json to_json(const RelIrrReport& r) {
    Json j;
    j["ell"] = r.ell;
    j["overlap"] = r.overlap;
    Json regs = Json::array();
    for (const auto& reg : r.regimes) {
        Json jr;
        jr["regime"] = std::string(1, reg.regime);
        jr["count_interval"] = to_json(reg.count);
        jr["probability_interval"] = to_json(reg.probability);
        regs.push_back(std::move(jr));
    }
    j["regimes"] = regs;
    j["formula_id"] = "rel_irr_interval";
    return j;
}

inline Json to_json(const AvgWeilReport& w) {
    Json j;
    j["weil_term"] = to_json(w.weil_term);
    j["tail_term"] = to_json(w.tail_term);
    if (!w.expectation_bound_decimal.empty())
        j["expectation_bound"] = w.expectation_bound_decimal;
    j["concentration_complement"] = to_json(w.concentration_complement);
    j["concentration_lower"] = to_json(w.concentration_lower);
    j["concentration_vacuous"] = w.concentration_vacuous;
    j["in_guarantee_regime"] = w.in_guarantee_regime;
    j["formula_id"] = "avg_weil_bounds";
    return j;
}

inline Json to_json(const CountBounds& c) {
    Json j;
    j["b"] = c.b;
    j["planar_lower"] = to_json(c.p_lower);
    j["planar_upper"] = to_json(c.p_upper);
    j["reducible_planar_upper"] = to_json(c.r_upper);
    j["chow_lower"] = to_json(c.c_lower);
    j["chow_upper"] = to_json(c.c_upper);
    j["formula_id"] = "count_bounds";
    return j;
}

inline Json to_json(const WilsonInterval& w) {
    Json j;
    j["estimate"] = w.estimate;
    j["lo"] = w.lo;
    j["hi"] = w.hi;
    return j;
}

inline Json to_json(const CensusReport& r) {
    Json j;
    j["d"] = r.d;
    j["q"] = r.q;
    j["mode"] = r.mode;
    if (r.mode == "SAMPLED") {
        j["sample_n"] = r.sample_n;
        j["seed"] = r.seed;
    }
    j["total_classes"] = to_json(r.total);
    j["scanned"] = r.scanned;
    j["counts"] = {{"reducible", r.reducible},
                   {"rel_irred", r.rel_irred},
                   {"abs_irred", r.abs_irred},
                   {"line_powers", r.line_powers}};
    Json by_ell = Json::object();
    for (auto [e, c] : r.rel_by_ell) by_ell[std::to_string(e)] = c;
    j["rel_by_splitting_degree"] = by_ell;
    if (!r.wilson.empty()) {
        Json w = Json::object();
        for (const auto& [k, v] : r.wilson) w[k] = to_json(v);
        j["wilson_95"] = w;
    }
    j["formula_id"] = "census_classification";
    return j;
}

inline Json to_json(const PointStats& s) {
    Json j;
    j["d"] = s.d;
    j["q"] = s.q;
    j["filter"] = s.filter;
    Json h = Json::object();
    for (auto [v, c] : s.histogram) h[std::to_string(v)] = c;
    j["histogram"] = h;
    j["population"] = s.population;
    j["mean"] = to_json(s.mean);
    j["max_deviation"] = s.max_deviation;
    j["formula_id"] = "point_statistics";
    return j;
}

inline std::string point_stats_csv(const PointStats& s) {
    std::string out = "value,count\n";
    for (auto [v, c] : s.histogram)
        out += std::to_string(v) + "," + std::to_string(c) + "\n";
    return out;
}

inline Json to_json(const CheckLine& l) {
    Json j;
    j["id"] = l.id;
    j["status"] = l.status;
    j["detail"] = l.detail;
    return j;
}

inline Json to_json(const CheckReport& r) {
    Json j;
    j["name"] = r.name;
    j["ok"] = r.ok();
    Json lines = Json::array();
    for (const auto& l : r.lines) lines.push_back(to_json(l));
    j["checks"] = lines;
    return j;
}

// canonical serialized census report used for byte-identity checks
inline std::string census_report_bytes(const CensusReport& r) {
    Json j = json_envelope(false);
    j["report"] = to_json(r);
    return j.dump();
}

}  // namespace chowcensus
