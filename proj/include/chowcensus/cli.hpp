#pragma once

// Command-line front end: `chow-census <count|bounds|chow|census|verify> [op]
// [flags]`.  Every reported number carries a formula_id; identical requests
// produce byte-identical JSON apart from the optional timestamp.
//
// Exit codes: 0 success, 1 internal error, 2 validation error, 3 bound-check
// failure (verify only), so pipelines can distinguish a mathematical
// regression from an operational problem.

#include "chowcensus/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace chowcensus::cli {

struct Options {
    std::string group, op;
    int d = -1, r = -1, k = -1, ell = -1;
    std::int64_t q = -1;
    std::uint64_t ext = 1;
    std::uint64_t sample = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format = "json";
    std::string form_file;
    std::string output;
    std::string suite;
    std::string klass;
    std::string kind;
    std::vector<std::int64_t> inputs;
    bool no_timestamp = false;
};

inline void flatten_json(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& v : j) flatten_json(v, prefix + "[" + std::to_string(i++) + "]", os);
    } else {
        os << prefix << " = " << j.dump() << "\n";
    }
}

inline int require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
    return 0;
}

inline std::uint64_t need_q(const Options& o) {
    require(o.q >= 2, "requires --q (a prime power >= 2)");
    return static_cast<std::uint64_t>(o.q);
}
inline int need_d(const Options& o) {
    require(o.d >= 0, "requires --d");
    return o.d;
}
inline int need_r(const Options& o) {
    require(o.r >= 0, "requires --r");
    return o.r;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> file_lines(const std::string& path) {
    std::istringstream is(read_file(path));
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(is, l)) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        std::string trimmed = l;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (!trimmed.empty() && trimmed[0] != '#') lines.push_back(l);
    }
    return lines;
}

inline ProjPoint parse_point(const Field& F, const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    ProjPoint p;
    while (is >> tok) p.push_back(element_from_text(F, tok));
    return p;
}

// ----- group handlers ------------------------------------------------------------

inline Json run_count(const Options& o) {
    const std::string& op = o.op;
    if (op == "proj") return to_json(proj_space_count(need_r(o), need_q(o)));
    if (op == "grassmannian") {
        require(o.k >= 0, "requires --k (the plane dimension)");
        return to_json(grassmannian_count(o.k, need_r(o), need_q(o)));
    }
    if (op == "plane-curves") return to_json(plane_curve_space_count(need_d(o), need_q(o)));
    if (op == "line-power-fiber") return to_json(line_power_fiber(need_r(o), need_q(o)));
    if (op == "planar") return to_json(planar_curves_count(need_d(o), need_r(o), need_q(o)));
    if (op == "smooth-conics") return to_json(smooth_conic_count(need_q(o)));
    throw std::invalid_argument(
        "unknown count operation (expected proj|grassmannian|plane-curves|line-power-fiber|"
        "planar|smooth-conics)");
}

inline Json run_bounds(const Options& o) {
    const std::string& op = o.op;
    if (op == "dims") return to_json(chow_dim(need_d(o), need_r(o)));
    if (op == "codim") return to_json(reducible_codim(need_d(o), need_r(o)));
    if (op == "g") {
        Json j;
        j["value"] = to_json(g_coeff(need_d(o), need_r(o)));
        j["formula_id"] = "g_coeff";
        return j;
    }
    if (op == "chow-degree") return to_json(chow_degree_bounds(need_d(o), need_r(o)));
    if (op == "rel-irr-degree") {
        require(o.ell >= 2, "requires --ell (a prime divisor of d)");
        Json j;
        j["value"] = to_json(rel_irr_degree_bound(o.ell, need_d(o), need_r(o)));
        j["formula_id"] = "rel_irr_degree_bound";
        return j;
    }
    if (op == "calc") {
        static const std::map<std::string, DegreeBoundKind> kinds = {
            {"bezout", DegreeBoundKind::Bezout},
            {"heintz-schnorr", DegreeBoundKind::HeintzSchnorr},
            {"components", DegreeBoundKind::ComponentsCodim},
            {"image", DegreeBoundKind::Image}};
        auto it = kinds.find(o.kind);
        require(it != kinds.end(),
                "requires --kind bezout|heintz-schnorr|components|image");
        std::vector<BigInt> in(o.inputs.begin(), o.inputs.end());
        Json j;
        j["value"] = to_json(degree_bound_calculator(it->second, in));
        j["formula_id"] = "degree_bound_calculator";
        return j;
    }
    if (op == "prob-reducible") return to_json(prob_reducible_interval(need_d(o), need_r(o), need_q(o)));
    if (op == "nonplanar") {
        Json j;
        j["value"] = to_json(nonplanar_fraction_bound(need_d(o), need_r(o), need_q(o)));
        j["formula_id"] = "nonplanar_fraction_bound";
        return j;
    }
    if (op == "rel-irr") return to_json(rel_irr_interval(need_d(o), need_r(o), need_q(o)));
    if (op == "weil") return to_json(avg_weil_bounds(need_d(o), need_r(o), need_q(o)));
    if (op == "plane-reducible") return to_json(plane_reducible_interval(need_d(o), need_q(o)));
    if (op == "count-bounds") return to_json(count_bounds(need_d(o), need_r(o), need_q(o)));
    throw std::invalid_argument(
        "unknown bounds operation (expected dims|codim|g|chow-degree|rel-irr-degree|calc|"
        "prob-reducible|nonplanar|rel-irr|weil|plane-reducible|count-bounds)");
}

inline const Field& field_for_q(std::uint64_t q) {
    std::uint64_t p, m;
    require(prime_power_decompose(q, p, m), "q must be a prime power");
    return make_field(p, m);
}

inline Json run_chow(const Options& o) {
    const std::string& op = o.op;
    if (op == "line-form") {
        require(!o.form_file.empty(), "requires --form-file with two spanning-point rows");
        const Field& F = field_for_q(need_q(o));
        auto lines = file_lines(o.form_file);
        require(lines.size() == 2, "line file must contain exactly two point rows");
        Line L(F, parse_point(F, lines[0]), parse_point(F, lines[1]));
        Json j;
        j["chow_form"] = line_chow_form(L).to_text();
        j["formula_id"] = "line_chow_form";
        return j;
    }
    if (op == "cycle-form") {
        require(!o.form_file.empty(),
                "requires --form-file with rows \"mult : x0 .. xr ; y0 .. yr\"");
        const Field& F = field_for_q(need_q(o));
        LineCycle cyc;
        for (const std::string& l : file_lines(o.form_file)) {
            std::size_t colon = l.find(':');
            std::size_t semi = l.find(';');
            require(colon != std::string::npos && semi != std::string::npos,
                    "cycle rows must look like \"mult : x0 .. xr ; y0 .. yr\"");
            int mult = std::stoi(l.substr(0, colon));
            ProjPoint x = parse_point(F, l.substr(colon + 1, semi - colon - 1));
            ProjPoint y = parse_point(F, l.substr(semi + 1));
            cyc.components.emplace_back(Line(F, x, y), mult);
        }
        Json j;
        j["chow_form"] = cycle_chow_form(cyc).to_text();
        j["degree"] = cyc.degree();
        j["formula_id"] = "cycle_chow_form";
        return j;
    }
    require(!o.form_file.empty(), "requires --form-file with a chow form");
    ChowForm F = ChowForm::from_text(read_file(o.form_file));
    if (op == "support") {
        auto pts = support_points(F, o.ext);
        Json arr = Json::array();
        for (const auto& p : pts) {
            std::string s;
            const Field& K = make_field(F.field().characteristic(), F.field().degree() * o.ext);
            for (std::size_t i = 0; i < p.size(); ++i)
                s += (i ? " " : "") + element_text(K, p[i]);
            arr.push_back(s);
        }
        Json j;
        j["points"] = arr;
        j["count"] = pts.size();
        j["ext_degree"] = o.ext;
        j["formula_id"] = "support_points";
        return j;
    }
    if (op == "support-equations") {
        Json arr = Json::array();
        for (const auto& eq : support_equations(F)) {
            Json e;
            e["gamma"] = eq.gamma;
            e["delta"] = eq.delta;
            e["form"] = eq.form.to_text();
            arr.push_back(std::move(e));
        }
        Json j;
        j["equations"] = arr;
        j["formula_id"] = "support_equations";
        return j;
    }
    if (op == "field-of-definition") {
        const Field& K = field_of_definition(F);
        Json j;
        j["p"] = K.characteristic();
        j["degree"] = K.degree();
        j["q"] = K.size();
        j["formula_id"] = "field_of_definition";
        return j;
    }
    if (op == "norm") {
        const Field& base = make_field(F.field().characteristic(), o.ext);
        ChowForm nm = norm_map(F, base);
        Json j;
        j["chow_form"] = nm.to_text();
        j["formula_id"] = "norm_map";
        return j;
    }
    if (op == "recover-cycle") {
        LineCycle cyc = cycle_from_chow_form(F);
        Json arr = Json::array();
        for (const auto& [L, a] : cyc.components) {
            Json c;
            c["multiplicity"] = a;
            std::string s0, s1;
            for (int i = 0; i <= L.r(); ++i) {
                s0 += (i ? " " : "") + element_text(F.field(), L.row(0)[i]);
                s1 += (i ? " " : "") + element_text(F.field(), L.row(1)[i]);
            }
            c["span"] = {s0, s1};
            arr.push_back(std::move(c));
        }
        Json j;
        j["components"] = arr;
        j["formula_id"] = "cycle_from_chow_form";
        return j;
    }
    throw std::invalid_argument(
        "unknown chow operation (expected line-form|cycle-form|support|support-equations|"
        "field-of-definition|norm|recover-cycle)");
}

inline FormClass parse_class(const std::string& name) {
    if (name == "FQ_REDUCIBLE" || name == "reducible") return FormClass::FqReducible;
    if (name == "RELATIVELY_IRREDUCIBLE" || name == "rel-irred")
        return FormClass::RelativelyIrreducible;
    if (name == "ABSOLUTELY_IRREDUCIBLE" || name == "abs-irred")
        return FormClass::AbsolutelyIrreducible;
    throw std::invalid_argument("unknown class filter (reducible|rel-irred|abs-irred)");
}

inline Json run_census(const Options& o, std::string* csv_out) {
    const std::string& op = o.op;
    if (op == "classify") {
        CensusReport r = classify_census(need_d(o), need_q(o), o.workers);
        if (csv_out) {
            *csv_out = "class,count\nreducible," + std::to_string(r.reducible) + "\nrel_irred," +
                       std::to_string(r.rel_irred) + "\nabs_irred," + std::to_string(r.abs_irred) +
                       "\nline_powers," + std::to_string(r.line_powers) + "\n";
        }
        return to_json(r);
    }
    if (op == "sample") {
        require(o.sample > 0, "requires --sample N (N >= 1000)");
        return to_json(sample_census(need_d(o), need_q(o), o.sample, o.seed));
    }
    if (op == "planar") return to_json(planar_in_Pr_census(need_d(o), need_r(o), need_q(o)));
    if (op == "points") {
        require(!o.klass.empty(), "requires --class reducible|rel-irred|abs-irred");
        PointStats st = point_statistics(need_d(o), need_q(o), parse_class(o.klass));
        if (csv_out) *csv_out = point_stats_csv(st);
        return to_json(st);
    }
    if (op == "classify-form") {
        require(!o.form_file.empty(), "requires --form-file with a form");
        HomogeneousForm f = HomogeneousForm::from_text(read_file(o.form_file));
        IrreducibilityClass c = classify(f);
        Json j;
        j["class"] = form_class_name(c.kind);
        if (c.kind == FormClass::RelativelyIrreducible)
            j["splitting_degree"] = c.splitting_degree;
        Factorization fac = factor(f, f.field());
        Json fs = Json::array();
        for (const auto& [g, mult] : fac.factors)
            fs.push_back({{"factor", g.to_text()}, {"multiplicity", mult}});
        j["factorization"] = fs;
        if (f.nvars() == 3) j["points"] = point_count(f, o.ext);
        j["formula_id"] = "classify";
        return j;
    }
    throw std::invalid_argument(
        "unknown census operation (expected classify|sample|planar|points|classify-form)");
}

inline Json run_verify(const Options& o, bool& any_fail) {
    Json results = Json::array();
    any_fail = false;
    auto push = [&](const CheckReport& rep) {
        results.push_back(to_json(rep));
        if (!rep.ok()) any_fail = true;
    };
    if (!o.suite.empty()) {
        bool found = false;
        for (const auto& [name, fn] : all_suites()) {
            if (o.suite == "all" || o.suite == name) {
                push(fn());
                found = true;
            }
        }
        require(found, "unknown suite: " + o.suite +
                           " (use one of lemma-counting, census-classification, plane-reducible, "
                           "codim, g-identities, chow-support, norm-rel-irr, weil, intervals, "
                           "determinism, all)");
    } else {
        push(verify_bounds(need_d(o), need_r(o), need_q(o)));
    }
    Json j;
    j["suites"] = results;
    j["ok"] = !any_fail;
    return j;
}

// ----- driver ---------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"exact counts, certified bounds, and censuses for curves over finite fields"};
    app.add_option("group", o.group, "command group: count|bounds|chow|census|verify")
        ->required();
    app.add_option("operation", o.op, "operation within the group");
    app.add_option("--d", o.d, "degree d");
    app.add_option("--r", o.r, "ambient projective dimension r");
    app.add_option("--q", o.q, "field size q (prime power)");
    app.add_option("--k", o.k, "plane dimension k (grassmannian)");
    app.add_option("--ell", o.ell, "prime divisor of d");
    app.add_option("--ext", o.ext, "extension degree (support scans, norms, point counts)");
    app.add_option("--sample", o.sample, "sample size N for the sampled census");
    app.add_option("--seed", o.seed, "sampling seed");
    app.add_option("--workers", o.workers, "worker threads for exhaustive censuses");
    app.add_option("--format", o.format, "output format: json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--form-file", o.form_file, "input file (forms, chow forms, points)");
    app.add_option("--output", o.output, "write the report to this path instead of stdout");
    app.add_option("--suite", o.suite, "verification suite name, or 'all'");
    app.add_option("--class", o.klass, "census class filter: reducible|rel-irred|abs-irred");
    app.add_option("--kind", o.kind, "degree bound kind for 'bounds calc'");
    app.add_option("--inputs", o.inputs, "integer inputs for 'bounds calc'")->delimiter(',');
    app.add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp field");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    int exit_code = 0;
    try {
        Json result;
        std::string csv;
        bool any_fail = false;
        if (o.group == "count") result = run_count(o);
        else if (o.group == "bounds") result = run_bounds(o);
        else if (o.group == "chow") result = run_chow(o);
        else if (o.group == "census") result = run_census(o, &csv);
        else if (o.group == "verify") result = run_verify(o, any_fail);
        else throw std::invalid_argument("unknown subcommand: " + o.group +
                                         " (expected count|bounds|chow|census|verify)");
        if (o.group == "verify" && any_fail) exit_code = 3;

        Json envelope = json_envelope(!o.no_timestamp);
        Json request;
        request["group"] = o.group;
        if (!o.op.empty()) request["operation"] = o.op;
        if (o.d >= 0) request["d"] = o.d;
        if (o.r >= 0) request["r"] = o.r;
        if (o.q >= 0) request["q"] = o.q;
        if (o.k >= 0) request["k"] = o.k;
        if (o.ell >= 0) request["ell"] = o.ell;
        if (o.ext != 1) request["ext"] = o.ext;
        if (o.sample) request["sample"] = o.sample;
        if (o.sample) request["seed"] = o.seed;
        if (!o.suite.empty()) request["suite"] = o.suite;
        if (!o.klass.empty()) request["class"] = o.klass;
        envelope["request"] = request;
        envelope["result"] = result;

        std::string text;
        if (o.format == "json") {
            text = envelope.dump(2) + "\n";
        } else if (o.format == "csv") {
            if (csv.empty())
                throw std::invalid_argument("csv output is available for census classify/points");
            text = csv;
        } else {
            std::ostringstream os;
            flatten_json(envelope, "", os);
            text = os.str();
        }
        if (!o.output.empty()) {
            std::ofstream f(o.output);
            if (!f) throw std::invalid_argument("cannot write output file: " + o.output);
            f << text;
        } else {
            out << text;
        }
        return exit_code;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), out, err);
}

}  // namespace chowcensus::cli
