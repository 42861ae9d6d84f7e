#include "chowcensus/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

using namespace chowcensus;

namespace {

struct CliResult {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int rc = cli::run(std::move(args), o, e);
    return {rc, o.str(), e.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("cli_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("count planar emits the exact value with its formula id") {
    auto r = run({"count", "planar", "--d", "2", "--r", "3", "--q", "2", "--no-timestamp"});
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["result"]["value"] == "875");
    CHECK(j["result"]["formula_id"] == "planar_curves_count");
    CHECK(j["schema_version"] == 1);
    CHECK_FALSE(j.contains("generated_at"));
}

TEST_CASE("bounds codim emits the u table") {
    auto r = run({"bounds", "codim", "--d", "7", "--r", "3", "--no-timestamp"});
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["result"]["codim"] == 4);
    CHECK(j["result"]["u_table"]["1"]["u"] == 4);
    CHECK(j["result"]["u_table"]["2"]["u"] == 7);
    CHECK(j["result"]["u_table"]["3"]["u"] == 9);
}

TEST_CASE("census classify matches the frozen conic counts") {
    auto r = run({"census", "classify", "--d", "2", "--q", "2", "--no-timestamp"});
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["result"]["counts"]["reducible"] == 28);
    CHECK(j["result"]["counts"]["rel_irred"] == 7);
    CHECK(j["result"]["counts"]["abs_irred"] == 28);
}

TEST_CASE("csv output") {
    auto r = run({"census", "classify", "--d", "2", "--q", "2", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("reducible,28") != std::string::npos);
    auto p = run({"census", "points", "--d", "2", "--q", "2", "--class", "reducible",
                  "--format", "csv"});
    REQUIRE(p.code == 0);
    CHECK(p.out.find("value,count") == 0);
    CHECK(p.out.find("3,7") != std::string::npos);
    CHECK(p.out.find("5,21") != std::string::npos);
}

TEST_CASE("validation failures exit with code 2 and name the hypothesis") {
    auto bad_q = run({"count", "planar", "--d", "2", "--r", "3", "--q", "6"});
    CHECK(bad_q.code == 2);
    CHECK(bad_q.err.find("prime power") != std::string::npos);

    auto bad_d = run({"bounds", "codim", "--d", "2", "--r", "4"});
    CHECK(bad_d.code == 2);
    CHECK(bad_d.err.find("4r-8") != std::string::npos);

    auto unknown = run({"frobnicate"});
    CHECK(unknown.code == 2);

    auto infeasible = run({"verify", "--d", "99", "--r", "3", "--q", "2"});
    CHECK(infeasible.code == 2);
    CHECK(infeasible.err.find("cap") != std::string::npos);
}

TEST_CASE("byte-identical output across worker counts") {
    auto one = run({"census", "classify", "--d", "3", "--q", "3", "--no-timestamp"});
    auto four = run({"census", "classify", "--d", "3", "--q", "3", "--workers", "4",
                     "--no-timestamp"});
    REQUIRE(one.code == 0);
    REQUIRE(four.code == 0);
    CHECK(one.out == four.out);
}

TEST_CASE("verify subcommand") {
    auto ok = run({"verify", "--d", "3", "--r", "3", "--q", "2", "--no-timestamp"});
    CHECK(ok.code == 0);
    Json j = ok.json();
    CHECK(j["result"]["ok"] == true);

    auto suite = run({"verify", "--suite", "g-identities", "--no-timestamp"});
    CHECK(suite.code == 0);

    auto bad_suite = run({"verify", "--suite", "nope"});
    CHECK(bad_suite.code == 2);
}

TEST_CASE("form files drive the census classify-form operation") {
    const Field& F2 = make_field(2, 1);
    auto conj = HomogeneousForm::from_text("2 3 2 : 1 1 0 1 0 0");  // X0^2+X0X1+X1^2
    std::string path = write_temp("form.txt", conj.to_text() + "\n");
    auto r = run({"census", "classify-form", "--form-file", path, "--no-timestamp"});
    std::remove(path.c_str());
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["result"]["class"] == "RELATIVELY_IRREDUCIBLE");
    CHECK(j["result"]["splitting_degree"] == 2);
    CHECK(j["result"]["points"] == 1);  // one rational point on the conjugate line pair
    (void)F2;
}

TEST_CASE("chow subcommands round trip through files") {
    std::string lines = write_temp("line.txt", "1 0 0 0\n0 1 0 0\n");
    auto lf = run({"chow", "line-form", "--q", "2", "--form-file", lines, "--no-timestamp"});
    std::remove(lines.c_str());
    REQUIRE(lf.code == 0);
    std::string form_text = lf.json()["result"]["chow_form"];
    std::string cf_path = write_temp("chow.txt", form_text + "\n");
    auto sup = run({"chow", "support", "--form-file", cf_path, "--no-timestamp"});
    REQUIRE(sup.code == 0);
    CHECK(sup.json()["result"]["count"] == 3);
    auto fod = run({"chow", "field-of-definition", "--form-file", cf_path, "--no-timestamp"});
    REQUIRE(fod.code == 0);
    CHECK(fod.json()["result"]["q"] == 2);
    std::remove(cf_path.c_str());
}

TEST_CASE("output file writing") {
    std::string path = "cli_test_out.json";
    auto r = run({"count", "smooth-conics", "--q", "3", "--no-timestamp", "--output", path});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::remove(path.c_str());
    Json j = Json::parse(ss.str());
    CHECK(j["result"]["value"] == "234");
}
