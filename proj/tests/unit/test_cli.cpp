#include "lrcvar/cli.hpp"
#include "lrcvar/instance_io.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "lrcvar");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = lrcvar::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("solve example2") {
    const auto r = run({"solve", "--builtin", "example2", "--alpha", "0.7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("93.2402") != std::string::npos);
    CHECK(r.out.find("0.0255") != std::string::npos);
    const auto j = run({"solve", "--builtin", "example2", "--alpha", "0.7", "--json"});
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["value"].get<double>() == doctest::Approx(93.24).epsilon(1e-4));
    CHECK(doc["policy"]["3"]["1"].get<double>() == doctest::Approx(0.0255).epsilon(0.04));
    CHECK(doc["n_randomizations"] == 1);
    CHECK(doc["certificates"].contains("oracle_gap"));
}

TEST_CASE("solve a one-state file") {
    const auto path = temp_file("lrcvar_cli_one.json");
    lrcvar::save_instance(fixtures::one_state({7.25}), path);
    const auto r = run({"solve", "--instance", path, "--alpha", "0.4", "--json"});
    std::filesystem::remove(path);
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["value"].get<double>() == doctest::Approx(7.25));
}

TEST_CASE("enumerate") {
    const auto r = run({"enumerate", "--builtin", "example2", "--alpha", "0.7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("*     1  (2,1,3)") != std::string::npos);
    CHECK(r.out.find("92.6675") != std::string::npos);
    CHECK(r.out.find("gap                  0.572") != std::string::npos);
    const auto path = temp_file("lrcvar_cli_enum.json");
    lrcvar::save_instance(fixtures::one_state({2.0}), path);
    const auto one = nlohmann::json::parse(run({"enumerate", "--instance", path, "--alpha", "0.5", "--json"}).out);
    std::filesystem::remove(path);
    CHECK(one["rows"].size() == 1);
    CHECK(one["gap"].get<double>() == doctest::Approx(0.0));
    const auto en = nlohmann::json::parse(
        run({"enumerate", "--builtin", "endowment", "--alpha", "0.9", "--beta", "0.5", "--top", "3", "--json"}).out);
    CHECK(en["rows"].size() == 3);
    CHECK(en["gap"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("simulate") {
    const auto r = run({"simulate", "--builtin", "example1", "--policy", "example1", "--alpha", "0.5", "--T", "29524",
                        "--json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["per_step_max"] == 2.0);
    CHECK(doc["per_step_min"] == -2.0);
    const auto one = run({"simulate", "--builtin", "example2", "--policy", "uniform", "--alpha", "0.7", "--T", "1", "--csv"});
    CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 2);

    // the JSON of solve doubles as a policy file
    const auto pol = temp_file("lrcvar_cli_policy.json");
    std::ofstream(pol) << run({"solve", "--builtin", "example2", "--alpha", "0.7", "--json"}).out;
    const auto csv = temp_file("lrcvar_cli_seq.csv");
    const auto s = run({"simulate", "--builtin", "example2", "--policy", pol, "--alpha", "0.7", "--T", "20000", "--out",
                        csv, "--json"});
    REQUIRE(s.code == 0);
    const auto sd = nlohmann::json::parse(s.out);
    CHECK(sd["final_cesaro"].get<double>() == doctest::Approx(93.24).epsilon(1e-3));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,cvar_t,cesaro_t");
    std::filesystem::remove(pol);
    std::filesystem::remove(csv);
}

TEST_CASE("scan, check, vertices, export") {
    const auto scan = run({"scan", "--builtin", "example2", "--alpha", "0.7"});
    CHECK(scan.out.find("93.2409  <- argmin") != std::string::npos);
    CHECK(scan.out.find("exact minimum     93.2402") != std::string::npos);
    const auto chk = run({"check", "--builtin", "example1"});
    CHECK(chk.code == 0);
    CHECK(chk.out.find("VIOLATED") != std::string::npos);
    CHECK(chk.out.find("2 recurrent classes") != std::string::npos);
    const auto v = run({"vertices", "--builtin", "example2", "--json"});
    CHECK(nlohmann::json::parse(v.out)["policies_examined"] == 27);
    const auto lp = run({"export-lp", "--builtin", "example2", "--alpha", "0.7", "--lp", "primal"});
    CHECK(lp.code == 0);
    CHECK(lp.out.find("Minimize") != std::string::npos);
    CHECK(run({"export-lp", "--builtin", "example2", "--alpha", "0.7", "--lp", "sparsify"}).code == 2);
}

TEST_CASE("gen is deterministic") {
    const auto a = run({"gen", "--seed", "7", "--states", "3", "--actions", "2"});
    const auto b = run({"gen", "--seed", "7", "--states", "3", "--actions", "2"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(lrcvar::parse_instance(a.out) == lrcvar::random_instance(7, 3, 2));
}

TEST_CASE("exit codes") {
    CHECK(run({"solve", "--builtin", "example2", "--alpha", "1.5"}).code == 2);
    CHECK(run({"solve", "--alpha", "0.5"}).code == 2);
    CHECK(run({"solve", "--builtin", "example2", "--gen", "1,2,2", "--alpha", "0.5"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"solve", "--builtin", "example2", "--alpha", "abc"}).code == 2);
    CHECK(run({"solve", "--instance", "/nonexistent.json", "--alpha", "0.5"}).code == 2);
    CHECK(run({"solve", "--builtin", "example1", "--alpha", "0.5"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    const auto bad = run({"solve", "--builtin", "nope", "--alpha", "0.5"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("unknown builtin") != std::string::npos);
}

}
