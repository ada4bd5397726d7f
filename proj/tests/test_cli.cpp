#include "oracles.hpp"

#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using nuqcli::run_cli;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("nuq-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture_path(const std::string& name) { return std::string(NUQ_FIXTURE_DIR) + "/" + name + ".json"; }
std::string data_path(const std::string& name) { return std::string(NUQ_TEST_DATA_DIR) + "/" + name + ".json"; }

std::vector<nlohmann::json> lines(const std::string& s) {
    std::vector<nlohmann::json> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l))
        if (!l.empty()) out.push_back(nlohmann::json::parse(l));
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("report HOPF2") {
    TempDir t;
    std::string cache = (t.path / "cache").string();
    Run r = cli({"report", fixture_path("HOPF2"), "--format", "machine", "--cache", cache});
    REQUIRE(r.code == 0);
    auto j = lines(r.out).at(0);
    CHECK(j["det"] == 4);
    CHECK(j["module"]["text"] == "Z + Z2 + Z2");
    CHECK(j["ker_w"]["torsion"] == nlohmann::json::array({2, 2}));
    CHECK(j["qa"]["size"] == 3);
    CHECK(j["imq"]["size"] == 6);
    CHECK(j["imq"]["orbit_sizes"] == nlohmann::json::array({2, 2, 2}));
    CHECK(j["main3"] == "pass");
    CHECK(j["size_bound_attained"] == "upper");
    CHECK(j["evenized"] == true);
    CHECK(j["checks_pass"] == true);
    CHECK(j["file"] == "HOPF2.json");

    Run text = cli({"report", fixture_path("HOPF2"), "--cache", cache});
    CHECK(text.code == 0);
    CHECK(text.out.find("det 4") != std::string::npos);
}

TEST_CASE("report LPRIME and the unknot") {
    TempDir t;
    std::string cache = (t.path / "cache").string();
    Run r = cli({"report", fixture_path("LPRIME"), "--format", "machine", "--cache", cache});
    REQUIRE(r.code == 0);
    auto j = lines(r.out).at(0);
    CHECK(j["det"] == 0);
    CHECK(j["module"]["free_rank"] == 2);
    CHECK(j["module"]["torsion"] == nlohmann::json::array({2, 2}));
    CHECK(j["qa"] == "infinite");
    CHECK(j["imq"]["status"] == "infinite");
    CHECK(j["main3"] == "n/a");
    CHECK(j["size_bound_attained"].is_null());

    Run u = cli({"report", data_path("unknot"), "--format", "machine", "--cache", cache});
    REQUIRE(u.code == 0);
    auto k = lines(u.out).at(0);
    CHECK(k["det"] == 1);
    CHECK(k["module"]["text"] == "Z");
    CHECK(k["qa"]["size"] == 1);
    CHECK(k["imq"]["size"] == 1);
}

TEST_CASE("flags") {
    TempDir t;
    std::string cache = (t.path / "cache").string();
    Run r = cli({"--no-imq", "report", fixture_path("T22T24"), "--format", "machine", "--cache", cache});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).at(0)["imq"]["status"] == "skipped");

    Run c = cli({"report", fixture_path("T22T24"), "--imq-cap", "3", "--format", "machine", "--cache", cache});
    CHECK(c.code == 3);
    CHECK(lines(c.out).at(0)["imq"]["status"] == "capped");

    std::string dump = (t.path / "q.txt").string();
    Run d = cli({"report", fixture_path("SIXTHREE"), "--dump-quandle", dump, "--cache", cache});
    CHECK(d.code == 0);
    std::ifstream in(dump);
    nuq::FiniteQuandle q = nuq::read_table(in);
    CHECK(q.n == 6);

    CHECK(cli({"report"}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"report", fixture_path("HOPF2"), "--format", "xml"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("input errors") {
    TempDir t;
    std::string cache = (t.path / "cache").string();
    fs::path bad = t.path / "bad.json";
    std::ofstream(bad) << "{\"components\": [";
    Run r = cli({"report", bad.string(), "--cache", cache});
    CHECK(r.code == 1);
    CHECK(r.err.find("parse error") != std::string::npos);

    fs::path invalid = t.path / "invalid.json";
    std::ofstream(invalid) << R"({"components": [{"arcs": ["a"]}, {"arcs": ["a"]}]})";
    Run v = cli({"report", invalid.string(), "--cache", cache});
    CHECK(v.code == 2);
    CHECK(v.err.find("arc-multi-component") != std::string::npos);

    CHECK(cli({"report", (t.path / "missing.json").string(), "--cache", cache}).code == 1);
}

TEST_CASE("compare") {
    TempDir t;
    std::string cache = (t.path / "cache").string();
    auto cmp = [&](const std::string& a, const std::string& b) {
        Run r = cli({"compare", fixture_path(a), fixture_path(b), "--format", "machine", "--cache", cache});
        REQUIRE(r.code == 0);
        return lines(r.out).at(0);
    };
    auto hs = cmp("HOPF2", "SIXTHREE");
    CHECK(hs["groups_isomorphic"] == "yes");
    CHECK(hs["phi_equivalent"] == "yes");
    CHECK(hs["qa_isomorphic"] == "yes");
    CHECK(hs["imq_isomorphic"] == "no");
    CHECK(hs["h1_isomorphic"] == "yes");

    auto ft = cmp("FIG5L", "FIGT");
    CHECK(ft["h1_isomorphic"] == "yes");
    CHECK(ft["phi_equivalent"] == "no");
    CHECK(ft["qa_isomorphic"] == "n/a");

    auto lp = cmp("LPRIME", "LDPRIME");
    CHECK(lp["groups_isomorphic"] == "yes");
    CHECK(lp["phi_equivalent"] == "no");

    auto self = cmp("T22T24", "T22T24");
    CHECK(self["imq_isomorphic"] == "yes");
    CHECK(self["phi_equivalent"] == "yes");

    auto mixed = cmp("HOPF2", "LPRIME");
    CHECK(mixed["qa_isomorphic"] == "no");
    CHECK(mixed["imq_isomorphic"] == "no");
}

TEST_CASE("corpus, cache and partial failure") {
    TempDir t;
    fs::path dir = t.path / "corpus";
    fs::create_directories(dir);
    for (const char* name : {"HOPF2", "SIXTHREE", "trefoil", "figure_eight", "FIG5L", "FIGT", "LPRIME", "LDPRIME", "T22T24"})
        fs::copy_file(fixture_path(name), dir / (std::string(name) + ".json"));
    std::string cache = (t.path / "cache").string();

    Run first = cli({"corpus", dir.string(), "--format", "machine", "--cache", cache, "--jobs", "2"});
    REQUIRE(first.code == 0);
    auto rows = lines(first.out);
    REQUIRE(rows.size() == 10);
    for (std::size_t i = 0; i < 9; ++i) CHECK(rows[i]["checks_pass"] == true);
    CHECK(rows[9]["summary"]["reports"] == 9);
    CHECK(rows[9]["summary"]["property_failures"] == 0);
    CHECK(rows[9]["summary"]["bounds_not_attained"] == nlohmann::json::array());
    CHECK(rows[7]["size_bound_attained"] == "both");
    CHECK(first.err.find("0 hits, 9 misses") != std::string::npos);

    Run second = cli({"corpus", dir.string(), "--format", "machine", "--cache", cache});
    CHECK(second.code == 0);
    CHECK(second.out == first.out);
    CHECK(second.err.find("9 hits, 0 misses") != std::string::npos);

    // fresh computation matches the cached value byte for byte
    Run fresh = cli({"corpus", dir.string(), "--format", "machine", "--cache", (t.path / "other").string()});
    CHECK(fresh.out == first.out);

    // a damaged cache line is ignored
    std::ofstream(cache, std::ios::app) << "{not json\n";
    Run third = cli({"corpus", dir.string(), "--format", "machine", "--cache", cache});
    CHECK(third.out == first.out);

    std::ofstream(dir / "broken.json") << "{\"crossings\": [[\"a\"";
    Run partial = cli({"corpus", dir.string(), "--cache", cache});
    CHECK(partial.code == 1);
    CHECK(partial.out.find("9 reports, 1 errors") != std::string::npos);
    CHECK(partial.out.find("broken.json\n  ERROR (1)") != std::string::npos);
}

TEST_CASE("cache location from the environment") {
    TempDir t;
    fs::path env_cache = t.path / "env-cache";
    setenv("QUANDLE_CACHE", env_cache.c_str(), 1);
    Run r = cli({"report", fixture_path("trefoil")});
    unsetenv("QUANDLE_CACHE");
    CHECK(r.code == 0);
    CHECK(fs::exists(env_cache));
}

}  // TEST_SUITE
