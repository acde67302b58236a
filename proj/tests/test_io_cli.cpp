#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "lcdk/io.hpp"
#include "lcdk/predicates.hpp"
#include "lcdk/random.hpp"

using namespace lcdk;

namespace {

#ifndef LCDK_BIN
#define LCDK_BIN "lcdk"
#endif

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(LCDK_BIN) + " " + args + " 2>/dev/null";
    std::array<char, 512> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string tmp_path(const std::string& name) { return std::string("/tmp/lcdk_test_") + name; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace

TEST_CASE("parse_rational") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("12") == Rational(12));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("0.1") == Rational(1, 10));  // exact decimal, no binary detour
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("2.5e2") == Rational(250));
    CHECK(parse_rational(" 7/2 ") == Rational(7, 2));
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK(parse_rational(".5") == Rational(1, 2));
    CHECK(parse_rational("5.") == Rational(5));
    CHECK(parse_rational("00.5") == Rational(1, 2));
    CHECK(parse_rational("-0") == Rational(0));
    CHECK(parse_rational("010/100") == Rational(1, 10));
    CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
    CHECK(format_rational(Rational(-3, 4)) == "-3/4");
    CHECK(format_rational(Rational(5)) == "5");
}

TEST_CASE("sequence JSON round trip") {
    SUBCASE("rational values reproduce bit-identically") {
        Sequence<Rational> s({-2, 1}, {Rational(1, 3), Rational(0), Rational(7, 2), Rational(4)});
        auto j = io::to_json(s);
        auto back = std::get<Sequence<Rational>>(io::sequence_from_json(j));
        CHECK(back == s);
        CHECK(io::to_json(back) == j);
    }
    SUBCASE("float values survive shortest-round-trip serialization") {
        Rng rng(5);
        std::vector<double> v;
        for (int i = 0; i < 50; ++i) v.push_back(draw_u01(rng) * 1e3);
        Sequence<double> s({0, 49}, v);
        auto text = io::to_json(s).dump();
        auto back = std::get<Sequence<double>>(io::sequence_from_json(io::json::parse(text)));
        CHECK(back == s);
    }
    SUBCASE("malformed input") {
        CHECK_THROWS(io::sequence_from_json(io::json::parse(R"({"lo": 0, "hi": 2})")));
        CHECK_THROWS(io::sequence_from_json(io::json::parse(R"({"lo":0,"hi":1,"values":[1,2],"backend":"hex"})")));
    }
}

TEST_CASE("reference JSON round trip") {
    auto j = io::json::parse(R"({"kind":"poisson","params":{"lambda":"3/2"},"lo":0,"hi":6})");
    auto r = io::reference_from_json<Rational>(j);
    CHECK(r.at(2) == Rational(9, 8));
    auto j2 = io::reference_to_json(r);
    auto r2 = io::reference_from_json<Rational>(j2);
    CHECK(r2.mass == r.mass);

    auto c = io::reference_from_json<double>(io::json::parse(R"({"kind":"counting","lo":-3,"hi":3})"));
    CHECK(c.at(0) == 1.0);
}

TEST_CASE("cli: check") {
    const std::string geometric = tmp_path("geo.json");
    write_file(geometric, R"({"lo":0,"hi":3,"backend":"rational","values":["1","2","4","8"]})");
    auto r = run_cli("check " + geometric);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("log-concave: true") != std::string::npos);

    const std::string gap = tmp_path("gap.json");
    write_file(gap, R"({"lo":0,"hi":2,"backend":"rational","values":["1","0","1"]})");
    CHECK(run_cli("check " + gap).exit_code == 1);

    CHECK(run_cli("check /tmp/lcdk_no_such_file.json").exit_code == 2);

    // log-concave but not log-affine: exit depends on the requested predicates
    const std::string hump = tmp_path("hump.json");
    write_file(hump, R"({"lo":0,"hi":3,"backend":"rational","values":["1","2","2","1"]})");
    CHECK(run_cli("check " + hump).exit_code == 1);
    CHECK(run_cli("check " + hump + " --predicates log-concave,unimodal").exit_code == 0);
}

TEST_CASE("cli: geom") {
    auto mean = run_cli("geom mean --p 1 --k 2 --l 6");
    CHECK(mean.exit_code == 0);
    CHECK(mean.out.substr(0, 1) == "4");
    auto c = run_cli("geom constant --p 0.5 --k 0 --l 1");
    CHECK(c.out.find("0.6666") != std::string::npos);
    auto solve = run_cli("geom solve-p --k 0 --l 1 --c 0.333333333333333333");
    CHECK(solve.exit_code == 0);
    CHECK(run_cli("geom tail --p 0.5 --k 0 --l 1").exit_code == 2);  // missing --t
    CHECK(run_cli("geom bogus --k 0 --l 1").exit_code == 2);
}

TEST_CASE("cli: convolve") {
    const std::string a = tmp_path("conv_a.json");
    const std::string b = tmp_path("conv_b.json");
    write_file(a, R"({"lo":0,"hi":1,"backend":"rational","values":["1","1"]})");
    write_file(b, R"({"lo":0,"hi":1,"backend":"rational","values":["1","1"]})");
    const std::string out = tmp_path("conv_out.json");
    auto r = run_cli("--report " + out + " --no-timestamp convolve " + a + " " + b);
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(slurp(out));
    CHECK(j["log_concave"] == true);
    CHECK(j["convolution"]["values"] == io::json::parse(R"(["1","2","1"])"));
}

TEST_CASE("cli: sample with the float backend") {
    const std::string out = tmp_path("sf.json");
    auto r = run_cli("--backend float --seed 4 --no-timestamp sample --count 3 --interval 0:9 --report " + out);
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(slurp(out));
    for (const auto& s : j["samples"]) {
        CHECK(s["backend"] == "float");
        auto seq = std::get<Sequence<double>>(io::sequence_from_json(s));
        CHECK(is_log_concave(seq, ReferenceMeasure<double>::counting(seq.interval)));
    }
}

TEST_CASE("cli: sample determinism and validity") {
    const std::string out1 = tmp_path("s1.json"), out2 = tmp_path("s2.json");
    std::string args = "--seed 99 --no-timestamp sample --count 5 --interval 0:12 --report ";
    CHECK(run_cli(args + out1).exit_code == 0);
    CHECK(run_cli(args + out2).exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));
    auto j = io::json::parse(slurp(out1));
    CHECK(j["samples"].size() == 5);
    for (const auto& s : j["samples"]) {
        auto seq = std::get<Sequence<Rational>>(io::sequence_from_json(s));
        CHECK(is_log_concave(seq, ReferenceMeasure<Rational>::counting(seq.interval)));
    }
}

TEST_CASE("cli: extremize") {
    const std::string out = tmp_path("ext.json");
    auto r = run_cli("--seed 5 --no-timestamp extremize --interval 0:12 --constraint 'mean<=3' --functional tail:5 "
                     "--oracle 2000 --report " +
                     out);
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(slurp(out));
    CHECK(j["witness_log_affine"] == true);
    CHECK(j["witness_lambda_sign_constant"] == true);
    CHECK(j["oracle_dominated"] == true);
    CHECK(j["oracle_max"].get<double>() <= j["best_value"].get<double>() + 1e-9);

    // infeasible: a constraint table that is everywhere negative
    const std::string tbl = tmp_path("neg_table.json");
    write_file(tbl, R"({"lo":0,"hi":4,"values":[-1,-1,-1,-1,-1]})");
    auto bad = run_cli("--no-timestamp extremize --interval 0:4 --constraint table:" + tbl +
                       " --functional tail:2 --report " + tmp_path("ext_bad.json"));
    CHECK(bad.exit_code == 1);
    CHECK(io::json::parse(slurp(tmp_path("ext_bad.json")))["infeasible"] == true);
}

TEST_CASE("cli: verify") {
    const std::string out = tmp_path("ver.json");
    auto r = run_cli("--seed 3 --no-timestamp verify dilation --interval 0:8 --trials 20 --report " + out);
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(slurp(out));
    CHECK(j["name"] == "dilation");
    CHECK(j["passes"] == j["instances_checked"]);
    CHECK(j["worst_slack"].get<double>() >= -1e-12);
    CHECK(!j.contains("timestamp"));

    // deterministic report bytes for identical config + seed
    const std::string out2 = tmp_path("ver2.json");
    run_cli("--seed 3 --no-timestamp verify dilation --interval 0:8 --trials 20 --report " + out2);
    CHECK(slurp(out) == slurp(out2));

    // csv export
    const std::string csv = tmp_path("ver.csv");
    auto rc = run_cli("--seed 3 --format csv verify reverse-jensen --trials 5 --report " + csv);
    CHECK(rc.exit_code == 0);
    auto body = slurp(csv);
    CHECK(body.rfind("instance,slack,pass", 0) == 0);
    CHECK(body.find("TOTAL") != std::string::npos);

    CHECK(run_cli("verify no-such-check").exit_code == 2);
}

TEST_CASE("cli: check with explicit reference and float backend") {
    const std::string f = tmp_path("float_seq.json");
    write_file(f, R"({"lo":0,"hi":2,"backend":"float","values":[1.0,1.2,1.0]})");
    // log-concave under counting (1.44 >= 1) but not relative to the stricter
    // Poisson window (1.44 * 0.5 < 1)
    CHECK(run_cli("check " + f + " --predicates log-concave").exit_code == 0);
    auto rel = run_cli("check " + f + R"( --reference '{"kind":"poisson","params":{"lambda":1},"lo":0,"hi":2}')" +
                       " --predicates log-concave");
    CHECK(rel.exit_code == 1);
}

TEST_CASE("cli: every verify subcommand dispatches") {
    for (const std::string name : {"four-functions", "convolution", "prekopa-leindler", "functional-dilation",
                                   "deviations", "mean-deviation"}) {
        auto r = run_cli("--seed 11 verify " + name + " --trials 6 --report " + tmp_path("v_" + name + ".json"));
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("[pass]") != std::string::npos);
    }
}

TEST_CASE("cli: exhaustive dilation sweep") {
    const std::string out = tmp_path("dil_ex.json");
    auto r = run_cli("--seed 2 --no-timestamp verify dilation --exhaustive --interval 0:12 --report " + out);
    CHECK(r.exit_code == 0);
    auto j = io::json::parse(slurp(out));
    CHECK(j["instances_checked"].get<std::int64_t>() == 9LL * 8192 * 215);
    CHECK(j["worst_slack"].get<double>() >= -1e-12);
}

TEST_CASE("cli: sample-check-convolve workflow") {
    const std::string samples = tmp_path("wf_samples.json");
    REQUIRE(run_cli("--seed 21 --no-timestamp sample --count 2 --interval 0:14 --report " + samples).exit_code == 0);
    auto j = io::json::parse(slurp(samples));
    const std::string a = tmp_path("wf_a.json"), b = tmp_path("wf_b.json");
    write_file(a, j["samples"][0].dump());
    write_file(b, j["samples"][1].dump());
    CHECK(run_cli("check " + a + " --predicates log-concave,unimodal").exit_code == 0);
    const std::string conv = tmp_path("wf_conv.json");
    CHECK(run_cli("--no-timestamp convolve " + a + " " + b + " --report " + conv).exit_code == 0);
    CHECK(io::json::parse(slurp(conv))["log_concave"] == true);
}

TEST_CASE("cli: usage errors") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("--backend hex check /tmp/x.json").exit_code == 2);
}
