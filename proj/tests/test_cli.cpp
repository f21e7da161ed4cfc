#include <doctest.h>

#include "qtff/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace qtff;
using namespace qtff::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / ("qtff_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

const char* kScenario = R"({
  "name": "file dephasing",
  "dim": 2,
  "hamiltonian": {"re": [[0, 0], [0, 0]]},
  "beta": 1.0,
  "initial_state": {"re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0, 0], [0, 0]]},
  "channels": [{"lindblad": {"re": [[1, 0], [0, -1]]}, "rate": {"kind": "constant", "params": {"value": 0.5}}}],
  "t_max": 1.0,
  "dt": 0.001
})";

}  // namespace

TEST_CASE("format_number") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_fixed(0.6) == "0.600000000");
}

TEST_CASE("parse_scenario") {
    const dynamics::Scenario s = parse_scenario(kScenario);
    CHECK(s.name == "file dephasing");
    CHECK(s.channels.size() == 1);
    CHECK(s.t_max == 1.0);

    std::string extra = kScenario;
    extra.insert(extra.rfind('}'), R"(, "colour": 3)");
    CHECK_THROWS_WITH_AS(parse_scenario(extra), doctest::Contains("colour"), SchemaError);

    std::string nested = kScenario;
    nested.replace(nested.find(R"("value": 0.5)"), 12, R"("value": 0.5, "phase": 1)");
    CHECK_THROWS_WITH_AS(parse_scenario(nested), doctest::Contains("phase"), SchemaError);

    CHECK_THROWS_AS(parse_scenario("{ not json"), SchemaError);

    std::string ragged = kScenario;
    ragged.replace(ragged.find("[[0, 0], [0, 0]]"), 16, "[[0, 0], [0]]");
    CHECK_THROWS_AS(parse_scenario(ragged), SchemaError);

    std::string bad_trace = kScenario;
    bad_trace.replace(bad_trace.find("[[0.5, 0.5], [0.5, 0.5]]"), 24, "[[0.7, 0.5], [0.5, 0.5]]");
    CHECK_THROWS_AS(parse_scenario(bad_trace), ValidationError);

    std::string table = kScenario;
    const std::string constant = R"({"kind": "constant", "params": {"value": 0.5}})";
    table.replace(table.find(constant), constant.size(),
                  R"({"kind": "table", "params": {"times": [0, 2], "values": [0.5, 0.5]}})");
    CHECK(parse_scenario(table).channels[0].rate(1.0) == doctest::Approx(0.5));
}

TEST_CASE("simulate writes a well-formed CSV") {
    const fs::path dir = scratch();
    const Result r = call({"simulate", "--case", "fig3_eternal_pauli", "--out", (dir / "f3.csv").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("samples=5001") != std::string::npos);
    const auto rows = read_csv(dir / "f3.csv");
    REQUIRE(rows.size() == 5002);
    const auto& h = rows[0];
    CHECK(h.size() == 9 + 3);
    CHECK(h.front() == "t");
    CHECK(h[1] == "abar");
    CHECK(h[3] == "dabar_1");
    for (const auto& row : rows) CHECK(row.size() == h.size());
    const std::size_t d3 = column(h, "dabar_3");
    const std::size_t flag = column(h, "clamp_flag");
    double prev_t = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        CHECK(t > prev_t);
        prev_t = t;
        if (rows[i][flag] == "0") CHECK(std::stod(rows[i][d3]) > 0.0);
    }
    CHECK(rows[1][flag] == "1");
    const std::string text = slurp(dir / "f3.csv");
    CHECK(text.find('\r') == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("simulate from a scenario file and overrides") {
    const fs::path dir = scratch();
    spit(dir / "s.json", kScenario);
    const Result r = call({"simulate", "--scenario", (dir / "s.json").string(), "--out", (dir / "s.csv").string(),
                           "--t-max", "0.5"});
    REQUIRE(r.code == kExitOk);
    const auto rows = read_csv(dir / "s.csv");
    CHECK(rows.size() == 502);
    CHECK(rows[0].size() == 9 + 1);

    // identical inputs give identical bytes
    const std::string first = slurp(dir / "s.csv");
    REQUIRE(call({"simulate", "--scenario", (dir / "s.json").string(), "--out", (dir / "s.csv").string(),
                  "--t-max", "0.5"}).code == kExitOk);
    CHECK(slurp(dir / "s.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("simulate error paths") {
    const fs::path dir = scratch();
    spit(dir / "bad.json", "{\"dim\": 2,");
    Result r = call({"simulate", "--scenario", (dir / "bad.json").string(), "--out", (dir / "x.csv").string()});
    CHECK(r.code == kExitSchema);

    std::string extra = kScenario;
    extra.insert(extra.rfind('}'), R"(, "gamma": 1)");
    spit(dir / "extra.json", extra);
    r = call({"simulate", "--scenario", (dir / "extra.json").string(), "--out", (dir / "x.csv").string()});
    CHECK(r.code == kExitSchema);
    CHECK(r.err.find("gamma") != std::string::npos);

    r = call({"simulate", "--case", "fig1_sin_dephasing", "--scenario", (dir / "bad.json").string(), "--out",
              (dir / "x.csv").string()});
    CHECK(r.code == kExitSchema);
    r = call({"simulate", "--case", "nope", "--out", (dir / "x.csv").string()});
    CHECK(r.code == kExitSchema);
    r = call({"simulate", "--case", "fig2_const_dephasing"});
    CHECK(r.code == kExitSchema);

    std::string neg = kScenario;
    neg.replace(neg.find(R"("value": 0.5)"), 12, R"("value": -0.5)");
    neg.replace(neg.find("[[0.5, 0.5], [0.5, 0.5]]"), 24, "[[0.5, 0.4], [0.4, 0.5]]");
    spit(dir / "neg.json", neg);
    r = call({"simulate", "--scenario", (dir / "neg.json").string(), "--out", (dir / "x.csv").string()});
    CHECK(r.code == kExitPositivity);
    CHECK(r.err.find("t = ") != std::string::npos);

    r = call({"simulate", "--case", "fig2_const_dephasing", "--out", (dir / "x.csv").string(), "--dt", "0.5"});
    CHECK(r.code == kExitNumeric);

    r = call({"simulate", "--case", "fig2_const_dephasing", "--out", (dir / "missing" / "sub" / "x.csv").string()});
    CHECK(r.code == kExitIo);
    CHECK_FALSE(fs::exists(dir / "x.csv"));
    fs::remove_all(dir);
}

TEST_CASE("QTFF_EPS") {
    ::setenv("QTFF_EPS", "1e-6", 1);
    CHECK(clamp_eps_from_env() == 1e-6);
    ::setenv("QTFF_EPS", "zero", 1);
    CHECK_THROWS_AS(clamp_eps_from_env(), ValidationError);
    ::setenv("QTFF_EPS", "-1", 1);
    CHECK_THROWS_AS(clamp_eps_from_env(), ValidationError);
    ::unsetenv("QTFF_EPS");
    CHECK(clamp_eps_from_env() == 1e-12);
}

TEST_CASE("locc") {
    Result r = call({"locc", "--alpha", "90/122,12/122,10/122,10/122", "--beta", "55/122,55/122,6/122,6/122",
                     "--exact"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("\"p_backward\": 0.600000000") != std::string::npos);
    CHECK(r.out.find("\"p_forward_exact\": \"32/67\"") != std::string::npos);
    CHECK(r.out.find("\"predicted_direction\": \"backward\"") != std::string::npos);
    CHECK(r.out.find("\"nielsen_forward\": false") != std::string::npos);

    r = call({"locc", "--alpha", "0.5,0.5", "--beta", "0.5,0.5"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("\"predicted_direction\": \"tie\"") != std::string::npos);
    CHECK(r.out.find("\"p_forward\": 1.000000000") != std::string::npos);
    CHECK(r.out.find("\"p_backward\": 1.000000000") != std::string::npos);

    CHECK(call({"locc", "--alpha", "0.5,0.6", "--beta", "0.5,0.5"}).code == kExitNumeric);
    CHECK(call({"locc", "--alpha", "1/2,1/3", "--beta", "1/2,1/2", "--exact"}).code == kExitNumeric);
    CHECK(call({"locc", "--alpha", "0.5,x", "--beta", "0.5,0.5"}).code != kExitOk);
}

TEST_CASE("thermal") {
    Result r = call({"thermal", "--p", "1,0", "--q", "0.6666667,0.3333333", "--gibbs-d", "2,1"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("\"convertible\": true") != std::string::npos);
    CHECK(r.out.find("\"abar_p_hat\": \"inf\"") != std::string::npos);

    r = call({"thermal", "--p", "2/3,1/3", "--q", "2/3,1/3", "--gibbs-d", "2,1", "--exact"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("\"convertible\": true") != std::string::npos);
    CHECK(r.out.find("\"theorem3_holds\": false") != std::string::npos);
    CHECK(r.out.find("\"abar_p_hat\": 3.295836866") != std::string::npos);

    CHECK(call({"thermal", "--p", "0.5,0.5", "--q", "0.5,0.5", "--gibbs-d", "2"}).code == kExitNumeric);
}

TEST_CASE("figs") {
    const fs::path dir = scratch();
    for (int which = 1; which <= 4; ++which) {
        REQUIRE(call({"figs", "--which", std::to_string(which), "--out", dir.string()}).code == kExitOk);
        CHECK(fs::exists(dir / ("fig" + std::to_string(which) + ".csv")));
    }
    CHECK(call({"figs", "--which", "5", "--out", dir.string()}).code == kExitSchema);

    const auto f2 = read_csv(dir / "fig2.csv");
    const std::size_t abar = column(f2[0], "abar");
    for (std::size_t i = 1; i < f2.size(); ++i) {
        const double t = std::stod(f2[i][0]);
        if (t < 0.01 || i < 2 || std::stod(f2[i - 1][0]) < 0.01) continue;
        CHECK(std::stod(f2[i][abar]) <= std::stod(f2[i - 1][abar]));
    }

    // period-2pi revival structure
    const auto f1 = read_csv(dir / "fig1.csv");
    const std::size_t a1 = column(f1[0], "abar");
    auto at = [&](double t) { return std::stod(f1[static_cast<std::size_t>(std::lround(t / 1e-3)) + 1][a1]); };
    CHECK(at(std::numbers::pi) < at(1.0));
    CHECK(at(5.5) > at(std::numbers::pi));
    CHECK(at(std::numbers::pi) == doctest::Approx(at(3 * std::numbers::pi)).epsilon(1e-6));

    const auto f4 = read_csv(dir / "fig4.csv");
    CHECK(f4[0] == std::vector<std::string>{"t", "dabar_1", "dabar_2", "dabar_3", "clamp_flag"});
    fs::remove_all(dir);
}

TEST_CASE("list") {
    const Result r = call({"list"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("supp3_vidal_triple\n") != std::string::npos);
}

TEST_CASE("binary exit codes and stream separation") {
    const fs::path dir = scratch();
    const std::string bin = QTFF_CLI_PATH;
    auto sh = [&](const std::string& args) {
        const std::string cmd = "'" + bin + "' " + args + " >'" + (dir / "o.txt").string() + "' 2>'" +
                                (dir / "e.txt").string() + "'";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    CHECK(sh("list") == 0);
    CHECK(slurp(dir / "o.txt").find("fig1_sin_dephasing") != std::string::npos);
    CHECK(slurp(dir / "e.txt").empty());

    CHECK(sh("figs --which 5 --out '" + dir.string() + "'") == 2);
    CHECK(slurp(dir / "o.txt").empty());
    CHECK_FALSE(slurp(dir / "e.txt").empty());

    CHECK(sh("locc --alpha 0.5,0.6 --beta 0.5,0.5") == 3);
    CHECK(sh("bogus") == 2);

    spit(dir / "bad.json", "[1, 2");
    CHECK(sh("simulate --scenario '" + (dir / "bad.json").string() + "' --out '" + (dir / "x.csv").string() + "'") ==
          2);

    CHECK(sh("simulate --case fig1_sin_dephasing --out '" + (dir / "a.csv").string() + "'") == 0);
    CHECK(sh("simulate --case fig1_sin_dephasing --out '" + (dir / "b.csv").string() + "'") == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    fs::remove_all(dir);
}
