#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "loewner/errors.hpp"
#include "runner.hpp"
#include "scenario.hpp"

using namespace loewner;
using namespace loewner::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("loewner_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
ParseError parse_error_of(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no ParseError thrown");
    return ParseError("", 0, 0);
}

} // namespace

TEST_CASE("parse a catalog scenario") {
    const Scenario sc = parse_scenario(R"j({
  "family": "B5",
  "grid": [{"s": 0, "z": [0, 0]}, {"s": 1, "z": 0.25}],
  "horizon": 400,
  "integrator": {"output_grid": 0.1},
  "analyses": ["classify", "theta"]
})j");
    REQUIRE(sc.catalog.has_value());
    CHECK(*sc.catalog == CatalogId::B5);
    CHECK(sc.grid.size() == 2);
    CHECK(sc.grid[1].z == Complex(0.25, 0.0));
    CHECK(sc.horizon == 400.0);
    CHECK(sc.integrator.horizon == 400.0);
    CHECK(sc.integrator.output_grid == 0.1);
    CHECK(sc.wants(Analysis::theta));
    CHECK_FALSE(sc.wants(Analysis::spectral));
    CHECK(sc.family_name() == "B5");
}

TEST_CASE("parse a field scenario") {
    const Scenario sc = parse_scenario(R"j({
  "family": {"tau": [1, 0], "p": "1 + 0.5*sin(t)", "breakpoints": [2.0], "period": 0},
  "grid": [{"s": 0, "z": [0.1, 0.2]}],
  "horizon": 20,
  "analyses": ["validate"]
})j");
    REQUIRE(sc.field.has_value());
    CHECK(sc.field->tau == Complex(1.0, 0.0));
    CHECK(sc.field->breakpoints.size() == 1);
    const EvolutionFamily f = build_family(sc);
    CHECK(f.provenance() == Provenance::integrated);
}

TEST_CASE("parse errors carry line and column") {
    const ParseError empty = parse_error_of([] {
        parse_scenario("{\n  \"family\": \"B2\",\n  \"grid\": [],\n  \"horizon\": 100,\n  \"analyses\": [\"classify\"]\n}");
    });
    CHECK(empty.line() == 3);
    CHECK(empty.column() == 3);
    CHECK(std::string(empty.what()).find("grid") != std::string::npos);

    const ParseError syntax = parse_error_of([] { parse_scenario("{\n  \"family\": \"B2\",\n  \"grid\" [\n}"); });
    CHECK(syntax.line() == 3);

    const ParseError unknown = parse_error_of([] {
        parse_scenario(R"j({"family": "B9", "grid": [{"s": 0, "z": 0}], "horizon": 10, "analyses": ["classify"]})j");
    });
    CHECK(unknown.line() == 1);

    const ParseError horizon = parse_error_of([] {
        parse_scenario(R"j({"family": "B1", "grid": [{"s": 20, "z": 0}], "horizon": 10, "analyses": ["classify"]})j");
    });
    CHECK(horizon.line() == 1);

    const ParseError no_analyses = parse_error_of([] {
        parse_scenario(R"j({"family": "B1", "grid": [{"s": 0, "z": 0}], "horizon": 10, "analyses": []})j");
    });
    CHECK(no_analyses.line() == 1);

    const ParseError expr = parse_error_of([] {
        parse_scenario("{\"family\": {\"tau\": [0, 0], \"p\": \"1 + * z\"},\n"
                       " \"grid\": [{\"s\": 0, \"z\": 0.5}], \"horizon\": 10, \"analyses\": [\"validate\"]}");
    });
    CHECK(expr.line() == 1);
    CHECK(expr.column() > 30);
}

TEST_CASE("validate checks") {
    const Scenario b3 = parse_scenario(
        R"j({"family": "B3", "grid": [{"s": 0, "z": 0}], "horizon": 100, "analyses": ["validate"]})j");
    for (const CheckRow& row : validation_checks(b3)) {
        INFO(row.name);
        CHECK(row.pass);
    }
    std::ostringstream out;
    CHECK(validate_command(b3, out) == kExitOk);
    CHECK(out.str().find("PASS") != std::string::npos);

    const Scenario neg = parse_scenario(
        R"j({"family": {"tau": [0, 0], "p": "-1"}, "grid": [{"s": 0, "z": 0.5}], "horizon": 20, "analyses": ["validate"]})j");
    std::ostringstream out2;
    CHECK(validate_command(neg, out2) == kExitError);
    CHECK(out2.str().find("FAIL") != std::string::npos);

    const Scenario radial = parse_scenario(
        R"j({"family": {"tau": [0, 0], "p": "1"}, "grid": [{"s": 0, "z": 0.5}], "horizon": 20, "analyses": ["validate"]})j");
    std::ostringstream out3;
    CHECK(validate_command(radial, out3) == kExitOk);
}

TEST_CASE("run writes trajectories and a report") {
    const Scenario sc = parse_scenario(
        R"j({"family": "I1", "grid": [{"s": 0, "z": [0.5, 0]}], "horizon": 50, "analyses": ["classify", "spectral"]})j");
    const fs::path dir = fresh_dir("run");
    std::ostringstream log;
    CHECK(run_command(sc, dir, log) == kExitOk);
    REQUIRE(fs::exists(dir / "traj_0.csv"));
    REQUIRE(fs::exists(dir / "report.json"));
    std::ifstream csv(dir / "traj_0.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,re,im,local_error");
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"L\": \"+inf\"") != std::string::npos);

    const fs::path dir2 = fresh_dir("run2");
    CHECK(run_command(sc, dir2, log) == kExitOk);
    CHECK(slurp(dir2 / "report.json") == report);
    CHECK(slurp(dir2 / "traj_0.csv") == slurp(dir / "traj_0.csv"));
}

TEST_CASE("sweep is independent of the worker count") {
    const Scenario sc = parse_scenario(R"j({"family": "I2",
        "grid": [{"s": 0, "z": 0.5}, {"s": 1, "z": 0.5}, {"s": 0, "z": [0, 0.3]}, {"s": 2, "z": [-0.2, 0.1]}],
        "horizon": 200, "analyses": ["classify"]})j");
    const fs::path a = fresh_dir("sweep1"), b = fresh_dir("sweep4");
    std::ostringstream log;
    CHECK(sweep_command(sc, a, 1, log) == kExitOk);
    CHECK(sweep_command(sc, b, 4, log) == kExitOk);
    CHECK(slurp(a / "sweep.json") == slurp(b / "sweep.json"));

    const Scenario one = parse_scenario(
        R"j({"family": "I2", "grid": [{"s": 0, "z": 0.5}], "horizon": 200, "analyses": ["classify"]})j");
    CHECK(sweep_command(one, a, 1, log) == kExitError);
}

TEST_CASE("resolve_jobs") {
    ::unsetenv("LOEWNER_JOBS");
    CHECK(resolve_jobs(3) == 3);
    CHECK(resolve_jobs(0) >= 1);
    ::setenv("LOEWNER_JOBS", "2", 1);
    CHECK(resolve_jobs(7) == 2);
    ::setenv("LOEWNER_JOBS", "zero", 1);
    CHECK(resolve_jobs(7) == 7);
    ::unsetenv("LOEWNER_JOBS");
}
