#include <doctest.h>

#include <string>

#include "conefock/commands.hpp"

using namespace conefock;

namespace {

Json parse(const char* text) { return Json::parse(text); }

const char* kOrthantRep = R"({
  "kind": "lattice_shift",
  "cone": {"dim": 2, "generators": [[1, 0], [0, 1]]},
  "module": {"halfspaces": [{"normal": [1, 0]}, {"normal": [0, 1]}]}
})";

Json orthant_config(const char* extra) {
    Json c = parse(extra);
    c["rep"] = parse(kOrthantRep);
    return c;
}

std::string error_message(const Json& report) {
    return report.at("error").at("message").get<std::string>();
}

}  // namespace

TEST_CASE("config errors carry the JSON path and map to exit code 2") {
    const auto missing_seed = run_command("cocycles", parse(R"({"rep": {"kind": "direct_sum", "multiplicities": [1]}})"));
    CHECK(missing_seed.exit_code == kExitConfigError);
    CHECK(error_message(missing_seed.report).find("/seed") != std::string::npos);

    Json bad_cone = parse(R"({"seed": 1})");
    bad_cone["rep"] = parse(R"({
      "kind": "lattice_shift",
      "cone": {"dim": 2, "generators": [[1, 0], [2, 0]]},
      "module": {"halfspaces": [{"normal": [1, 0]}]}
    })");
    const auto dependent = run_command("cocycles", bad_cone);
    CHECK(dependent.exit_code == kExitConfigError);
    CHECK(error_message(dependent.report).find("/rep/cone") != std::string::npos);

    Json broken_module = parse(R"({"seed": 1, "window": {"lower": [0, 0], "upper": [1, 1]}})");
    broken_module["rep"] = parse(R"({
      "kind": "lattice_shift",
      "cone": {"dim": 2, "generators": [[1, 0], [0, 1]]},
      "module": {"points": [[0, 0]],
                 "declared_window": {"lower": [0, 0], "upper": [1, 1]}}
    })");
    const auto violated = run_command("cocycles", broken_module);
    CHECK(violated.exit_code == kExitConfigError);
    CHECK(error_message(violated.report).find("module property") != std::string::npos);

    const auto unknown = run_command("frobnicate", parse(R"({"seed": 1})"));
    CHECK(unknown.exit_code == kExitConfigError);
}

TEST_CASE("verify-relations passes with its default tolerances") {
    const auto out = run_command(
        "verify-relations",
        parse(R"({"seed": 7, "kernel_trials": 10, "matrix_trials": 1, "car_modes": 3})"));
    CHECK(out.exit_code == kExitPass);
    CHECK(out.report.at("summary").at("pass").get<bool>());
    CHECK(out.report.at("checks").size() == 4);
    for (const auto& check : out.report.at("checks")) {
        CHECK(check.contains("tolerance"));
        CHECK(check.contains("exact"));
    }
}

TEST_CASE("cocycles reports the expected dimension and divisibility") {
    const auto out = run_command("cocycles", parse(R"({
      "seed": 3,
      "rep": {"kind": "direct_sum", "multiplicities": [2, 1]},
      "expected_dimension": 3,
      "z_list": [[1, 1]]
    })"));
    CHECK(out.exit_code == kExitPass);
    CHECK(out.report.at("summary").at("dimension").get<int>() == 3);
    CHECK(out.report.at("summary").at("exact").get<bool>());
}

TEST_CASE("divisibility requires a z_list") {
    const auto out = run_command("divisibility", parse(R"({
      "seed": 3, "rep": {"kind": "direct_sum", "multiplicities": [1, 1]}
    })"));
    CHECK(out.exit_code == kExitConfigError);
    CHECK(error_message(out.report).find("/z_list") != std::string::npos);
}

TEST_CASE("decomposables matches the expected sector dimensions and refinement ratios") {
    const auto out = run_command("decomposables", parse(R"({
      "seed": 5,
      "rep": {"kind": "direct_sum", "multiplicities": [1]},
      "window": {"lower": [0], "upper": [7]},
      "cutoff": 2,
      "x": [2],
      "expected_sector_dims": [1, 2, 2],
      "refinement": [2, 4, 8]
    })"));
    CHECK(out.exit_code == kExitPass);
    const auto& table = out.report.at("summary").at("refinement_table");
    REQUIRE(table.size() == 3);
    CHECK(table[1].at("sector2_dim").get<int>() == 4);
    CHECK(table[1].at("sector2_full").get<int>() == 10);

    // A wrong expectation is a check failure, not a config error.
    const auto wrong = run_command("decomposables", parse(R"({
      "seed": 5,
      "rep": {"kind": "direct_sum", "multiplicities": [1]},
      "window": {"lower": [0], "upper": [7]},
      "cutoff": 2,
      "x": [2],
      "expected_sector_dims": [1, 2, 3]
    })"));
    CHECK(wrong.exit_code == kExitCheckFailure);
}

TEST_CASE("proper-search finds the planar pair and honors expect_nonempty") {
    const auto out = run_command(
        "proper-search",
        orthant_config(
            R"({"seed": 2, "window": {"lower": [0, 0], "upper": [3, 3]}, "budget": 1,
                "expect_nonempty": true})"));
    CHECK(out.exit_code == kExitPass);
    CHECK(out.report.at("summary").at("found").get<int>() > 0);

    const auto none = run_command("proper-search", parse(R"({
      "seed": 2,
      "rep": {"kind": "direct_sum", "multiplicities": [1]},
      "window": {"lower": [0], "upper": [9]},
      "budget": 2,
      "expect_nonempty": false
    })"));
    CHECK(none.exit_code == kExitPass);
    CHECK(none.report.at("summary").at("found").get<int>() == 0);
}

TEST_CASE("witness distinguishes the planar flows and reports inconclusive searches") {
    const auto out = run_command(
        "witness",
        orthant_config(R"({"seed": 9, "window": {"lower": [0, 0], "upper": [3, 3]}})"));
    CHECK(out.exit_code == kExitPass);
    CHECK(out.report.at("summary").at("verdict").get<std::string>() == "distinguished");

    const auto inconclusive = run_command("witness", parse(R"({
      "seed": 9,
      "rep": {"kind": "direct_sum", "multiplicities": [1]},
      "window": {"lower": [0], "upper": [9]},
      "expect_verdict": "inconclusive"
    })"));
    CHECK(inconclusive.exit_code == kExitPass);
    CHECK(inconclusive.report.at("summary").at("reason").get<std::string>().find(
              "no proper pair") != std::string::npos);

    // Without the explicit expectation the inconclusive verdict fails the run.
    const auto failing = run_command("witness", parse(R"({
      "seed": 9,
      "rep": {"kind": "direct_sum", "multiplicities": [1]},
      "window": {"lower": [0], "upper": [9]}
    })"));
    CHECK(failing.exit_code == kExitCheckFailure);
}

TEST_CASE("reports are byte-identical across runs once timing is stripped") {
    const Json config =
        orthant_config(R"({"seed": 13, "window": {"lower": [0, 0], "upper": [3, 3]}})");
    for (const char* command : {"witness", "proper-search"}) {
        const auto first = run_command(command, config);
        const auto second = run_command(command, config);
        CHECK(first.report.contains("timing"));
        CHECK(report_without_timing(first.report).dump() ==
              report_without_timing(second.report).dump());
    }
    const auto a = run_command("verify-relations",
                               parse(R"({"seed": 13, "kernel_trials": 5, "matrix_trials": 1})"));
    const auto b = run_command("verify-relations",
                               parse(R"({"seed": 13, "kernel_trials": 5, "matrix_trials": 1})"));
    CHECK(report_without_timing(a.report).dump() == report_without_timing(b.report).dump());
}
