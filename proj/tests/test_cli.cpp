#include "equiteam/cli.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "support/temp_files.hpp"

using testsupport::TempDir;

namespace {

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"equiteam"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  return equiteam::run_cli(static_cast<int>(argv.size()), argv.data());
}

const std::string kFixture = EQUITEAM_FIXTURE_DIR "/responses_sem1.csv";

}  // namespace

TEST_CASE("score writes one row per student with the fixed totals") {
  TempDir dir;
  std::string out = dir.file("scores.csv");
  CHECK(run({"score", "--input", kFixture, "--output", out}) == 0);

  std::string text = testsupport::read_text(out);
  CHECK(std::count(text.begin(), text.end(), '\n') == 75);  // header + 74 rows

  std::size_t opted = 0, pos = 0;
  while ((pos = text.find(",true", pos)) != std::string::npos) {
    ++opted;
    pos += 5;
  }
  CHECK(opted == 9);
  CHECK(text.find(",40,") != std::string::npos);
  CHECK(text.find(",90,") != std::string::npos);

  CHECK(testsupport::read_text(dir.file("scores.run.json")).find("\"score\"") !=
        std::string::npos);
}

TEST_CASE("score fails loudly on malformed input") {
  TempDir dir;
  std::string bad = dir.file("bad.csv");
  testsupport::write_text(bad,
                          "roll,participation,social,economic,readiness\n"
                          "R1,1b,2a,3a,4a\n"
                          "R2,1b,2q,3a,4a\n");
  CHECK(run({"score", "--input", bad, "--output", dir.file("out.csv")}) != 0);
  CHECK(run({"score", "--input", dir.file("nope.csv"), "--output", dir.file("out.csv")}) != 0);
}

TEST_CASE("form writes a 19-team roster and metrics for the fixture") {
  TempDir dir;
  std::string roster = dir.file("roster.csv");
  CHECK(run({"form", "--input", kFixture, "--output", roster}) == 0);

  std::string text = testsupport::read_text(roster);
  CHECK(text.rfind("team,roll,total_score", 0) == 0);
  CHECK(text.find("\n19,") != std::string::npos);
  CHECK(text.find("\n20,") == std::string::npos);

  auto metrics = nlohmann::json::parse(testsupport::read_text(dir.file("roster.metrics.json")));
  CHECK(metrics["team_count"] == 19);
  CHECK(metrics["team_means"].size() == 19);
  CHECK(metrics["variance"].get<double>() >= 0.0);
  CHECK_FALSE(metrics.contains("random_baseline"));
}

TEST_CASE("form accepts a scores file and a baseline seed") {
  TempDir dir;
  std::string scores = dir.file("scores.csv");
  REQUIRE(run({"score", "--input", kFixture, "--output", scores}) == 0);

  std::string roster = dir.file("roster.csv");
  CHECK(run({"form", "--input", scores, "--output", roster, "--team-size", "5", "--seed",
             "7"}) == 0);
  auto metrics = nlohmann::json::parse(testsupport::read_text(dir.file("roster.metrics.json")));
  CHECK(metrics["team_count"] == 15);  // ceil(74 / 5)
  CHECK(metrics["random_baseline"]["seed"] == 7);
  CHECK(metrics["random_baseline"]["variance"].get<double>() >= 0.0);
}

TEST_CASE("form rejects a team size below two") {
  TempDir dir;
  CHECK(run({"form", "--input", kFixture, "--output", dir.file("r.csv"), "--team-size",
             "1"}) != 0);
}

TEST_CASE("repeated form runs are byte-identical") {
  TempDir dir;
  std::string roster_a = dir.file("a.csv");
  std::string roster_b = dir.file("b.csv");
  REQUIRE(run({"form", "--input", kFixture, "--output", roster_a}) == 0);
  REQUIRE(run({"form", "--input", kFixture, "--output", roster_b}) == 0);
  CHECK(testsupport::read_text(roster_a) == testsupport::read_text(roster_b));
  CHECK(testsupport::read_text(dir.file("a.metrics.json")) ==
        testsupport::read_text(dir.file("b.metrics.json")));
}

TEST_CASE("analyze without marks omits the association section") {
  TempDir dir;
  std::string report = dir.file("report.json");
  CHECK(run({"analyze", "--input", kFixture, "--output", report}) == 0);

  auto j = nlohmann::json::parse(testsupport::read_text(report));
  CHECK(j["cohort"]["size"] == 74);
  CHECK(j["cohort"]["economic_counts"]["middle"] == 24);
  CHECK_FALSE(j.contains("association"));
  CHECK_FALSE(j.contains("team_equity_means"));
}

TEST_CASE("analyze with roster and marks carries all four sections") {
  TempDir dir;
  std::string roster = dir.file("roster.csv");
  REQUIRE(run({"form", "--input", kFixture, "--output", roster}) == 0);

  std::string report = dir.file("report.json");
  std::string plot = dir.file("teams.csv");
  CHECK(run({"analyze", "--input", kFixture, "--output", report, "--roster", roster, "--marks",
             EQUITEAM_FIXTURE_DIR "/sem1_marks.csv", "--plot-data", plot}) == 0);

  auto j = nlohmann::json::parse(testsupport::read_text(report));
  CHECK(j.contains("cohort"));
  CHECK(j.contains("readiness_cross_tab"));
  CHECK(j.contains("team_equity_means"));
  CHECK(j.contains("team_marks"));
  CHECK(j.contains("association"));
  CHECK(j["team_marks"]["min"] == 49.0);
  CHECK(j["team_marks"]["max"] == 62.0);

  std::string plot_text = testsupport::read_text(plot);
  CHECK(plot_text.rfind("team,equity_mean,marks", 0) == 0);
  CHECK(std::count(plot_text.begin(), plot_text.end(), '\n') == 20);
}

TEST_CASE("analyze flags association prerequisites") {
  TempDir dir;
  std::string report = dir.file("report.json");
  CHECK(run({"analyze", "--input", kFixture, "--output", report, "--marks",
             EQUITEAM_FIXTURE_DIR "/sem1_marks.csv"}) != 0);

  std::string roster = dir.file("roster.csv");
  REQUIRE(run({"form", "--input", kFixture, "--output", roster}) == 0);
  CHECK(run({"analyze", "--input", kFixture, "--output", report, "--roster", roster}) != 0);
  CHECK(run({"analyze", "--input", kFixture, "--output", report, "--roster", roster, "--marks",
             dir.file("missing_marks.csv")}) != 0);
}

TEST_CASE("analyze reports a constant marks column as degenerate") {
  TempDir dir;
  std::string roster = dir.file("roster.csv");
  REQUIRE(run({"form", "--input", kFixture, "--output", roster}) == 0);

  std::string marks = dir.file("marks.csv");
  std::string text = "team,marks\n";
  for (int team = 1; team <= 19; ++team) text += std::to_string(team) + ",50\n";
  testsupport::write_text(marks, text);

  std::string report = dir.file("report.json");
  CHECK(run({"analyze", "--input", kFixture, "--output", report, "--roster", roster, "--marks",
             marks}) == 0);
  auto j = nlohmann::json::parse(testsupport::read_text(report));
  CHECK(j["association"]["degenerate"] == true);
}

TEST_CASE("analyze validates its thresholds") {
  TempDir dir;
  CHECK(run({"analyze", "--input", kFixture, "--output", dir.file("r.json"), "--low-max", "70",
             "--high-min", "55"}) != 0);
}

TEST_CASE("compare reproduces the published verdict") {
  TempDir dir;
  std::string out = dir.file("comparison.json");
  CHECK(run({"compare", "--input", EQUITEAM_FIXTURE_DIR "/sem1_teams.csv", "--second",
             EQUITEAM_FIXTURE_DIR "/sem2_teams.csv", "--output", out}) == 0);

  auto j = nlohmann::json::parse(testsupport::read_text(out));
  CHECK(j["verdict"] == "first_more_balanced");
  CHECK(j["first"]["equity"]["range_width"] == 3.75);
  CHECK(j["second"]["equity"]["range_width"] == 21.5);
  CHECK(j["deltas"]["marks_median"] == -5.0);
  CHECK(j["deltas"]["equity_range_width"] == 17.75);
  CHECK(j["first"]["marks"]["max"] == 62.0);
  CHECK(j["second"]["marks"]["min"] == 43.0);
}

TEST_CASE("compare of a cohort with itself is comparable") {
  TempDir dir;
  std::string out = dir.file("comparison.json");
  CHECK(run({"compare", "--input", EQUITEAM_FIXTURE_DIR "/sem1_teams.csv", "--second",
             EQUITEAM_FIXTURE_DIR "/sem1_teams.csv", "--output", out}) == 0);
  auto j = nlohmann::json::parse(testsupport::read_text(out));
  CHECK(j["verdict"] == "comparable");
  CHECK(j["deltas"]["marks_median"] == 0.0);
}

TEST_CASE("compare fails on an empty cohort file") {
  TempDir dir;
  std::string empty = dir.file("empty.csv");
  testsupport::write_text(empty, "team,equity_mean,marks\n");
  CHECK(run({"compare", "--input", empty, "--second",
             EQUITEAM_FIXTURE_DIR "/sem1_teams.csv", "--output", dir.file("c.json")}) != 0);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run({}) != 0);
  CHECK(run({"score"}) != 0);
  CHECK(run({"unknown"}) != 0);
}
