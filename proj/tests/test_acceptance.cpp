// Acceptance suite: one check per shipped guarantee, each printed as a
// PASS/FAIL line. Exits nonzero if anything fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "equiteam/analytics.hpp"
#include "equiteam/cli.hpp"
#include "equiteam/partition.hpp"
#include "equiteam/roster_io.hpp"
#include "equiteam/survey.hpp"
#include "support/brute_oracle.hpp"
#include "support/cohort_gen.hpp"
#include "support/temp_files.hpp"

using namespace equiteam;
using testsupport::TempDir;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure(message);
}

// Runs a CLI invocation with its progress chatter swallowed, keeping the
// acceptance log to one line per criterion.
int run_cli_args(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"equiteam"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  std::ostringstream sink;
  std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
  const int status = equiteam::run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(saved);
  return status;
}

const std::string kResponses = EQUITEAM_FIXTURE_DIR "/responses_sem1.csv";
const std::string kSem1Teams = EQUITEAM_FIXTURE_DIR "/sem1_teams.csv";
const std::string kSem2Teams = EQUITEAM_FIXTURE_DIR "/sem2_teams.csv";
const std::string kSem1Marks = EQUITEAM_FIXTURE_DIR "/sem1_marks.csv";

StudentResponse participant(Social s, Economic e, Readiness r) {
  StudentResponse resp;
  resp.roll = "X";
  resp.participation = Participation::Participate;
  resp.social = s;
  resp.economic = e;
  resp.readiness = r;
  return resp;
}

// Criterion 1: exhaustive rubric sweep, exact integers.
void rubric_exactness() {
  ScoringRubric rubric;
  const Social socials[] = {Social::MajorCityIndia, Social::StateCity, Social::SmallTown,
                            Social::Rural, Social::NotComfortable};
  const Economic economics[] = {Economic::Upper, Economic::UpperMiddle, Economic::Middle,
                                Economic::Disadvantaged, Economic::NotComfortable};
  const Readiness readinesses[] = {Readiness::SelfSufficient, Readiness::Helped,
                                   Readiness::NeedsSupport};
  int combos = 0;
  for (Social s : socials) {
    for (Economic e : economics) {
      for (Readiness r : readinesses) {
        const int total = score_response(participant(s, e, r), rubric).total;
        require(total >= 40 && total <= 90,
                "combination scored " + std::to_string(total) + ", outside [40, 90]");
        ++combos;
      }
    }
  }
  require(combos == 75, "expected 48 plain combinations plus not-comfortable variants");

  require(score_response(participant(Social::MajorCityIndia, Economic::Upper,
                                     Readiness::SelfSufficient),
                         rubric)
                  .total == 40,
          "minimum combination must score exactly 40");
  require(score_response(participant(Social::Rural, Economic::Disadvantaged,
                                     Readiness::NeedsSupport),
                         rubric)
                  .total == 90,
          "maximum combination must score exactly 90");

  StudentResponse opt_out;
  opt_out.roll = "O";
  opt_out.participation = Participation::OptOut;
  require(score_response(opt_out, rubric).total == 45 &&
              score_response(opt_out, rubric).opted_out,
          "opt-out must score exactly 45");
}

// Criterion 2: analyze reproduces every reported marginal on the fixture.
void marginal_fixture_reproduction() {
  TempDir dir;
  std::string report_path = dir.file("report.json");
  require(run_cli_args({"analyze", "--input", kResponses, "--output", report_path}) == 0,
          "analyze failed on the shipped fixture");
  auto report = nlohmann::json::parse(testsupport::read_text(report_path));

  const auto& economic = report["cohort"]["economic_counts"];
  require(economic["upper"] == 1 && economic["upper_middle"] == 28 &&
              economic["middle"] == 24 && economic["disadvantaged"] == 12,
          "economic counts differ from {1, 28, 24, 12}");
  const auto& social = report["cohort"]["social_counts"];
  require(social["major_city_india"] == 12 && social["state_city"] == 24 &&
              social["small_town"] == 18 && social["rural"] == 11,
          "social counts differ from {12, 24, 18, 11}");
  const auto& readiness = report["cohort"]["readiness_counts"];
  require(readiness["self_sufficient"] == 24 && readiness["helped"] == 36 &&
              readiness["needs_support"] == 5,
          "readiness counts differ from {24, 36, 5}");
  require(report["cohort"]["opt_out_count"] == 9, "opt-out count must be 9");
  require(report["cohort"]["not_comfortable_count"] == 3, "not-comfortable count must be 3");

  const auto& tab = report["readiness_cross_tab"];
  require(tab[2]["readiness"] == "needs_support" &&
              tab[2]["economic"]["percent"]["disadvantaged"] == 80 &&
              tab[2]["social"]["percent"]["rural"] == 60,
          "needs-support row percentages differ from 80%/60%");
  require(tab[0]["readiness"] == "self_sufficient" &&
              tab[0]["economic"]["percent"]["disadvantaged"] == 4 &&
              tab[0]["social"]["percent"]["rural"] == 12,
          "self-sufficient row percentages differ from 4%/12%");
}

// Criterion 3: the heuristic never beats the exact oracle, and the oracle
// agrees exactly with an independent enumerator.
void oracle_dominance() {
  testsupport::SplitMix rng(424242);
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = 4 + rng.below(9);  // 4..12
    const int team_size = 2 + static_cast<int>(rng.below(2));
    auto scores = testsupport::random_scores(rng.next(), n);

    auto refined = local_search_rebalance(fold_assign(scores, team_size), scores);
    const double heuristic =
        testsupport::canonical_partition_variance(refined.assignment, scores);

    auto oracle_assign = exact_min_variance(scores, team_size);
    const double oracle = testsupport::canonical_partition_variance(oracle_assign, scores);
    const double brute = testsupport::brute_force_min_variance(scores, team_size);

    require(oracle == brute, "oracle value " + format_double(oracle) +
                                 " differs from brute force " + format_double(brute) +
                                 " on instance " + std::to_string(instance));
    require(heuristic >= oracle - 1e-12,
            "heuristic variance " + format_double(heuristic) + " beats the oracle " +
                format_double(oracle) + " on instance " + std::to_string(instance));
  }
}

// Criterion 4: monotone descent, termination, and 1-swap-optimality.
void local_search_contract() {
  testsupport::SplitMix rng(171717);
  for (int instance = 0; instance < 500; ++instance) {
    const std::size_t n = 6 + rng.below(35);  // 6..40
    const int team_size = 2 + static_cast<int>(rng.below(4));
    auto scores = testsupport::random_scores(rng.next(), n);

    auto result = local_search_rebalance(fold_assign(scores, team_size), scores);
    require(result.variance_trajectory.size() == result.accepted_swaps + 1,
            "trajectory length must be accepted swaps plus one");
    for (std::size_t i = 1; i < result.variance_trajectory.size(); ++i) {
      require(result.variance_trajectory[i] < result.variance_trajectory[i - 1],
              "variance failed to decrease at swap " + std::to_string(i) + " of instance " +
                  std::to_string(instance));
    }

    // Exhaustive scan: no remaining swap may improve beyond tolerance.
    const auto& assign = result.assignment;
    const double base = testsupport::canonical_partition_variance(assign, scores);
    for (std::size_t i = 0; i + 1 < assign.teams.size(); ++i) {
      for (std::size_t j = i + 1; j < assign.teams.size(); ++j) {
        for (std::size_t a = 0; a < assign.teams[i].size(); ++a) {
          for (std::size_t b = 0; b < assign.teams[j].size(); ++b) {
            TeamAssignment trial = assign;
            std::swap(trial.teams[i][a], trial.teams[j][b]);
            const double improved = testsupport::canonical_partition_variance(trial, scores);
            require(improved >= base - kSwapImprovementTol * 1.01,
                    "instance " + std::to_string(instance) + " is not 1-swap-optimal");
          }
        }
      }
    }
  }
}

// Criterion 5: at study scale the structured pipeline stays within the
// published band and beats the seeded random baseline.
void balance_dominance_at_study_scale() {
  int within_band = 0;
  int beats_random = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto scores = testsupport::marginal_cohort(900 + seed);
    auto refined = local_search_rebalance(fold_assign(scores, 4), scores);
    const double structured = balance_metrics(refined.assignment, scores).range_width;
    const double random =
        balance_metrics(random_assign(scores, 4, seed), scores).range_width;
    if (structured <= 5.0) ++within_band;
    if (structured < random) ++beats_random;
  }
  require(within_band >= 95, "range width <= 5 in only " + std::to_string(within_band) +
                                 " of 100 runs");
  require(beats_random >= 95, "structured width beat the random baseline in only " +
                                  std::to_string(beats_random) + " of 100 runs");
}

// Criterion 6: compare reproduces the published verdict and exact deltas.
void comparison_reproduction() {
  TempDir dir;
  std::string out = dir.file("comparison.json");
  require(run_cli_args({"compare", "--input", kSem1Teams, "--second", kSem2Teams, "--output",
                        out}) == 0,
          "compare failed on the semester fixtures");
  auto j = nlohmann::json::parse(testsupport::read_text(out));
  require(j["verdict"] == "first_more_balanced", "verdict must favour the structured semester");
  require(j["deltas"]["marks_median"].get<double>() == -5.0, "median marks delta must be -5");
  require(j["deltas"]["equity_range_width"].get<double>() == 17.75,
          "equity width delta must be +17.75");
  require(j["first"]["equity"]["range_width"].get<double>() == 3.75,
          "first-semester width must be 3.75");
  require(j["second"]["equity"]["range_width"].get<double>() == 21.5,
          "second-semester width must be 21.5");
}

// Criterion 7: outputs are byte-identical across reruns and row shuffles.
void determinism_and_permutation_invariance() {
  TempDir dir;

  auto run_pipeline = [&](const std::string& responses, const std::string& tag) {
    std::string roster = dir.file("roster_" + tag + ".csv");
    std::string report = dir.file("report_" + tag + ".json");
    require(run_cli_args({"form", "--input", responses, "--output", roster}) == 0,
            "form failed during determinism check");
    require(run_cli_args({"analyze", "--input", responses, "--output", report, "--roster",
                          roster, "--marks", kSem1Marks}) == 0,
            "analyze failed during determinism check");
    return testsupport::read_text(roster) + "\x1f" +
           testsupport::read_text(dir.file("roster_" + tag + ".metrics.json")) + "\x1f" +
           testsupport::read_text(report);
  };

  const std::string baseline = run_pipeline(kResponses, "base");
  require(run_pipeline(kResponses, "rerun") == baseline,
          "repeated runs produced different bytes");

  // Shuffle the fixture's data rows, keeping the header.
  std::istringstream in(testsupport::read_text(kResponses));
  std::string header, line;
  std::getline(in, header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }

  testsupport::SplitMix rng(31337);
  for (int shuffle_round = 0; shuffle_round < 20; ++shuffle_round) {
    testsupport::shuffle(rows, rng);
    std::string shuffled_path = dir.file("shuffled.csv");
    std::string text = header + "\n";
    for (const std::string& row : rows) text += row + "\n";
    testsupport::write_text(shuffled_path, text);
    require(run_pipeline(shuffled_path, "shuffle") == baseline,
            "shuffle " + std::to_string(shuffle_round) + " changed the output bytes");
  }
}

struct Criterion {
  const char* name;
  std::function<void()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"rubric-exactness", rubric_exactness},
      {"marginal-fixture-reproduction", marginal_fixture_reproduction},
      {"oracle-dominance", oracle_dominance},
      {"local-search-contract", local_search_contract},
      {"balance-dominance-at-study-scale", balance_dominance_at_study_scale},
      {"comparison-reproduction", comparison_reproduction},
      {"determinism-and-permutation-invariance", determinism_and_permutation_invariance},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.check();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    if (error.empty()) {
      std::printf("[PASS] %-40s (%lld ms)\n", criterion.name,
                  static_cast<long long>(elapsed));
    } else {
      ++failures;
      std::printf("[FAIL] %-40s (%lld ms): %s\n", criterion.name,
                  static_cast<long long>(elapsed), error.c_str());
    }
    std::fflush(stdout);
  }

  if (failures == 0) {
    std::printf("ACCEPTANCE: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("ACCEPTANCE: %d of %zu criteria FAILED\n", failures, criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
