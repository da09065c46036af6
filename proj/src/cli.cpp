#include "equiteam/cli.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equiteam/analytics.hpp"
#include "equiteam/partition.hpp"
#include "equiteam/roster_io.hpp"
#include "equiteam/survey.hpp"

namespace equiteam {

namespace {

std::string timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string sibling_path(const std::string& output, const char* suffix) {
  std::filesystem::path path(output);
  path.replace_extension(suffix);
  return path.string();
}

std::string first_line(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct ScoreArgs {
  std::string input;
  std::string output;
  std::string rubric_path;
  bool assume_lowest = false;
};

struct FormArgs {
  std::string input;
  std::string output;
  std::string metrics;
  std::string rubric_path;
  int team_size = 4;
  bool assume_lowest = false;
  std::optional<std::uint64_t> seed;
};

struct AnalyzeArgs {
  std::string input;
  std::string output;
  std::string roster;
  std::string marks;
  std::string plot_data;
  std::string rubric_path;
  int low_max = 55;
  int high_min = 70;
  bool assume_lowest = false;
};

struct CompareArgs {
  std::string first;
  std::string second;
  std::string output;
};

ScoringRubric rubric_for(const std::string& path) {
  if (path.empty()) return ScoringRubric{};
  return load_rubric(path);
}

int do_score(const ScoreArgs& args) {
  const ScoringRubric rubric = rubric_for(args.rubric_path);
  rubric.validate();

  LoadResult loaded = load_responses(args.input, {args.assume_lowest});
  print_warnings(loaded.warnings);
  std::vector<EquityScore> scores = score_cohort(loaded.responses, rubric);
  write_scores(scores, args.output);

  RunRecord record;
  record.command = "score";
  record.input_digests = {{args.input, file_digest(args.input)}};
  record.output_digests = {{args.output, file_digest(args.output)}};
  record.rubric = rubric;
  record.assume_lowest = args.assume_lowest;
  record.timestamp = timestamp_now();
  write_run_record(record, sibling_path(args.output, ".run.json"));

  std::size_t opted_out = 0;
  for (const EquityScore& s : scores) opted_out += s.opted_out ? 1 : 0;
  std::cout << "scored " << scores.size() << " responses (" << opted_out << " opted out) -> "
            << args.output << "\n";
  return 0;
}

std::vector<EquityScore> scores_from_input(const std::string& path, const ScoringRubric& rubric,
                                           bool assume_lowest) {
  const std::string header = first_line(path);
  if (header == "roll,total,opted_out") {
    return load_scores(path);
  }
  LoadResult loaded = load_responses(path, {assume_lowest});
  print_warnings(loaded.warnings);
  return score_cohort(loaded.responses, rubric);
}

int do_form(const FormArgs& args) {
  if (args.team_size < 2) throw NonPositiveTeamSizeError(args.team_size);
  const ScoringRubric rubric = rubric_for(args.rubric_path);
  rubric.validate();

  std::vector<EquityScore> scores = scores_from_input(args.input, rubric, args.assume_lowest);
  TeamAssignment seeded = fold_assign(scores, args.team_size);
  LocalSearchResult refined = local_search_rebalance(seeded, scores);
  BalanceMetrics metrics = balance_metrics(refined.assignment, scores);

  write_roster(refined.assignment, scores, args.output);

  std::optional<BalanceMetrics> baseline;
  if (args.seed) {
    baseline = balance_metrics(random_assign(scores, args.team_size, *args.seed), scores);
  }
  const std::string metrics_path =
      args.metrics.empty() ? sibling_path(args.output, ".metrics.json") : args.metrics;
  emit_metrics(metrics, refined.accepted_swaps, baseline, args.seed, metrics_path);

  RunRecord record;
  record.command = "form";
  record.input_digests = {{args.input, file_digest(args.input)}};
  record.output_digests = {{args.output, file_digest(args.output)},
                           {metrics_path, file_digest(metrics_path)}};
  record.rubric = rubric;
  record.team_size = args.team_size;
  record.seed = args.seed;
  record.assume_lowest = args.assume_lowest;
  record.accepted_swaps = refined.accepted_swaps;
  record.timestamp = timestamp_now();
  write_run_record(record, sibling_path(args.output, ".run.json"));

  std::cout << "formed " << refined.assignment.teams.size() << " teams -> " << args.output
            << "\n";
  std::cout << "team-mean range width: " << format_double(metrics.range_width) << "\n";
  return 0;
}

int do_analyze(const AnalyzeArgs& args) {
  if (args.roster.empty() != args.marks.empty()) {
    throw Error("the association section needs both --roster and --marks");
  }
  if (!args.plot_data.empty() && args.roster.empty()) {
    throw Error("--plot-data needs --roster and --marks");
  }
  const ScoringRubric rubric = rubric_for(args.rubric_path);
  rubric.validate();

  LoadResult loaded = load_responses(args.input, {args.assume_lowest});
  print_warnings(loaded.warnings);
  std::vector<EquityScore> scores = score_cohort(loaded.responses, rubric);

  ReportBundle bundle;
  bundle.thresholds = {args.low_max, args.high_min};
  bundle.summary = summarize_cohort(loaded.responses, scores, bundle.thresholds);
  bundle.cross_tab = readiness_cross_tab(loaded.responses);

  RunRecord record;
  record.command = "analyze";
  record.input_digests = {{args.input, file_digest(args.input)}};

  if (!args.roster.empty()) {
    TeamAssignment assign = read_roster(args.roster);
    BalanceMetrics metrics = balance_metrics(assign, scores);
    std::vector<std::pair<int, double>> marks = read_marks(args.marks);
    if (marks.size() != assign.teams.size()) {
      throw Error("marks file lists " + std::to_string(marks.size()) + " teams, roster has " +
                  std::to_string(assign.teams.size()));
    }
    std::vector<TeamPoint> points;
    points.reserve(marks.size());
    std::vector<double> marks_values;
    for (const auto& [team, value] : marks) {
      if (team < 1 || team > static_cast<int>(assign.teams.size())) {
        throw Error("marks file names team " + std::to_string(team) + " not in the roster");
      }
      points.push_back({team, metrics.team_means[team - 1], value});
      marks_values.push_back(value);
    }
    bundle.team_equity_summary = five_number(metrics.team_means);
    bundle.team_marks_summary = five_number(marks_values);
    bundle.association = score_marks_association(points);
    if (!args.plot_data.empty()) {
      write_team_points(points, args.plot_data);
    }
    record.input_digests.emplace_back(args.roster, file_digest(args.roster));
    record.input_digests.emplace_back(args.marks, file_digest(args.marks));
  }

  emit_report(bundle, args.output);

  record.output_digests = {{args.output, file_digest(args.output)}};
  if (!args.plot_data.empty()) {
    record.output_digests.emplace_back(args.plot_data, file_digest(args.plot_data));
  }
  record.rubric = rubric;
  record.thresholds = bundle.thresholds;
  record.assume_lowest = args.assume_lowest;
  record.timestamp = timestamp_now();
  write_run_record(record, sibling_path(args.output, ".run.json"));

  std::cout << "analyzed " << bundle.summary.cohort_size << " responses -> " << args.output
            << "\n";
  return 0;
}

int do_compare(const CompareArgs& args) {
  std::vector<TeamPoint> first = read_team_points(args.first);
  std::vector<TeamPoint> second = read_team_points(args.second);

  auto stats_of = [](const std::vector<TeamPoint>& points) {
    CohortTeamStats stats;
    for (const TeamPoint& p : points) {
      stats.equity_means.push_back(p.equity_mean);
      stats.marks.push_back(p.marks);
    }
    return stats;
  };
  ComparisonReport report = compare_cohorts(stats_of(first), stats_of(second));
  emit_comparison(report, args.output);

  RunRecord record;
  record.command = "compare";
  record.input_digests = {{args.first, file_digest(args.first)},
                          {args.second, file_digest(args.second)}};
  record.output_digests = {{args.output, file_digest(args.output)}};
  record.timestamp = timestamp_now();
  write_run_record(record, sibling_path(args.output, ".run.json"));

  switch (report.verdict) {
    case BalanceVerdict::MoreBalanced: std::cout << "verdict: first_more_balanced\n"; break;
    case BalanceVerdict::LessBalanced: std::cout << "verdict: second_more_balanced\n"; break;
    case BalanceVerdict::Comparable: std::cout << "verdict: comparable\n"; break;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"equity-score team formation and cohort analytics"};
  app.require_subcommand(1);

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand("score", "score survey responses with the rubric");
  score->add_option("--input", score_args.input, "responses file (CSV)")->required();
  score->add_option("--output", score_args.output, "scores file to write (CSV)")->required();
  score->add_option("--rubric", score_args.rubric_path, "rubric override (JSON)");
  score->add_flag("--assume-lowest", score_args.assume_lowest,
                  "treat omitted answers as the lowest-scoring option");

  FormArgs form_args;
  CLI::App* form = app.add_subcommand("form", "form balanced teams from responses or scores");
  form->add_option("--input", form_args.input, "responses or scores file (CSV)")->required();
  form->add_option("--output", form_args.output, "roster file to write (CSV)")->required();
  form->add_option("--team-size", form_args.team_size, "target members per team")
      ->capture_default_str();
  form->add_option("--metrics", form_args.metrics,
                   "metrics file to write (JSON; default <output>.metrics.json)");
  form->add_option("--seed", form_args.seed,
                   "also report a seeded random baseline in the metrics");
  form->add_option("--rubric", form_args.rubric_path, "rubric override (JSON)");
  form->add_flag("--assume-lowest", form_args.assume_lowest,
                 "treat omitted answers as the lowest-scoring option");

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "emit the cohort analytics report");
  analyze->add_option("--input", analyze_args.input, "responses file (CSV)")->required();
  analyze->add_option("--output", analyze_args.output, "report file to write (JSON)")->required();
  analyze->add_option("--roster", analyze_args.roster, "roster file (CSV)");
  analyze->add_option("--marks", analyze_args.marks, "per-team marks file (CSV)");
  analyze->add_option("--plot-data", analyze_args.plot_data,
                      "also write per-team plot data (CSV)");
  analyze->add_option("--low-max", analyze_args.low_max, "largest total binned as Low")
      ->capture_default_str();
  analyze->add_option("--high-min", analyze_args.high_min, "smallest total binned as High")
      ->capture_default_str();
  analyze->add_option("--rubric", analyze_args.rubric_path, "rubric override (JSON)");
  analyze->add_flag("--assume-lowest", analyze_args.assume_lowest,
                    "treat omitted answers as the lowest-scoring option");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand("compare", "compare two team-formation regimes");
  compare->add_option("--input", compare_args.first, "first cohort team file (CSV)")->required();
  compare->add_option("--second", compare_args.second, "second cohort team file (CSV)")
      ->required();
  compare->add_option("--output", compare_args.output, "comparison file to write (JSON)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (score->parsed()) return do_score(score_args);
    if (form->parsed()) return do_form(form_args);
    if (analyze->parsed()) return do_analyze(analyze_args);
    if (compare->parsed()) return do_compare(compare_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace equiteam
