#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equiteam/analytics.hpp"
#include "equiteam/partition.hpp"
#include "equiteam/survey.hpp"

namespace equiteam {

struct IoError : Error {
  using Error::Error;
};

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// FNV-1a 64-bit digest of a byte string, as 16 hex digits.
std::string content_digest(std::string_view bytes);
std::string file_digest(const std::string& path);

struct LoadResult {
  std::vector<StudentResponse> responses;
  std::vector<std::string> warnings;
};

// Response file: header `roll,participation,social,economic,readiness`,
// one row per student. Validation errors carry the offending line number.
LoadResult load_responses(const std::string& path, const ParseOptions& opts = {});

// Scores file: header `roll,total,opted_out`, opted_out in {true,false}.
// Rows written in input order. Component fields are not persisted;
// loaded scores carry totals only.
void write_scores(const std::vector<EquityScore>& scores, const std::string& path);
std::vector<EquityScore> load_scores(const std::string& path);

// Roster file: header `team,roll,total_score`, teams numbered from 1,
// rows sorted by (team, roll). Reading reproduces the team lists exactly;
// the target size is restored as the largest team size.
void write_roster(const TeamAssignment& assign, const std::vector<EquityScore>& scores,
                  const std::string& path);
TeamAssignment read_roster(const std::string& path);

// Marks file: header `team,marks`, one row per team, marks on the 0-70
// assessment scale.
std::vector<std::pair<int, double>> read_marks(const std::string& path);

// Plot-data file: header `team,equity_mean,marks`, one row per team.
void write_team_points(const std::vector<TeamPoint>& points, const std::string& path);
std::vector<TeamPoint> read_team_points(const std::string& path);

// Rubric override file: JSON object with keys "social", "economic",
// "readiness" (answer code -> points) and "opt_out_total".
ScoringRubric load_rubric(const std::string& path);

// Everything the analyze report can carry. Optional sections are omitted
// from the emitted file when absent.
struct ReportBundle {
  CohortSummary summary;
  BinThresholds thresholds;
  CrossTab cross_tab;
  std::optional<FiveNumberSummary> team_equity_summary;
  std::optional<FiveNumberSummary> team_marks_summary;
  std::optional<AssociationReport> association;
};

// Single JSON report, schema-versioned, byte-stable for identical inputs.
void emit_report(const ReportBundle& bundle, const std::string& path);

void emit_metrics(const BalanceMetrics& metrics, std::size_t accepted_swaps,
                  const std::optional<BalanceMetrics>& random_baseline,
                  std::optional<std::uint64_t> baseline_seed, const std::string& path);

void emit_comparison(const ComparisonReport& report, const std::string& path);

// Reproducibility record written alongside each command's outputs.
struct RunRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> input_digests;   // path, digest
  std::vector<std::pair<std::string, std::string>> output_digests;  // path, digest
  ScoringRubric rubric;
  std::optional<int> team_size;
  std::optional<std::uint64_t> seed;
  std::optional<BinThresholds> thresholds;
  bool assume_lowest = false;
  std::size_t accepted_swaps = 0;
  std::string timestamp;  // ISO-8601 UTC
};

void write_run_record(const RunRecord& record, const std::string& path);

}  // namespace equiteam
