#pragma once

#include <array>
#include <optional>
#include <vector>

#include "equiteam/survey.hpp"

namespace equiteam {

// Category tallies for one cohort. "Not comfortable" answers are counted
// under the lowest-scoring category of their question (the same category
// they score as) and tallied separately, so each count map sums to the
// number of participating students.
struct CohortSummary {
  int cohort_size = 0;
  int participating = 0;
  int opt_out_count = 0;
  int not_comfortable_count = 0;
  std::array<int, 4> social_counts{};     // MajorCityIndia, StateCity, SmallTown, Rural
  std::array<int, 4> economic_counts{};   // Upper, UpperMiddle, Middle, Disadvantaged
  std::array<int, 3> readiness_counts{};  // SelfSufficient, Helped, NeedsSupport
  std::array<int, 3> score_bins{};        // Low, Average, High
};

struct BinThresholds {
  int low_max = 55;
  int high_min = 70;
};

struct InvalidThresholdsError : Error {
  InvalidThresholdsError(int low_max, int high_min);
};

struct EmptyInputError : Error {
  using Error::Error;
};

CohortSummary category_counts(const std::vector<StudentResponse>& resps);

// Low: total <= low_max; High: total >= high_min; Average otherwise.
// Opt-outs are binned by their fixed total like anyone else.
std::array<int, 3> bin_scores(const std::vector<EquityScore>& scores, BinThresholds thresholds);

// category_counts plus score bins in one summary.
CohortSummary summarize_cohort(const std::vector<StudentResponse>& resps,
                               const std::vector<EquityScore>& scores,
                               BinThresholds thresholds);

// Counts of economic and social categories per readiness row. Percentages
// are derived on demand from the retained exact counts.
struct CrossTabRow {
  Readiness readiness = Readiness::SelfSufficient;
  int row_total = 0;
  std::array<int, 4> economic{};
  std::array<int, 4> social{};
};

struct CrossTab {
  std::array<CrossTabRow, 3> rows;  // SelfSufficient, Helped, NeedsSupport
};

CrossTab readiness_cross_tab(const std::vector<StudentResponse>& resps);

// Display percentage of count/total, rounded to nearest (ties to even).
// total must be positive.
int display_percent(int count, int total);

struct FiveNumberSummary {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;

  bool operator==(const FiveNumberSummary&) const = default;
};

// Order-statistic five-number summary. The median is the middle value
// (mean of the two middles for even n); quartiles are the medians of the
// lower and upper halves, the overall median excluded for odd n.
FiveNumberSummary five_number(std::vector<double> values);

double median_of(std::vector<double> values);

struct CohortTeamStats {
  std::vector<double> equity_means;
  std::vector<double> marks;
};

enum class BalanceVerdict { MoreBalanced, LessBalanced, Comparable };

// Verdict is stated for the first cohort; deltas are second minus first.
struct ComparisonReport {
  FiveNumberSummary first_equity, second_equity;
  FiveNumberSummary first_marks, second_marks;
  double first_equity_width = 0;
  double second_equity_width = 0;
  BalanceVerdict verdict = BalanceVerdict::Comparable;
  double delta_equity_width = 0;
  double delta_marks_median = 0;
  double delta_marks_min = 0;
  double delta_marks_max = 0;
};

ComparisonReport compare_cohorts(const CohortTeamStats& first, const CohortTeamStats& second);

struct TeamPoint {
  int team = 0;
  double equity_mean = 0;
  double marks = 0;
};

// Pearson correlation of team equity means against marks, plus the teams
// falling in the (high score, low marks) and (low score, high marks)
// quadrants relative to the per-axis medians. A constant axis makes the
// correlation undefined; the report is then marked degenerate and the
// quadrant flags are suppressed.
struct AssociationReport {
  std::optional<double> correlation;
  bool degenerate_equity = false;
  bool degenerate_marks = false;
  double equity_median = 0;
  double marks_median = 0;
  std::vector<int> high_score_low_marks;
  std::vector<int> low_score_high_marks;

  bool degenerate() const { return degenerate_equity || degenerate_marks; }
};

AssociationReport score_marks_association(const std::vector<TeamPoint>& points);

}  // namespace equiteam
