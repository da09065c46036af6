#include "equiteam/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace equiteam {

InvalidThresholdsError::InvalidThresholdsError(int low_max, int high_min)
    : Error("invalid score-bin thresholds: low_max " + std::to_string(low_max) +
            " must be below high_min " + std::to_string(high_min) +
            " and both within [40, 90]") {}

namespace {

// "Not comfortable" counts under the lowest-scoring category it scores as.
int folded_social(Social v) {
  return v == Social::NotComfortable ? static_cast<int>(Social::MajorCityIndia)
                                     : static_cast<int>(v);
}

int folded_economic(Economic v) {
  return v == Economic::NotComfortable ? static_cast<int>(Economic::Upper)
                                       : static_cast<int>(v);
}

}  // namespace

CohortSummary category_counts(const std::vector<StudentResponse>& resps) {
  CohortSummary summary;
  summary.cohort_size = static_cast<int>(resps.size());
  for (const StudentResponse& resp : resps) {
    if (resp.participation == Participation::OptOut) {
      summary.opt_out_count += 1;
      continue;
    }
    summary.participating += 1;
    if (!resp.social || !resp.economic || !resp.readiness) {
      throw Error("roll '" + resp.roll + "': participating response with missing answers");
    }
    summary.social_counts[folded_social(*resp.social)] += 1;
    summary.economic_counts[folded_economic(*resp.economic)] += 1;
    summary.readiness_counts[static_cast<int>(*resp.readiness)] += 1;
    if (*resp.social == Social::NotComfortable) summary.not_comfortable_count += 1;
    if (*resp.economic == Economic::NotComfortable) summary.not_comfortable_count += 1;
  }
  return summary;
}

std::array<int, 3> bin_scores(const std::vector<EquityScore>& scores, BinThresholds thresholds) {
  if (thresholds.low_max >= thresholds.high_min || thresholds.low_max < 40 ||
      thresholds.low_max > 90 || thresholds.high_min < 40 || thresholds.high_min > 90) {
    throw InvalidThresholdsError(thresholds.low_max, thresholds.high_min);
  }
  std::array<int, 3> bins{};
  for (const EquityScore& score : scores) {
    if (score.total <= thresholds.low_max) {
      bins[0] += 1;
    } else if (score.total >= thresholds.high_min) {
      bins[2] += 1;
    } else {
      bins[1] += 1;
    }
  }
  return bins;
}

CohortSummary summarize_cohort(const std::vector<StudentResponse>& resps,
                               const std::vector<EquityScore>& scores,
                               BinThresholds thresholds) {
  CohortSummary summary = category_counts(resps);
  summary.score_bins = bin_scores(scores, thresholds);
  return summary;
}

CrossTab readiness_cross_tab(const std::vector<StudentResponse>& resps) {
  CrossTab tab;
  tab.rows[0].readiness = Readiness::SelfSufficient;
  tab.rows[1].readiness = Readiness::Helped;
  tab.rows[2].readiness = Readiness::NeedsSupport;
  for (const StudentResponse& resp : resps) {
    if (resp.participation == Participation::OptOut) continue;
    if (!resp.social || !resp.economic || !resp.readiness) {
      throw Error("roll '" + resp.roll + "': participating response with missing answers");
    }
    CrossTabRow& row = tab.rows[static_cast<int>(*resp.readiness)];
    row.row_total += 1;
    row.economic[folded_economic(*resp.economic)] += 1;
    row.social[folded_social(*resp.social)] += 1;
  }
  return tab;
}

int display_percent(int count, int total) {
  if (total <= 0) throw Error("display_percent requires a positive total");
  // Exact rational rounding to nearest, ties to even.
  int quotient = (100 * count) / total;
  int remainder = (100 * count) % total;
  if (2 * remainder > total) return quotient + 1;
  if (2 * remainder < total) return quotient;
  return quotient % 2 == 0 ? quotient : quotient + 1;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw EmptyInputError("median of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

double median_sorted(const std::vector<double>& values, std::size_t first, std::size_t last) {
  const std::size_t n = last - first;
  if (n % 2 == 1) return values[first + n / 2];
  return (values[first + n / 2 - 1] + values[first + n / 2]) / 2.0;
}

}  // namespace

FiveNumberSummary five_number(std::vector<double> values) {
  if (values.empty()) throw EmptyInputError("five-number summary of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();

  FiveNumberSummary summary;
  summary.min = values.front();
  summary.max = values.back();
  summary.median = median_sorted(values, 0, n);
  if (n == 1) {
    summary.q1 = summary.q3 = summary.median;
    return summary;
  }
  // Quartiles are the medians of the halves, excluding the overall median
  // itself when n is odd.
  const std::size_t half = n / 2;
  summary.q1 = median_sorted(values, 0, half);
  summary.q3 = median_sorted(values, n - half, n);
  return summary;
}

ComparisonReport compare_cohorts(const CohortTeamStats& first, const CohortTeamStats& second) {
  ComparisonReport report;
  report.first_equity = five_number(first.equity_means);
  report.second_equity = five_number(second.equity_means);
  report.first_marks = five_number(first.marks);
  report.second_marks = five_number(second.marks);

  report.first_equity_width = report.first_equity.max - report.first_equity.min;
  report.second_equity_width = report.second_equity.max - report.second_equity.min;
  if (report.first_equity_width < report.second_equity_width) {
    report.verdict = BalanceVerdict::MoreBalanced;
  } else if (report.first_equity_width > report.second_equity_width) {
    report.verdict = BalanceVerdict::LessBalanced;
  } else {
    report.verdict = BalanceVerdict::Comparable;
  }

  report.delta_equity_width = report.second_equity_width - report.first_equity_width;
  report.delta_marks_median = report.second_marks.median - report.first_marks.median;
  report.delta_marks_min = report.second_marks.min - report.first_marks.min;
  report.delta_marks_max = report.second_marks.max - report.first_marks.max;
  return report;
}

AssociationReport score_marks_association(const std::vector<TeamPoint>& points) {
  if (points.size() < 2) {
    throw Error("association requires at least 2 teams");
  }

  AssociationReport report;
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const TeamPoint& p : points) {
    xs.push_back(p.equity_mean);
    ys.push_back(p.marks);
  }
  auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  report.degenerate_equity = (*xmin == *xmax);
  report.degenerate_marks = (*ymin == *ymax);
  if (report.degenerate()) {
    return report;
  }

  const double n = static_cast<double>(points.size());
  double mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double cov = 0, var_x = 0, var_y = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  report.correlation = std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0);

  report.equity_median = median_of(xs);
  report.marks_median = median_of(ys);
  for (const TeamPoint& p : points) {
    if (p.equity_mean > report.equity_median && p.marks < report.marks_median) {
      report.high_score_low_marks.push_back(p.team);
    } else if (p.equity_mean < report.equity_median && p.marks > report.marks_median) {
      report.low_score_high_marks.push_back(p.team);
    }
  }
  return report;
}

}  // namespace equiteam
