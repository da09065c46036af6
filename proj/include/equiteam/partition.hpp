#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equiteam/survey.hpp"

namespace equiteam {

// A partition of the cohort into teams. Members are kept sorted by roll
// within each team. `team_size` is the target size the assignment was
// built for; actual sizes differ from it by at most one and from each
// other by at most one.
struct TeamAssignment {
  std::vector<std::vector<std::string>> teams;
  int team_size = 0;

  bool operator==(const TeamAssignment&) const = default;
};

struct BalanceMetrics {
  std::vector<double> team_means;
  double variance = 0.0;     // population variance of team means
  double range_width = 0.0;  // max mean - min mean
};

enum class ScanMode { Auto, Serial, Parallel };

struct LocalSearchResult {
  TeamAssignment assignment;
  std::size_t accepted_swaps = 0;
  // variance_trajectory[0] is the variance of the input assignment,
  // followed by the variance after each accepted swap.
  std::vector<double> variance_trajectory;
};

struct CohortTooSmallError : Error {
  CohortTooSmallError(std::size_t n, int team_size);
};

struct NonPositiveTeamSizeError : Error {
  explicit NonPositiveTeamSizeError(int team_size);
};

struct InstanceTooLargeError : Error {
  explicit InstanceTooLargeError(std::size_t n, std::size_t limit);
};

// A swap is accepted only if it lowers the variance by more than this;
// exact ties cannot cycle the search.
inline constexpr double kSwapImprovementTol = 1e-9;

// Exact-enumeration oracle refuses instances above this size.
inline constexpr std::size_t kExactOracleLimit = 12;

// Team sizes for n students at the given target: k = ceil(n / team_size)
// teams, the first n mod k of them one student larger.
std::vector<int> team_size_profile(std::size_t n, int team_size);

// Population variance of the given values (two-pass, left-to-right).
double population_variance(const std::vector<double>& values);

// Greedy fold assignment. Students are sorted by (total desc, roll asc);
// each pass pairs the extremes of the unassigned pool, the first pass
// seeding the k teams and later passes attaching pairs to the eligible
// team with the smallest current sum when the pair sum is above the
// median pair sum of its pass, otherwise to the one with the largest.
TeamAssignment fold_assign(const std::vector<EquityScore>& scores, int team_size);

// Best-improvement swap local search over single-student cross-team
// swaps. Deterministic: ties are broken by the lexicographically
// smallest (team index, roll) of the swapped pair, and the parallel scan
// is bit-identical to the serial one.
LocalSearchResult local_search_rebalance(const TeamAssignment& assign,
                                         const std::vector<EquityScore>& scores,
                                         ScanMode mode = ScanMode::Auto);

BalanceMetrics balance_metrics(const TeamAssignment& assign,
                               const std::vector<EquityScore>& scores);

// Globally minimal variance of team means over every partition with the
// standard size profile, by enumeration. Guarded to n <= kExactOracleLimit.
// Ties resolve to the lexicographically smallest canonical team listing.
TeamAssignment exact_min_variance(const std::vector<EquityScore>& scores, int team_size);

// Seeded uniform shuffle chunked into the standard size profile.
TeamAssignment random_assign(const std::vector<EquityScore>& scores, int team_size,
                             std::uint64_t seed);

}  // namespace equiteam
