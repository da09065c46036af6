#include "equiteam/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace equiteam {

CohortTooSmallError::CohortTooSmallError(std::size_t n, int team_size)
    : Error("cohort of " + std::to_string(n) + " is smaller than the team size " +
            std::to_string(team_size)) {}

NonPositiveTeamSizeError::NonPositiveTeamSizeError(int team_size)
    : Error("team size must be at least 2, got " + std::to_string(team_size)) {}

InstanceTooLargeError::InstanceTooLargeError(std::size_t n, std::size_t limit)
    : Error("exact enumeration limited to " + std::to_string(limit) + " students, got " +
            std::to_string(n)) {}

namespace {

struct Member {
  std::string roll;
  int total = 0;
};

// Canonical student order shared by every deterministic operation here.
std::vector<Member> sorted_members(const std::vector<EquityScore>& scores) {
  std::vector<Member> members;
  members.reserve(scores.size());
  for (const EquityScore& s : scores) {
    members.push_back({s.roll, s.total});
  }
  std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.roll < b.roll;
  });
  return members;
}

void check_sizes(std::size_t n, int team_size) {
  if (team_size < 2) throw NonPositiveTeamSizeError(team_size);
  if (n < static_cast<std::size_t>(team_size)) throw CohortTooSmallError(n, team_size);
}

double median_of_sums(std::vector<long long> sums) {
  std::sort(sums.begin(), sums.end());
  std::size_t n = sums.size();
  if (n % 2 == 1) return static_cast<double>(sums[n / 2]);
  return (static_cast<double>(sums[n / 2 - 1]) + static_cast<double>(sums[n / 2])) / 2.0;
}

// Index of the eligible team with the smallest (or largest) sum,
// ties to the smallest team index. `fits` filters by remaining capacity.
template <typename Fits>
int pick_team(const std::vector<long long>& sums, bool smallest, Fits fits) {
  int best = -1;
  for (int t = 0; t < static_cast<int>(sums.size()); ++t) {
    if (!fits(t)) continue;
    if (best < 0 || (smallest ? sums[t] < sums[best] : sums[t] > sums[best])) {
      best = t;
    }
  }
  return best;
}

TeamAssignment finish_assignment(const std::vector<Member>& members,
                                 const std::vector<std::vector<int>>& teams, int team_size) {
  TeamAssignment out;
  out.team_size = team_size;
  out.teams.reserve(teams.size());
  for (const std::vector<int>& team : teams) {
    std::vector<std::string> rolls;
    rolls.reserve(team.size());
    for (int idx : team) rolls.push_back(members[idx].roll);
    std::sort(rolls.begin(), rolls.end());
    out.teams.push_back(std::move(rolls));
  }
  return out;
}

}  // namespace

std::vector<int> team_size_profile(std::size_t n, int team_size) {
  check_sizes(n, team_size);
  std::size_t k = (n + team_size - 1) / team_size;
  std::size_t q = n / k;
  std::size_t r = n % k;
  std::vector<int> profile(k, static_cast<int>(q));
  for (std::size_t t = 0; t < r; ++t) profile[t] = static_cast<int>(q) + 1;
  return profile;
}

double population_variance(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size());
}

TeamAssignment fold_assign(const std::vector<EquityScore>& scores, int team_size) {
  const std::size_t n = scores.size();
  check_sizes(n, team_size);
  const std::vector<Member> members = sorted_members(scores);
  const std::vector<int> targets = team_size_profile(n, team_size);
  const std::size_t k = targets.size();

  std::vector<std::vector<int>> teams(k);
  std::vector<long long> sums(k, 0);
  auto attach = [&](int team, int idx) {
    teams[team].push_back(idx);
    sums[team] += members[idx].total;
  };
  auto capacity = [&](int t) { return targets[t] - static_cast<int>(teams[t].size()); };

  // Pass 1 seeds the k teams with the extreme pairs of the whole cohort.
  std::size_t hi = 0;
  std::size_t lo = n - 1;
  for (std::size_t t = 0; t < k; ++t) {
    if (hi < lo) {
      attach(static_cast<int>(t), static_cast<int>(hi++));
      attach(static_cast<int>(t), static_cast<int>(lo--));
    } else {
      attach(static_cast<int>(t), static_cast<int>(hi++));  // lone middle student
    }
  }

  // Later passes fold the remaining pool into at most k units each and
  // attach them by the pass-median rule.
  struct Unit {
    int high = -1;
    int low = -1;  // -1 for a singleton
    long long sum = 0;
  };
  while (hi <= lo && lo < n) {
    std::vector<Unit> units;
    std::size_t upper = lo;
    for (std::size_t u = 0; u < k && hi <= upper; ++u) {
      if (hi < upper) {
        units.push_back({static_cast<int>(hi), static_cast<int>(upper),
                         static_cast<long long>(members[hi].total) + members[upper].total});
        ++hi;
        --upper;
      } else {
        units.push_back({static_cast<int>(hi), -1, members[hi].total});
        ++hi;
        break;
      }
    }
    lo = upper;

    std::vector<long long> unit_sums;
    unit_sums.reserve(units.size());
    for (const Unit& unit : units) unit_sums.push_back(unit.sum);
    const double median = median_of_sums(unit_sums);

    for (const Unit& unit : units) {
      const bool above = static_cast<double>(unit.sum) > median;
      if (unit.low >= 0) {
        int team = pick_team(sums, above, [&](int t) { return capacity(t) >= 2; });
        if (team >= 0) {
          attach(team, unit.high);
          attach(team, unit.low);
        } else {
          // Only single-seat teams remain: split the pair, the higher
          // member balancing the poorest team.
          int t_high = pick_team(sums, true, [&](int t) { return capacity(t) >= 1; });
          attach(t_high, unit.high);
          int t_low = pick_team(sums, false, [&](int t) { return capacity(t) >= 1; });
          attach(t_low, unit.low);
        }
      } else {
        int team = pick_team(sums, above, [&](int t) { return capacity(t) >= 1; });
        attach(team, unit.high);
      }
    }
  }

  return finish_assignment(members, teams, team_size);
}

namespace {

// Working state for the swap scan. Teams hold indices into `members`,
// kept sorted by roll so candidate enumeration order is canonical.
struct ScanState {
  std::vector<Member> members;
  std::vector<std::vector<int>> teams;
  std::vector<long long> sums;
  std::vector<int> counts;
  std::vector<double> means;
  double sum_means = 0.0;
  double sum_sq_means = 0.0;

  void refresh() {
    const std::size_t k = teams.size();
    means.assign(k, 0.0);
    sum_means = 0.0;
    sum_sq_means = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      means[t] = static_cast<double>(sums[t]) / static_cast<double>(counts[t]);
      sum_means += means[t];
      sum_sq_means += means[t] * means[t];
    }
  }

  double variance() const {
    const double k = static_cast<double>(teams.size());
    return sum_sq_means / k - (sum_means / k) * (sum_means / k);
  }
};

ScanState build_scan_state(const TeamAssignment& assign,
                           const std::vector<EquityScore>& scores) {
  std::unordered_map<std::string, int> totals;
  totals.reserve(scores.size());
  for (const EquityScore& s : scores) totals[s.roll] = s.total;

  ScanState state;
  state.teams.resize(assign.teams.size());
  state.sums.assign(assign.teams.size(), 0);
  state.counts.assign(assign.teams.size(), 0);
  for (std::size_t t = 0; t < assign.teams.size(); ++t) {
    if (assign.teams[t].empty()) throw Error("assignment contains an empty team");
    for (const std::string& roll : assign.teams[t]) {
      auto it = totals.find(roll);
      if (it == totals.end()) throw Error("roll '" + roll + "' has no score");
      state.teams[t].push_back(static_cast<int>(state.members.size()));
      state.members.push_back({roll, it->second});
      state.sums[t] += it->second;
      state.counts[t] += 1;
    }
    std::sort(state.teams[t].begin(), state.teams[t].end(),
              [&](int a, int b) { return state.members[a].roll < state.members[b].roll; });
  }
  state.refresh();
  return state;
}

struct SwapCandidate {
  double variance = std::numeric_limits<double>::infinity();
  int team_a = -1;
  int pos_a = -1;
  int team_b = -1;
  int pos_b = -1;
};

// Strict total order: lower variance wins, ties by the canonical
// (team, member position) key. Positions follow roll order within teams,
// so this is the (team index, roll) tie-break.
bool better_candidate(const SwapCandidate& x, const SwapCandidate& y) {
  if (x.variance != y.variance) return x.variance < y.variance;
  if (x.team_a != y.team_a) return x.team_a < y.team_a;
  if (x.pos_a != y.pos_a) return x.pos_a < y.pos_a;
  if (x.team_b != y.team_b) return x.team_b < y.team_b;
  return x.pos_b < y.pos_b;
}

SwapCandidate evaluate_candidate(const ScanState& state, int team_a, int pos_a, int team_b,
                                 int pos_b) {
  const Member& a = state.members[state.teams[team_a][pos_a]];
  const Member& b = state.members[state.teams[team_b][pos_b]];
  const double k = static_cast<double>(state.teams.size());
  const double mean_a = state.means[team_a];
  const double mean_b = state.means[team_b];
  const double new_mean_a = static_cast<double>(state.sums[team_a] - a.total + b.total) /
                            static_cast<double>(state.counts[team_a]);
  const double new_mean_b = static_cast<double>(state.sums[team_b] + a.total - b.total) /
                            static_cast<double>(state.counts[team_b]);
  const double sm = state.sum_means - mean_a - mean_b + new_mean_a + new_mean_b;
  const double sm2 = state.sum_sq_means - mean_a * mean_a - mean_b * mean_b +
                     new_mean_a * new_mean_a + new_mean_b * new_mean_b;
  return {sm2 / k - (sm / k) * (sm / k), team_a, pos_a, team_b, pos_b};
}

SwapCandidate scan_serial(const ScanState& state) {
  SwapCandidate best;
  const int k = static_cast<int>(state.teams.size());
  for (int i = 0; i + 1 < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      for (int a = 0; a < static_cast<int>(state.teams[i].size()); ++a) {
        for (int b = 0; b < static_cast<int>(state.teams[j].size()); ++b) {
          SwapCandidate cand = evaluate_candidate(state, i, a, j, b);
          if (better_candidate(cand, best)) best = cand;
        }
      }
    }
  }
  return best;
}

#ifdef _OPENMP
SwapCandidate scan_parallel(const ScanState& state) {
  std::vector<std::pair<int, int>> blocks;  // team pairs, each a parallel work item
  const int k = static_cast<int>(state.teams.size());
  for (int i = 0; i + 1 < k; ++i) {
    for (int j = i + 1; j < k; ++j) blocks.emplace_back(i, j);
  }

  SwapCandidate best;
#pragma omp parallel
  {
    SwapCandidate local;
#pragma omp for schedule(static) nowait
    for (long long block_idx = 0; block_idx < static_cast<long long>(blocks.size());
         ++block_idx) {
      const auto [team_a, team_b] = blocks[block_idx];
      const int size_b = static_cast<int>(state.teams[team_b].size());
      for (int a = 0; a < static_cast<int>(state.teams[team_a].size()); ++a) {
        for (int b = 0; b < size_b; ++b) {
          SwapCandidate cand = evaluate_candidate(state, team_a, a, team_b, b);
          if (better_candidate(cand, local)) local = cand;
        }
      }
    }
#pragma omp critical
    {
      // better_candidate is a strict total order over distinct candidates,
      // so the merge result does not depend on thread arrival order.
      if (better_candidate(local, best)) best = local;
    }
  }
  return best;
}
#endif

bool use_parallel(const ScanState& state, ScanMode mode) {
#ifdef _OPENMP
  if (mode == ScanMode::Parallel) return true;
  if (mode == ScanMode::Serial) return false;
  std::size_t n = state.members.size();
  return n * n / 2 >= 8192;
#else
  (void)state;
  if (mode == ScanMode::Parallel) {
    throw Error("parallel scan requested but OpenMP is not available");
  }
  return false;
#endif
}

}  // namespace

LocalSearchResult local_search_rebalance(const TeamAssignment& assign,
                                         const std::vector<EquityScore>& scores,
                                         ScanMode mode) {
  ScanState state = build_scan_state(assign, scores);
  const bool parallel = use_parallel(state, mode);

  LocalSearchResult result;
  result.variance_trajectory.push_back(population_variance(state.means));

  if (state.teams.size() < 2) {
    result.assignment = assign;
    return result;
  }

  while (true) {
    const double current = state.variance();
#ifdef _OPENMP
    const SwapCandidate best = parallel ? scan_parallel(state) : scan_serial(state);
#else
    const SwapCandidate best = scan_serial(state);
#endif
    if (best.team_a < 0 || !(best.variance < current - kSwapImprovementTol)) break;

    int& slot_a = state.teams[best.team_a][best.pos_a];
    int& slot_b = state.teams[best.team_b][best.pos_b];
    state.sums[best.team_a] +=
        state.members[slot_b].total - state.members[slot_a].total;
    state.sums[best.team_b] +=
        state.members[slot_a].total - state.members[slot_b].total;
    std::swap(slot_a, slot_b);
    for (int t : {best.team_a, best.team_b}) {
      std::sort(state.teams[t].begin(), state.teams[t].end(),
                [&](int a, int b) { return state.members[a].roll < state.members[b].roll; });
    }
    state.refresh();
    result.accepted_swaps += 1;
    result.variance_trajectory.push_back(population_variance(state.means));
  }

  result.assignment.team_size = assign.team_size;
  result.assignment.teams.reserve(state.teams.size());
  for (const std::vector<int>& team : state.teams) {
    std::vector<std::string> rolls;
    rolls.reserve(team.size());
    for (int idx : team) rolls.push_back(state.members[idx].roll);
    result.assignment.teams.push_back(std::move(rolls));
  }
  return result;
}

BalanceMetrics balance_metrics(const TeamAssignment& assign,
                               const std::vector<EquityScore>& scores) {
  if (assign.teams.empty()) throw Error("assignment has no teams");
  ScanState state = build_scan_state(assign, scores);
  BalanceMetrics metrics;
  metrics.team_means = state.means;
  metrics.variance = population_variance(state.means);
  auto [lo, hi] = std::minmax_element(state.means.begin(), state.means.end());
  metrics.range_width = *hi - *lo;
  return metrics;
}

namespace {

struct OracleSearch {
  const std::vector<Member>& members;
  const std::vector<int>& sizes;
  std::vector<std::vector<int>> blocks = {};
  std::vector<long long> block_sums = {};
  double best_variance = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::string>> best_listing = {};

  void run() { place(0); }

  void place(std::size_t idx) {
    if (idx == members.size()) {
      consider();
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (static_cast<int>(blocks[b].size()) == sizes[b]) continue;
      // Equal-size empty blocks are interchangeable: try only the first.
      if (blocks[b].empty()) {
        bool skip = false;
        for (std::size_t prev = 0; prev < b; ++prev) {
          if (sizes[prev] == sizes[b] && blocks[prev].empty()) {
            skip = true;
            break;
          }
        }
        if (skip) continue;
      }
      blocks[b].push_back(static_cast<int>(idx));
      block_sums[b] += members[idx].total;
      place(idx + 1);
      blocks[b].pop_back();
      block_sums[b] -= members[idx].total;
    }
  }

  void consider() {
    std::vector<double> means;
    means.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      means.push_back(static_cast<double>(block_sums[b]) / static_cast<double>(sizes[b]));
    }
    // Sorting first makes the float value independent of block order, so
    // equal-variance partitions compare equal regardless of enumeration
    // route.
    std::sort(means.begin(), means.end());
    const double variance = population_variance(means);
    if (variance > best_variance) return;

    std::vector<std::vector<std::string>> listing;
    listing.reserve(blocks.size());
    for (const std::vector<int>& block : blocks) {
      std::vector<std::string> rolls;
      rolls.reserve(block.size());
      for (int idx : block) rolls.push_back(members[idx].roll);
      std::sort(rolls.begin(), rolls.end());
      listing.push_back(std::move(rolls));
    }
    std::sort(listing.begin(), listing.end());

    if (variance < best_variance || listing < best_listing) {
      best_variance = variance;
      best_listing = std::move(listing);
    }
  }
};

}  // namespace

TeamAssignment exact_min_variance(const std::vector<EquityScore>& scores, int team_size) {
  const std::size_t n = scores.size();
  check_sizes(n, team_size);
  if (n > kExactOracleLimit) throw InstanceTooLargeError(n, kExactOracleLimit);

  const std::vector<Member> members = sorted_members(scores);
  const std::vector<int> sizes = team_size_profile(n, team_size);

  OracleSearch search{.members = members, .sizes = sizes};
  search.blocks.resize(sizes.size());
  search.block_sums.assign(sizes.size(), 0);
  search.run();

  TeamAssignment out;
  out.team_size = team_size;
  out.teams = std::move(search.best_listing);
  return out;
}

TeamAssignment random_assign(const std::vector<EquityScore>& scores, int team_size,
                             std::uint64_t seed) {
  const std::size_t n = scores.size();
  check_sizes(n, team_size);
  std::vector<Member> members = sorted_members(scores);

  // Hand-rolled Fisher-Yates over splitmix64 output: reproducible
  // independently of the standard library's distribution internals.
  std::uint64_t state = seed;
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(next() % (i + 1));
    std::swap(members[i], members[j]);
  }

  const std::vector<int> sizes = team_size_profile(n, team_size);
  std::vector<std::vector<int>> teams(sizes.size());
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    for (int s = 0; s < sizes[t]; ++s) teams[t].push_back(static_cast<int>(cursor++));
  }
  return finish_assignment(members, teams, team_size);
}

}  // namespace equiteam
