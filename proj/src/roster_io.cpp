#include "equiteam/roster_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace equiteam {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << bytes;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

// Lines of a delimited file, header checked, blank trailing lines ignored.
// Returned pairs carry the 1-based line number.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(
    const std::string& path, const std::string& expected_header) {
  std::string bytes = read_file(path);
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line != expected_header) {
        throw IoError("'" + path + "': expected header '" + expected_header + "', got '" + line +
                      "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    rows.emplace_back(line_no, split_line(line));
  }
  if (!saw_header) {
    throw IoError("'" + path + "': empty file, expected header '" + expected_header + "'");
  }
  return rows;
}

long long parse_int(const std::string& text, const std::string& path, std::size_t line) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw IoError("'" + path + "' line " + std::to_string(line) + ": expected integer, got '" +
                  text + "'");
  }
  if (pos != text.size()) {
    throw IoError("'" + path + "' line " + std::to_string(line) + ": expected integer, got '" +
                  text + "'");
  }
  return value;
}

double parse_number(const std::string& text, const std::string& path, std::size_t line) {
  std::size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw IoError("'" + path + "' line " + std::to_string(line) + ": expected number, got '" +
                  text + "'");
  }
  if (pos != text.size()) {
    throw IoError("'" + path + "' line " + std::to_string(line) + ": expected number, got '" +
                  text + "'");
  }
  return value;
}

void expect_fields(const std::vector<std::string>& fields, std::size_t count,
                   const std::string& path, std::size_t line) {
  if (fields.size() != count) {
    throw IoError("'" + path + "' line " + std::to_string(line) + ": expected " +
                  std::to_string(count) + " fields, got " + std::to_string(fields.size()));
  }
}

ordered_json five_number_json(const FiveNumberSummary& s, bool with_width) {
  ordered_json j;
  j["min"] = s.min;
  j["q1"] = s.q1;
  j["median"] = s.median;
  j["q3"] = s.q3;
  j["max"] = s.max;
  if (with_width) j["range_width"] = s.max - s.min;
  return j;
}

ordered_json association_json(const AssociationReport& a) {
  ordered_json j;
  j["degenerate"] = a.degenerate();
  if (a.degenerate()) {
    ordered_json axes = ordered_json::array();
    if (a.degenerate_equity) axes.push_back("equity");
    if (a.degenerate_marks) axes.push_back("marks");
    j["degenerate_axes"] = axes;
    return j;
  }
  j["correlation"] = *a.correlation;
  j["equity_median"] = a.equity_median;
  j["marks_median"] = a.marks_median;
  j["high_score_low_marks"] = a.high_score_low_marks;
  j["low_score_high_marks"] = a.low_score_high_marks;
  return j;
}

template <std::size_t N, typename Enum>
ordered_json counts_json(const std::array<int, N>& counts, Enum (*category)(int)) {
  ordered_json j;
  for (std::size_t i = 0; i < N; ++i) {
    j[std::string(name_of(category(static_cast<int>(i))))] = counts[i];
  }
  return j;
}

Social social_at(int i) { return static_cast<Social>(i); }
Economic economic_at(int i) { return static_cast<Economic>(i); }
Readiness readiness_at(int i) { return static_cast<Readiness>(i); }

ordered_json axis_json(const std::array<int, 4>& counts, int row_total, bool social_axis) {
  ordered_json counts_obj;
  ordered_json percent_obj;
  for (int i = 0; i < 4; ++i) {
    std::string key = social_axis ? std::string(name_of(social_at(i)))
                                  : std::string(name_of(economic_at(i)));
    counts_obj[key] = counts[i];
    if (row_total > 0) percent_obj[key] = display_percent(counts[i], row_total);
  }
  ordered_json j;
  j["counts"] = counts_obj;
  j["percent"] = row_total > 0 ? percent_obj : ordered_json(nullptr);
  return j;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  if (value == static_cast<long long>(value) && std::abs(value) < 1e15) {
    std::snprintf(buffer, sizeof(buffer), "%lld", static_cast<long long>(value));
    return buffer;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::string file_digest(const std::string& path) {
  return content_digest(read_file(path));
}

LoadResult load_responses(const std::string& path, const ParseOptions& opts) {
  auto rows = read_csv(path, "roll,participation,social,economic,readiness");
  std::vector<RawRecord> records;
  records.reserve(rows.size());
  for (auto& [line, fields] : rows) {
    expect_fields(fields, 5, path, line);
    records.push_back({line, fields[0], fields[1], fields[2], fields[3], fields[4]});
  }
  ParseResult parsed = parse_responses(records, opts);
  return {std::move(parsed.responses), std::move(parsed.warnings)};
}

void write_scores(const std::vector<EquityScore>& scores, const std::string& path) {
  std::ostringstream out;
  out << "roll,total,opted_out\n";
  for (const EquityScore& s : scores) {
    out << s.roll << ',' << s.total << ',' << (s.opted_out ? "true" : "false") << '\n';
  }
  write_file(path, out.str());
}

std::vector<EquityScore> load_scores(const std::string& path) {
  auto rows = read_csv(path, "roll,total,opted_out");
  std::vector<EquityScore> scores;
  scores.reserve(rows.size());
  std::unordered_set<std::string> seen;
  for (auto& [line, fields] : rows) {
    expect_fields(fields, 3, path, line);
    EquityScore s;
    s.roll = fields[0];
    if (s.roll.empty() || !seen.insert(s.roll).second) {
      throw IoError("'" + path + "' line " + std::to_string(line) + ": bad or duplicate roll '" +
                    s.roll + "'");
    }
    s.total = static_cast<int>(parse_int(fields[1], path, line));
    if (fields[2] == "true") {
      s.opted_out = true;
    } else if (fields[2] == "false") {
      s.opted_out = false;
    } else {
      throw IoError("'" + path + "' line " + std::to_string(line) +
                    ": opted_out must be true or false, got '" + fields[2] + "'");
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

void write_roster(const TeamAssignment& assign, const std::vector<EquityScore>& scores,
                  const std::string& path) {
  std::unordered_map<std::string, int> totals;
  totals.reserve(scores.size());
  for (const EquityScore& s : scores) totals[s.roll] = s.total;

  std::ostringstream out;
  out << "team,roll,total_score\n";
  for (std::size_t t = 0; t < assign.teams.size(); ++t) {
    std::vector<std::string> rolls = assign.teams[t];
    std::sort(rolls.begin(), rolls.end());
    for (const std::string& roll : rolls) {
      auto it = totals.find(roll);
      if (it == totals.end()) throw Error("roll '" + roll + "' has no score");
      out << (t + 1) << ',' << roll << ',' << it->second << '\n';
    }
  }
  write_file(path, out.str());
}

TeamAssignment read_roster(const std::string& path) {
  auto rows = read_csv(path, "team,roll,total_score");
  std::map<long long, std::vector<std::string>> teams;
  std::unordered_set<std::string> seen;
  for (auto& [line, fields] : rows) {
    expect_fields(fields, 3, path, line);
    long long team = parse_int(fields[0], path, line);
    if (team < 1) {
      throw IoError("'" + path + "' line " + std::to_string(line) + ": team numbers start at 1");
    }
    const std::string& roll = fields[1];
    if (roll.empty() || !seen.insert(roll).second) {
      throw IoError("'" + path + "' line " + std::to_string(line) + ": bad or duplicate roll '" +
                    roll + "'");
    }
    parse_int(fields[2], path, line);  // total_score column is validated, not stored
    teams[team].push_back(roll);
  }

  TeamAssignment assign;
  long long expected = 1;
  for (auto& [team, rolls] : teams) {
    if (team != expected) {
      throw IoError("'" + path + "': team numbers must be consecutive from 1, missing " +
                    std::to_string(expected));
    }
    ++expected;
    std::sort(rolls.begin(), rolls.end());
    assign.team_size = std::max(assign.team_size, static_cast<int>(rolls.size()));
    assign.teams.push_back(std::move(rolls));
  }
  return assign;
}

std::vector<std::pair<int, double>> read_marks(const std::string& path) {
  auto rows = read_csv(path, "team,marks");
  std::vector<std::pair<int, double>> marks;
  std::unordered_set<int> seen;
  for (auto& [line, fields] : rows) {
    expect_fields(fields, 2, path, line);
    int team = static_cast<int>(parse_int(fields[0], path, line));
    double value = parse_number(fields[1], path, line);
    if (value < 0.0 || value > 70.0) {
      throw IoError("'" + path + "' line " + std::to_string(line) + ": marks " +
                    format_double(value) + " outside the 0-70 assessment scale");
    }
    if (!seen.insert(team).second) {
      throw IoError("'" + path + "' line " + std::to_string(line) + ": duplicate team " +
                    std::to_string(team));
    }
    marks.emplace_back(team, value);
  }
  return marks;
}

void write_team_points(const std::vector<TeamPoint>& points, const std::string& path) {
  std::ostringstream out;
  out << "team,equity_mean,marks\n";
  for (const TeamPoint& p : points) {
    out << p.team << ',' << format_double(p.equity_mean) << ',' << format_double(p.marks) << '\n';
  }
  write_file(path, out.str());
}

std::vector<TeamPoint> read_team_points(const std::string& path) {
  auto rows = read_csv(path, "team,equity_mean,marks");
  std::vector<TeamPoint> points;
  std::unordered_set<int> seen;
  for (auto& [line, fields] : rows) {
    expect_fields(fields, 3, path, line);
    TeamPoint p;
    p.team = static_cast<int>(parse_int(fields[0], path, line));
    p.equity_mean = parse_number(fields[1], path, line);
    p.marks = parse_number(fields[2], path, line);
    if (!seen.insert(p.team).second) {
      throw IoError("'" + path + "' line " + std::to_string(line) + ": duplicate team " +
                    std::to_string(p.team));
    }
    points.push_back(p);
  }
  return points;
}

ScoringRubric load_rubric(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }

  ScoringRubric rubric;
  auto read_points = [&](const char* section, auto& points, auto category_at) {
    if (!j.contains(section)) {
      throw IoError("'" + path + "': missing rubric section '" + section + "'");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::string code(code_of(category_at(static_cast<int>(i))));
      if (!j[section].contains(code) || !j[section][code].is_number_integer()) {
        throw IoError("'" + path + "': rubric section '" + section +
                      "' must map answer code '" + code + "' to an integer");
      }
      points[i] = j[section][code].get<int>();
    }
  };
  read_points("social", rubric.social_points, social_at);
  read_points("economic", rubric.economic_points, economic_at);
  read_points("readiness", rubric.readiness_points, readiness_at);
  if (!j.contains("opt_out_total") || !j["opt_out_total"].is_number_integer()) {
    throw IoError("'" + path + "': rubric must carry an integer 'opt_out_total'");
  }
  rubric.opt_out_total = j["opt_out_total"].get<int>();
  rubric.validate();
  return rubric;
}

void emit_report(const ReportBundle& bundle, const std::string& path) {
  ordered_json j;
  j["schema_version"] = 1;

  ordered_json cohort;
  cohort["size"] = bundle.summary.cohort_size;
  cohort["participating"] = bundle.summary.participating;
  cohort["opt_out_count"] = bundle.summary.opt_out_count;
  cohort["not_comfortable_count"] = bundle.summary.not_comfortable_count;
  cohort["social_counts"] = counts_json(bundle.summary.social_counts, social_at);
  cohort["economic_counts"] = counts_json(bundle.summary.economic_counts, economic_at);
  cohort["readiness_counts"] = counts_json(bundle.summary.readiness_counts, readiness_at);
  ordered_json bins;
  bins["low"] = bundle.summary.score_bins[0];
  bins["average"] = bundle.summary.score_bins[1];
  bins["high"] = bundle.summary.score_bins[2];
  cohort["score_bins"] = bins;
  ordered_json thresholds;
  thresholds["low_max"] = bundle.thresholds.low_max;
  thresholds["high_min"] = bundle.thresholds.high_min;
  cohort["bin_thresholds"] = thresholds;
  j["cohort"] = cohort;

  ordered_json tab = ordered_json::array();
  for (const CrossTabRow& row : bundle.cross_tab.rows) {
    ordered_json r;
    r["readiness"] = std::string(name_of(row.readiness));
    r["row_total"] = row.row_total;
    r["economic"] = axis_json(row.economic, row.row_total, false);
    r["social"] = axis_json(row.social, row.row_total, true);
    tab.push_back(r);
  }
  j["readiness_cross_tab"] = tab;

  if (bundle.team_equity_summary) {
    j["team_equity_means"] = five_number_json(*bundle.team_equity_summary, true);
  }
  if (bundle.team_marks_summary) {
    j["team_marks"] = five_number_json(*bundle.team_marks_summary, false);
  }
  if (bundle.association) {
    j["association"] = association_json(*bundle.association);
  }

  write_file(path, j.dump(2) + "\n");
}

void emit_metrics(const BalanceMetrics& metrics, std::size_t accepted_swaps,
                  const std::optional<BalanceMetrics>& random_baseline,
                  std::optional<std::uint64_t> baseline_seed, const std::string& path) {
  ordered_json j;
  j["schema_version"] = 1;
  j["team_count"] = metrics.team_means.size();
  j["team_means"] = metrics.team_means;
  j["variance"] = metrics.variance;
  j["range_width"] = metrics.range_width;
  j["accepted_swaps"] = accepted_swaps;
  if (random_baseline) {
    ordered_json b;
    b["seed"] = *baseline_seed;
    b["team_means"] = random_baseline->team_means;
    b["variance"] = random_baseline->variance;
    b["range_width"] = random_baseline->range_width;
    j["random_baseline"] = b;
  }
  write_file(path, j.dump(2) + "\n");
}

void emit_comparison(const ComparisonReport& report, const std::string& path) {
  ordered_json j;
  j["schema_version"] = 1;

  auto cohort_json = [](const FiveNumberSummary& equity, const FiveNumberSummary& marks) {
    ordered_json c;
    c["equity"] = five_number_json(equity, true);
    c["marks"] = five_number_json(marks, false);
    return c;
  };
  j["first"] = cohort_json(report.first_equity, report.first_marks);
  j["second"] = cohort_json(report.second_equity, report.second_marks);

  switch (report.verdict) {
    case BalanceVerdict::MoreBalanced: j["verdict"] = "first_more_balanced"; break;
    case BalanceVerdict::LessBalanced: j["verdict"] = "second_more_balanced"; break;
    case BalanceVerdict::Comparable: j["verdict"] = "comparable"; break;
  }

  ordered_json deltas;
  deltas["equity_range_width"] = report.delta_equity_width;
  deltas["marks_median"] = report.delta_marks_median;
  deltas["marks_min"] = report.delta_marks_min;
  deltas["marks_max"] = report.delta_marks_max;
  j["deltas"] = deltas;

  write_file(path, j.dump(2) + "\n");
}

void write_run_record(const RunRecord& record, const std::string& path) {
  ordered_json j;
  j["schema_version"] = 1;
  j["command"] = record.command;
  j["timestamp"] = record.timestamp;

  ordered_json inputs = ordered_json::array();
  for (const auto& [file, digest] : record.input_digests) {
    ordered_json entry;
    entry["path"] = file;
    entry["digest"] = digest;
    inputs.push_back(entry);
  }
  j["inputs"] = inputs;

  ordered_json outputs = ordered_json::array();
  for (const auto& [file, digest] : record.output_digests) {
    ordered_json entry;
    entry["path"] = file;
    entry["digest"] = digest;
    outputs.push_back(entry);
  }
  j["outputs"] = outputs;

  ordered_json params;
  if (record.team_size) params["team_size"] = *record.team_size;
  if (record.seed) params["seed"] = *record.seed;
  if (record.thresholds) {
    params["low_max"] = record.thresholds->low_max;
    params["high_min"] = record.thresholds->high_min;
  }
  params["assume_lowest"] = record.assume_lowest;
  j["parameters"] = params;

  ordered_json rubric;
  auto points_json = [](const auto& points, auto category_at) {
    ordered_json p;
    for (std::size_t i = 0; i < points.size(); ++i) {
      p[std::string(code_of(category_at(static_cast<int>(i))))] = points[i];
    }
    return p;
  };
  rubric["social"] = points_json(record.rubric.social_points, social_at);
  rubric["economic"] = points_json(record.rubric.economic_points, economic_at);
  rubric["readiness"] = points_json(record.rubric.readiness_points, readiness_at);
  rubric["opt_out_total"] = record.rubric.opt_out_total;
  j["rubric"] = rubric;

  if (record.accepted_swaps > 0) j["accepted_swaps"] = record.accepted_swaps;

  write_file(path, j.dump(2) + "\n");
}

}  // namespace equiteam
