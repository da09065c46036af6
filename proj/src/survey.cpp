#include "equiteam/survey.hpp"

#include <algorithm>
#include <unordered_set>

namespace equiteam {

namespace {

std::string at_line(std::size_t line) {
  return line ? " (line " + std::to_string(line) + ")" : "";
}

}  // namespace

DuplicateRollError::DuplicateRollError(const std::string& roll_, std::size_t line_)
    : Error("duplicate roll '" + roll_ + "'" + at_line(line_)), roll(roll_), line(line_) {}

MissingAnswerError::MissingAnswerError(const std::string& roll_, const std::string& question_,
                                       std::size_t line_)
    : Error("roll '" + roll_ + "': missing answer to question '" + question_ + "'" +
            at_line(line_)),
      roll(roll_),
      question(question_),
      line(line_) {}

InvalidCodeError::InvalidCodeError(const std::string& roll_, const std::string& question_,
                                   const std::string& value_, std::size_t line_)
    : Error("roll '" + roll_ + "': invalid code '" + value_ + "' for question '" + question_ +
            "'" + at_line(line_)),
      roll(roll_),
      question(question_),
      value(value_),
      line(line_) {}

OptOutWithAnswersError::OptOutWithAnswersError(const std::string& roll_, std::size_t line_)
    : Error("roll '" + roll_ + "': opt-out row carries socio-economic answers" + at_line(line_)),
      roll(roll_),
      line(line_) {}

int ScoringRubric::lowest_social() const {
  return *std::min_element(social_points.begin(), social_points.end());
}

int ScoringRubric::lowest_economic() const {
  return *std::min_element(economic_points.begin(), economic_points.end());
}

int ScoringRubric::lowest_readiness() const {
  return *std::min_element(readiness_points.begin(), readiness_points.end());
}

int ScoringRubric::min_total() const {
  return lowest_social() + lowest_economic() + lowest_readiness();
}

int ScoringRubric::max_total() const {
  return *std::max_element(social_points.begin(), social_points.end()) +
         *std::max_element(economic_points.begin(), economic_points.end()) +
         *std::max_element(readiness_points.begin(), readiness_points.end());
}

void ScoringRubric::validate() const {
  if (opt_out_total < min_total() || opt_out_total > max_total()) {
    throw Error("rubric opt-out total " + std::to_string(opt_out_total) + " outside [" +
                std::to_string(min_total()) + ", " + std::to_string(max_total()) + "]");
  }
}

std::optional<Participation> participation_from_code(std::string_view code) {
  if (code == "1a") return Participation::OptOut;
  if (code == "1b") return Participation::Participate;
  return std::nullopt;
}

std::optional<Social> social_from_code(std::string_view code) {
  if (code == "2a") return Social::MajorCityIndia;
  if (code == "2b") return Social::StateCity;
  if (code == "2c") return Social::SmallTown;
  if (code == "2d") return Social::Rural;
  if (code == "2e") return Social::NotComfortable;
  return std::nullopt;
}

std::optional<Economic> economic_from_code(std::string_view code) {
  if (code == "3a") return Economic::Upper;
  if (code == "3b") return Economic::UpperMiddle;
  if (code == "3c") return Economic::Middle;
  if (code == "3d") return Economic::Disadvantaged;
  if (code == "3e") return Economic::NotComfortable;
  return std::nullopt;
}

std::optional<Readiness> readiness_from_code(std::string_view code) {
  if (code == "4a") return Readiness::SelfSufficient;
  if (code == "4b") return Readiness::Helped;
  if (code == "4c") return Readiness::NeedsSupport;
  return std::nullopt;
}

std::string_view code_of(Participation v) {
  return v == Participation::OptOut ? "1a" : "1b";
}

std::string_view code_of(Social v) {
  switch (v) {
    case Social::MajorCityIndia: return "2a";
    case Social::StateCity: return "2b";
    case Social::SmallTown: return "2c";
    case Social::Rural: return "2d";
    case Social::NotComfortable: return "2e";
  }
  return "";
}

std::string_view code_of(Economic v) {
  switch (v) {
    case Economic::Upper: return "3a";
    case Economic::UpperMiddle: return "3b";
    case Economic::Middle: return "3c";
    case Economic::Disadvantaged: return "3d";
    case Economic::NotComfortable: return "3e";
  }
  return "";
}

std::string_view code_of(Readiness v) {
  switch (v) {
    case Readiness::SelfSufficient: return "4a";
    case Readiness::Helped: return "4b";
    case Readiness::NeedsSupport: return "4c";
  }
  return "";
}

std::string_view name_of(Social v) {
  switch (v) {
    case Social::MajorCityIndia: return "major_city_india";
    case Social::StateCity: return "state_city";
    case Social::SmallTown: return "small_town";
    case Social::Rural: return "rural";
    case Social::NotComfortable: return "not_comfortable";
  }
  return "";
}

std::string_view name_of(Economic v) {
  switch (v) {
    case Economic::Upper: return "upper";
    case Economic::UpperMiddle: return "upper_middle";
    case Economic::Middle: return "middle";
    case Economic::Disadvantaged: return "disadvantaged";
    case Economic::NotComfortable: return "not_comfortable";
  }
  return "";
}

std::string_view name_of(Readiness v) {
  switch (v) {
    case Readiness::SelfSufficient: return "self_sufficient";
    case Readiness::Helped: return "helped";
    case Readiness::NeedsSupport: return "needs_support";
  }
  return "";
}

ParseResult parse_responses(const std::vector<RawRecord>& rows, const ParseOptions& opts) {
  ParseResult result;
  result.responses.reserve(rows.size());
  std::unordered_set<std::string> seen;
  seen.reserve(rows.size());

  for (const RawRecord& row : rows) {
    if (row.roll.empty()) {
      throw InvalidCodeError(row.roll, "roll", "", row.line);
    }
    if (!seen.insert(row.roll).second) {
      throw DuplicateRollError(row.roll, row.line);
    }

    StudentResponse resp;
    resp.roll = row.roll;

    auto participation = participation_from_code(row.participation);
    if (!participation) {
      throw InvalidCodeError(row.roll, "participation", row.participation, row.line);
    }
    resp.participation = *participation;

    if (resp.participation == Participation::OptOut) {
      if (!row.social.empty() || !row.economic.empty() || !row.readiness.empty()) {
        throw OptOutWithAnswersError(row.roll, row.line);
      }
      result.responses.push_back(std::move(resp));
      continue;
    }

    auto require = [&](const std::string& value, const char* question) {
      if (!value.empty()) return true;
      if (!opts.assume_lowest) {
        throw MissingAnswerError(row.roll, question, row.line);
      }
      result.warnings.push_back("roll '" + row.roll + "': no answer to question '" + question +
                                "', assuming the lowest-scoring option");
      return false;
    };

    if (require(row.social, "social")) {
      resp.social = social_from_code(row.social);
      if (!resp.social) throw InvalidCodeError(row.roll, "social", row.social, row.line);
    } else {
      resp.social = Social::MajorCityIndia;
    }

    if (require(row.economic, "economic")) {
      resp.economic = economic_from_code(row.economic);
      if (!resp.economic) throw InvalidCodeError(row.roll, "economic", row.economic, row.line);
    } else {
      resp.economic = Economic::Upper;
    }

    if (require(row.readiness, "readiness")) {
      resp.readiness = readiness_from_code(row.readiness);
      if (!resp.readiness) throw InvalidCodeError(row.roll, "readiness", row.readiness, row.line);
    } else {
      resp.readiness = Readiness::SelfSufficient;
    }

    result.responses.push_back(std::move(resp));
  }
  return result;
}

EquityScore score_response(const StudentResponse& resp, const ScoringRubric& rubric) {
  EquityScore score;
  score.roll = resp.roll;

  if (resp.participation == Participation::OptOut) {
    score.opted_out = true;
    score.total = rubric.opt_out_total;
    return score;
  }

  if (!resp.social || !resp.economic || !resp.readiness) {
    throw Error("roll '" + resp.roll + "': participating response with missing answers");
  }

  score.social = *resp.social == Social::NotComfortable
                     ? rubric.lowest_social()
                     : rubric.social_points[static_cast<int>(*resp.social)];
  score.economic = *resp.economic == Economic::NotComfortable
                       ? rubric.lowest_economic()
                       : rubric.economic_points[static_cast<int>(*resp.economic)];
  score.readiness = rubric.readiness_points[static_cast<int>(*resp.readiness)];
  score.total = score.social + score.economic + score.readiness;
  return score;
}

std::vector<EquityScore> score_cohort(const std::vector<StudentResponse>& resps,
                                      const ScoringRubric& rubric) {
  std::vector<EquityScore> scores;
  scores.reserve(resps.size());
  for (const StudentResponse& resp : resps) {
    scores.push_back(score_response(resp, rubric));
  }
  return scores;
}

}  // namespace equiteam
