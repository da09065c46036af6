#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace equiteam {

// Base type for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Participation { OptOut, Participate };

enum class Social { MajorCityIndia, StateCity, SmallTown, Rural, NotComfortable };
enum class Economic { Upper, UpperMiddle, Middle, Disadvantaged, NotComfortable };
enum class Readiness { SelfSufficient, Helped, NeedsSupport };

// One student's raw questionnaire answers. Roll identifiers are opaque
// strings and are never parsed for meaning.
struct StudentResponse {
  std::string roll;
  Participation participation = Participation::Participate;
  std::optional<Social> social;
  std::optional<Economic> economic;
  std::optional<Readiness> readiness;

  bool operator==(const StudentResponse&) const = default;
};

// Points per answer. The shipped defaults give totals in [40, 90];
// "not comfortable" answers score the lowest value of their category.
struct ScoringRubric {
  std::array<int, 4> social_points{5, 10, 15, 20};     // codes 2a..2d
  std::array<int, 4> economic_points{5, 10, 15, 20};   // codes 3a..3d
  std::array<int, 3> readiness_points{30, 40, 50};     // codes 4a..4c
  int opt_out_total = 45;

  int lowest_social() const;
  int lowest_economic() const;
  int lowest_readiness() const;
  int min_total() const;
  int max_total() const;

  // Throws Error unless opt_out_total lies within [min_total, max_total].
  void validate() const;

  bool operator==(const ScoringRubric&) const = default;
};

struct EquityScore {
  std::string roll;
  int social = 0;
  int economic = 0;
  int readiness = 0;
  int total = 0;
  bool opted_out = false;

  bool operator==(const EquityScore&) const = default;
};

// One line of the response file, already split into fields. Empty strings
// mean "no answer". `line` is carried through into error messages.
struct RawRecord {
  std::size_t line = 0;
  std::string roll;
  std::string participation;
  std::string social;
  std::string economic;
  std::string readiness;
};

struct DuplicateRollError : Error {
  explicit DuplicateRollError(const std::string& roll, std::size_t line);
  std::string roll;
  std::size_t line;
};

struct MissingAnswerError : Error {
  MissingAnswerError(const std::string& roll, const std::string& question, std::size_t line);
  std::string roll;
  std::string question;
  std::size_t line;
};

struct InvalidCodeError : Error {
  InvalidCodeError(const std::string& roll, const std::string& question,
                   const std::string& value, std::size_t line);
  std::string roll;
  std::string question;
  std::string value;
  std::size_t line;
};

struct OptOutWithAnswersError : Error {
  explicit OptOutWithAnswersError(const std::string& roll, std::size_t line);
  std::string roll;
  std::size_t line;
};

struct ParseOptions {
  // When set, a participating student's omitted answer is treated as the
  // lowest-scoring option of that question and a warning is recorded
  // instead of rejecting the row.
  bool assume_lowest = false;
};

struct ParseResult {
  std::vector<StudentResponse> responses;
  std::vector<std::string> warnings;
};

// Validates raw records into responses, preserving input order.
// Throws DuplicateRollError, MissingAnswerError, InvalidCodeError or
// OptOutWithAnswersError on the first offending row.
ParseResult parse_responses(const std::vector<RawRecord>& rows, const ParseOptions& opts = {});

// Scores one validated response. Opt-outs get the fixed opt-out total;
// participating students get the component sum.
EquityScore score_response(const StudentResponse& resp, const ScoringRubric& rubric);

// Scores every response, same order as the input.
std::vector<EquityScore> score_cohort(const std::vector<StudentResponse>& resps,
                                      const ScoringRubric& rubric);

// Answer-code helpers ("1a", "2c", ... as used in the response file).
std::optional<Participation> participation_from_code(std::string_view code);
std::optional<Social> social_from_code(std::string_view code);
std::optional<Economic> economic_from_code(std::string_view code);
std::optional<Readiness> readiness_from_code(std::string_view code);

std::string_view code_of(Participation v);
std::string_view code_of(Social v);
std::string_view code_of(Economic v);
std::string_view code_of(Readiness v);

// Snake-case names used in report output.
std::string_view name_of(Social v);
std::string_view name_of(Economic v);
std::string_view name_of(Readiness v);

}  // namespace equiteam
