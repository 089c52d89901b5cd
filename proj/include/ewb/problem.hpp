#pragma once

// Problem files (JSON): dims, witnesses with measured values, measure, options.
// See docs/format.md for the schema.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ewb/bounds.hpp"

namespace ewb {

/// Malformed or inconsistent input. `where` is a JSON pointer to the
/// offending field, or "line L, column C" for syntax errors.
class ProblemError : public std::runtime_error {
 public:
  ProblemError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Problem {
  SubsystemDims dims;
  std::vector<WitnessRecord> witnesses;
  MeasureSpec measure;
  SearchOptions search;
  std::uint64_t seed = 0;
  /// Validated input with defaults filled in; the source of everything above.
  nlohmann::json canonical;
};

/// Parses JSON text. Throws ProblemError.
Problem parse_problem(const std::string& text);
Problem load_problem_file(const std::string& path);

/// Validates a parsed document and fills defaults; idempotent.
nlohmann::json canonicalize_problem(const nlohmann::json& doc);
Problem build_problem(const nlohmann::json& canonical);

/// Sets the seed of the problem and of every solver it configures.
void reseed(Problem& problem, std::uint64_t seed);

/// Sorted keys, integers verbatim, other numbers with 17 significant digits.
std::string canonical_dump(const nlohmann::json& j, int indent = 2);

/// Named states: "w", "ghz", "bell", or an amplitude list.
PureState named_state(const nlohmann::json& spec, const SubsystemDims& dims, const std::string& where);

/// "a+bi", "a-bi", "bi", "a", "i" and friends.
cplx parse_complex(const std::string& text);

}  // namespace ewb
