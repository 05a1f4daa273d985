#pragma once

// The acceptance battery: one pass/fail line per criterion.

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace hypolab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int criterion_count = 10;

/// Runs criterion `id` (1..10); internal errors are reported as a failure with the message.
CriterionResult run_criterion(int id);

/// "PASS  3  title  (1.2 s)  detail"; failures listed in known_red print as "FAIL*".
std::string format_line(const CriterionResult& r, bool known_red);

struct SuiteOptions {
  std::set<int> only;       // empty: all criteria
  std::set<int> known_red;  // failures here do not fail the run
};

/// Prints one line per criterion and a summary; returns 0 when every failure is a declared known red.
int run_suite(std::ostream& out, const SuiteOptions& options);

/// Parses "2,5" style lists; throws std::invalid_argument on bad input.
std::set<int> parse_id_list(const std::string& text);

}  // namespace hypolab::acceptance
