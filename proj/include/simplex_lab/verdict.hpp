#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "simplex_lab/core.hpp"

namespace simplex_lab {

/// not_applicable marks a vacuous implication (hypotheses failed), which is
/// never reported as a falsification.
enum class Status { pass, fail, not_applicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not-applicable";
  }
  return "?";
}

/// One checked inequality lhs <= rhs.
struct Relation {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  bool equality = false;
};

inline Relation make_relation(std::string name, double lhs, double rhs, double tolerance) {
  return {std::move(name), lhs, rhs, lhs <= rhs + tolerance, std::abs(lhs - rhs) <= tolerance};
}

struct Counterexample {
  std::string description;
  std::vector<Tuple> tuples;
  std::optional<Point> z;
  std::vector<std::size_t> composition;
  double lhs = 0.0;
  double rhs = 0.0;

  double violation() const { return lhs - rhs; }
};

struct PropertyVerdict {
  std::string property;
  Status status = Status::pass;
  std::string detail;
  std::vector<Relation> relations;
  std::optional<Counterexample> counterexample;  // first found
  std::optional<Counterexample> worst;           // largest violation within budget
  std::size_t trials = 0;
  /// Largest observed lhs/rhs ratio, for tightness reporting.
  std::optional<double> max_ratio;

  bool passed() const { return status == Status::pass; }
  bool failed() const { return status == Status::fail; }

  void record_violation(Counterexample c) {
    status = Status::fail;
    if (!counterexample) counterexample = c;
    if (!worst || c.violation() > worst->violation()) worst = std::move(c);
  }
};

}  // namespace simplex_lab
