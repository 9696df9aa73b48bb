#pragma once

// Acceptance suite: ten numbered criteria, each a list of checks against
// pinned tolerances, plus labeled constant discrepancies against the
// published displays.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace canon::validate {

enum class Bound { AtMost, AtLeast };

struct Check {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::AtMost;
  /// Error tolerances are the ones tightened by --strict.
  bool error_tolerance = true;

  bool pass() const { return bound == Bound::AtMost ? value <= tolerance : value >= tolerance; }
};

struct Criterion {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
  /// First failing check label, empty when passing.
  std::string first_failure() const;
};

struct Discrepancy {
  std::string quantity;
  double repo = 0.0;
  double published = 0.0;
  std::string relation;
};

struct Report {
  std::vector<Criterion> criteria;
  std::vector<Discrepancy> discrepancies;
  std::optional<double> strict;

  bool pass() const;
};

struct Options {
  /// Replaces every error tolerance by min(stated, strict).
  std::optional<double> strict;
};

inline constexpr int kCriterionCount = 10;

/// Throws DomainError for id outside 1..kCriterionCount.
Criterion run_criterion(int id, const Options& opt = {});

/// h11, C2 and h22 conventions next to the published values, for c1 = 2, c2 = 1.
std::vector<Discrepancy> constant_discrepancies();

Report run_acceptance(const Options& opt = {});

/// One line per criterion, then one per discrepancy.
void write_text(std::ostream& os, const Report& r);
nlohmann::json to_json(const Report& r);

}  // namespace canon::validate
