#pragma once

// Seeded instance generation and batch comparison against exact optima.
// Each report row is one (instance, algorithm line) pair; per-slot lemma
// checks are collected separately so a load-bound failure never hides a
// ratio result or the other way round.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridsched/core.hpp"

namespace gridsched::harness {

/// any; unit-width; uniform-width; uniform-height; unit-uniform (unit width,
/// uniform height). agreeable, same-release and same-deadline also fix a
/// uniform height, the input class of the queue algorithm.
enum class Constraint { Any, UnitWidth, UniformWidth, UniformHeight, UnitUniform, Agreeable, SameRelease, SameDeadline };
std::string_view to_string(Constraint c);
Constraint parse_constraint(std::string_view name);

struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::size_t count = 1;
  std::size_t n = 4;
  Time tau = 10;
  std::int64_t width_min = 1;
  std::int64_t width_max = 3;
  std::int64_t height_min = 1;
  std::int64_t height_max = 3;
  double alpha = 2.0;
  Constraint constraint = Constraint::Any;
};

GeneratorSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneratorSpec& spec);

/// Deterministic in the spec. Throws UnsatisfiableConstraint on empty ranges
/// or widths that cannot fit in tau.
std::vector<Instance> generate(const GeneratorSpec& spec);

/// Algorithm lines understood by compare():
///   v-avr v-bkp v-yds (v = v-bkp) uv general uu ad-nextfit ad-firstfit greedy
///   dvs-avr dvs-bkp dvs-yds (reference profile cost against OPT) exact
const std::vector<std::string>& known_lines();

enum class OptMethod { E, EPlus, Brute, Unit };
std::string_view to_string(OptMethod m);
OptMethod parse_opt_method(std::string_view name);

/// Proven upper bound on cost / OPT for the line, if any. `k_ratio` is wmax / wmin.
std::optional<double> ratio_bound(std::string_view line, double alpha, double k_ratio);

struct ReportRow {
  std::uint64_t seed = 0;
  std::size_t instance_idx = 0;
  std::string algorithm;
  double cost = 0.0;
  double opt_cost = 0.0;
  double ratio = 0.0;
  std::optional<double> bound;
  bool feasible = true;
  bool violated = false;  ///< infeasible, failed, or ratio above bound
  std::string error;
};

struct LemmaFailure {
  std::size_t instance_idx = 0;
  std::string algorithm;
  std::string check;
  Time slot = -1;
  std::string detail;
};

struct LineSummary {
  std::string algorithm;
  std::size_t rows = 0;
  std::size_t violations = 0;
  std::size_t lemma_checks = 0;
  std::size_t lemma_failures = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<LemmaFailure> lemma_failures;
  std::map<std::string, std::map<std::string, std::size_t>> lemma_checks;  ///< line -> check -> count
  std::uint64_t seed = 0;

  std::size_t violations() const;
  std::vector<LineSummary> summary() const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct CompareOptions {
  OptMethod opt = OptMethod::Brute;
  std::uint64_t seed = 0;  ///< copied into the seed column
  double class_base = 2.0;
};

/// Runs every line on every instance, checks feasibility, the ratio bound and
/// the per-slot lemma bounds that apply to the line.
Report compare(const std::vector<Instance>& instances, const std::vector<std::string>& lines,
               const CompareOptions& options = {});

/// Per-slot and cost checks of the alignment and rounding transformations,
/// applied to `schedule` (feasible for `instance`). Appends failures and
/// returns the number of checks made.
std::size_t check_transforms(const Instance& instance, const Schedule& schedule, std::size_t instance_idx,
                             const std::string& line, std::vector<LemmaFailure>& failures,
                             std::map<std::string, std::size_t>& counts);

}  // namespace gridsched::harness
