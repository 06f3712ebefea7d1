#pragma once

// Exact solvers. Algorithms E, E+ and the unit-width variant share one
// window-by-window configuration DP; they differ only in how the timeline is
// cut into windows and which in-window start times are enumerated.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridsched/core.hpp"
#include "gridsched/slot_model.hpp"

namespace gridsched::exact {

struct WindowDecomposition {
  std::vector<Time> boundaries;                       ///< b_1 < ... < b_{k+1}
  std::vector<std::vector<std::string>> clique_jobs;  ///< jobs whose window meets I(J), per window

  std::size_t windows() const { return clique_jobs.size(); }
  std::size_t max_clique() const;
};

/// Maximal cliques of the interval graph in sweep order; b_i is the earliest
/// release among the jobs first appearing in C_i. Throws EmptyInstance.
WindowDecomposition window_decomposition_e(const Instance& instance);
/// Boundaries at every release time and deadline. Throws EmptyInstance.
WindowDecomposition window_decomposition_eplus(const Instance& instance);
/// Windows of a fixed length over [0, horizon rounded up to a multiple of length).
WindowDecomposition window_decomposition_fixed(const Instance& instance, Time length);

/// Execution segment of one job relative to a window [lo, hi). st = lo - 1
/// means "started before", et = hi + 1 means "ends after"; (lo - 1, lo) is
/// "entirely before" and (hi, hi + 1) "entirely after".
struct Config {
  Time st = 0;
  Time et = 0;
  friend bool operator==(const Config&, const Config&) = default;
};

/// First validity rule (1..5) broken by the configuration against the
/// boundaries [lo, hi), or 0 when valid. `last` also rejects et = hi + 1.
int invalid_rule(const Job& job, Config c, Time lo, Time hi, bool last = false);

/// Every valid configuration of the job in window [lo, hi). When `reach` is
/// set, in-window starts are kept only within `reach` slots of either end.
std::vector<Config> list_configurations(const Job& job, Time lo, Time hi, bool last,
                                        std::optional<Time> reach = std::nullopt);

struct StageStats {
  Time from = 0;
  Time to = 0;
  std::size_t jobs = 0;
  double right_rows = 0;          ///< size of the full right table (product of per-job options)
  std::size_t concatenated = 0;   ///< valid rows after concatenation
  std::size_t filtered = 0;       ///< rows left after filtering
};

struct ExactStats {
  std::size_t windows = 0;
  std::size_t max_clique = 0;
  std::int64_t max_width = 0;
  std::vector<StageStats> stages;

  std::size_t max_filtered() const;
};

struct ExactResult {
  Schedule schedule;
  double cost = 0.0;
  ExactStats stats;
};

struct DpOptions {
  /// Seed for random tie-breaks among identical rows of equal cost. Without
  /// it ties go to the lexicographically smallest (job id, start) vector.
  std::optional<std::uint64_t> tie_seed;
  /// Restrict in-window starts to m * wmax slots from either window end.
  bool bounded_starts = false;
};

/// The configuration DP over an arbitrary decomposition whose windows cover
/// every feasible interval. Throws InfeasibleInstance if no row survives.
ExactResult run_dp(const Instance& instance, const WindowDecomposition& decomposition, const DpOptions& options = {});

ExactResult alg_e(const Instance& instance, const WindowDecomposition& decomposition, const DpOptions& options = {});
ExactResult alg_e(const Instance& instance);
ExactResult alg_eplus(const Instance& instance, const DpOptions& options = {});
/// Unit widths only (NotUnitWidth otherwise); windows of length 2.
ExactResult alg_unit_exact(const Instance& instance, const DpOptions& options = {});

inline constexpr std::uint64_t kBruteForceCap = 10'000'000;

/// Exhaustive search over start tuples in lexicographic order of job id.
/// Throws TooLarge when the number of tuples exceeds `cap`.
ExactResult brute_force(const Instance& instance, std::uint64_t cap = kBruteForceCap);

struct SlotOptimum {
  SlotAssignment assignment;
  double cost = 0.0;
};

/// Exhaustive slot-set search; TooLarge past `cap` assignments.
SlotOptimum slot_set_brute_force(const SlotSetInstance& instance, std::uint64_t cap = kBruteForceCap);
/// Optimal slot-set assignment as a min-cost flow with convex slot costs.
SlotOptimum slot_set_optimum(const SlotSetInstance& instance);

}  // namespace gridsched::exact
