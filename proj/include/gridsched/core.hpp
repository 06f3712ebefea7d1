#pragma once

// Domain model for non-preemptive power-request scheduling: jobs with a
// feasible interval, a duration (width) and a power draw (height), schedules
// assigning integral start times, and the load/cost machinery over timeslots.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridsched/rational.hpp"

namespace gridsched {

using Time = std::int64_t;

/// Relative tolerance for every floating cost comparison in the library.
inline constexpr double kCostTolerance = 1e-9;

/// True when a <= b up to relative tolerance kCostTolerance.
bool leq_tol(double a, double b, double rel = kCostTolerance);
/// True when a and b agree up to relative tolerance kCostTolerance.
bool eq_tol(double a, double b, double rel = kCostTolerance);

struct Job {
  std::string id;
  Time release = 0;
  Time deadline = 1;
  std::int64_t width = 1;
  std::int64_t height = 1;

  Time span() const { return deadline - release; }
  /// Latest feasible start time.
  Time latest_start() const { return deadline - width; }
  std::int64_t work() const { return width * height; }
  /// den(J) = w*h / (d - r), exact.
  Rational density() const { return Rational(width * height, span()); }

  friend bool operator==(const Job&, const Job&) = default;
};

/// Throws InvalidInstance unless r >= 0, r < d, 1 <= w <= d - r, h >= 1.
void check_job(const Job& job);

class Instance {
 public:
  Instance() = default;
  /// Validates every job, id uniqueness and alpha > 1.
  Instance(std::vector<Job> jobs, double alpha);

  const std::vector<Job>& jobs() const { return jobs_; }
  double alpha() const { return alpha_; }
  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }
  /// tau = max deadline (0 for the empty instance).
  Time horizon() const { return horizon_; }

  const Job& job(const std::string& id) const;
  std::optional<std::size_t> index_of(const std::string& id) const;

  Instance with_alpha(double alpha) const { return Instance(jobs_, alpha); }

  std::int64_t max_width() const;
  std::int64_t min_width() const;

 private:
  std::vector<Job> jobs_;
  std::map<std::string, std::size_t> index_;
  double alpha_ = 2.0;
  Time horizon_ = 0;
};

/// Job id -> start time. May be partial while an online run is in progress.
struct Schedule {
  std::map<std::string, Time> assignments;

  void assign(const std::string& id, Time start) { assignments[id] = start; }
  std::optional<Time> start_of(const std::string& id) const;
  bool contains(const std::string& id) const { return assignments.count(id) != 0; }
  std::size_t size() const { return assignments.size(); }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Per-slot real load, index t covers [t, t+1).
struct LoadProfile {
  std::vector<double> loads;

  std::size_t size() const { return loads.size(); }
  double at(Time t) const {
    return t >= 0 && static_cast<std::size_t>(t) < loads.size() ? loads[static_cast<std::size_t>(t)] : 0.0;
  }
};

using SlotSet = std::set<Time>;

enum class ViolationRule { MissingAssignment, BeforeRelease, AfterDeadline, UnknownJob };

struct Violation {
  std::string job_id;
  ViolationRule rule;
  std::string detail;
};

std::string_view to_string(ViolationRule rule);

/// Empty iff the schedule is total and every job runs inside its window.
std::vector<Violation> validate_schedule(const Instance& instance, const Schedule& schedule);

/// Per-slot load over [0, horizon). Throws UnassignedJob / InfeasibleAssignment.
LoadProfile load_profile(const Instance& instance, const Schedule& schedule);

/// Per-slot load of an arbitrary (possibly partial) schedule, no validation.
/// Slots outside [0, horizon) are dropped.
LoadProfile raw_load_profile(std::span<const Job> jobs, const Schedule& schedule, Time horizon);

/// Sum over slots of load^alpha. Throws InvalidAlpha unless alpha > 1.
double cost(const LoadProfile& profile, double alpha);
/// Cost restricted to a set of slots.
double cost(const LoadProfile& profile, double alpha, const SlotSet& slots);
/// Convenience: validated schedule cost for the instance's alpha.
double schedule_cost(const Instance& instance, const Schedule& schedule);

/// avg(t) = sum of densities of jobs whose feasible interval covers t.
LoadProfile avg_profile(const Instance& instance);
/// Exact variant of avg_profile, used where ceilings are taken.
std::vector<Rational> avg_profile_exact(std::span<const Job> jobs, Time horizon);

struct SlotPartition {
  SlotSet above;  ///< avg(t) > h
  SlotSet below;  ///< avg(t) <= h
};

SlotPartition partition_slots(const LoadProfile& avg, double h);

/// Smallest p >= 0 with base^(p-1) < width <= base^p.
int classify_width(std::int64_t width, double base = 2.0);
/// Integral width of class p: ceil(base^p).
std::int64_t class_width(int p, double base = 2.0);

/// Stable sort by (deadline, release, id).
std::vector<Job> edf_order(std::vector<Job> jobs);
bool edf_less(const Job& a, const Job& b);

/// Sum over jobs of w * h^alpha: the convexity lower bound on any schedule.
double convexity_lower_bound(std::span<const Job> jobs, double alpha);

}  // namespace gridsched
