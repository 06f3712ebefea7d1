#pragma once

// Reference speed profiles from preemptive dynamic speed scaling. A grid job
// becomes a DVS job with the same window and work = width * height; the
// profiles below are evaluated per integral timeslot.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridsched/core.hpp"

namespace gridsched::dvs {

struct DvsJob {
  std::string id;
  Time release = 0;
  Time deadline = 1;
  std::int64_t work = 1;
};

struct DvsInstance {
  std::vector<DvsJob> jobs;
  double alpha = 2.0;

  Time horizon() const;
};

/// Per-slot speed; constant on [t, t+1).
struct SpeedProfile {
  std::vector<double> speeds;

  std::size_t size() const { return speeds.size(); }
  double at(Time t) const {
    return t >= 0 && static_cast<std::size_t>(t) < speeds.size() ? speeds[static_cast<std::size_t>(t)] : 0.0;
  }
  LoadProfile as_load() const { return LoadProfile{speeds}; }
};

DvsInstance to_dvs(const Instance& instance);
DvsJob to_dvs(const Job& job);

/// Sum of the densities of the jobs available at t.
SpeedProfile avr_profile(const DvsInstance& dvs);

/// Speed of the online BKP rule at the integral time t, looking only at jobs
/// released by t:  max over t' > t of p(t, [e*t - (e-1)*t', t')) / (t' - t).
double bkp_speed(std::span<const DvsJob> jobs, Time t);
SpeedProfile bkp_profile(const DvsInstance& dvs);

/// Optimal preemptive profile via repeated peak-density extraction.
SpeedProfile yds_profile(const DvsInstance& dvs);

double profile_cost(const SpeedProfile& profile, double alpha);

/// Deadline feasibility of a speed profile run under EDF: for every window
/// [a, b) the capacity covers the work of jobs whose window lies inside it.
/// Returns the first violated window, if any.
struct CapacityViolation {
  Time from = 0;
  Time to = 0;
  double capacity = 0.0;
  double demand = 0.0;
};
std::optional<CapacityViolation> find_capacity_violation(const DvsInstance& dvs, const SpeedProfile& profile,
                                                         double rel_tol = 1e-9);

}  // namespace gridsched::dvs
