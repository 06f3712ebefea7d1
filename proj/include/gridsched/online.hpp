#pragma once

// Online scheduling. A Simulator reveals each job at its release time, asks
// the policy which visible jobs start now, and commits those starts for good.
// Policies only ever see jobs that have been released to them.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridsched/core.hpp"
#include "gridsched/dvs.hpp"
#include "gridsched/slot_model.hpp"

namespace gridsched::online {

class Policy {
 public:
  virtual ~Policy() = default;
  /// Called for each job released at `now`, in EDF order, before decide(now).
  virtual void release(const Job& job, Time now) = 0;
  /// Ids of released, unstarted jobs that start at `now`.
  virtual std::vector<std::string> decide(Time now) = 0;
};

struct OnlineContext {
  Time now = 0;
  std::vector<Job> visible;  ///< released and not yet started, EDF order
  Schedule started;
};

/// Drives one policy slot by slot. Release jobs for the current slot, then
/// call step(); the simulator checks every commitment as it is made.
class Simulator {
 public:
  explicit Simulator(Policy& policy) : policy_(policy) {}

  /// job.release must equal now().
  void release(const Job& job);
  /// Decide at now(), commit starts, advance to now() + 1. Returns the ids started.
  std::vector<std::string> step();

  Time now() const { return ctx_.now; }
  const OnlineContext& context() const { return ctx_; }
  const Schedule& schedule() const { return ctx_.started; }
  const std::map<std::string, Job>& revealed() const { return revealed_; }

 private:
  Policy& policy_;
  OnlineContext ctx_;
  std::map<std::string, Job> revealed_;
};

/// Runs the policy over [0, horizon). Throws InfeasibleOutcome if a job misses
/// its window or is never started.
Schedule run_online(Policy& policy, const Instance& instance);

// ---------------------------------------------------------------------------
// Reference speeds for algorithm V.

class ReferenceSource {
 public:
  virtual ~ReferenceSource() = default;
  /// Speed for slot t given the DVS jobs revealed so far.
  virtual double speed(Time t, std::span<const dvs::DvsJob> revealed) = 0;
};

enum class Reference { Avr, Bkp, Yds };
std::string_view to_string(Reference r);
Reference parse_reference(std::string_view name);

/// AVR and BKP are online; YDS (offline) and explicit profiles are fixed up front.
std::unique_ptr<ReferenceSource> make_online_reference(Reference r);
std::unique_ptr<ReferenceSource> make_fixed_reference(dvs::SpeedProfile profile);

// ---------------------------------------------------------------------------
// Algorithm V: unit width, arbitrary height.

struct VSlotTrace {
  Time t = 0;
  double reference = 0.0;
  double load = 0.0;        ///< height started at t (= load at t, unit width)
  double max_height = 0.0;  ///< 0 when nothing starts
  int forced = 0;           ///< starts beyond the reference rule to meet a deadline
};

class VPolicy final : public Policy {
 public:
  explicit VPolicy(std::unique_ptr<ReferenceSource> reference);
  void release(const Job& job, Time now) override;
  std::vector<std::string> decide(Time now) override;

  const std::vector<VSlotTrace>& trace() const { return trace_; }

 private:
  std::unique_ptr<ReferenceSource> reference_;
  std::vector<Job> pool_;  ///< EDF order
  std::vector<dvs::DvsJob> revealed_;
  std::vector<VSlotTrace> trace_;
};

// ---------------------------------------------------------------------------
// Algorithm UV: uniform width w. Tight jobs start at release; loose jobs are
// aligned to multiples of w and handed to V (BKP reference) on the time axis
// rescaled by 1/w.

class UVPolicy final : public Policy {
 public:
  explicit UVPolicy(std::int64_t width);
  void release(const Job& job, Time now) override;
  std::vector<std::string> decide(Time now) override;

  std::int64_t width() const { return width_; }
  const VPolicy& loose_policy() const { return loose_; }

 private:
  std::int64_t width_;
  std::multimap<Time, std::string> tight_;  ///< start -> id
  std::multimap<Time, Job> pending_loose_;  ///< aligned release -> rescaled job
  VPolicy loose_;
};

// ---------------------------------------------------------------------------
// Algorithm A: arbitrary width and height. Each job is rounded to its nice
// job and routed to the UV instance of its width class.

class GeneralPolicy final : public Policy {
 public:
  explicit GeneralPolicy(double class_base = 2.0);
  void release(const Job& job, Time now) override;
  std::vector<std::string> decide(Time now) override;

  const std::map<int, UVPolicy>& classes() const { return classes_; }

 private:
  double base_;
  std::map<int, UVPolicy> classes_;
};

// ---------------------------------------------------------------------------
// Algorithm UU: unit width, uniform height h. Starts ceil(avg(t)/h) jobs by EDF.

struct UUSlotTrace {
  Time t = 0;
  Rational avg;
  std::int64_t quota = 0;
  std::int64_t started = 0;
};

class UUPolicy final : public Policy {
 public:
  void release(const Job& job, Time now) override;
  std::vector<std::string> decide(Time now) override;

  const std::vector<UUSlotTrace>& trace() const { return trace_; }
  std::optional<std::int64_t> height() const { return height_; }

 private:
  std::optional<std::int64_t> height_;
  std::vector<Job> pool_;
  std::vector<Job> revealed_;
  std::vector<UUSlotTrace> trace_;
};

// ---------------------------------------------------------------------------
// Algorithm AD: uniform height, agreeable deadlines. Jobs are packed into
// queues whose density sum stays <= h; each queue runs its members back to back.

enum class Fit { NextFit, FirstFit };

struct JobQueue {
  std::vector<std::string> members;
  Rational density_sum;
  Time ending_time = 0;  ///< E
};

class ADPolicy final : public Policy {
 public:
  explicit ADPolicy(Fit fit);
  void release(const Job& job, Time now) override;
  std::vector<std::string> decide(Time now) override;

  const std::vector<JobQueue>& queues() const { return queues_; }
  /// Index of the queue each job was inserted into.
  const std::map<std::string, std::size_t>& queue_of() const { return queue_of_; }

 private:
  Fit fit_;
  std::optional<std::int64_t> height_;
  std::vector<Job> revealed_;
  std::vector<JobQueue> queues_;
  std::map<std::string, std::size_t> queue_of_;
  std::multimap<Time, std::string> planned_;
};

// ---------------------------------------------------------------------------
// Algorithm selection.

enum class Algorithm { V, UV, General, UU, AdNextFit, AdFirstFit, Greedy };
std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct Options {
  Reference reference = Reference::Bkp;  ///< V only
  double class_base = 2.0;               ///< General only
};

/// Throws InputClassViolation (or NotAgreeable) if the instance is outside
/// the algorithm's input class.
void check_input_class(Algorithm a, const Instance& instance);

bool is_agreeable(std::span<const Job> jobs);

/// Builds the policy; YDS references are computed from the whole instance.
std::unique_ptr<Policy> make_policy(Algorithm a, const Instance& instance, const Options& options = {});

/// Input-class check, policy construction and simulation.
Schedule run(Algorithm a, const Instance& instance, const Options& options = {});

/// V with an explicit, fixed reference profile.
Schedule alg_v(const Instance& instance, const dvs::SpeedProfile& reference);
Schedule alg_uv(const Instance& instance);
Schedule alg_general(const Instance& instance, double base = 2.0);
Schedule alg_uu(const Instance& instance);
Schedule alg_ad(const Instance& instance, Fit fit);

// ---------------------------------------------------------------------------
// Greedy on the slot-set model: each unit job, in arrival order, goes to its
// allowed slot of minimum current load, ties to the smallest slot.

SlotAssignment greedy(const SlotSetInstance& instance);

/// Greedy step against a running load map; exposed for the adversary.
Time greedy_pick(const SlotJob& job, const std::map<Time, std::int64_t>& load);

}  // namespace gridsched::online
