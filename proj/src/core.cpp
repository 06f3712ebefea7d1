#include "gridsched/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gridsched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::UnassignedJob: return "UnassignedJob";
    case ErrorCode::InfeasibleAssignment: return "InfeasibleAssignment";
    case ErrorCode::InputClassViolation: return "InputClassViolation";
    case ErrorCode::InfeasibleOutcome: return "InfeasibleOutcome";
    case ErrorCode::NotLoose: return "NotLoose";
    case ErrorCode::NotAgreeable: return "NotAgreeable";
    case ErrorCode::NoFeasibleSlot: return "NoFeasibleSlot";
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::InfeasibleInstance: return "InfeasibleInstance";
    case ErrorCode::NotUnitWidth: return "NotUnitWidth";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::AlgorithmStalled: return "AlgorithmStalled";
    case ErrorCode::UnsatisfiableConstraint: return "UnsatisfiableConstraint";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

std::string_view to_string(ViolationRule rule) {
  switch (rule) {
    case ViolationRule::MissingAssignment: return "missing-assignment";
    case ViolationRule::BeforeRelease: return "before-release";
    case ViolationRule::AfterDeadline: return "after-deadline";
    case ViolationRule::UnknownJob: return "unknown-job";
  }
  return "unknown";
}

bool leq_tol(double a, double b, double rel) {
  return a <= b + rel * std::max({1.0, std::abs(a), std::abs(b)});
}

bool eq_tol(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_job(const Job& job) {
  std::ostringstream msg;
  if (job.release < 0) {
    msg << "job " << job.id << ": release " << job.release << " < 0";
  } else if (job.release >= job.deadline) {
    msg << "job " << job.id << ": release " << job.release << " >= deadline " << job.deadline;
  } else if (job.width < 1) {
    msg << "job " << job.id << ": width " << job.width << " < 1";
  } else if (job.height < 1) {
    msg << "job " << job.id << ": height " << job.height << " < 1";
  } else if (job.width > job.span()) {
    msg << "job " << job.id << ": width " << job.width << " exceeds feasible interval length " << job.span();
  } else {
    return;
  }
  throw Error(ErrorCode::InvalidInstance, msg.str());
}

Instance::Instance(std::vector<Job> jobs, double alpha) : jobs_(std::move(jobs)), alpha_(alpha) {
  if (!(alpha_ > 1.0) || !std::isfinite(alpha_)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must be > 1, got " + std::to_string(alpha_));
  }
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    check_job(jobs_[i]);
    if (!index_.emplace(jobs_[i].id, i).second) {
      throw Error(ErrorCode::InvalidInstance, "duplicate job id " + jobs_[i].id);
    }
    horizon_ = std::max(horizon_, jobs_[i].deadline);
  }
}

const Job& Instance::job(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::InvalidInstance, "unknown job id " + id);
  return jobs_[it->second];
}

std::optional<std::size_t> Instance::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::int64_t Instance::max_width() const {
  std::int64_t w = 0;
  for (const auto& j : jobs_) w = std::max(w, j.width);
  return w;
}

std::int64_t Instance::min_width() const {
  if (jobs_.empty()) return 0;
  std::int64_t w = jobs_.front().width;
  for (const auto& j : jobs_) w = std::min(w, j.width);
  return w;
}

std::optional<Time> Schedule::start_of(const std::string& id) const {
  auto it = assignments.find(id);
  if (it == assignments.end()) return std::nullopt;
  return it->second;
}

std::vector<Violation> validate_schedule(const Instance& instance, const Schedule& schedule) {
  std::vector<Violation> out;
  for (const auto& job : instance.jobs()) {
    auto st = schedule.start_of(job.id);
    if (!st) {
      out.push_back({job.id, ViolationRule::MissingAssignment, "job has no start time"});
      continue;
    }
    if (*st < job.release) {
      out.push_back({job.id, ViolationRule::BeforeRelease,
                     "start " + std::to_string(*st) + " < release " + std::to_string(job.release)});
    }
    if (*st + job.width > job.deadline) {
      out.push_back({job.id, ViolationRule::AfterDeadline,
                     "end " + std::to_string(*st + job.width) + " > deadline " + std::to_string(job.deadline)});
    }
  }
  for (const auto& [id, st] : schedule.assignments) {
    if (!instance.index_of(id)) {
      out.push_back({id, ViolationRule::UnknownJob, "assignment for a job not in the instance"});
    }
  }
  return out;
}

LoadProfile raw_load_profile(std::span<const Job> jobs, const Schedule& schedule, Time horizon) {
  LoadProfile p;
  p.loads.assign(static_cast<std::size_t>(std::max<Time>(horizon, 0)), 0.0);
  for (const auto& job : jobs) {
    auto st = schedule.start_of(job.id);
    if (!st) continue;
    for (Time t = std::max<Time>(*st, 0); t < std::min(*st + job.width, horizon); ++t) {
      p.loads[static_cast<std::size_t>(t)] += static_cast<double>(job.height);
    }
  }
  return p;
}

LoadProfile load_profile(const Instance& instance, const Schedule& schedule) {
  for (const auto& v : validate_schedule(instance, schedule)) {
    if (v.rule == ViolationRule::MissingAssignment) {
      throw Error(ErrorCode::UnassignedJob, "job " + v.job_id + " is not assigned");
    }
    throw Error(ErrorCode::InfeasibleAssignment, "job " + v.job_id + ": " + v.detail);
  }
  return raw_load_profile(instance.jobs(), schedule, instance.horizon());
}

namespace {
void check_alpha(double alpha) {
  if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must be > 1, got " + std::to_string(alpha));
}
}  // namespace

double cost(const LoadProfile& profile, double alpha) {
  check_alpha(alpha);
  double total = 0.0;
  for (double l : profile.loads) {
    if (l > 0.0) total += std::pow(l, alpha);
  }
  return total;
}

double cost(const LoadProfile& profile, double alpha, const SlotSet& slots) {
  check_alpha(alpha);
  double total = 0.0;
  for (Time t : slots) {
    const double l = profile.at(t);
    if (l > 0.0) total += std::pow(l, alpha);
  }
  return total;
}

double schedule_cost(const Instance& instance, const Schedule& schedule) {
  return cost(load_profile(instance, schedule), instance.alpha());
}

LoadProfile avg_profile(const Instance& instance) {
  LoadProfile p;
  p.loads.assign(static_cast<std::size_t>(instance.horizon()), 0.0);
  for (const auto& job : instance.jobs()) {
    const double den = static_cast<double>(job.work()) / static_cast<double>(job.span());
    for (Time t = job.release; t < job.deadline; ++t) p.loads[static_cast<std::size_t>(t)] += den;
  }
  return p;
}

std::vector<Rational> avg_profile_exact(std::span<const Job> jobs, Time horizon) {
  std::vector<Rational> avg(static_cast<std::size_t>(std::max<Time>(horizon, 0)));
  for (const auto& job : jobs) {
    const Rational den = job.density();
    for (Time t = std::max<Time>(job.release, 0); t < std::min(job.deadline, horizon); ++t) {
      avg[static_cast<std::size_t>(t)] += den;
    }
  }
  return avg;
}

SlotPartition partition_slots(const LoadProfile& avg, double h) {
  SlotPartition out;
  for (std::size_t t = 0; t < avg.loads.size(); ++t) {
    (avg.loads[t] > h ? out.above : out.below).insert(static_cast<Time>(t));
  }
  return out;
}

int classify_width(std::int64_t width, double base) {
  if (!(base > 1.0)) throw Error(ErrorCode::InvalidInstance, "class base must be > 1");
  if (width < 1) throw Error(ErrorCode::InvalidInstance, "width must be >= 1");
  int p = 0;
  double upper = 1.0;
  while (static_cast<double>(width) > upper) {
    upper *= base;
    ++p;
  }
  return p;
}

std::int64_t class_width(int p, double base) {
  double w = 1.0;
  for (int i = 0; i < p; ++i) w *= base;
  return static_cast<std::int64_t>(std::ceil(w));
}

bool edf_less(const Job& a, const Job& b) {
  if (a.deadline != b.deadline) return a.deadline < b.deadline;
  if (a.release != b.release) return a.release < b.release;
  return a.id < b.id;
}

std::vector<Job> edf_order(std::vector<Job> jobs) {
  std::stable_sort(jobs.begin(), jobs.end(), edf_less);
  return jobs;
}

double convexity_lower_bound(std::span<const Job> jobs, double alpha) {
  double total = 0.0;
  for (const auto& j : jobs) total += static_cast<double>(j.width) * std::pow(static_cast<double>(j.height), alpha);
  return total;
}

}  // namespace gridsched
