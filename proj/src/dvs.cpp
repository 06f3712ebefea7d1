#include "gridsched/dvs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridsched::dvs {

Time DvsInstance::horizon() const {
  Time h = 0;
  for (const auto& j : jobs) h = std::max(h, j.deadline);
  return h;
}

DvsJob to_dvs(const Job& job) { return DvsJob{job.id, job.release, job.deadline, job.work()}; }

DvsInstance to_dvs(const Instance& instance) {
  DvsInstance out;
  out.alpha = instance.alpha();
  out.jobs.reserve(instance.size());
  for (const auto& j : instance.jobs()) out.jobs.push_back(to_dvs(j));
  return out;
}

SpeedProfile avr_profile(const DvsInstance& dvs) {
  SpeedProfile p;
  p.speeds.assign(static_cast<std::size_t>(dvs.horizon()), 0.0);
  for (const auto& j : dvs.jobs) {
    const double den = static_cast<double>(j.work) / static_cast<double>(j.deadline - j.release);
    for (Time t = j.release; t < j.deadline; ++t) p.speeds[static_cast<std::size_t>(t)] += den;
  }
  return p;
}

double bkp_speed(std::span<const DvsJob> jobs, Time t) {
  constexpr double e = std::numbers::e;
  const double now = static_cast<double>(t);
  // p(t, I) only grows with t' (both interval ends sweep outward), so the
  // ratio peaks where some released job just becomes enclosed.
  std::vector<double> candidates;
  for (const auto& j : jobs) {
    if (j.release > t) continue;
    const double enclose_left = (e * now - static_cast<double>(j.release)) / (e - 1.0);
    const double tp = std::max(static_cast<double>(j.deadline), enclose_left);
    if (tp > now) candidates.push_back(tp);
  }
  double best = 0.0;
  for (double tp : candidates) {
    const double left = e * now - (e - 1.0) * tp;
    const double slack = 1e-9 * std::max(1.0, std::abs(tp));
    double work = 0.0;
    for (const auto& j : jobs) {
      if (j.release > t) continue;
      if (static_cast<double>(j.release) >= left - slack && static_cast<double>(j.deadline) <= tp + slack) {
        work += static_cast<double>(j.work);
      }
    }
    best = std::max(best, work / (tp - now));
  }
  return best;
}

SpeedProfile bkp_profile(const DvsInstance& dvs) {
  SpeedProfile p;
  const Time horizon = dvs.horizon();
  p.speeds.assign(static_cast<std::size_t>(horizon), 0.0);
  for (Time t = 0; t < horizon; ++t) p.speeds[static_cast<std::size_t>(t)] = bkp_speed(dvs.jobs, t);
  return p;
}

SpeedProfile yds_profile(const DvsInstance& dvs) {
  const Time horizon = dvs.horizon();
  SpeedProfile p;
  p.speeds.assign(static_cast<std::size_t>(horizon), 0.0);
  std::vector<bool> free(static_cast<std::size_t>(horizon), true);
  std::vector<bool> done(dvs.jobs.size(), false);
  std::size_t remaining = dvs.jobs.size();

  while (remaining > 0) {
    // Peak density interval over (release, deadline) pairs of remaining jobs,
    // compared exactly as work/len fractions.
    std::int64_t best_work = -1;
    std::int64_t best_len = 1;
    Time best_a = 0;
    Time best_b = 0;
    for (std::size_t i = 0; i < dvs.jobs.size(); ++i) {
      if (done[i]) continue;
      const Time a = dvs.jobs[i].release;
      for (std::size_t k = 0; k < dvs.jobs.size(); ++k) {
        if (done[k]) continue;
        const Time b = dvs.jobs[k].deadline;
        if (b <= a) continue;
        std::int64_t work = 0;
        for (std::size_t m = 0; m < dvs.jobs.size(); ++m) {
          if (!done[m] && dvs.jobs[m].release >= a && dvs.jobs[m].deadline <= b) work += dvs.jobs[m].work;
        }
        if (work == 0) continue;
        std::int64_t len = 0;
        for (Time t = a; t < b; ++t) len += free[static_cast<std::size_t>(t)] ? 1 : 0;
        if (len == 0) {
          throw Error(ErrorCode::InfeasibleInstance, "no capacity left for work enclosed in an interval");
        }
        const __int128 lhs = static_cast<__int128>(work) * best_len;
        const __int128 rhs = static_cast<__int128>(best_work) * len;
        if (best_work < 0 || lhs > rhs || (lhs == rhs && len > best_len)) {
          best_work = work;
          best_len = len;
          best_a = a;
          best_b = b;
        }
      }
    }
    const double speed = static_cast<double>(best_work) / static_cast<double>(best_len);
    for (Time t = best_a; t < best_b; ++t) {
      if (free[static_cast<std::size_t>(t)]) {
        free[static_cast<std::size_t>(t)] = false;
        p.speeds[static_cast<std::size_t>(t)] = speed;
      }
    }
    for (std::size_t m = 0; m < dvs.jobs.size(); ++m) {
      if (!done[m] && dvs.jobs[m].release >= best_a && dvs.jobs[m].deadline <= best_b) {
        done[m] = true;
        --remaining;
      }
    }
  }
  return p;
}

double profile_cost(const SpeedProfile& profile, double alpha) { return cost(profile.as_load(), alpha); }

std::optional<CapacityViolation> find_capacity_violation(const DvsInstance& dvs, const SpeedProfile& profile,
                                                         double rel_tol) {
  const Time horizon = dvs.horizon();
  std::vector<double> prefix(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (Time t = 0; t < horizon; ++t) {
    prefix[static_cast<std::size_t>(t) + 1] = prefix[static_cast<std::size_t>(t)] + profile.at(t);
  }
  for (Time a = 0; a < horizon; ++a) {
    for (Time b = a + 1; b <= horizon; ++b) {
      double demand = 0.0;
      for (const auto& j : dvs.jobs) {
        if (j.release >= a && j.deadline <= b) demand += static_cast<double>(j.work);
      }
      const double capacity = prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)];
      if (!leq_tol(demand, capacity, rel_tol)) return CapacityViolation{a, b, capacity, demand};
    }
  }
  return std::nullopt;
}

}  // namespace gridsched::dvs
