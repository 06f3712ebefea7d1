#pragma once

// Job and schedule transformations used by the uniform-width and general
// online algorithms: interval alignment for loose uniform-width jobs, and the
// power-of-base "nice" rounding of widths.

#include <span>
#include <vector>

#include "gridsched/core.hpp"

namespace gridsched::transforms {

/// A tight job of uniform width w has |I| <= 2w; otherwise it is loose.
bool is_tight(const Job& job, std::int64_t w);

struct AlignedJob {
  std::string id;
  Time release = 0;   ///< smallest multiple of w >= original release
  Time deadline = 0;  ///< largest multiple of w <= original deadline
  std::int64_t width = 1;
  std::int64_t height = 1;

  Job as_job() const { return Job{id, release, deadline, width, height}; }
};

/// Aligns release/deadline of loose jobs to multiples of their (common) width.
/// Throws NotLoose for a job with |I| <= 2w and InputClassViolation on mixed widths.
std::vector<AlignedJob> align_fi(std::span<const Job> loose);
AlignedJob align_fi(const Job& loose);

/// start' = min(d' - w, smallest multiple of w >= start).
Schedule align_sch(std::span<const AlignedJob> aligned, const Schedule& loose_schedule);

/// Runs every original job on the interval its aligned counterpart occupies.
Schedule free_sch(const Schedule& aligned_schedule);

struct NiceJob {
  std::string id;
  Time release = 0;
  Time deadline = 0;  ///< release + max(original span, rounded width)
  std::int64_t width = 1;  ///< ceil(base^p)
  std::int64_t height = 1;
  int cls = 0;
  std::int64_t original_width = 1;

  Job as_job() const { return Job{id, release, deadline, width, height}; }
};

NiceJob convert(const Job& job, double base = 2.0);
std::vector<NiceJob> convert(std::span<const Job> jobs, double base = 2.0);

/// start* = min(d* - w*, start); jobs absent from the schedule are skipped.
Schedule relax_sch(std::span<const NiceJob> nice, const Schedule& schedule);

/// Keeps every start; the original job runs on a prefix of the nice interval.
Schedule shrink_sch(const Schedule& nice_schedule);

std::vector<Job> as_jobs(std::span<const AlignedJob> jobs);
std::vector<Job> as_jobs(std::span<const NiceJob> jobs);

}  // namespace gridsched::transforms
