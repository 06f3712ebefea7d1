#include "gridsched/transforms.hpp"

#include <algorithm>

namespace gridsched::transforms {

namespace {
Time ceil_multiple(Time t, std::int64_t w) {
  const Time q = t >= 0 ? (t + w - 1) / w : -((-t) / w);
  return q * w;
}
Time floor_multiple(Time t, std::int64_t w) {
  const Time q = t >= 0 ? t / w : -((-t + w - 1) / w);
  return q * w;
}
}  // namespace

bool is_tight(const Job& job, std::int64_t w) { return job.span() <= 2 * w; }

AlignedJob align_fi(const Job& loose) {
  if (is_tight(loose, loose.width)) {
    throw Error(ErrorCode::NotLoose, "job " + loose.id + " has |I| = " + std::to_string(loose.span()) +
                                         " <= 2w = " + std::to_string(2 * loose.width));
  }
  const std::int64_t w = loose.width;
  return AlignedJob{loose.id, ceil_multiple(loose.release, w), floor_multiple(loose.deadline, w), w, loose.height};
}

std::vector<AlignedJob> align_fi(std::span<const Job> loose) {
  std::vector<AlignedJob> out;
  out.reserve(loose.size());
  for (const auto& j : loose) {
    if (j.width != loose.front().width) {
      throw Error(ErrorCode::InputClassViolation, "align_fi needs uniform width; job " + j.id + " differs");
    }
    out.push_back(align_fi(j));
  }
  return out;
}

Schedule align_sch(std::span<const AlignedJob> aligned, const Schedule& loose_schedule) {
  Schedule out;
  for (const auto& a : aligned) {
    auto st = loose_schedule.start_of(a.id);
    if (!st) continue;
    out.assign(a.id, std::min(a.deadline - a.width, ceil_multiple(*st, a.width)));
  }
  return out;
}

Schedule free_sch(const Schedule& aligned_schedule) { return aligned_schedule; }

NiceJob convert(const Job& job, double base) {
  const int p = classify_width(job.width, base);
  const std::int64_t w = class_width(p, base);
  return NiceJob{job.id, job.release, job.release + std::max(job.span(), w), w, job.height, p, job.width};
}

std::vector<NiceJob> convert(std::span<const Job> jobs, double base) {
  std::vector<NiceJob> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) out.push_back(convert(j, base));
  return out;
}

Schedule relax_sch(std::span<const NiceJob> nice, const Schedule& schedule) {
  Schedule out;
  for (const auto& n : nice) {
    auto st = schedule.start_of(n.id);
    if (!st) continue;
    out.assign(n.id, std::min(n.deadline - n.width, *st));
  }
  return out;
}

Schedule shrink_sch(const Schedule& nice_schedule) { return nice_schedule; }

std::vector<Job> as_jobs(std::span<const AlignedJob> jobs) {
  std::vector<Job> out;
  for (const auto& j : jobs) out.push_back(j.as_job());
  return out;
}

std::vector<Job> as_jobs(std::span<const NiceJob> jobs) {
  std::vector<Job> out;
  for (const auto& j : jobs) out.push_back(j.as_job());
  return out;
}

}  // namespace gridsched::transforms
