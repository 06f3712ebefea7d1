#include "gridsched/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridsched/transforms.hpp"

namespace gridsched::online {

// ---------------------------------------------------------------------------
// Simulator

void Simulator::release(const Job& job) {
  if (job.release != ctx_.now) {
    throw Error(ErrorCode::InvalidInstance, "job " + job.id + " released at " + std::to_string(job.release) +
                                                " but the simulator is at " + std::to_string(ctx_.now));
  }
  if (!revealed_.emplace(job.id, job).second) {
    throw Error(ErrorCode::InvalidInstance, "job " + job.id + " released twice");
  }
  auto pos = std::upper_bound(ctx_.visible.begin(), ctx_.visible.end(), job, edf_less);
  ctx_.visible.insert(pos, job);
  policy_.release(job, ctx_.now);
}

std::vector<std::string> Simulator::step() {
  const Time now = ctx_.now;
  std::vector<std::string> ids = policy_.decide(now);
  for (const auto& id : ids) {
    auto it = std::find_if(ctx_.visible.begin(), ctx_.visible.end(), [&](const Job& j) { return j.id == id; });
    if (it == ctx_.visible.end()) {
      throw Error(ErrorCode::InfeasibleOutcome, "policy started " + id + " at " + std::to_string(now) +
                                                    " but it is not a visible unstarted job");
    }
    if (now > it->latest_start()) {
      throw Error(ErrorCode::InfeasibleOutcome, "job " + id + " started at " + std::to_string(now) +
                                                    " misses deadline " + std::to_string(it->deadline));
    }
    ctx_.started.assign(id, now);
    ctx_.visible.erase(it);
  }
  for (const auto& j : ctx_.visible) {
    if (j.latest_start() <= now) {
      throw Error(ErrorCode::InfeasibleOutcome,
                  "job " + j.id + " not started by its latest start " + std::to_string(j.latest_start()));
    }
  }
  ++ctx_.now;
  return ids;
}

Schedule run_online(Policy& policy, const Instance& instance) {
  Simulator sim(policy);
  const std::vector<Job> order = edf_order(instance.jobs());
  std::vector<Job> by_release = order;
  std::stable_sort(by_release.begin(), by_release.end(),
                   [](const Job& a, const Job& b) { return a.release < b.release; });
  std::size_t next = 0;
  for (Time t = 0; t < instance.horizon(); ++t) {
    while (next < by_release.size() && by_release[next].release == t) sim.release(by_release[next++]);
    sim.step();
  }
  if (sim.schedule().size() != instance.size()) {
    throw Error(ErrorCode::InfeasibleOutcome, "run ended with unstarted jobs");
  }
  return sim.schedule();
}

// ---------------------------------------------------------------------------
// References

namespace {

class AvrSource final : public ReferenceSource {
 public:
  double speed(Time t, std::span<const dvs::DvsJob> revealed) override {
    double s = 0.0;
    for (const auto& j : revealed) {
      if (j.release <= t && t < j.deadline) {
        s += static_cast<double>(j.work) / static_cast<double>(j.deadline - j.release);
      }
    }
    return s;
  }
};

class BkpSource final : public ReferenceSource {
 public:
  double speed(Time t, std::span<const dvs::DvsJob> revealed) override { return dvs::bkp_speed(revealed, t); }
};

class FixedSource final : public ReferenceSource {
 public:
  explicit FixedSource(dvs::SpeedProfile p) : profile_(std::move(p)) {}
  double speed(Time t, std::span<const dvs::DvsJob>) override { return profile_.at(t); }

 private:
  dvs::SpeedProfile profile_;
};

}  // namespace

std::string_view to_string(Reference r) {
  switch (r) {
    case Reference::Avr: return "avr";
    case Reference::Bkp: return "bkp";
    case Reference::Yds: return "yds";
  }
  return "?";
}

Reference parse_reference(std::string_view name) {
  if (name == "avr") return Reference::Avr;
  if (name == "bkp") return Reference::Bkp;
  if (name == "yds") return Reference::Yds;
  throw Error(ErrorCode::Parse, "unknown reference '" + std::string(name) + "' (expected avr, bkp or yds)");
}

std::unique_ptr<ReferenceSource> make_online_reference(Reference r) {
  switch (r) {
    case Reference::Avr: return std::make_unique<AvrSource>();
    case Reference::Bkp: return std::make_unique<BkpSource>();
    case Reference::Yds: break;
  }
  throw Error(ErrorCode::InputClassViolation, "yds is an offline reference; build it with make_fixed_reference");
}

std::unique_ptr<ReferenceSource> make_fixed_reference(dvs::SpeedProfile profile) {
  return std::make_unique<FixedSource>(std::move(profile));
}

// ---------------------------------------------------------------------------
// V

VPolicy::VPolicy(std::unique_ptr<ReferenceSource> reference) : reference_(std::move(reference)) {}

void VPolicy::release(const Job& job, Time) {
  if (job.width != 1) {
    throw Error(ErrorCode::InputClassViolation, "V needs unit width; job " + job.id + " has width " +
                                                    std::to_string(job.width));
  }
  pool_.insert(std::upper_bound(pool_.begin(), pool_.end(), job, edf_less), job);
  revealed_.push_back(dvs::to_dvs(job));
}

std::vector<std::string> VPolicy::decide(Time now) {
  VSlotTrace tr;
  tr.t = now;
  tr.reference = reference_->speed(now, revealed_);
  const double target = tr.reference - kCostTolerance * std::max(1.0, tr.reference);
  std::vector<std::string> out;
  std::size_t taken = 0;
  while (taken < pool_.size() && tr.load < target) {
    const Job& j = pool_[taken++];
    tr.load += static_cast<double>(j.height);
    tr.max_height = std::max(tr.max_height, static_cast<double>(j.height));
    out.push_back(j.id);
  }
  std::vector<Job> rest;
  for (std::size_t i = taken; i < pool_.size(); ++i) {
    const Job& j = pool_[i];
    if (j.latest_start() <= now) {
      tr.load += static_cast<double>(j.height);
      tr.max_height = std::max(tr.max_height, static_cast<double>(j.height));
      ++tr.forced;
      out.push_back(j.id);
    } else {
      rest.push_back(j);
    }
  }
  pool_ = std::move(rest);
  trace_.push_back(tr);
  return out;
}

// ---------------------------------------------------------------------------
// UV

UVPolicy::UVPolicy(std::int64_t width) : width_(width), loose_(make_online_reference(Reference::Bkp)) {
  if (width < 1) throw Error(ErrorCode::InvalidInstance, "UV width must be >= 1");
}

void UVPolicy::release(const Job& job, Time now) {
  if (job.width != width_) {
    throw Error(ErrorCode::InputClassViolation, "UV needs uniform width " + std::to_string(width_) + "; job " +
                                                    job.id + " has width " + std::to_string(job.width));
  }
  if (transforms::is_tight(job, width_)) {
    tight_.emplace(now, job.id);
    return;
  }
  const transforms::AlignedJob a = transforms::align_fi(job);
  pending_loose_.emplace(a.release, Job{a.id, a.release / width_, a.deadline / width_, 1, a.height});
}

std::vector<std::string> UVPolicy::decide(Time now) {
  std::vector<std::string> out;
  auto [lo, hi] = tight_.equal_range(now);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  tight_.erase(lo, hi);
  if (now % width_ == 0) {
    const Time scaled = now / width_;
    auto [plo, phi] = pending_loose_.equal_range(now);
    std::vector<Job> arriving;
    for (auto it = plo; it != phi; ++it) arriving.push_back(it->second);
    pending_loose_.erase(plo, phi);
    for (const auto& j : edf_order(std::move(arriving))) loose_.release(j, scaled);
    for (auto& id : loose_.decide(scaled)) out.push_back(std::move(id));
  }
  return out;
}

// ---------------------------------------------------------------------------
// General

GeneralPolicy::GeneralPolicy(double class_base) : base_(class_base) {
  if (!(class_base > 1.0)) throw Error(ErrorCode::InvalidInstance, "class base must be > 1");
}

void GeneralPolicy::release(const Job& job, Time now) {
  const transforms::NiceJob nice = transforms::convert(job, base_);
  auto it = classes_.try_emplace(nice.cls, nice.width).first;
  it->second.release(nice.as_job(), now);
}

std::vector<std::string> GeneralPolicy::decide(Time now) {
  std::vector<std::string> out;
  for (auto& [p, uv] : classes_) {
    for (auto& id : uv.decide(now)) out.push_back(std::move(id));
  }
  return out;
}

// ---------------------------------------------------------------------------
// UU

void UUPolicy::release(const Job& job, Time) {
  if (job.width != 1) {
    throw Error(ErrorCode::InputClassViolation, "UU needs unit width; job " + job.id + " has width " +
                                                    std::to_string(job.width));
  }
  if (!height_) height_ = job.height;
  if (job.height != *height_) {
    throw Error(ErrorCode::InputClassViolation, "UU needs uniform height " + std::to_string(*height_) + "; job " +
                                                    job.id + " has height " + std::to_string(job.height));
  }
  pool_.insert(std::upper_bound(pool_.begin(), pool_.end(), job, edf_less), job);
  revealed_.push_back(job);
}

std::vector<std::string> UUPolicy::decide(Time now) {
  UUSlotTrace tr;
  tr.t = now;
  for (const auto& j : revealed_) {
    if (j.release <= now && now < j.deadline) tr.avg += j.density();
  }
  if (height_) tr.quota = (tr.avg / Rational(*height_)).ceil();
  std::vector<std::string> out;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(tr.quota, 0)), pool_.size());
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool_[i].id);
  pool_.erase(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(n));
  tr.started = static_cast<std::int64_t>(n);
  trace_.push_back(tr);
  return out;
}

// ---------------------------------------------------------------------------
// AD

ADPolicy::ADPolicy(Fit fit) : fit_(fit) {}

void ADPolicy::release(const Job& job, Time) {
  if (!height_) height_ = job.height;
  if (job.height != *height_) {
    throw Error(ErrorCode::InputClassViolation, "AD needs uniform height " + std::to_string(*height_) + "; job " +
                                                    job.id + " has height " + std::to_string(job.height));
  }
  if (fit_ == Fit::NextFit) {
    for (const auto& o : revealed_) {
      const bool bad = (o.release <= job.release && o.deadline > job.deadline) ||
                       (job.release <= o.release && job.deadline > o.deadline);
      if (bad) throw Error(ErrorCode::NotAgreeable, "jobs " + o.id + " and " + job.id + " are not agreeable");
    }
  } else if (!revealed_.empty()) {
    const bool same_r = std::all_of(revealed_.begin(), revealed_.end(),
                                    [&](const Job& o) { return o.release == job.release; });
    const bool same_d = std::all_of(revealed_.begin(), revealed_.end(),
                                    [&](const Job& o) { return o.deadline == job.deadline; });
    if (!same_r && !same_d) {
      throw Error(ErrorCode::InputClassViolation,
                  "first-fit AD needs a common release or a common deadline; job " + job.id + " breaks both");
    }
  }
  revealed_.push_back(job);

  const Rational h(*height_);
  const Rational den = job.density();
  std::size_t q = queues_.size();
  if (fit_ == Fit::NextFit) {
    if (!queues_.empty() && queues_.back().density_sum + den <= h) q = queues_.size() - 1;
  } else {
    for (std::size_t i = 0; i < queues_.size(); ++i) {
      if (queues_[i].density_sum + den <= h) {
        q = i;
        break;
      }
    }
  }
  if (q == queues_.size()) queues_.emplace_back();
  JobQueue& queue = queues_[q];
  queue.members.push_back(job.id);
  queue.density_sum += den;
  const Time st = std::max(job.release, queue.ending_time);
  queue.ending_time = st + job.width;
  queue_of_[job.id] = q;
  planned_.emplace(st, job.id);
}

std::vector<std::string> ADPolicy::decide(Time now) {
  std::vector<std::string> out;
  auto [lo, hi] = planned_.equal_range(now);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  planned_.erase(lo, hi);
  return out;
}

// ---------------------------------------------------------------------------
// Selection

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::V: return "v";
    case Algorithm::UV: return "uv";
    case Algorithm::General: return "general";
    case Algorithm::UU: return "uu";
    case Algorithm::AdNextFit: return "ad-nextfit";
    case Algorithm::AdFirstFit: return "ad-firstfit";
    case Algorithm::Greedy: return "greedy";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::V, Algorithm::UV, Algorithm::General, Algorithm::UU, Algorithm::AdNextFit,
                      Algorithm::AdFirstFit, Algorithm::Greedy}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::Parse, "unknown algorithm '" + std::string(name) + "'");
}

bool is_agreeable(std::span<const Job> jobs) {
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[i].release <= jobs[k].release && jobs[i].deadline > jobs[k].deadline) return false;
    }
  }
  return true;
}

namespace {

void require(bool ok, Algorithm a, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InputClassViolation, std::string(to_string(a)) + " needs " + what);
}

bool all_jobs(const Instance& inst, auto pred) { return std::all_of(inst.jobs().begin(), inst.jobs().end(), pred); }

}  // namespace

void check_input_class(Algorithm a, const Instance& instance) {
  if (instance.empty()) return;
  const Job& first = instance.jobs().front();
  const bool unit_w = all_jobs(instance, [](const Job& j) { return j.width == 1; });
  const bool uniform_w = all_jobs(instance, [&](const Job& j) { return j.width == first.width; });
  const bool uniform_h = all_jobs(instance, [&](const Job& j) { return j.height == first.height; });
  switch (a) {
    case Algorithm::V: require(unit_w, a, "unit width"); break;
    case Algorithm::UV: require(uniform_w, a, "uniform width"); break;
    case Algorithm::General: break;
    case Algorithm::UU:
      require(unit_w, a, "unit width");
      require(uniform_h, a, "uniform height");
      break;
    case Algorithm::AdNextFit:
      require(uniform_h, a, "uniform height");
      if (!is_agreeable(instance.jobs())) throw Error(ErrorCode::NotAgreeable, "instance deadlines are not agreeable");
      break;
    case Algorithm::AdFirstFit: {
      require(uniform_h, a, "uniform height");
      const bool same_r = all_jobs(instance, [&](const Job& j) { return j.release == first.release; });
      const bool same_d = all_jobs(instance, [&](const Job& j) { return j.deadline == first.deadline; });
      require(same_r || same_d, a, "a common release or a common deadline");
      break;
    }
    case Algorithm::Greedy:
      require(unit_w, a, "unit width");
      require(all_jobs(instance, [](const Job& j) { return j.height == 1; }), a, "unit height");
      break;
  }
}

std::unique_ptr<Policy> make_policy(Algorithm a, const Instance& instance, const Options& options) {
  switch (a) {
    case Algorithm::V:
      if (options.reference == Reference::Yds) {
        return std::make_unique<VPolicy>(make_fixed_reference(dvs::yds_profile(dvs::to_dvs(instance))));
      }
      return std::make_unique<VPolicy>(make_online_reference(options.reference));
    case Algorithm::UV:
      return std::make_unique<UVPolicy>(instance.empty() ? 1 : instance.jobs().front().width);
    case Algorithm::General: return std::make_unique<GeneralPolicy>(options.class_base);
    case Algorithm::UU: return std::make_unique<UUPolicy>();
    case Algorithm::AdNextFit: return std::make_unique<ADPolicy>(Fit::NextFit);
    case Algorithm::AdFirstFit: return std::make_unique<ADPolicy>(Fit::FirstFit);
    case Algorithm::Greedy: break;
  }
  throw Error(ErrorCode::InputClassViolation, "greedy works on the slot-set model, not through a policy");
}

Schedule run(Algorithm a, const Instance& instance, const Options& options) {
  check_input_class(a, instance);
  if (a == Algorithm::Greedy) {
    SlotSetInstance slots;
    slots.alpha = instance.alpha();
    for (const auto& j : instance.jobs()) {
      SlotJob sj{j.id, {}};
      for (Time t = j.release; t < j.deadline; ++t) sj.slots.push_back(t);
      slots.jobs.push_back(std::move(sj));
    }
    Schedule s;
    for (const auto& [id, t] : greedy(slots)) s.assign(id, t);
    return s;
  }
  auto policy = make_policy(a, instance, options);
  return run_online(*policy, instance);
}

Schedule alg_v(const Instance& instance, const dvs::SpeedProfile& reference) {
  check_input_class(Algorithm::V, instance);
  VPolicy policy(make_fixed_reference(reference));
  return run_online(policy, instance);
}

Schedule alg_uv(const Instance& instance) { return run(Algorithm::UV, instance); }

Schedule alg_general(const Instance& instance, double base) {
  Options o;
  o.class_base = base;
  return run(Algorithm::General, instance, o);
}

Schedule alg_uu(const Instance& instance) { return run(Algorithm::UU, instance); }

Schedule alg_ad(const Instance& instance, Fit fit) {
  return run(fit == Fit::NextFit ? Algorithm::AdNextFit : Algorithm::AdFirstFit, instance);
}

// ---------------------------------------------------------------------------
// Greedy

Time greedy_pick(const SlotJob& job, const std::map<Time, std::int64_t>& load) {
  if (job.slots.empty()) throw Error(ErrorCode::NoFeasibleSlot, "job " + job.id + " has no allowed slot");
  Time best = job.slots.front();
  std::int64_t best_load = std::numeric_limits<std::int64_t>::max();
  for (Time t : job.slots) {
    auto it = load.find(t);
    const std::int64_t l = it == load.end() ? 0 : it->second;
    if (l < best_load || (l == best_load && t < best)) {
      best = t;
      best_load = l;
    }
  }
  return best;
}

SlotAssignment greedy(const SlotSetInstance& instance) {
  SlotAssignment out;
  std::map<Time, std::int64_t> load;
  for (const auto& j : instance.jobs) {
    const Time t = greedy_pick(j, load);
    ++load[t];
    out[j.id] = t;
  }
  return out;
}

}  // namespace gridsched::online
