#include "gridsched/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "gridsched/dvs.hpp"
#include "gridsched/exact.hpp"
#include "gridsched/online.hpp"
#include "gridsched/transforms.hpp"

namespace gridsched::harness {

namespace {

constexpr std::pair<Constraint, std::string_view> kConstraints[] = {
    {Constraint::Any, "any"},
    {Constraint::UnitWidth, "unit-width"},
    {Constraint::UniformWidth, "uniform-width"},
    {Constraint::UniformHeight, "uniform-height"},
    {Constraint::UnitUniform, "unit-uniform"},
    {Constraint::Agreeable, "agreeable"},
    {Constraint::SameRelease, "same-release"},
    {Constraint::SameDeadline, "same-deadline"},
};

bool uniform_height(Constraint c) {
  return c == Constraint::UniformHeight || c == Constraint::UnitUniform || c == Constraint::Agreeable ||
         c == Constraint::SameRelease || c == Constraint::SameDeadline;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Constraint c) {
  for (const auto& [k, name] : kConstraints) {
    if (k == c) return name;
  }
  return "?";
}

Constraint parse_constraint(std::string_view name) {
  for (const auto& [k, n] : kConstraints) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::Parse, "unknown constraint '" + std::string(name) + "'");
}

std::string_view to_string(OptMethod m) {
  switch (m) {
    case OptMethod::E: return "e";
    case OptMethod::EPlus: return "eplus";
    case OptMethod::Brute: return "brute";
    case OptMethod::Unit: return "unit";
  }
  return "?";
}

OptMethod parse_opt_method(std::string_view name) {
  if (name == "e") return OptMethod::E;
  if (name == "eplus") return OptMethod::EPlus;
  if (name == "brute") return OptMethod::Brute;
  if (name == "unit") return OptMethod::Unit;
  throw Error(ErrorCode::Parse, "unknown exact method '" + std::string(name) + "'");
}

GeneratorSpec spec_from_json(const nlohmann::json& j) {
  GeneratorSpec s;
  try {
    s.seed = j.value("seed", s.seed);
    s.count = j.value("count", s.count);
    s.n = j.value("n", s.n);
    s.tau = j.value("tau", s.tau);
    if (j.contains("width")) {
      s.width_min = j.at("width").at(0).get<std::int64_t>();
      s.width_max = j.at("width").at(1).get<std::int64_t>();
    }
    if (j.contains("height")) {
      s.height_min = j.at("height").at(0).get<std::int64_t>();
      s.height_max = j.at("height").at(1).get<std::int64_t>();
    }
    s.alpha = j.value("alpha", s.alpha);
    if (j.contains("constraint")) s.constraint = parse_constraint(j.at("constraint").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("generator spec: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const GeneratorSpec& s) {
  return {{"seed", s.seed},
          {"count", s.count},
          {"n", s.n},
          {"tau", s.tau},
          {"width", {s.width_min, s.width_max}},
          {"height", {s.height_min, s.height_max}},
          {"alpha", s.alpha},
          {"constraint", std::string(to_string(s.constraint))}};
}

// ---------------------------------------------------------------------------
// Generation

namespace {

class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t idx) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    rng_.seed(seq);
  }
  std::int64_t operator()(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

 private:
  std::mt19937_64 rng_;
};

std::optional<std::vector<Job>> try_generate(const GeneratorSpec& s, Draw& draw) {
  const std::int64_t wmax = std::min<std::int64_t>(s.width_max, s.tau);
  const bool unit = s.constraint == Constraint::UnitWidth || s.constraint == Constraint::UnitUniform;
  const std::int64_t common_w = unit ? 1 : draw(s.width_min, wmax);
  const std::int64_t common_h = draw(s.height_min, s.height_max);
  auto width = [&] {
    if (unit) return std::int64_t{1};
    if (s.constraint == Constraint::UniformWidth) return common_w;
    return draw(s.width_min, wmax);
  };
  auto height = [&] { return uniform_height(s.constraint) ? common_h : draw(s.height_min, s.height_max); };

  std::vector<Job> jobs(s.n);
  for (std::size_t i = 0; i < s.n; ++i) jobs[i].id = "j" + std::to_string(i + 1);

  switch (s.constraint) {
    case Constraint::SameRelease: {
      for (auto& j : jobs) j.width = width();
      const std::int64_t mw = std::max_element(jobs.begin(), jobs.end(), [](auto& a, auto& b) {
                                return a.width < b.width;
                              })->width;
      const Time r0 = draw(0, s.tau - mw);
      for (auto& j : jobs) {
        j.release = r0;
        j.deadline = r0 + draw(j.width, s.tau - r0);
      }
      break;
    }
    case Constraint::SameDeadline: {
      for (auto& j : jobs) j.width = width();
      const std::int64_t mw = std::max_element(jobs.begin(), jobs.end(), [](auto& a, auto& b) {
                                return a.width < b.width;
                              })->width;
      const Time d0 = draw(mw, s.tau);
      for (auto& j : jobs) {
        j.deadline = d0;
        j.release = draw(0, d0 - j.width);
      }
      break;
    }
    case Constraint::Agreeable: {
      // Draw windows, sort releases and deadlines independently and pair them
      // up; jobs sharing a release then share the largest of their deadlines.
      std::vector<Time> r(s.n), d(s.n);
      for (std::size_t i = 0; i < s.n; ++i) {
        r[i] = draw(0, s.tau - 1);
        d[i] = draw(r[i] + 1, s.tau);
      }
      std::sort(r.begin(), r.end());
      std::sort(d.begin(), d.end());
      for (std::size_t i = 0; i < s.n;) {
        std::size_t k = i;
        while (k < s.n && r[k] == r[i]) ++k;
        for (std::size_t m = i; m < k; ++m) d[m] = d[k - 1];
        i = k;
      }
      for (std::size_t i = 0; i < s.n; ++i) {
        jobs[i].release = r[i];
        jobs[i].deadline = d[i];
        const std::int64_t hi = std::min(wmax, d[i] - r[i]);
        if (hi < s.width_min) return std::nullopt;
        jobs[i].width = draw(s.width_min, hi);
      }
      break;
    }
    default:
      for (auto& j : jobs) {
        j.width = width();
        j.release = draw(0, s.tau - j.width);
        j.deadline = j.release + draw(j.width, s.tau - j.release);
      }
      break;
  }
  for (auto& j : jobs) j.height = height();
  return jobs;
}

}  // namespace

std::vector<Instance> generate(const GeneratorSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::UnsatisfiableConstraint, what); };
  if (spec.n < 1) fail("n must be >= 1");
  if (spec.tau < 1) fail("tau must be >= 1");
  if (spec.width_min < 1 || spec.width_min > spec.width_max) fail("width range is empty");
  if (spec.height_min < 1 || spec.height_min > spec.height_max) fail("height range is empty");
  const bool unit = spec.constraint == Constraint::UnitWidth || spec.constraint == Constraint::UnitUniform;
  if (!unit && spec.width_min > spec.tau) fail("minimum width exceeds tau");
  if (!(spec.alpha > 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must be > 1");

  std::vector<Instance> out;
  out.reserve(spec.count);
  for (std::size_t idx = 0; idx < spec.count; ++idx) {
    Draw draw(spec.seed, idx);
    std::optional<std::vector<Job>> jobs;
    for (int attempt = 0; attempt < 1000 && !jobs; ++attempt) jobs = try_generate(spec, draw);
    if (!jobs) fail("could not draw an instance satisfying '" + std::string(to_string(spec.constraint)) + "'");
    out.emplace_back(std::move(*jobs), spec.alpha);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounds

std::optional<double> ratio_bound(std::string_view line, double alpha, double k_ratio) {
  const double a = alpha;
  const double e = std::numbers::e;
  const double bkp = 8.0 * std::pow(e, a);
  const double avr = std::pow(2.0 * a, a) / 2.0;
  // V with a reference that is R-competitive for DVS: 2^a (R + 1).
  if (line == "v-yds") return std::pow(2.0, a) * 2.0;
  if (line == "v-bkp" || line == "v") return std::pow(2.0, a) * (bkp + 1.0);
  if (line == "v-avr") return std::pow(2.0, a) * (avr + 1.0);
  if (line == "uv") return std::pow(12.0, a) * (bkp + 1.0);
  if (line == "general") {
    const double logk = std::max(1.0, std::ceil(std::log2(k_ratio) - 1e-12));
    return std::pow(36.0 * logk, a) * (bkp + 1.0);
  }
  if (line == "uu") return std::pow(4.0 * a, a) / 2.0 + 1.0;
  if (line == "ad-nextfit") return std::pow(12.0 * a, a) / 2.0 + 1.0;
  if (line == "ad-firstfit") return std::pow(8.0 * a, a) / 2.0 + 1.0;
  if (line == "dvs-yds" || line == "exact") return 1.0;
  if (line == "dvs-avr") return avr;
  if (line == "dvs-bkp") return bkp;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Transformation checks

namespace {

struct Checker {
  std::size_t idx;
  const std::string& line;
  std::vector<LemmaFailure>& failures;
  std::map<std::string, std::size_t>& counts;
  std::size_t made = 0;

  void check(bool ok, const std::string& name, Time slot, const std::string& detail) {
    ++made;
    ++counts[name];
    if (!ok) failures.push_back(LemmaFailure{idx, line, name, slot, detail});
  }
};

Schedule restrict_to(const Schedule& s, const std::vector<Job>& jobs) {
  Schedule out;
  for (const auto& j : jobs) {
    if (auto st = s.start_of(j.id)) out.assign(j.id, *st);
  }
  return out;
}

Time horizon_of(const std::vector<Job>& jobs) {
  Time h = 0;
  for (const auto& j : jobs) h = std::max(h, j.deadline);
  return h;
}

bool feasible_for(const std::vector<Job>& jobs, const Schedule& s) {
  for (const auto& j : jobs) {
    auto st = s.start_of(j.id);
    if (!st || *st < j.release || *st + j.width > j.deadline) return false;
  }
  return true;
}

/// load(after, t) <= load(before, t) + load(before, t - delta) + load(before, t + delta) for every t.
void three_slot(Checker& c, const std::string& name, const LoadProfile& after, const LoadProfile& before, Time delta) {
  bool ok = true;
  Time bad = -1;
  for (Time t = 0; t < static_cast<Time>(after.size()); ++t) {
    const double rhs = before.at(t) + before.at(t - delta) + before.at(t + delta);
    if (!leq_tol(after.at(t), rhs)) {
      ok = false;
      bad = t;
      break;
    }
  }
  c.check(ok, name, bad, ok ? "" : "three-slot load bound fails at t=" + std::to_string(bad));
}

}  // namespace

std::size_t check_transforms(const Instance& instance, const Schedule& schedule, std::size_t instance_idx,
                             const std::string& line, std::vector<LemmaFailure>& failures,
                             std::map<std::string, std::size_t>& counts) {
  Checker c{instance_idx, line, failures, counts};
  const double a = instance.alpha();
  const double three = std::pow(3.0, a);

  // Width rounding, one class at a time.
  std::map<int, std::vector<Job>> classes;
  for (const auto& j : instance.jobs()) classes[classify_width(j.width)].push_back(j);
  for (const auto& [p, jobs] : classes) {
    const std::vector<transforms::NiceJob> nice = transforms::convert(jobs);
    const std::vector<Job> nice_jobs = transforms::as_jobs(nice);
    const Schedule s = restrict_to(schedule, jobs);
    const Schedule relaxed = transforms::relax_sch(nice, s);
    const Schedule shrunk = transforms::shrink_sch(relaxed);
    const Time h = std::max(horizon_of(nice_jobs), horizon_of(jobs));
    const LoadProfile before = raw_load_profile(jobs, s, h);
    const LoadProfile after = raw_load_profile(nice_jobs, relaxed, h);
    const LoadProfile back = raw_load_profile(jobs, shrunk, h);
    const std::string tag = " (class " + std::to_string(p) + ")";
    c.check(feasible_for(nice_jobs, relaxed), "relax-feasible", -1, "relaxed schedule infeasible" + tag);
    c.check(feasible_for(jobs, shrunk), "shrink-feasible", -1, "shrunk schedule infeasible" + tag);
    three_slot(c, "relax-load", after, before, p == 0 ? 0 : (Time{1} << (p - 1)) - 1);
    const double cs = cost(before, a);
    const double cr = cost(after, a);
    const double ck = cost(back, a);
    c.check(leq_tol(cr, three * cs), "relax-cost", -1, fmt(cr) + " > 3^a * " + fmt(cs) + tag);
    c.check(leq_tol(ck, cr), "shrink-cost", -1, fmt(ck) + " > " + fmt(cr) + tag);
    bool sandwich = true;
    for (Time t = 0; t < h; ++t) sandwich = sandwich && leq_tol(back.at(t), after.at(t));
    c.check(sandwich, "shrink-load", -1, "shrunk load exceeds relaxed load" + tag);
  }

  // Alignment of loose jobs, uniform width only.
  if (!instance.empty()) {
    const std::int64_t w = instance.jobs().front().width;
    const bool uniform = std::all_of(instance.jobs().begin(), instance.jobs().end(),
                                     [&](const Job& j) { return j.width == w; });
    std::vector<Job> loose;
    for (const auto& j : instance.jobs()) {
      if (!transforms::is_tight(j, w)) loose.push_back(j);
    }
    if (uniform && !loose.empty()) {
      const std::vector<transforms::AlignedJob> aligned = transforms::align_fi(loose);
      const std::vector<Job> aligned_jobs = transforms::as_jobs(aligned);
      const Schedule s = restrict_to(schedule, loose);
      const Schedule sa = transforms::align_sch(aligned, s);
      const Schedule freed = transforms::free_sch(sa);
      const Time h = horizon_of(loose);
      const LoadProfile before = raw_load_profile(loose, s, h);
      const LoadProfile after = raw_load_profile(aligned_jobs, sa, h);
      const LoadProfile back = raw_load_profile(loose, freed, h);
      c.check(feasible_for(aligned_jobs, sa), "align-feasible", -1, "aligned schedule infeasible");
      c.check(feasible_for(loose, freed), "free-feasible", -1, "freed schedule infeasible");
      three_slot(c, "align-load", after, before, w - 1);
      const double cs = cost(before, a);
      const double ca = cost(after, a);
      const double cf = cost(back, a);
      c.check(leq_tol(ca, three * cs), "align-cost", -1, fmt(ca) + " > 3^a * " + fmt(cs));
      c.check(eq_tol(cf, ca), "free-cost", -1, fmt(cf) + " != " + fmt(ca));
    }
  }
  return c.made;
}

// ---------------------------------------------------------------------------
// Compare

namespace {

exact::ExactResult solve_opt(const Instance& inst, OptMethod m) {
  switch (m) {
    case OptMethod::E: return exact::alg_e(inst);
    case OptMethod::EPlus: return exact::alg_eplus(inst);
    case OptMethod::Brute: return exact::brute_force(inst);
    case OptMethod::Unit: return exact::alg_unit_exact(inst);
  }
  return exact::brute_force(inst);
}

struct LineRun {
  double cost = 0.0;
  std::optional<Schedule> schedule;
};

void check_v(Checker& c, const online::VPolicy& v, const LoadProfile& load) {
  for (const auto& tr : v.trace()) {
    const double l = load.at(tr.t);
    c.check(tr.forced == 0, "v-forced", tr.t, std::to_string(tr.forced) + " forced start(s)");
    if (tr.max_height > 0.0) {
      c.check(l < tr.reference + tr.max_height, "v-load", tr.t,
              "load " + fmt(l) + " >= ref " + fmt(tr.reference) + " + hmax " + fmt(tr.max_height));
    } else {
      c.check(leq_tol(l, tr.reference), "v-load", tr.t, "load " + fmt(l) + " > ref " + fmt(tr.reference));
    }
  }
}

void check_uu(Checker& c, const Instance& inst, const LoadProfile& load) {
  const std::int64_t h = inst.jobs().front().height;
  const std::vector<Rational> avg = avg_profile_exact(inst.jobs(), inst.horizon());
  for (Time t = 0; t < inst.horizon(); ++t) {
    const std::int64_t q = (avg[static_cast<std::size_t>(t)] / Rational(h)).ceil();
    c.check(load.at(t) <= static_cast<double>(h * q), "uu-load", t,
            "load " + fmt(load.at(t)) + " > h*ceil(avg/h) = " + std::to_string(h * q));
  }
}

void check_ad(Checker& c, const Instance& inst, const online::ADPolicy& ad, bool next_fit, const Schedule& s) {
  const std::int64_t h = inst.jobs().front().height;
  const std::vector<Rational> avg = avg_profile_exact(inst.jobs(), inst.horizon());
  const LoadProfile load = load_profile(inst, s);
  for (Time t = 0; t < inst.horizon(); ++t) {
    const Rational& a = avg[static_cast<std::size_t>(t)];
    const double l = load.at(t);
    if (a > Rational(h)) {
      const std::int64_t q = (a / Rational(h)).ceil();
      c.check(l <= static_cast<double>(3 * h * q), "ad-load-above", t,
              "load " + fmt(l) + " > 3h*ceil(avg/h) = " + std::to_string(3 * h * q));
    } else {
      c.check(l <= static_cast<double>(h), "ad-load-below", t,
              "load " + fmt(l) + " > h = " + std::to_string(h) + " with avg = " + fmt(a.to_double()));
    }
  }
  const auto& queues = ad.queues();
  for (std::size_t q = 0; q < queues.size(); ++q) {
    std::vector<std::pair<Time, Time>> spans;
    for (const auto& id : queues[q].members) {
      const Time st = *s.start_of(id);
      spans.emplace_back(st, st + inst.job(id).width);
    }
    std::sort(spans.begin(), spans.end());
    bool ok = true;
    for (std::size_t i = 1; i < spans.size(); ++i) ok = ok && spans[i].first >= spans[i - 1].second;
    c.check(ok, "ad-queue-disjoint", -1, "queue " + std::to_string(q) + " has overlapping members");
    c.check(queues[q].density_sum <= Rational(h), "ad-queue-density", -1,
            "queue " + std::to_string(q) + " density sum exceeds h");
    if (next_fit && q + 1 < queues.size()) {
      c.check(queues[q].density_sum + queues[q + 1].density_sum > Rational(h), "ad-queue-adjacent", -1,
              "queues " + std::to_string(q) + "," + std::to_string(q + 1) + " could have been merged");
    }
  }
}

LineRun run_line(const std::string& line, const Instance& inst, const exact::ExactResult& opt,
                 const CompareOptions& options, Checker& c) {
  LineRun out;
  const dvs::DvsInstance d = dvs::to_dvs(inst);
  if (line == "exact") {
    out.cost = opt.cost;
    out.schedule = opt.schedule;
    return out;
  }
  if (line == "dvs-avr" || line == "dvs-bkp" || line == "dvs-yds") {
    const dvs::SpeedProfile p = line == "dvs-avr"   ? dvs::avr_profile(d)
                                : line == "dvs-bkp" ? dvs::bkp_profile(d)
                                                    : dvs::yds_profile(d);
    auto v = dvs::find_capacity_violation(d, p);
    c.check(!v, "dvs-capacity", v ? v->from : -1,
            v ? "window [" + std::to_string(v->from) + "," + std::to_string(v->to) + ") capacity " +
                    fmt(v->capacity) + " < demand " + fmt(v->demand)
              : "");
    out.cost = dvs::profile_cost(p, inst.alpha());
    return out;
  }
  if (line == "v" || line == "v-avr" || line == "v-bkp" || line == "v-yds") {
    online::check_input_class(online::Algorithm::V, inst);
    online::Options o;
    o.reference = line == "v-avr" ? online::Reference::Avr
                  : line == "v-yds" ? online::Reference::Yds
                                    : online::Reference::Bkp;
    auto policy = online::make_policy(online::Algorithm::V, inst, o);
    out.schedule = online::run_online(*policy, inst);
    check_v(c, dynamic_cast<const online::VPolicy&>(*policy), raw_load_profile(inst.jobs(), *out.schedule,
                                                                                inst.horizon()));
  } else if (line == "ad-nextfit" || line == "ad-firstfit") {
    const auto alg = line == "ad-nextfit" ? online::Algorithm::AdNextFit : online::Algorithm::AdFirstFit;
    online::check_input_class(alg, inst);
    auto policy = online::make_policy(alg, inst);
    out.schedule = online::run_online(*policy, inst);
    check_ad(c, inst, dynamic_cast<const online::ADPolicy&>(*policy), alg == online::Algorithm::AdNextFit,
             *out.schedule);
  } else {
    const online::Algorithm alg = online::parse_algorithm(line);
    online::Options o;
    o.class_base = options.class_base;
    out.schedule = online::run(alg, inst, o);
    if (alg == online::Algorithm::UU) {
      check_uu(c, inst, raw_load_profile(inst.jobs(), *out.schedule, inst.horizon()));
    }
    if (alg == online::Algorithm::UV || alg == online::Algorithm::General) {
      check_transforms(inst, opt.schedule, c.idx, line, c.failures, c.counts);
      check_transforms(inst, *out.schedule, c.idx, line, c.failures, c.counts);
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_lines() {
  static const std::vector<std::string> lines{"exact",   "dvs-avr", "dvs-bkp", "dvs-yds", "v",          "v-avr",
                                              "v-bkp",   "v-yds",   "uv",      "general", "uu",         "ad-nextfit",
                                              "ad-firstfit", "greedy"};
  return lines;
}

Report compare(const std::vector<Instance>& instances, const std::vector<std::string>& lines,
               const CompareOptions& options) {
  Report report;
  report.seed = options.seed;
  for (const auto& line : lines) {
    const auto& known = known_lines();
    if (std::find(known.begin(), known.end(), line) == known.end()) {
      throw Error(ErrorCode::Parse, "unknown algorithm line '" + line + "'");
    }
  }
  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const Instance& inst = instances[idx];
    const exact::ExactResult opt = solve_opt(inst, options.opt);
    {
      auto& counts = report.lemma_checks["opt"];
      Checker c{idx, "opt", report.lemma_failures, counts};
      const double lb = convexity_lower_bound(inst.jobs(), inst.alpha());
      c.check(leq_tol(lb, opt.cost), "convexity", -1, "OPT " + fmt(opt.cost) + " < sum w h^a " + fmt(lb));
    }
    const double k_ratio =
        inst.empty() ? 1.0 : static_cast<double>(inst.max_width()) / static_cast<double>(inst.min_width());
    for (const auto& line : lines) {
      ReportRow row;
      row.seed = options.seed;
      row.instance_idx = idx;
      row.algorithm = line;
      row.opt_cost = opt.cost;
      row.bound = ratio_bound(line, inst.alpha(), k_ratio);
      Checker c{idx, line, report.lemma_failures, report.lemma_checks[line]};
      try {
        const LineRun run = run_line(line, inst, opt, options, c);
        if (run.schedule) {
          row.feasible = validate_schedule(inst, *run.schedule).empty();
          row.cost = row.feasible ? schedule_cost(inst, *run.schedule) : run.cost;
          if (row.feasible) {
            c.check(row.cost >= opt.cost * (1.0 - kCostTolerance), "opt-envelope", -1,
                    "cost " + fmt(row.cost) + " below OPT " + fmt(opt.cost));
          }
        } else {
          row.cost = run.cost;
        }
        row.ratio = opt.cost > 0.0 ? row.cost / opt.cost : 1.0;
        row.violated = !row.feasible || (row.bound && !leq_tol(row.ratio, *row.bound));
      } catch (const Error& e) {
        row.feasible = false;
        row.violated = true;
        row.error = e.what();
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::size_t Report::violations() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return r.violated; }));
}

std::vector<LineSummary> Report::summary() const {
  std::vector<LineSummary> out;
  std::map<std::string, std::size_t> pos;
  for (const auto& r : rows) {
    auto [it, fresh] = pos.try_emplace(r.algorithm, out.size());
    if (fresh) out.push_back(LineSummary{r.algorithm});
    LineSummary& s = out[it->second];
    ++s.rows;
    s.violations += r.violated ? 1 : 0;
    s.max_ratio = std::max(s.max_ratio, r.ratio);
    s.mean_ratio += r.ratio;
  }
  for (auto& s : out) {
    if (s.rows) s.mean_ratio /= static_cast<double>(s.rows);
    if (auto it = lemma_checks.find(s.algorithm); it != lemma_checks.end()) {
      for (const auto& [name, n] : it->second) s.lemma_checks += n;
    }
    s.lemma_failures = static_cast<std::size_t>(std::count_if(
        lemma_failures.begin(), lemma_failures.end(), [&](const LemmaFailure& f) { return f.algorithm == s.algorithm; }));
  }
  return out;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "seed,instance_idx,algorithm,cost,opt_cost,ratio,bound,violated\n";
  for (const auto& r : rows) {
    os << r.seed << ',' << r.instance_idx << ',' << r.algorithm << ',' << fmt(r.cost) << ',' << fmt(r.opt_cost)
       << ',' << fmt(r.ratio) << ',' << (r.bound ? fmt(*r.bound) : "") << ',' << (r.violated ? "true" : "false")
       << '\n';
  }
  return os.str();
}

nlohmann::json Report::to_json() const {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& s : summary()) {
    lines.push_back({{"algorithm", s.algorithm},
                     {"rows", s.rows},
                     {"violations", s.violations},
                     {"max_ratio", s.max_ratio},
                     {"mean_ratio", s.mean_ratio},
                     {"lemma_checks", s.lemma_checks},
                     {"lemma_failures", s.lemma_failures}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : lemma_failures) {
    failures.push_back({{"instance_idx", f.instance_idx},
                        {"algorithm", f.algorithm},
                        {"check", f.check},
                        {"slot", f.slot},
                        {"detail", f.detail}});
  }
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& r : rows) {
    if (!r.error.empty()) errors.push_back({{"instance_idx", r.instance_idx}, {"algorithm", r.algorithm}, {"error", r.error}});
  }
  return {{"seed", seed},
          {"rows", rows.size()},
          {"violations", violations()},
          {"lines", lines},
          {"lemma_failures", failures},
          {"errors", errors}};
}

}  // namespace gridsched::harness
