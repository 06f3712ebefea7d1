// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 1 for ctest).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridsched/adversary.hpp"
#include "gridsched/error.hpp"
#include "gridsched/exact.hpp"
#include "gridsched/harness.hpp"

using namespace gridsched;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += " [runtime " + std::to_string(secs) + " s over limit " + std::to_string(limit_s) + " s]";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d: %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
}

bool rel_eq(double a, double b) { return std::abs(a - b) <= kTol * std::max(1.0, std::abs(b)); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// Class-specific sweeps shared by criteria 4 to 7 and 9.

struct Sweep {
  std::string name;
  harness::GeneratorSpec spec;
  std::vector<std::string> lines;
  harness::Report report;
  std::string csv;
};

harness::GeneratorSpec base_spec(std::uint64_t seed, harness::Constraint c) {
  harness::GeneratorSpec s;
  s.seed = seed;
  s.count = 1000;
  s.n = 6;
  s.tau = 10;
  s.width_min = 1;
  s.width_max = 4;
  s.height_min = 1;
  s.height_max = 3;
  s.alpha = 2.0;
  s.constraint = c;
  return s;
}

std::vector<Sweep> make_sweeps() {
  using harness::Constraint;
  const std::vector<std::string> dvs{"dvs-avr", "dvs-bkp", "dvs-yds"};
  auto with_dvs = [&](std::vector<std::string> l) {
    l.insert(l.end(), dvs.begin(), dvs.end());
    return l;
  };
  std::vector<Sweep> s;
  s.push_back({"unit-width", base_spec(101, Constraint::UnitWidth), with_dvs({"v-avr", "v-bkp", "v-yds"}), {}, {}});
  s.push_back({"uniform-width", base_spec(102, Constraint::UniformWidth), with_dvs({"uv"}), {}, {}});
  s.push_back({"any", base_spec(103, Constraint::Any), with_dvs({"general"}), {}, {}});
  s.push_back({"unit-uniform", base_spec(104, Constraint::UnitUniform), with_dvs({"uu"}), {}, {}});
  s.push_back({"agreeable", base_spec(105, Constraint::Agreeable), with_dvs({"ad-nextfit"}), {}, {}});
  s.push_back({"same-release", base_spec(106, Constraint::SameRelease), with_dvs({"ad-firstfit"}), {}, {}});
  s.push_back({"same-deadline", base_spec(107, Constraint::SameDeadline), with_dvs({"ad-firstfit"}), {}, {}});
  return s;
}

harness::Report run_sweep(const Sweep& s) {
  harness::CompareOptions o;
  o.opt = harness::OptMethod::Brute;
  o.seed = s.spec.seed;
  return harness::compare(harness::generate(s.spec), s.lines, o);
}

const std::vector<std::string> kOnlineLines{"v-avr",      "v-bkp",       "v-yds", "uv", "general", "uu",
                                            "ad-nextfit", "ad-firstfit"};

bool is_online(const std::string& line) {
  return std::find(kOnlineLines.begin(), kOnlineLines.end(), line) != kOnlineLines.end();
}

}  // namespace

int main() {
  const double alpha = 2.0;

  report(1, "worked values (Remark 6, min-max 23 / 25)", 1.0, [&] {
    Outcome o;
    const Instance remark({{"J1", 0, 3, 3, 1}, {"J2", 1, 2, 1, 1}}, alpha);
    const double want = std::pow(2.0, alpha) + 2;
    const double e = exact::alg_e(remark).cost, ep = exact::alg_eplus(remark).cost,
                 bf = exact::brute_force(remark).cost;
    const Instance mm({{"J1", 0, 4, 4, 1}, {"J2", 4, 5, 1, 3}, {"J3", 0, 8, 4, 1}}, alpha);
    const double mm_want = std::pow(4.0, alpha) + std::pow(2.0, alpha + 1) - 1;
    const double mm_e = exact::alg_e(mm).cost, mm_ep = exact::alg_eplus(mm).cost, mm_bf = exact::brute_force(mm).cost;
    Schedule minmax;
    minmax.assign("J1", 0);
    minmax.assign("J2", 4);
    minmax.assign("J3", 0);
    const double mm_max = schedule_cost(mm, minmax);
    o.pass = rel_eq(e, want) && rel_eq(ep, want) && rel_eq(bf, want) && rel_eq(mm_e, mm_want) &&
             rel_eq(mm_ep, mm_want) && rel_eq(mm_bf, mm_want) && rel_eq(mm_max, std::pow(4.0, alpha) + std::pow(3.0, alpha));
    o.detail = "remark e/eplus/brute = " + num(e) + "/" + num(ep) + "/" + num(bf) + "; min-max min-sum " + num(mm_e) +
               "/" + num(mm_ep) + "/" + num(mm_bf) + ", min-max placement " + num(mm_max);
    return o;
  });

  report(2, "greedy adversary k=2,3,10", 1.0, [&] {
    Outcome o;
    for (int k : {2, 3, 10}) {
      const adversary::GreedyRun r = adversary::greedy_adversary(k, alpha);
      const double g = 3.0 * std::ldexp(1.0, k) - 4, opt = std::ldexp(1.0, k);
      const bool ok = r.greedy_cost == g && r.opt_cost == opt && (k != 10 || r.ratio >= 2.99);
      o.pass = o.pass && ok;
      o.detail += "k=" + std::to_string(k) + ": " + num(r.greedy_cost) + "/" + num(r.opt_cost) + " ratio " +
                  num(r.ratio) + "; ";
    }
    return o;
  });

  report(3, "exact methods match brute force", 120.0, [&] {
    Outcome o;
    std::size_t checked = 0, mismatches = 0, unit_checked = 0, unit_mismatches = 0;
    for (double a : {1.5, 2.0, 3.0}) {
      harness::GeneratorSpec s = base_spec(300 + static_cast<std::uint64_t>(a * 10), harness::Constraint::Any);
      s.count = 100;
      s.alpha = a;
      for (const auto& inst : harness::generate(s)) {
        const double bf = exact::brute_force(inst).cost;
        ++checked;
        if (!rel_eq(exact::alg_e(inst).cost, bf) || !rel_eq(exact::alg_eplus(inst).cost, bf)) ++mismatches;
      }
      s.constraint = harness::Constraint::UnitWidth;
      s.seed += 1000;
      for (const auto& inst : harness::generate(s)) {
        ++unit_checked;
        if (!rel_eq(exact::alg_unit_exact(inst).cost, exact::brute_force(inst).cost)) ++unit_mismatches;
      }
    }
    o.pass = checked >= 200 && unit_checked >= 200 && mismatches == 0 && unit_mismatches == 0;
    o.detail = "E/E+ mismatches " + std::to_string(mismatches) + "/" + std::to_string(checked) + ", unit " +
               std::to_string(unit_mismatches) + "/" + std::to_string(unit_checked);
    return o;
  });

  std::vector<Sweep> sweeps = make_sweeps();
  const auto sweep_t0 = std::chrono::steady_clock::now();
  for (auto& s : sweeps) {
    s.report = run_sweep(s);
    s.csv = s.report.to_csv();
  }
  const double sweep_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_t0).count();

  report(4, "online feasibility sweep (1000 instances per class)", 0, [&] {
    Outcome o;
    std::map<std::string, std::pair<std::size_t, std::size_t>> per;  // line -> (rows, infeasible)
    for (const auto& s : sweeps) {
      for (const auto& r : s.report.rows) {
        if (!is_online(r.algorithm)) continue;
        auto& [rows, bad] = per[r.algorithm + "@" + s.name];
        ++rows;
        if (!r.feasible) ++bad;
      }
    }
    for (const auto& [line, c] : per) {
      o.pass = o.pass && c.first >= 1000 && c.second == 0;
      o.detail += line + " " + std::to_string(c.second) + "/" + std::to_string(c.first) + "; ";
    }
    if (sweep_secs > 300) {
      o.pass = false;
      o.detail += "[sweep runtime " + num(sweep_secs) + " s over 300 s]";
    } else {
      o.detail += "sweep runtime " + num(sweep_secs) + " s";
    }
    return o;
  });

  report(5, "competitive-bound sweeps at alpha=2", 0, [&] {
    Outcome o;
    for (const auto& s : sweeps) {
      for (const auto& sum : s.report.summary()) {
        if (!is_online(sum.algorithm) || sum.algorithm == "v-avr") continue;
        o.pass = o.pass && sum.rows >= 300 && sum.violations == 0;
        o.detail += sum.algorithm + "@" + s.name + " viol " + std::to_string(sum.violations) + " max " +
                    num(sum.max_ratio) + "; ";
      }
    }
    return o;
  });

  report(6, "per-slot and transformation lemma checks", 0, [&] {
    Outcome o;
    std::map<std::string, std::pair<std::size_t, std::size_t>> per;  // check -> (checks, failures)
    for (const auto& s : sweeps) {
      for (const auto& [line, checks] : s.report.lemma_checks) {
        if (line.rfind("dvs-", 0) == 0) continue;
        for (const auto& [check, n] : checks) per[line + ":" + check].first += n;
      }
      for (const auto& f : s.report.lemma_failures) {
        if (f.algorithm.rfind("dvs-", 0) == 0) continue;
        ++per[f.algorithm + ":" + f.check].second;
      }
    }
    std::string failed;
    std::size_t total_checks = 0;
    for (const auto& [key, c] : per) {
      total_checks += c.first;
      if (c.second > 0) {
        o.pass = false;
        failed += key + " " + std::to_string(c.second) + "/" + std::to_string(c.first) + "; ";
      }
    }
    o.detail = std::to_string(total_checks) + " checks over " + std::to_string(per.size()) + " kinds";
    if (!failed.empty()) {
      o.detail += "; failing: " + failed;
      // First counterexample of each failing kind, for the log.
      std::map<std::string, bool> shown;
      for (const auto& s : sweeps) {
        for (const auto& f : s.report.lemma_failures) {
          const std::string key = f.algorithm + ":" + f.check;
          if (shown[key] || f.algorithm.rfind("dvs-", 0) == 0) continue;
          shown[key] = true;
          o.detail += "\n    e.g. " + s.name + " instance " + std::to_string(f.instance_idx) + " slot " +
                      std::to_string(f.slot) + ": " + f.detail;
        }
      }
    }
    return o;
  });

  report(7, "DVS reference costs against OPT", 0, [&] {
    Outcome o;
    std::size_t rows = 0;
    for (const auto& s : sweeps) {
      for (const auto& sum : s.report.summary()) {
        if (sum.algorithm.rfind("dvs-", 0) != 0) continue;
        rows += sum.rows;
        o.pass = o.pass && sum.violations == 0 && sum.lemma_failures == 0;
        if (sum.violations || sum.lemma_failures) {
          o.detail += sum.algorithm + "@" + s.name + " viol " + std::to_string(sum.violations) + " capacity " +
                      std::to_string(sum.lemma_failures) + "; ";
        }
      }
    }
    double max_yds = 0, max_avr = 0, max_bkp = 0;
    for (const auto& s : sweeps) {
      for (const auto& r : s.report.rows) {
        if (r.algorithm == "dvs-yds") max_yds = std::max(max_yds, r.ratio);
        if (r.algorithm == "dvs-avr") max_avr = std::max(max_avr, r.ratio);
        if (r.algorithm == "dvs-bkp") max_bkp = std::max(max_bkp, r.ratio);
      }
    }
    o.detail += std::to_string(rows) + " rows; max cost/OPT yds " + num(max_yds) + " (<= 1), avr " + num(max_avr) +
                " (<= " + num(std::pow(2 * alpha, alpha) / 2) + "), bkp " + num(max_bkp) + " (<= " +
                num(8 * std::exp(alpha)) + ")";
    return o;
  });

  report(8, "adversary Lambda vs general, alpha=2, x=100", 5.0, [&] {
    Outcome o;
    const adversary::AdversaryTranscript t = adversary::adversary_lambda(online::Algorithm::General, alpha, 100);
    double widths = 0;
    for (const auto& e : t.entries) widths += static_cast<double>(e.job.width);
    const double bound = 100.0 * std::pow(3.0, std::floor(alpha));
    o.pass = t.opt_cost <= bound && t.opt_cost == widths && t.opt_bound == bound && t.ratio >= t.lower_bound;
    o.detail = "opt " + num(t.opt_cost) + " (sum widths " + num(widths) + ", bound " + num(bound) + "), ratio " +
               num(t.ratio) + " >= " + num(t.lower_bound);
    return o;
  });

  report(9, "seeded sweeps rerun to byte-identical CSV", 0, [&] {
    Outcome o;
    std::size_t bytes = 0;
    for (const auto& s : sweeps) {
      const std::string again = run_sweep(s).to_csv();
      bytes += again.size();
      if (again != s.csv) {
        o.pass = false;
        o.detail += s.name + " differs; ";
      }
    }
    o.detail += std::to_string(sweeps.size()) + " sweeps, " + std::to_string(bytes) + " bytes compared";
    return o;
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
