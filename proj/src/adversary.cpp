#include "gridsched/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "gridsched/exact.hpp"
#include "gridsched/io.hpp"

namespace gridsched::adversary {

Instance AdversaryTranscript::instance() const {
  std::vector<Job> jobs;
  for (const auto& e : entries) jobs.push_back(e.job);
  return Instance(std::move(jobs), alpha);
}

Schedule AdversaryTranscript::schedule() const {
  Schedule s;
  for (const auto& e : entries) s.assign(e.job.id, e.start);
  return s;
}

std::vector<std::int64_t> lambda_widths(double alpha, std::int64_t x) {
  if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must be > 1");
  if (x < 2) throw Error(ErrorCode::InvalidInstance, "x must be >= 2");
  const auto n = static_cast<std::size_t>(std::floor(alpha)) + 1;
  std::vector<std::int64_t> w(n);
  w[n - 1] = x - 1;
  w[n - 2] = x;
  for (std::size_t i = n - 2; i-- > 0;) w[i] = 3 * w[i + 1] + 1;
  return w;
}

AdversaryTranscript adversary_lambda(online::Policy& policy, double alpha, std::int64_t x,
                                     const std::string& algorithm_name) {
  const std::vector<std::int64_t> widths = lambda_widths(alpha, x);
  AdversaryTranscript t;
  t.algorithm = algorithm_name;
  t.alpha = alpha;
  t.x = x;

  online::Simulator sim(policy);
  Job current{"J1", 0, 3 * widths[0], widths[0], 1};
  for (std::size_t i = 0; i < widths.size(); ++i) {
    sim.release(current);
    std::optional<Time> start;
    try {
      while (!start) {
        sim.step();
        start = sim.schedule().start_of(current.id);
        if (!start && sim.now() > current.latest_start()) break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfeasibleOutcome) throw;
      throw Error(ErrorCode::AlgorithmStalled, std::string("algorithm did not commit ") + current.id + ": " + e.what());
    }
    if (!start) throw Error(ErrorCode::AlgorithmStalled, "algorithm did not commit " + current.id);
    t.entries.push_back(TranscriptEntry{current, *start, *start + current.width});
    if (i + 1 < widths.size()) {
      // The simulator now sits at st + 1, the next job's release.
      current = Job{"J" + std::to_string(i + 2), *start + 1, *start + current.width, widths[i + 1], 1};
    }
  }

  const Instance inst = t.instance();
  const LoadProfile load = load_profile(inst, t.schedule());
  t.alg_cost = cost(load, alpha);
  SlotSet last;
  for (Time s = t.entries.back().start; s < t.entries.back().end; ++s) last.insert(s);
  t.last_interval_cost = cost(load, alpha, last);
  t.opt_bound = static_cast<double>(x) * std::pow(3.0, std::floor(alpha));
  t.opt_cost = lambda_opt_schedule(t).cost;
  t.ratio = t.alg_cost / t.opt_bound;
  const double wmax = static_cast<double>(*std::max_element(widths.begin(), widths.end()));
  const double wmin = static_cast<double>(*std::min_element(widths.begin(), widths.end()));
  t.lower_bound = std::pow(std::log2(wmax / wmin) / 3.0, alpha);
  return t;
}

AdversaryTranscript adversary_lambda(online::Algorithm algorithm, double alpha, std::int64_t x,
                                     const online::Options& options) {
  // Only the unit-height class matters here; the jobs are not known up front.
  auto policy = online::make_policy(algorithm, Instance({}, alpha), options);
  return adversary_lambda(*policy, alpha, x, std::string(online::to_string(algorithm)));
}

LambdaOpt lambda_opt_schedule(const AdversaryTranscript& transcript) {
  LambdaOpt out;
  const auto& e = transcript.entries;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Job& j = e[i].job;
    if (i + 1 == e.size()) {
      out.schedule.assign(j.id, j.release);
      break;
    }
    const Job& next = e[i + 1].job;
    // I(J_i) minus I(J_{i+1}) has length 2w + 1, so one side holds J_i.
    if (next.release - j.release >= j.width) {
      out.schedule.assign(j.id, j.release);
    } else {
      out.schedule.assign(j.id, next.deadline);
    }
  }
  out.cost = schedule_cost(transcript.instance(), out.schedule);
  return out;
}

double expected_greedy_cost(int k, double alpha) {
  double c = 2.0 * std::pow(static_cast<double>(k), alpha);
  for (int i = 1; i <= k - 2; ++i) c += std::pow(static_cast<double>(i), alpha) * std::ldexp(1.0, k - i - 1);
  return c;
}

GreedyRun greedy_adversary(int k, double alpha) {
  if (k < 2) throw Error(ErrorCode::InvalidInstance, "k must be >= 2");
  if (k > 24) throw Error(ErrorCode::TooLarge, "k = " + std::to_string(k) + " exceeds 24");
  if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must be > 1");
  GreedyRun run;
  run.k = k;
  run.instance.alpha = alpha;
  std::map<Time, std::int64_t> load;
  std::vector<Time> allowed;
  for (Time t = 1; t <= (Time{1} << k); ++t) allowed.push_back(t);
  for (int round = 1; round <= k; ++round) {
    const std::int64_t count = round < k ? std::int64_t{1} << (k - round) : 2;
    std::set<Time> used;
    for (std::int64_t n = 0; n < count; ++n) {
      SlotJob job{"R" + std::to_string(round) + "-" + std::to_string(n + 1), allowed};
      const Time t = online::greedy_pick(job, load);
      ++load[t];
      used.insert(t);
      run.greedy_assignment[job.id] = t;
      run.instance.jobs.push_back(std::move(job));
    }
    allowed.assign(used.begin(), used.end());
  }
  run.greedy_cost = slot_assignment_cost(run.instance, run.greedy_assignment);
  run.opt_cost = exact::slot_set_optimum(run.instance).cost;
  run.expected_greedy_cost = expected_greedy_cost(k, alpha);
  run.expected_opt_cost = std::ldexp(1.0, k);
  run.ratio = run.greedy_cost / run.opt_cost;
  return run;
}

nlohmann::json to_json(const AdversaryTranscript& t) {
  nlohmann::json jobs = nlohmann::json::array();
  for (const auto& e : t.entries) {
    jobs.push_back({{"id", e.job.id},
                    {"release", e.job.release},
                    {"deadline", e.job.deadline},
                    {"width", e.job.width},
                    {"height", e.job.height},
                    {"start", e.start},
                    {"end", e.end}});
  }
  return {{"type", "lambda"},
          {"algorithm", t.algorithm},
          {"alpha", t.alpha},
          {"x", t.x},
          {"jobs", jobs},
          {"alg_cost", t.alg_cost},
          {"last_interval_cost", t.last_interval_cost},
          {"opt_bound", t.opt_bound},
          {"opt_cost", t.opt_cost},
          {"ratio", t.ratio},
          {"lower_bound", t.lower_bound}};
}

nlohmann::json to_json(const GreedyRun& run) {
  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [id, t] : run.greedy_assignment) assignment[id] = t;
  return {{"type", "greedy"},
          {"k", run.k},
          {"instance", io::to_json(run.instance)},
          {"greedy_assignment", assignment},
          {"greedy_cost", run.greedy_cost},
          {"opt_cost", run.opt_cost},
          {"expected_greedy_cost", run.expected_greedy_cost},
          {"expected_opt_cost", run.expected_opt_cost},
          {"ratio", run.ratio}};
}

}  // namespace gridsched::adversary
