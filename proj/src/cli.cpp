#include "gridsched/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridsched/adversary.hpp"
#include "gridsched/error.hpp"
#include "gridsched/exact.hpp"
#include "gridsched/harness.hpp"
#include "gridsched/io.hpp"
#include "gridsched/online.hpp"

namespace gridsched::cli {
namespace {

using nlohmann::json;

struct CliConfig {
  std::string instance_path;
  std::string schedule_path;
  std::string spec_path;
  std::string algorithm;
  std::string reference = "bkp";
  double class_base = 2.0;
  std::string method = "e";
  std::string opt = "brute";
  std::string algorithms = "v,uv,general,uu";
  std::string type;
  std::int64_t x = 100;
  int k = 3;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::string out;
  int verbosity = 0;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

bool looks_like_slot_instance(const json& j) {
  if (!j.is_object() || !j.contains("jobs") || !j.at("jobs").is_array() || j.at("jobs").empty()) return false;
  return j.at("jobs").front().contains("slots");
}

Instance load_instance(const CliConfig& c) {
  Instance inst = io::instance_from_json(io::read_json_file(c.instance_path));
  return c.alpha ? inst.with_alpha(*c.alpha) : inst;
}

void emit(const CliConfig& c, const json& j, std::ostream& out) {
  if (c.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    io::write_json_file(c.out, j);
  }
}

int cmd_solve(const CliConfig& c, std::ostream& out) {
  const online::Algorithm alg = online::parse_algorithm(c.algorithm);
  const json raw = io::read_json_file(c.instance_path);
  if (alg == online::Algorithm::Greedy && looks_like_slot_instance(raw)) {
    SlotSetInstance inst = io::slot_instance_from_json(raw);
    if (c.alpha) inst.alpha = *c.alpha;
    const SlotAssignment a = online::greedy(inst);
    const double cost = slot_assignment_cost(inst, a);
    json assignments = json::object();
    for (const auto& [id, t] : a) assignments[id] = t;
    emit(c, {{"algorithm", "greedy"}, {"alpha", inst.alpha}, {"cost", cost}, {"assignments", assignments}}, out);
    out << "greedy cost " << fmt(cost) << "\n";
    return kExitOk;
  }
  Instance inst = io::instance_from_json(raw);
  if (c.alpha) inst = inst.with_alpha(*c.alpha);
  online::Options opts;
  opts.reference = online::parse_reference(c.reference);
  opts.class_base = c.class_base;
  const Schedule s = online::run(alg, inst, opts);
  const double cost = schedule_cost(inst, s);
  json j = io::to_json(s);
  j["algorithm"] = c.algorithm;
  j["alpha"] = inst.alpha();
  j["cost"] = cost;
  emit(c, j, out);
  out << c.algorithm << " cost " << fmt(cost) << "\n";
  return kExitOk;
}

json stats_json(const exact::ExactStats& st) {
  json stages = json::array();
  for (const auto& s : st.stages) {
    stages.push_back({{"from", s.from},
                      {"to", s.to},
                      {"jobs", s.jobs},
                      {"right_rows", s.right_rows},
                      {"concatenated", s.concatenated},
                      {"filtered", s.filtered}});
  }
  return {{"windows", st.windows}, {"max_clique", st.max_clique}, {"max_width", st.max_width},
          {"max_filtered", st.max_filtered()}, {"stages", stages}};
}

int cmd_exact(const CliConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  const harness::OptMethod m = harness::parse_opt_method(c.method);
  exact::DpOptions dp;
  dp.tie_seed = c.seed;
  exact::ExactResult r;
  switch (m) {
    case harness::OptMethod::E:
      r = exact::alg_e(inst, exact::window_decomposition_e(inst), dp);
      break;
    case harness::OptMethod::EPlus:
      r = exact::alg_eplus(inst, dp);
      break;
    case harness::OptMethod::Unit:
      r = exact::alg_unit_exact(inst, dp);
      break;
    case harness::OptMethod::Brute:
      r = exact::brute_force(inst);
      break;
  }
  json j = io::to_json(r.schedule);
  j["method"] = c.method;
  j["alpha"] = inst.alpha();
  j["cost"] = r.cost;
  if (m != harness::OptMethod::Brute) j["stats"] = stats_json(r.stats);
  emit(c, j, out);
  out << fmt(r.cost) << "\n";
  return kExitOk;
}

int cmd_adversary(const CliConfig& c, std::ostream& out) {
  const double alpha = c.alpha.value_or(2.0);
  if (c.type == "greedy") {
    const adversary::GreedyRun run = adversary::greedy_adversary(c.k, alpha);
    emit(c, adversary::to_json(run), out);
    out << "greedy " << fmt(run.greedy_cost) << " / opt " << fmt(run.opt_cost) << " ratio " << fmt(run.ratio) << "\n";
    return kExitOk;
  }
  online::Options opts;
  opts.reference = online::parse_reference(c.reference);
  opts.class_base = c.class_base;
  const std::string name = c.algorithm.empty() ? "general" : c.algorithm;
  const adversary::AdversaryTranscript t =
      adversary::adversary_lambda(online::parse_algorithm(name), alpha, c.x, opts);
  emit(c, adversary::to_json(t), out);
  out << name << " cost " << fmt(t.alg_cost) << " / opt bound " << fmt(t.opt_bound) << " ratio " << fmt(t.ratio)
      << " lower bound " << fmt(t.lower_bound) << "\n";
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_bench(const CliConfig& c, std::ostream& out) {
  harness::GeneratorSpec spec = harness::spec_from_json(io::read_json_file(c.spec_path));
  if (c.seed) spec.seed = *c.seed;
  if (c.alpha) spec.alpha = *c.alpha;
  const std::vector<std::string> lines = split_list(c.algorithms);
  if (lines.empty()) throw CLI::ValidationError("--algorithms", "empty list");
  harness::CompareOptions opts;
  opts.opt = harness::parse_opt_method(c.opt);
  opts.seed = spec.seed;
  opts.class_base = c.class_base;
  const harness::Report report = harness::compare(harness::generate(spec), lines, opts);

  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "report.csv");
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + (dir / "report.csv").string());
    f << report.to_csv();
  }
  json j = report.to_json();
  j["spec"] = harness::to_json(spec);
  io::write_json_file(dir / "report.json", j);

  for (const auto& s : report.summary()) {
    out << s.algorithm << ": rows " << s.rows << " violations " << s.violations << " max_ratio " << fmt(s.max_ratio)
        << " lemma " << s.lemma_failures << "/" << s.lemma_checks << "\n";
  }
  out << "bench rows " << report.rows.size() << " violations " << report.violations() << " lemma failures "
      << report.lemma_failures.size() << "\n";
  return kExitOk;
}

int cmd_validate(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(c);
  const Schedule s = io::schedule_from_json(io::read_json_file(c.schedule_path));
  const std::vector<Violation> v = validate_schedule(inst, s);
  json arr = json::array();
  for (const auto& x : v) arr.push_back({{"job", x.job_id}, {"rule", to_string(x.rule)}, {"detail", x.detail}});
  json j{{"violations", arr}};
  if (v.empty()) j["cost"] = schedule_cost(inst, s);
  emit(c, j, out);
  if (!v.empty()) {
    err << "error: " << v.size() << " violation(s), first: " << v.front().job_id << " "
        << to_string(v.front().rule) << "\n";
    out << "violations " << v.size() << "\n";
    return kExitDomain;
  }
  out << "valid cost " << fmt(j["cost"].get<double>()) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig c;
  const CLI::IsMember kAlgorithms({"v", "uv", "general", "uu", "ad-nextfit", "ad-firstfit", "greedy"});
  const CLI::IsMember kReferences({"avr", "bkp", "yds"});
  const CLI::IsMember kMethods({"e", "eplus", "unit", "brute"});
  CLI::App app{"Non-preemptive power-request scheduling: online algorithms, exact solvers, adversaries"};
  app.require_subcommand(1, 1);
  app.add_flag("-v,--verbose", c.verbosity, "More diagnostics on stderr");

  auto add_alpha = [&](CLI::App* sub) {
    sub->add_option("--alpha", c.alpha, "Override the instance's alpha")->check(CLI::PositiveNumber);
  };

  CLI::App* solve = app.add_subcommand("solve", "Run an online algorithm");
  solve->add_option("--instance", c.instance_path, "Instance JSON")->required();
  solve->add_option("--alg,--algorithm", c.algorithm, "v | uv | general | uu | ad-nextfit | ad-firstfit | greedy")
      ->required()
      ->check(kAlgorithms);
  solve->add_option("--reference", c.reference, "avr | bkp | yds (V only)")->check(kReferences);
  solve->add_option("--class-base", c.class_base, "Width class base (general only)");
  solve->add_option("--out", c.out, "Write the schedule here instead of stdout");
  add_alpha(solve);

  CLI::App* ex = app.add_subcommand("exact", "Run an exact solver");
  ex->add_option("--instance", c.instance_path, "Instance JSON")->required();
  ex->add_option("--method", c.method, "e | eplus | unit | brute")->check(kMethods);
  ex->add_option("--seed", c.seed, "Seed for random tie-breaks in the DP");
  ex->add_option("--out", c.out, "Write the schedule here instead of stdout");
  add_alpha(ex);

  CLI::App* adv = app.add_subcommand("adversary", "Run an adaptive adversary");
  adv->add_option("--type", c.type, "lambda | greedy")->required()->check(CLI::IsMember({"lambda", "greedy"}));
  adv->add_option("--x", c.x, "Lambda width parameter");
  adv->add_option("--k", c.k, "Greedy rounds");
  adv->add_option("--alg,--algorithm", c.algorithm, "Online algorithm facing Lambda (default general)")
      ->check(kAlgorithms);
  adv->add_option("--reference", c.reference, "avr | bkp (V only)")->check(CLI::IsMember({"avr", "bkp"}));
  adv->add_option("--class-base", c.class_base, "Width class base (general only)");
  adv->add_option("--out", c.out, "Write the transcript here instead of stdout");
  add_alpha(adv);

  CLI::App* bench = app.add_subcommand("bench", "Generate instances and compare algorithms against OPT");
  bench->add_option("--spec", c.spec_path, "Generator spec JSON")->required();
  bench->add_option("--algorithms", c.algorithms, "Comma-separated algorithm lines");
  bench->add_option("--opt", c.opt, "e | eplus | brute | unit")->check(kMethods);
  bench->add_option("--seed", c.seed, "Override the spec seed");
  bench->add_option("--class-base", c.class_base, "Width class base (general only)");
  bench->add_option("--out", c.out, "Output directory for report.csv and report.json");
  add_alpha(bench);

  CLI::App* val = app.add_subcommand("validate", "Check a schedule against an instance");
  val->add_option("--instance", c.instance_path, "Instance JSON")->required();
  val->add_option("--schedule", c.schedule_path, "Schedule JSON")->required();
  val->add_option("--out", c.out, "Write the report here instead of stdout");
  add_alpha(val);

  const auto& known = harness::known_lines();
  bench->callback([&] {
    for (const auto& line : split_list(c.algorithms)) {
      if (std::find(known.begin(), known.end(), line) == known.end()) {
        throw CLI::ValidationError("--algorithms", "unknown algorithm line '" + line + "'");
      }
    }
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c.alpha && !(*c.alpha > 1.0)) throw Error(ErrorCode::InvalidAlpha, "--alpha must be > 1");
    if (solve->parsed()) return cmd_solve(c, out);
    if (ex->parsed()) return cmd_exact(c, out);
    if (adv->parsed()) return cmd_adversary(c, out);
    if (bench->parsed()) return cmd_bench(c, out);
    if (val->parsed()) return cmd_validate(c, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error: Parse: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace gridsched::cli
