#include "gridsched/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

namespace gridsched::exact {

namespace {

constexpr Time kUnset = std::numeric_limits<Time>::min();
constexpr Time kDone = std::numeric_limits<Time>::max();

void require_nonempty(const Instance& instance) {
  if (instance.empty()) throw Error(ErrorCode::EmptyInstance, "instance has no jobs");
}

std::vector<std::vector<std::string>> jobs_meeting(const Instance& instance, const std::vector<Time>& b) {
  std::vector<std::vector<std::string>> out(b.size() - 1);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    for (const auto& j : instance.jobs()) {
      if (j.release < b[i + 1] && j.deadline > b[i]) out[i].push_back(j.id);
    }
  }
  return out;
}

}  // namespace

std::size_t WindowDecomposition::max_clique() const {
  std::size_t m = 0;
  for (const auto& c : clique_jobs) m = std::max(m, c.size());
  return m;
}

WindowDecomposition window_decomposition_e(const Instance& instance) {
  require_nonempty(instance);
  // Active sets only grow at release times, so every maximal clique is the
  // active set at some release time.
  std::vector<Time> releases;
  for (const auto& j : instance.jobs()) releases.push_back(j.release);
  std::sort(releases.begin(), releases.end());
  releases.erase(std::unique(releases.begin(), releases.end()), releases.end());

  std::vector<std::set<std::string>> active;
  for (Time t : releases) {
    std::set<std::string> s;
    for (const auto& j : instance.jobs()) {
      if (j.release <= t && t < j.deadline) s.insert(j.id);
    }
    active.push_back(std::move(s));
  }
  std::vector<std::set<std::string>> cliques;
  for (std::size_t i = 0; i < active.size(); ++i) {
    bool maximal = true;
    for (std::size_t k = 0; k < active.size() && maximal; ++k) {
      if (k == i || active[k].size() < active[i].size()) continue;
      const bool subset = std::includes(active[k].begin(), active[k].end(), active[i].begin(), active[i].end());
      if (subset && (active[k].size() > active[i].size() || k < i)) maximal = false;
    }
    if (maximal) cliques.push_back(active[i]);
  }

  WindowDecomposition out;
  std::set<std::string> seen;
  for (const auto& c : cliques) {
    Time b = std::numeric_limits<Time>::max();
    for (const auto& id : c) {
      if (!seen.count(id)) b = std::min(b, instance.job(id).release);
    }
    out.boundaries.push_back(b);
    seen.insert(c.begin(), c.end());
  }
  out.boundaries.push_back(instance.horizon());
  out.clique_jobs = jobs_meeting(instance, out.boundaries);
  return out;
}

WindowDecomposition window_decomposition_eplus(const Instance& instance) {
  require_nonempty(instance);
  WindowDecomposition out;
  for (const auto& j : instance.jobs()) {
    out.boundaries.push_back(j.release);
    out.boundaries.push_back(j.deadline);
  }
  std::sort(out.boundaries.begin(), out.boundaries.end());
  out.boundaries.erase(std::unique(out.boundaries.begin(), out.boundaries.end()), out.boundaries.end());
  out.clique_jobs = jobs_meeting(instance, out.boundaries);
  return out;
}

WindowDecomposition window_decomposition_fixed(const Instance& instance, Time length) {
  require_nonempty(instance);
  if (length < 1) throw Error(ErrorCode::InvalidInstance, "window length must be >= 1");
  const Time end = (instance.horizon() + length - 1) / length * length;
  WindowDecomposition out;
  for (Time t = 0; t <= end; t += length) out.boundaries.push_back(t);
  out.clique_jobs = jobs_meeting(instance, out.boundaries);
  return out;
}

// ---------------------------------------------------------------------------
// Configurations

int invalid_rule(const Job& job, Config c, Time lo, Time hi, bool last) {
  if (c.st >= c.et) return 1;
  if (c.et > c.st + job.width) return 2;
  if (c.et < c.st + job.width && c.st >= lo && c.et <= hi) return 3;
  if (c.st < job.release && c.st < hi) return 4;
  if (c.et > job.deadline && c.et > lo) return 5;
  if (last && c.et == hi + 1) return 6;
  return 0;
}

std::vector<Config> list_configurations(const Job& job, Time lo, Time hi, bool last, std::optional<Time> reach) {
  std::vector<Config> out;
  for (Time st = lo - 1; st <= hi; ++st) {
    if (reach && st >= lo && st < hi && st - lo >= *reach && hi - st > *reach) continue;
    for (Time et = lo; et <= hi + 1; ++et) {
      const Config c{st, et};
      if (invalid_rule(job, c, lo, hi, last) == 0) out.push_back(c);
    }
  }
  return out;
}

std::size_t ExactStats::max_filtered() const {
  std::size_t m = 0;
  for (const auto& s : stages) m = std::max(m, s.filtered);
  return m;
}

// ---------------------------------------------------------------------------
// DP

namespace {

struct Row {
  std::vector<Time> start;  ///< kUnset while not started
  double cost = 0.0;
};

struct KeyHash {
  std::size_t operator()(const std::vector<Time>& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Time t : k) h = (h ^ static_cast<std::size_t>(t)) * 0x100000001b3ULL;
    return h;
  }
};

/// Left configuration of job j over [b1, hi) implied by its committed start.
Config left_config(const Job& job, Time start, Time hi) {
  if (start == kUnset) return Config{hi, hi + 1};
  if (start + job.width > hi) return Config{start, hi + 1};
  return Config{start, start + job.width};
}

class Dp {
 public:
  Dp(const Instance& instance, const WindowDecomposition& dec, const DpOptions& options)
      : inst_(instance), dec_(dec), options_(options) {
    if (options.tie_seed) rng_.seed(*options.tie_seed);
    id_order_.resize(instance.size());
    std::iota(id_order_.begin(), id_order_.end(), 0);
    std::sort(id_order_.begin(), id_order_.end(),
              [&](std::size_t a, std::size_t b) { return instance.jobs()[a].id < instance.jobs()[b].id; });
    stats_.windows = dec.windows();
    stats_.max_clique = dec.max_clique();
    stats_.max_width = instance.max_width();
  }

  ExactResult solve() {
    const auto& b = dec_.boundaries;
    if (b.size() != dec_.clique_jobs.size() + 1 || b.size() < 2) {
      throw Error(ErrorCode::InvalidInstance, "decomposition needs k + 1 boundaries for k windows");
    }
    for (const auto& j : inst_.jobs()) {
      if (j.release < b.front() || j.deadline > b.back()) {
        throw Error(ErrorCode::InvalidInstance, "decomposition does not cover job " + j.id);
      }
    }
    b1_ = b.front();
    std::vector<Row> table{Row{std::vector<Time>(inst_.size(), kUnset), 0.0}};
    for (std::size_t i = 0; i < dec_.windows(); ++i) {
      table = stage(table, i);
      if (table.empty()) throw Error(ErrorCode::InfeasibleInstance, "no valid configuration survives window " +
                                                                        std::to_string(i + 1));
    }
    if (table.size() != 1) {
      throw Error(ErrorCode::InfeasibleInstance, "final table has " + std::to_string(table.size()) + " rows");
    }
    ExactResult out;
    for (std::size_t k = 0; k < inst_.size(); ++k) out.schedule.assign(inst_.jobs()[k].id, table[0].start[k]);
    out.cost = schedule_cost(inst_, out.schedule);
    out.stats = std::move(stats_);
    return out;
  }

 private:
  struct Pending {
    std::size_t job;
    std::vector<Config> options;
  };

  std::vector<Row> stage(const std::vector<Row>& left, std::size_t i) {
    lo_ = dec_.boundaries[i];
    hi_ = dec_.boundaries[i + 1];
    last_ = i + 1 == dec_.windows();
    StageStats st;
    st.from = lo_;
    st.to = hi_;

    window_.clear();
    for (const auto& id : dec_.clique_jobs[i]) {
      const std::size_t k = *inst_.index_of(id);
      std::optional<Time> reach;
      if (options_.bounded_starts) reach = static_cast<Time>(stats_.max_clique) * stats_.max_width;
      window_.push_back(Pending{k, list_configurations(inst_.jobs()[k], lo_, hi_, last_, reach)});
    }
    st.jobs = window_.size();
    st.right_rows = 1.0;
    for (const auto& p : window_) st.right_rows *= static_cast<double>(p.options.size());
    in_window_.assign(inst_.size(), false);
    for (const auto& p : window_) in_window_[p.job] = true;

    table_.clear();
    concatenated_ = 0;
    loads_.assign(static_cast<std::size_t>(hi_ - lo_), 0);
    for (const auto& row : left) {
      if (!outside_valid(row)) continue;
      current_ = row;
      extend(0);
    }
    st.concatenated = concatenated_;

    std::vector<Row> out;
    out.reserve(table_.size());
    for (auto& [key, row] : table_) out.push_back(std::move(row));
    std::sort(out.begin(), out.end(), [&](const Row& a, const Row& b) { return lex_less(a.start, b.start); });
    st.filtered = out.size();
    stats_.stages.push_back(st);
    return out;
  }

  /// Jobs outside the window keep their configuration; it must stay valid
  /// with the left table stretched to hi.
  bool outside_valid(const Row& row) const {
    for (std::size_t k = 0; k < inst_.size(); ++k) {
      if (in_window_[k]) continue;
      const Job& j = inst_.jobs()[k];
      Config c = left_config(j, row.start[k], hi_);
      if (left_invalid(j, c)) return false;
    }
    return true;
  }

  bool left_invalid(const Job& j, Config c) const {
    if (invalid_rule(j, c, b1_, hi_, last_) != 0) return true;
    return c.st == b1_ - 1;
  }

  void extend(std::size_t p) {
    if (p == window_.size()) {
      finish();
      return;
    }
    const std::size_t k = window_[p].job;
    const Job& j = inst_.jobs()[k];
    const Time start = current_.start[k];
    const Config before = left_config(j, start, lo_);
    const bool done = start != kUnset && before.et <= lo_;
    const bool running = start != kUnset && !done;

    for (const Config& r : window_[p].options) {
      Config merged;
      if (done) {
        if (!(r.st == lo_ - 1 && r.et == lo_)) continue;
        merged = before;
      } else if (running) {
        if (!(r.st == lo_ - 1 && r.et > lo_)) continue;
        merged = Config{before.st, r.et};
      } else {
        if (r.st < lo_) continue;
        merged = r;
      }
      if (left_invalid(j, merged)) continue;

      const Time seg_from = std::max(r.st, lo_);
      const Time seg_to = std::min(r.et, hi_);
      for (Time t = seg_from; t < seg_to; ++t) loads_[static_cast<std::size_t>(t - lo_)] += j.height;
      const Time saved = current_.start[k];
      if (merged.st >= lo_ && merged.st < hi_) current_.start[k] = merged.st;
      extend(p + 1);
      current_.start[k] = saved;
      for (Time t = seg_from; t < seg_to; ++t) loads_[static_cast<std::size_t>(t - lo_)] -= j.height;
    }
  }

  void finish() {
    ++concatenated_;
    double c = current_.cost;
    for (std::int64_t l : loads_) {
      if (l > 0) c += std::pow(static_cast<double>(l), inst_.alpha());
    }
    std::vector<Time> key(inst_.size());
    for (std::size_t k = 0; k < inst_.size(); ++k) {
      const Time s = current_.start[k];
      if (s == kUnset) {
        key[k] = kUnset;
      } else if (s + inst_.jobs()[k].width > hi_) {
        key[k] = s;
      } else {
        key[k] = kDone;
      }
    }
    auto [it, inserted] = table_.try_emplace(std::move(key), Row{current_.start, c});
    if (inserted) return;
    Row& best = it->second;
    if (eq_tol(c, best.cost)) {
      const bool take = options_.tie_seed ? coin_(rng_) == 1 : lex_less(current_.start, best.start);
      if (take) best = Row{current_.start, c};
    } else if (c < best.cost) {
      best = Row{current_.start, c};
    }
  }

  bool lex_less(const std::vector<Time>& a, const std::vector<Time>& b) const {
    for (std::size_t k : id_order_) {
      if (a[k] != b[k]) return a[k] < b[k];
    }
    return false;
  }

  const Instance& inst_;
  const WindowDecomposition& dec_;
  DpOptions options_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<int> coin_{0, 1};
  std::vector<std::size_t> id_order_;
  ExactStats stats_;

  Time b1_ = 0;
  Time lo_ = 0;
  Time hi_ = 0;
  bool last_ = false;
  std::vector<Pending> window_;
  std::vector<bool> in_window_;
  std::unordered_map<std::vector<Time>, Row, KeyHash> table_;
  std::size_t concatenated_ = 0;
  std::vector<std::int64_t> loads_;
  Row current_;
};

}  // namespace

ExactResult run_dp(const Instance& instance, const WindowDecomposition& decomposition, const DpOptions& options) {
  require_nonempty(instance);
  return Dp(instance, decomposition, options).solve();
}

ExactResult alg_e(const Instance& instance, const WindowDecomposition& decomposition, const DpOptions& options) {
  return run_dp(instance, decomposition, options);
}

ExactResult alg_e(const Instance& instance) { return run_dp(instance, window_decomposition_e(instance)); }

ExactResult alg_eplus(const Instance& instance, const DpOptions& options) {
  DpOptions o = options;
  o.bounded_starts = true;
  return run_dp(instance, window_decomposition_eplus(instance), o);
}

ExactResult alg_unit_exact(const Instance& instance, const DpOptions& options) {
  for (const auto& j : instance.jobs()) {
    if (j.width != 1) {
      throw Error(ErrorCode::NotUnitWidth, "job " + j.id + " has width " + std::to_string(j.width));
    }
  }
  return run_dp(instance, window_decomposition_fixed(instance, 2), options);
}

// ---------------------------------------------------------------------------
// Brute force

ExactResult brute_force(const Instance& instance, std::uint64_t cap) {
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return instance.jobs()[a].id < instance.jobs()[b].id; });
  double tuples = 1.0;
  for (const auto& j : instance.jobs()) tuples *= static_cast<double>(j.latest_start() - j.release + 1);
  if (tuples > static_cast<double>(cap)) {
    throw Error(ErrorCode::TooLarge, "brute force would enumerate " + std::to_string(tuples) + " tuples (cap " +
                                         std::to_string(cap) + ")");
  }
  const double alpha = instance.alpha();
  std::vector<std::int64_t> loads(static_cast<std::size_t>(instance.horizon()), 0);
  std::vector<Time> start(instance.size(), 0);
  std::vector<Time> best_start;
  double best = std::numeric_limits<double>::infinity();

  auto slot_cost = [&](std::int64_t l) { return l > 0 ? std::pow(static_cast<double>(l), alpha) : 0.0; };

  // Partial cost only grows as jobs are added, so it bounds every completion.
  auto search = [&](auto&& self, std::size_t p, double partial) -> void {
    if (partial > best || (best_start.size() && eq_tol(partial, best))) return;
    if (p == order.size()) {
      best = partial;
      best_start = start;
      return;
    }
    const Job& j = instance.jobs()[order[p]];
    for (Time s = j.release; s <= j.latest_start(); ++s) {
      double delta = 0.0;
      for (Time t = s; t < s + j.width; ++t) {
        auto& l = loads[static_cast<std::size_t>(t)];
        delta += slot_cost(l + j.height) - slot_cost(l);
        l += j.height;
      }
      start[order[p]] = s;
      self(self, p + 1, partial + delta);
      for (Time t = s; t < s + j.width; ++t) loads[static_cast<std::size_t>(t)] -= j.height;
    }
  };
  search(search, 0, 0.0);

  ExactResult out;
  for (std::size_t k = 0; k < instance.size(); ++k) out.schedule.assign(instance.jobs()[k].id, best_start[k]);
  out.cost = instance.empty() ? 0.0 : schedule_cost(instance, out.schedule);
  return out;
}

// ---------------------------------------------------------------------------
// Slot-set model

SlotOptimum slot_set_brute_force(const SlotSetInstance& instance, std::uint64_t cap) {
  check_slot_instance(instance);
  double tuples = 1.0;
  for (const auto& j : instance.jobs) tuples *= static_cast<double>(j.slots.size());
  if (tuples > static_cast<double>(cap)) {
    throw Error(ErrorCode::TooLarge, "slot-set brute force would enumerate " + std::to_string(tuples) + " tuples");
  }
  std::map<Time, std::int64_t> load;
  std::vector<Time> pick(instance.jobs.size(), 0);
  std::vector<Time> best_pick;
  double best = std::numeric_limits<double>::infinity();
  auto slot_cost = [&](std::int64_t l) { return std::pow(static_cast<double>(l), instance.alpha); };
  auto search = [&](auto&& self, std::size_t p, double partial) -> void {
    if (partial > best || (best_pick.size() && eq_tol(partial, best))) return;
    if (p == instance.jobs.size()) {
      best = partial;
      best_pick = pick;
      return;
    }
    for (Time t : instance.jobs[p].slots) {
      std::int64_t& l = load[t];
      const double delta = slot_cost(l + 1) - slot_cost(l);
      ++l;
      pick[p] = t;
      self(self, p + 1, partial + delta);
      --load[t];
    }
  };
  search(search, 0, 0.0);
  SlotOptimum out;
  for (std::size_t p = 0; p < instance.jobs.size(); ++p) out.assignment[instance.jobs[p].id] = best_pick[p];
  out.cost = slot_assignment_cost(instance, out.assignment);
  return out;
}

SlotOptimum slot_set_optimum(const SlotSetInstance& instance) {
  check_slot_instance(instance);
  // Jobs with the same slot set form one group node: source -> group (count),
  // group -> slot (count), slot -> sink through one arc per load level whose
  // cost is the marginal (l+1)^a - l^a. Levels are added as the previous one fills.
  std::map<std::vector<Time>, std::vector<std::size_t>> groups;
  for (std::size_t p = 0; p < instance.jobs.size(); ++p) groups[instance.jobs[p].slots].push_back(p);
  std::vector<Time> slots;
  for (const auto& j : instance.jobs) slots.insert(slots.end(), j.slots.begin(), j.slots.end());
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());

  struct Arc {
    std::size_t to;
    std::int64_t cap;
    double cost;
    std::size_t rev;
  };
  const std::size_t source = 0;
  const std::size_t sink = 1;
  const std::size_t group0 = 2;
  const std::size_t slot0 = group0 + groups.size();
  std::vector<std::vector<Arc>> g(slot0 + slots.size());
  auto add = [&](std::size_t u, std::size_t v, std::int64_t cap, double cost) {
    g[u].push_back(Arc{v, cap, cost, g[v].size()});
    g[v].push_back(Arc{u, 0, -cost, g[u].size() - 1});
  };
  auto slot_node = [&](Time t) {
    return slot0 + static_cast<std::size_t>(std::lower_bound(slots.begin(), slots.end(), t) - slots.begin());
  };
  std::vector<std::vector<Time>> group_slots;
  std::size_t gi = 0;
  for (const auto& [set, members] : groups) {
    add(source, group0 + gi, static_cast<std::int64_t>(members.size()), 0.0);
    for (Time t : set) add(group0 + gi, slot_node(t), static_cast<std::int64_t>(members.size()), 0.0);
    group_slots.push_back(set);
    ++gi;
  }
  const double a = instance.alpha;
  std::vector<std::int64_t> levels(slots.size(), 0);
  auto add_level = [&](std::size_t s) {
    const double l = static_cast<double>(levels[s]);
    add(slot0 + s, sink, 1, std::pow(l + 1.0, a) - std::pow(l, a));
    ++levels[s];
  };
  for (std::size_t s = 0; s < slots.size(); ++s) add_level(s);

  const std::size_t n = g.size();
  for (std::size_t unit = 0; unit < instance.jobs.size(); ++unit) {
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev_node(n, n), prev_arc(n, 0);
    std::vector<bool> queued(n, false);
    std::deque<std::size_t> q{source};
    dist[source] = 0.0;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      queued[u] = false;
      for (std::size_t e = 0; e < g[u].size(); ++e) {
        const Arc& arc = g[u][e];
        if (arc.cap <= 0) continue;
        const double nd = dist[u] + arc.cost;
        if (nd < dist[arc.to] - 1e-12) {
          dist[arc.to] = nd;
          prev_node[arc.to] = u;
          prev_arc[arc.to] = e;
          if (!queued[arc.to]) {
            queued[arc.to] = true;
            q.push_back(arc.to);
          }
        }
      }
    }
    if (prev_node[sink] == n) throw Error(ErrorCode::NoFeasibleSlot, "flow could not route every job");
    std::size_t used_slot = n;
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Arc& arc = g[prev_node[v]][prev_arc[v]];
      arc.cap -= 1;
      g[v][arc.rev].cap += 1;
      if (v == sink) used_slot = prev_node[v];
    }
    // Keep one free level arc per slot.
    const std::size_t s = used_slot - slot0;
    bool free_level = false;
    for (const Arc& arc : g[used_slot]) {
      if (arc.to == sink && arc.cap > 0) free_level = true;
    }
    if (!free_level) add_level(s);
  }

  // Decompose the group -> slot flows into per-job assignments.
  SlotOptimum out;
  gi = 0;
  for (const auto& [set, members] : groups) {
    std::size_t next = 0;
    for (const Arc& arc : g[group0 + gi]) {
      if (arc.to < slot0 || arc.to >= g.size()) continue;
      const std::int64_t flow = g[arc.to][arc.rev].cap;
      for (std::int64_t f = 0; f < flow; ++f) {
        out.assignment[instance.jobs[members[next++]].id] = slots[arc.to - slot0];
      }
    }
    ++gi;
  }
  out.cost = slot_assignment_cost(instance, out.assignment);
  return out;
}

}  // namespace gridsched::exact
