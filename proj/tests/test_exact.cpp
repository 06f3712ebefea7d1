#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridsched/error.hpp"
#include "gridsched/exact.hpp"
#include "gridsched/harness.hpp"

using namespace gridsched;
using namespace gridsched::exact;

namespace {

Instance remark() { return Instance({{"J1", 0, 3, 3, 1}, {"J2", 1, 2, 1, 1}}, 2.0); }
Instance min_max() { return Instance({{"J1", 0, 4, 4, 1}, {"J2", 4, 5, 1, 3}, {"J3", 0, 8, 4, 1}}, 2.0); }

std::vector<std::string> ids(const std::vector<std::string>& v) {
  std::vector<std::string> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(DecompositionE, DisjointGroups) {
  const Instance inst({{"A", 0, 4, 1, 1}, {"B", 1, 3, 1, 1}, {"C", 5, 7, 1, 1}}, 2.0);
  const WindowDecomposition d = window_decomposition_e(inst);
  EXPECT_EQ(d.boundaries, (std::vector<Time>{0, 5, 7}));
  ASSERT_EQ(d.clique_jobs.size(), 2u);
  EXPECT_EQ(ids(d.clique_jobs[0]), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(ids(d.clique_jobs[1]), (std::vector<std::string>{"C"}));
  EXPECT_EQ(d.max_clique(), 2u);
}

TEST(DecompositionE, Chain) {
  const Instance inst({{"A", 0, 3, 1, 1}, {"B", 2, 5, 1, 1}, {"C", 4, 7, 1, 1}}, 2.0);
  const WindowDecomposition d = window_decomposition_e(inst);
  EXPECT_EQ(d.boundaries, (std::vector<Time>{0, 4, 7}));
  EXPECT_EQ(d.windows(), 2u);
}

TEST(DecompositionE, SingleAndEmpty) {
  const WindowDecomposition d = window_decomposition_e(Instance({{"A", 2, 6, 1, 1}}, 2.0));
  EXPECT_EQ(d.boundaries, (std::vector<Time>{2, 6}));
  EXPECT_THROW(window_decomposition_e(Instance({}, 2.0)), Error);
  EXPECT_THROW(window_decomposition_eplus(Instance({}, 2.0)), Error);
}

TEST(DecompositionEPlus, Boundaries) {
  const Instance inst({{"A", 0, 4, 1, 1}, {"B", 1, 3, 1, 1}}, 2.0);
  EXPECT_EQ(window_decomposition_eplus(inst).boundaries, (std::vector<Time>{0, 1, 3, 4}));
  EXPECT_EQ(window_decomposition_eplus(Instance({{"A", 2, 6, 1, 1}}, 2.0)).boundaries, (std::vector<Time>{2, 6}));
}

TEST(DecompositionEPlus, RefinesE) {
  harness::GeneratorSpec spec;
  spec.seed = 2;
  spec.count = 200;
  spec.n = 6;
  for (const auto& inst : harness::generate(spec)) {
    const auto e = window_decomposition_e(inst).boundaries;
    const auto ep = window_decomposition_eplus(inst).boundaries;
    for (Time b : e) EXPECT_TRUE(std::binary_search(ep.begin(), ep.end(), b)) << b;
  }
}

TEST(DecompositionE, CliquesPairwiseIntersect) {
  harness::GeneratorSpec spec;
  spec.seed = 17;
  spec.count = 200;
  spec.n = 6;
  for (const auto& inst : harness::generate(spec)) {
    const WindowDecomposition d = window_decomposition_e(inst);
    for (std::size_t i = 0; i + 1 < d.boundaries.size(); ++i) {
      EXPECT_LT(d.boundaries[i], d.boundaries[i + 1]);
    }
    EXPECT_EQ(d.boundaries.back(), inst.horizon());
  }
}

TEST(Configurations, InvalidRules) {
  const Job j{"a", 2, 9, 3, 1};
  // Window [4, 7): starting before the release is invalid.
  EXPECT_NE(invalid_rule(Job{"a", 5, 9, 2, 1}, Config{4, 6}, 4, 7), 0);
  EXPECT_EQ(invalid_rule(j, Config{4, 7}, 4, 7), 0);
  EXPECT_NE(invalid_rule(j, Config{4, 6}, 4, 7), 0);  // length disagrees with width
  for (const Config& c : list_configurations(j, 4, 7, false)) EXPECT_EQ(invalid_rule(j, c, 4, 7, false), 0);
  for (const Config& c : list_configurations(j, 4, 7, true)) EXPECT_LE(c.et, 7);
}

TEST(AlgE, WorkedValues) {
  EXPECT_NEAR(alg_e(remark()).cost, 6.0, 1e-9);
  EXPECT_NEAR(alg_eplus(remark()).cost, 6.0, 1e-9);
  EXPECT_NEAR(brute_force(remark()).cost, 6.0, 1e-9);

  const ExactResult mm = alg_eplus(min_max());
  EXPECT_NEAR(mm.cost, std::pow(4.0, 2.0) + std::pow(2.0, 3.0) - 1, 1e-9);
  EXPECT_EQ(*mm.schedule.start_of("J3"), 4);
  EXPECT_NEAR(alg_e(min_max()).cost, 23.0, 1e-9);
  EXPECT_NEAR(brute_force(min_max()).cost, 23.0, 1e-9);
}

TEST(AlgE, SingleJobLexicographic) {
  const Instance one({{"a", 2, 9, 3, 2}}, 2.0);
  for (const ExactResult& r : {alg_e(one), alg_eplus(one), brute_force(one)}) {
    EXPECT_NEAR(r.cost, 3 * 4.0, 1e-9);
    EXPECT_EQ(*r.schedule.start_of("a"), 2);
  }
}

TEST(AlgUnit, Examples) {
  const Instance one({{"a", 0, 3, 1, 3}}, 2.0);
  EXPECT_NEAR(alg_unit_exact(one).cost, 9.0, 1e-9);
  const Instance two({{"a", 0, 2, 1, 2}, {"b", 0, 2, 1, 2}}, 2.0);
  const ExactResult r = alg_unit_exact(two);
  EXPECT_NEAR(r.cost, 8.0, 1e-9);
  EXPECT_NE(*r.schedule.start_of("a"), *r.schedule.start_of("b"));
  try {
    alg_unit_exact(remark());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitWidth);
  }
}

TEST(AlgE, MatchesBruteForce) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    harness::GeneratorSpec spec;
    spec.seed = 100;
    spec.count = 70;
    spec.n = 6;
    spec.tau = 10;
    spec.width_max = 4;
    spec.height_max = 3;
    spec.alpha = alpha;
    for (const auto& inst : harness::generate(spec)) {
      const double bf = brute_force(inst).cost;
      const ExactResult e = alg_e(inst);
      const ExactResult ep = alg_eplus(inst);
      EXPECT_TRUE(eq_tol(e.cost, bf)) << e.cost << " vs " << bf;
      EXPECT_TRUE(eq_tol(ep.cost, bf)) << ep.cost << " vs " << bf;
      EXPECT_TRUE(validate_schedule(inst, e.schedule).empty());
      EXPECT_TRUE(validate_schedule(inst, ep.schedule).empty());
      EXPECT_TRUE(eq_tol(schedule_cost(inst, e.schedule), e.cost));
    }
  }
}

TEST(AlgUnit, MatchesBruteForce) {
  harness::GeneratorSpec spec;
  spec.seed = 33;
  spec.count = 200;
  spec.n = 6;
  spec.tau = 8;
  spec.constraint = harness::Constraint::UnitWidth;
  for (const auto& inst : harness::generate(spec)) {
    EXPECT_TRUE(eq_tol(alg_unit_exact(inst).cost, brute_force(inst).cost));
  }
}

TEST(FilterTable, TableSizeBound) {
  harness::GeneratorSpec spec;
  spec.seed = 44;
  spec.count = 150;
  spec.n = 6;
  spec.tau = 10;
  spec.width_max = 3;
  for (const auto& inst : harness::generate(spec)) {
    const ExactResult r = alg_e(inst);
    const double bound = std::pow(static_cast<double>(r.stats.max_width + 1), static_cast<double>(r.stats.max_clique));
    for (const auto& st : r.stats.stages) EXPECT_LE(static_cast<double>(st.filtered), bound);
  }
}

TEST(FilterTable, RandomTieBreakKeepsCost) {
  harness::GeneratorSpec spec;
  spec.seed = 55;
  spec.count = 100;
  spec.n = 5;
  spec.tau = 8;
  spec.width_max = 3;
  spec.height_min = 1;
  spec.height_max = 1;
  for (const auto& inst : harness::generate(spec)) {
    const double base = alg_e(inst).cost;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      DpOptions o;
      o.tie_seed = seed;
      const ExactResult r = alg_e(inst, window_decomposition_e(inst), o);
      EXPECT_TRUE(eq_tol(r.cost, base));
      EXPECT_TRUE(validate_schedule(inst, r.schedule).empty());
    }
  }
}

TEST(AlgE, Deterministic) {
  harness::GeneratorSpec spec;
  spec.seed = 66;
  spec.count = 30;
  for (const auto& inst : harness::generate(spec)) {
    EXPECT_EQ(alg_e(inst).schedule, alg_e(inst).schedule);
    EXPECT_EQ(alg_eplus(inst).schedule, alg_eplus(inst).schedule);
  }
}

TEST(BruteForce, TooLarge) {
  std::vector<Job> jobs;
  for (int i = 0; i < 8; ++i) jobs.push_back({"j" + std::to_string(i), 0, 50, 1, 1});
  try {
    brute_force(Instance(jobs, 2.0), 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(SlotSet, OptimumMatchesBruteForce) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    SlotSetInstance inst;
    inst.alpha = rep % 2 ? 2.0 : 3.0;
    for (int i = 0; i < 6; ++i) {
      std::set<Time> slots;
      const int k = 1 + static_cast<int>(rng() % 3);
      while (static_cast<int>(slots.size()) < k) slots.insert(static_cast<Time>(rng() % 5));
      inst.jobs.push_back({"s" + std::to_string(i), {slots.begin(), slots.end()}});
    }
    const SlotOptimum a = slot_set_optimum(inst);
    const SlotOptimum b = slot_set_brute_force(inst);
    EXPECT_TRUE(eq_tol(a.cost, b.cost)) << a.cost << " vs " << b.cost;
    EXPECT_TRUE(eq_tol(slot_assignment_cost(inst, a.assignment), a.cost));
  }
}
