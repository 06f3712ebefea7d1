#include <gtest/gtest.h>

#include <cmath>

#include "gridsched/adversary.hpp"
#include "gridsched/error.hpp"
#include "gridsched/exact.hpp"

using namespace gridsched;
using namespace gridsched::adversary;

TEST(LambdaWidths, Recurrence) {
  EXPECT_EQ(lambda_widths(2.0, 10), (std::vector<std::int64_t>{31, 10, 9}));
  EXPECT_EQ(lambda_widths(1.5, 10), (std::vector<std::int64_t>{10, 9}));
  EXPECT_EQ(lambda_widths(3.0, 10), (std::vector<std::int64_t>{94, 31, 10, 9}));
  EXPECT_THROW(lambda_widths(2.0, 1), Error);
  EXPECT_THROW(lambda_widths(1.0, 10), Error);
}

TEST(Lambda, StacksEveryJob) {
  const AdversaryTranscript t = adversary_lambda(online::Algorithm::General, 2.0, 10);
  ASSERT_EQ(t.entries.size(), 3u);
  EXPECT_EQ(t.entries[0].job.release, 0);
  EXPECT_EQ(t.entries[0].job.deadline, 93);
  for (std::size_t i = 1; i < t.entries.size(); ++i) {
    const auto& prev = t.entries[i - 1];
    const auto& cur = t.entries[i];
    EXPECT_EQ(cur.job.release, prev.start + 1);
    EXPECT_EQ(cur.job.deadline, prev.end);
    EXPECT_GE(cur.start, cur.job.release);
    EXPECT_LE(cur.end, cur.job.deadline);
  }
  EXPECT_TRUE(validate_schedule(t.instance(), t.schedule()).empty());
}

TEST(LambdaOpt, SumOfWidths) {
  AdversaryTranscript t = adversary_lambda(online::Algorithm::General, 2.0, 10);
  LambdaOpt o = lambda_opt_schedule(t);
  EXPECT_NEAR(o.cost, 50.0, 1e-9);
  EXPECT_LE(o.cost, 90.0);
  EXPECT_TRUE(validate_schedule(t.instance(), o.schedule).empty());
  EXPECT_NEAR(exact::brute_force(t.instance()).cost, o.cost, 1e-9);

  t = adversary_lambda(online::Algorithm::General, 1.5, 10);
  o = lambda_opt_schedule(t);
  EXPECT_NEAR(o.cost, 19.0, 1e-9);
  EXPECT_LE(o.cost, 30.0);
}

TEST(Lambda, RatioAboveLowerBound) {
  const AdversaryTranscript t = adversary_lambda(online::Algorithm::General, 2.0, 100);
  EXPECT_EQ(t.opt_bound, 900.0);
  EXPECT_NEAR(t.opt_cost, 500.0, 1e-9);
  EXPECT_NEAR(t.lower_bound, std::pow(std::log2(301.0 / 99.0) / 3.0, 2.0), 1e-12);
  EXPECT_GE(t.ratio, t.lower_bound);
}

TEST(Lambda, RestrictedPoliciesRejectWideJobs) {
  // Lambda releases jobs of several widths; policies for narrower classes
  // refuse them as they arrive.
  for (auto a : {online::Algorithm::V, online::Algorithm::UU, online::Algorithm::UV}) {
    try {
      adversary_lambda(a, 2.0, 10);
      ADD_FAILURE() << online::to_string(a);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InputClassViolation) << e.what();
    }
  }
}

TEST(Greedy, ExpectedCost) {
  EXPECT_NEAR(expected_greedy_cost(2, 2.0), 8.0, 1e-12);
  EXPECT_NEAR(expected_greedy_cost(3, 2.0), 20.0, 1e-12);
  for (int k = 2; k <= 12; ++k) EXPECT_NEAR(expected_greedy_cost(k, 2.0), 3.0 * std::ldexp(1.0, k) - 4, 1e-9);
}

TEST(Greedy, SmallRounds) {
  GreedyRun r = greedy_adversary(2);
  EXPECT_DOUBLE_EQ(r.greedy_cost, 8.0);
  EXPECT_DOUBLE_EQ(r.opt_cost, 4.0);
  r = greedy_adversary(3);
  EXPECT_DOUBLE_EQ(r.greedy_cost, 20.0);
  EXPECT_DOUBLE_EQ(r.opt_cost, 8.0);
  EXPECT_NEAR(exact::slot_set_brute_force(r.instance).cost, 8.0, 1e-9);
}

TEST(Greedy, TenRounds) {
  const GreedyRun r = greedy_adversary(10);
  EXPECT_DOUBLE_EQ(r.greedy_cost, 3068.0);
  EXPECT_DOUBLE_EQ(r.opt_cost, 1024.0);
  EXPECT_GE(r.ratio, 2.99);
  EXPECT_NEAR(r.greedy_cost, r.expected_greedy_cost, 1e-9);
}

TEST(Greedy, Limits) {
  EXPECT_THROW(greedy_adversary(1), Error);
  EXPECT_THROW(greedy_adversary(25), Error);
}

TEST(Json, Transcript) {
  const auto j = to_json(adversary_lambda(online::Algorithm::General, 2.0, 10));
  EXPECT_EQ(j.at("type"), "lambda");
  EXPECT_EQ(j.at("jobs").size(), 3u);
  const auto g = to_json(greedy_adversary(3));
  EXPECT_EQ(g.at("greedy_cost").get<double>(), 20.0);
}
