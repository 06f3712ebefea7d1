#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridsched/error.hpp"
#include "gridsched/transforms.hpp"

using namespace gridsched;
using namespace gridsched::transforms;

TEST(Tight, Boundary) {
  EXPECT_TRUE(is_tight(Job{"a", 3, 7, 2, 1}, 2));
  EXPECT_FALSE(is_tight(Job{"a", 3, 8, 2, 1}, 2));
}

TEST(AlignFi, Examples) {
  AlignedJob a = align_fi(Job{"a", 3, 12, 2, 1});
  EXPECT_EQ(a.release, 4);
  EXPECT_EQ(a.deadline, 12);
  a = align_fi(Job{"a", 3, 9, 2, 1});
  EXPECT_EQ(a.release, 4);
  EXPECT_EQ(a.deadline, 8);
  a = align_fi(Job{"a", 0, 8, 2, 1});
  EXPECT_EQ(a.release, 0);
  EXPECT_EQ(a.deadline, 8);
  a = align_fi(Job{"a", 1, 8, 3, 1});
  EXPECT_EQ(a.release, 3);
  EXPECT_EQ(a.deadline, 6);
  EXPECT_GT(3.0, 7.0 / 3.0);
}

TEST(AlignFi, Errors) {
  try {
    align_fi(Job{"a", 3, 7, 2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotLoose);
  }
  const std::vector<Job> mixed{{"a", 0, 10, 2, 1}, {"b", 0, 10, 3, 1}};
  EXPECT_THROW(align_fi(mixed), Error);
}

TEST(AlignFi, IntervalProperties) {
  for (std::int64_t w = 1; w <= 4; ++w) {
    for (Time r = 0; r < 10; ++r) {
      for (Time d = r + 2 * w + 1; d < r + 20; ++d) {
        const AlignedJob a = align_fi(Job{"a", r, d, w, 1});
        EXPECT_GE(a.release, r);
        EXPECT_LE(a.deadline, d);
        EXPECT_GE(a.deadline - a.release, w);
        EXPECT_GT(3 * (a.deadline - a.release), d - r);
        EXPECT_EQ(a.release % w, 0);
        EXPECT_EQ(a.deadline % w, 0);
      }
    }
  }
}

TEST(AlignSch, RoundsAndClamps) {
  const std::vector<AlignedJob> aligned{AlignedJob{"a", 0, 8, 2, 1}, AlignedJob{"b", 0, 8, 2, 1}};
  Schedule s;
  s.assign("a", 3);
  s.assign("b", 7);
  const Schedule out = align_sch(aligned, s);
  EXPECT_EQ(*out.start_of("a"), 4);
  EXPECT_EQ(*out.start_of("b"), 6);
  EXPECT_EQ(free_sch(out), out);
}

TEST(AlignSch, RandomCostBound) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 3);
    std::vector<Job> jobs;
    Schedule s;
    for (int i = 0; i < 5; ++i) {
      const Time r = static_cast<Time>(rng() % 6);
      const Time d = r + 2 * w + 1 + static_cast<Time>(rng() % 6);
      const std::string id = "j" + std::to_string(i);
      jobs.push_back({id, r, d, w, 1 + static_cast<std::int64_t>(rng() % 2)});
      s.assign(id, r + static_cast<Time>(rng() % static_cast<std::uint64_t>(d - w - r + 1)));
    }
    const auto aligned = align_fi(jobs);
    const Schedule a = align_sch(aligned, s);
    const Instance orig(jobs, 2.0);
    const Instance al(as_jobs(aligned), 2.0);
    ASSERT_TRUE(validate_schedule(al, a).empty());
    const Schedule back = free_sch(a);
    ASSERT_TRUE(validate_schedule(orig, back).empty());
    EXPECT_LE(schedule_cost(al, a), std::pow(3.0, 2.0) * schedule_cost(orig, s) * (1 + 1e-9));
    EXPECT_NEAR(schedule_cost(orig, back), schedule_cost(al, a), 1e-9);
  }
}

TEST(Convert, Examples) {
  NiceJob n = convert(Job{"a", 0, 10, 3, 1});
  EXPECT_EQ(n.width, 4);
  EXPECT_EQ(n.release, 0);
  EXPECT_EQ(n.deadline, 10);
  EXPECT_EQ(n.cls, 2);
  EXPECT_EQ(n.original_width, 3);

  n = convert(Job{"a", 0, 3, 3, 1});
  EXPECT_EQ(n.width, 4);
  EXPECT_EQ(n.deadline, 4);
  EXPECT_EQ(n.as_job().density(), Rational(1));

  n = convert(Job{"a", 1, 9, 4, 2});
  EXPECT_EQ(n.width, 4);
  EXPECT_EQ(n.deadline, 9);
}

TEST(Convert, GrownIntervalsHaveDenseOriginals) {
  for (std::int64_t w = 1; w <= 9; ++w) {
    for (Time span = w; span < 20; ++span) {
      const Job j{"a", 2, 2 + span, w, 1};
      const NiceJob n = convert(j);
      EXPECT_LE(n.release, j.release);
      EXPECT_GE(n.deadline, j.deadline);
      if (n.deadline > j.deadline) {
        EXPECT_GT(j.density(), Rational(1, 2));
        EXPECT_EQ(n.as_job().density(), Rational(1));
      }
    }
  }
}

TEST(RelaxSch, Examples) {
  const std::vector<NiceJob> nice{convert(Job{"a", 0, 10, 3, 1})};
  Schedule s;
  s.assign("a", 2);
  EXPECT_EQ(*relax_sch(nice, s).start_of("a"), 2);
  s.assign("a", 7);
  EXPECT_EQ(*relax_sch(nice, s).start_of("a"), 6);
}

TEST(ShrinkSch, KeepsStarts) {
  const Job j{"a", 4, 8, 3, 1};
  const NiceJob n = convert(j);
  Schedule s;
  s.assign("a", 4);
  const Schedule out = shrink_sch(s);
  EXPECT_EQ(*out.start_of("a"), 4);
  EXPECT_TRUE(validate_schedule(Instance({j}, 2.0), out).empty());
  EXPECT_TRUE(validate_schedule(Instance({n.as_job()}, 2.0), s).empty());
}

TEST(RelaxShrink, RandomCostAndLoad) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Job> jobs;
    Schedule s;
    for (int i = 0; i < 5; ++i) {
      const std::int64_t w = 5 + static_cast<std::int64_t>(rng() % 4);  // class 3
      const Time r = static_cast<Time>(rng() % 6);
      const Time d = r + w + static_cast<Time>(rng() % 8);
      const std::string id = "j" + std::to_string(i);
      jobs.push_back({id, r, d, w, 1});
      s.assign(id, r + static_cast<Time>(rng() % static_cast<std::uint64_t>(d - w - r + 1)));
    }
    const auto nice = convert(jobs);
    const Schedule relaxed = relax_sch(nice, s);
    const Instance orig(jobs, 2.0);
    const Instance ni(as_jobs(nice), 2.0);
    ASSERT_TRUE(validate_schedule(ni, relaxed).empty());
    EXPECT_LE(schedule_cost(ni, relaxed), 9.0 * schedule_cost(orig, s) * (1 + 1e-9));

    const LoadProfile before = load_profile(orig, s);
    const LoadProfile after = load_profile(ni, relaxed);
    const Time delta = 3;  // 2^(p-1) - 1 for p = 3
    for (Time t = 0; t < ni.horizon(); ++t) {
      EXPECT_LE(after.at(t), before.at(t) + before.at(t - delta) + before.at(t + delta) + 1e-9);
    }

    const Schedule shrunk = shrink_sch(relaxed);
    ASSERT_TRUE(validate_schedule(orig, shrunk).empty());
    EXPECT_LE(schedule_cost(orig, shrunk), schedule_cost(ni, relaxed) * (1 + 1e-9));
  }
}
