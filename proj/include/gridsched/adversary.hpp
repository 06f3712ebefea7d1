#pragma once

// Adaptive adversaries. Lambda forces any online algorithm for unit-height
// jobs to stack every job on the previous one; the greedy adversary drives
// the min-load greedy rule on slot-set jobs to ratio close to 3.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridsched/core.hpp"
#include "gridsched/online.hpp"
#include "gridsched/slot_model.hpp"

namespace gridsched::adversary {

struct TranscriptEntry {
  Job job;
  Time start = 0;
  Time end = 0;
};

struct AdversaryTranscript {
  std::string algorithm;
  double alpha = 2.0;
  std::int64_t x = 0;
  std::vector<TranscriptEntry> entries;  ///< release order
  double alg_cost = 0.0;
  double last_interval_cost = 0.0;  ///< algorithm's cost over the last job's execution interval
  double opt_bound = 0.0;           ///< x * 3^floor(alpha)
  double opt_cost = 0.0;            ///< cost of lambda_opt_schedule
  double ratio = 0.0;               ///< alg_cost / opt_bound
  double lower_bound = 0.0;         ///< (log2(wmax / wmin) / 3)^alpha

  Instance instance() const;
  Schedule schedule() const;
};

/// Widths J_1..J_{floor(alpha)+1}: ..., 3(3x+1)+1, 3x+1, x, x-1.
std::vector<std::int64_t> lambda_widths(double alpha, std::int64_t x);

/// Runs Lambda interactively against the policy. J_1 is released at 0 with
/// window [0, 3 w_1); J_i for i >= 2 is revealed at st(J_{i-1}) + 1 with
/// deadline et(J_{i-1}). Throws AlgorithmStalled if the policy never starts
/// a job it has been given.
AdversaryTranscript adversary_lambda(online::Policy& policy, double alpha, std::int64_t x,
                                     const std::string& algorithm_name = "custom");
AdversaryTranscript adversary_lambda(online::Algorithm algorithm, double alpha, std::int64_t x,
                                     const online::Options& options = {});

struct LambdaOpt {
  Schedule schedule;
  double cost = 0.0;
};

/// Non-overlapping offline schedule: each J_i goes to the side of
/// I(J_i) \ I(J_{i+1}) with room for it; the last job starts at its release.
LambdaOpt lambda_opt_schedule(const AdversaryTranscript& transcript);

struct GreedyRun {
  int k = 0;
  SlotSetInstance instance;
  SlotAssignment greedy_assignment;
  double greedy_cost = 0.0;
  double opt_cost = 0.0;  ///< exact slot-set optimum
  double expected_greedy_cost = 0.0;
  double expected_opt_cost = 0.0;
  double ratio = 0.0;  ///< greedy_cost / opt_cost
};

/// sum_{i=1}^{k-2} i^alpha 2^{k-i-1} + 2 k^alpha; equals 3 * 2^k - 4 at alpha = 2.
double expected_greedy_cost(int k, double alpha);

/// k rounds; round i < k releases 2^{k-i} jobs, the last round two. Round 1
/// allows slots 1..2^k, later rounds the slots greedy used in the round before.
GreedyRun greedy_adversary(int k, double alpha = 2.0);

nlohmann::json to_json(const AdversaryTranscript& t);
nlohmann::json to_json(const GreedyRun& run);

}  // namespace gridsched::adversary
