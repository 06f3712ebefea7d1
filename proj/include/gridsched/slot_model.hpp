#pragma once

// Unit jobs whose feasible timeslots form an arbitrary (non-contiguous) set.
// Only the greedy rule, its adversary and the slot-set exact solvers use it.

#include <map>
#include <string>
#include <vector>

#include "gridsched/core.hpp"

namespace gridsched {

struct SlotJob {
  std::string id;
  std::vector<Time> slots;  ///< sorted, distinct
};

struct SlotSetInstance {
  std::vector<SlotJob> jobs;  ///< arrival order
  double alpha = 2.0;
};

/// Job id -> chosen slot.
using SlotAssignment = std::map<std::string, Time>;

/// Cost of an assignment: sum over slots of load^alpha (unit heights).
double slot_assignment_cost(const SlotSetInstance& instance, const SlotAssignment& assignment);

/// Throws InvalidInstance on empty slot sets, duplicate ids or alpha <= 1.
void check_slot_instance(const SlotSetInstance& instance);

}  // namespace gridsched
