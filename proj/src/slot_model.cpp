#include "gridsched/slot_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gridsched {

double slot_assignment_cost(const SlotSetInstance& instance, const SlotAssignment& assignment) {
  std::map<Time, std::int64_t> load;
  for (const auto& [id, slot] : assignment) ++load[slot];
  double total = 0.0;
  for (const auto& [slot, l] : load) total += std::pow(static_cast<double>(l), instance.alpha);
  return total;
}

void check_slot_instance(const SlotSetInstance& instance) {
  if (!(instance.alpha > 1.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must be > 1");
  std::set<std::string> ids;
  for (const auto& job : instance.jobs) {
    if (job.slots.empty()) throw Error(ErrorCode::InvalidInstance, "job " + job.id + " has no feasible slot");
    if (!std::is_sorted(job.slots.begin(), job.slots.end()) ||
        std::adjacent_find(job.slots.begin(), job.slots.end()) != job.slots.end()) {
      throw Error(ErrorCode::InvalidInstance, "job " + job.id + ": slots must be sorted and distinct");
    }
    if (!ids.insert(job.id).second) throw Error(ErrorCode::InvalidInstance, "duplicate job id " + job.id);
  }
}

}  // namespace gridsched
