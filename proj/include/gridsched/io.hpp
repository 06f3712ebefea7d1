#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gridsched/core.hpp"
#include "gridsched/slot_model.hpp"

namespace gridsched::io {

using nlohmann::json;

// Instance:  { "alpha": number, "jobs": [ { "id", "release", "deadline", "width", "height" } ] }
// Schedule:  { "assignments": { "<id>": start } }
// Slot-set:  { "alpha": number, "jobs": [ { "id", "slots": [int, ...] } ] }

json to_json(const Instance& instance);
Instance instance_from_json(const json& j);

json to_json(const Schedule& schedule);
Schedule schedule_from_json(const json& j);

json to_json(const SlotSetInstance& instance);
SlotSetInstance slot_instance_from_json(const json& j);

json to_json(const LoadProfile& profile);

/// Throws Error(Parse) on unreadable files or malformed JSON.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace gridsched::io
