#include "gridsched/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gridsched::io {

namespace {

template <typename T>
T field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("field '") + key + "': " + e.what());
  }
}

std::int64_t int_field(const json& obj, const char* key) {
  const auto& v = obj.contains(key) ? obj.at(key) : json();
  if (!v.is_number_integer()) throw Error(ErrorCode::Parse, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

json to_json(const Instance& instance) {
  json jobs = json::array();
  for (const auto& j : instance.jobs()) {
    jobs.push_back({{"id", j.id}, {"release", j.release}, {"deadline", j.deadline}, {"width", j.width}, {"height", j.height}});
  }
  return {{"alpha", instance.alpha()}, {"jobs", std::move(jobs)}};
}

Instance instance_from_json(const json& j) {
  const double alpha = field<double>(j, "alpha");
  const auto& arr = j.contains("jobs") ? j.at("jobs") : json();
  if (!arr.is_array()) throw Error(ErrorCode::Parse, "field 'jobs' must be an array");
  std::vector<Job> jobs;
  jobs.reserve(arr.size());
  for (const auto& o : arr) {
    Job job;
    job.id = field<std::string>(o, "id");
    job.release = int_field(o, "release");
    job.deadline = int_field(o, "deadline");
    job.width = int_field(o, "width");
    job.height = int_field(o, "height");
    jobs.push_back(std::move(job));
  }
  return Instance(std::move(jobs), alpha);
}

json to_json(const Schedule& schedule) {
  json a = json::object();
  for (const auto& [id, st] : schedule.assignments) a[id] = st;
  return {{"assignments", std::move(a)}};
}

Schedule schedule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("assignments") || !j.at("assignments").is_object()) {
    throw Error(ErrorCode::Parse, "schedule must be an object with an 'assignments' object");
  }
  Schedule s;
  for (const auto& [id, v] : j.at("assignments").items()) {
    if (!v.is_number_integer()) throw Error(ErrorCode::Parse, "start of job " + id + " must be an integer");
    s.assign(id, v.get<Time>());
  }
  return s;
}

json to_json(const SlotSetInstance& instance) {
  json jobs = json::array();
  for (const auto& j : instance.jobs) jobs.push_back({{"id", j.id}, {"slots", j.slots}});
  return {{"alpha", instance.alpha}, {"jobs", std::move(jobs)}};
}

SlotSetInstance slot_instance_from_json(const json& j) {
  SlotSetInstance out;
  out.alpha = field<double>(j, "alpha");
  const auto& arr = j.contains("jobs") ? j.at("jobs") : json();
  if (!arr.is_array()) throw Error(ErrorCode::Parse, "field 'jobs' must be an array");
  for (const auto& o : arr) {
    SlotJob job;
    job.id = field<std::string>(o, "id");
    job.slots = field<std::vector<Time>>(o, "slots");
    out.jobs.push_back(std::move(job));
  }
  check_slot_instance(out);
  return out;
}

json to_json(const LoadProfile& profile) { return profile.loads; }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace gridsched::io
