#pragma once

#include <string>

#include <json.hpp>

#include "mmwsched/scheduler.hpp"

namespace mmw {

nlohmann::json schedule_to_json(const ScheduleMap& schedule);

/// Inverse of schedule_to_json. Throws ConfigError on malformed input.
ScheduleMap schedule_from_json(const nlohmann::json& doc);

/// Fixed-width text chart, one row per group. The bar spans the whole
/// transmission period in at most `width` columns; members are listed after
/// it as f<flow>.<hop>@<offset>+<slots>.
std::string render_gantt(const ScheduleMap& schedule, int width = 80);

}  // namespace mmw
