#include "mmwsched/schedule_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mmw {

using nlohmann::json;

json schedule_to_json(const ScheduleMap& schedule) {
  json groups = json::array();
  for (const auto& g : schedule.groups) {
    json placements = json::array();
    for (const auto& p : g.placements)
      placements.push_back({{"flow", p.hop.flow_id},
                            {"hop", p.hop.hop_index},
                            {"tx", p.hop.tx},
                            {"rx", p.hop.rx},
                            {"offset", p.offset},
                            {"slots", p.hop.slots}});
    groups.push_back({{"index", g.index},
                      {"start_slot", g.start_slot},
                      {"size_slots", g.size_slots},
                      {"placements", std::move(placements)}});
  }
  return {{"maxslots", schedule.maxslots},
          {"consumed_slots", schedule.consumed_slots},
          {"groups", std::move(groups)}};
}

ScheduleMap schedule_from_json(const json& doc) {
  try {
    ScheduleMap s;
    s.maxslots = doc.at("maxslots").get<int>();
    s.consumed_slots = doc.at("consumed_slots").get<int>();
    for (const auto& jg : doc.at("groups")) {
      Group g;
      g.index = jg.at("index").get<int>();
      g.start_slot = jg.at("start_slot").get<int>();
      g.size_slots = jg.at("size_slots").get<int>();
      for (const auto& jp : jg.at("placements")) {
        Placement p;
        p.hop.flow_id = jp.at("flow").get<int>();
        p.hop.hop_index = jp.at("hop").get<int>();
        p.hop.tx = jp.at("tx").get<int>();
        p.hop.rx = jp.at("rx").get<int>();
        p.hop.slots = jp.at("slots").get<int>();
        p.offset = jp.at("offset").get<int>();
        g.placements.push_back(p);
      }
      s.groups.push_back(std::move(g));
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schedule json: ") + e.what());
  }
}

std::string render_gantt(const ScheduleMap& schedule, int width) {
  width = std::max(width, 10);
  const int span = std::max(schedule.consumed_slots, 1);
  const double per_col = std::max(1.0, static_cast<double>(span) / width);
  const int cols = static_cast<int>(std::ceil(span / per_col));
  char buf[96];
  std::snprintf(buf, sizeof buf, "consumed %d/%d slots, %.3g slots per column\n",
                schedule.consumed_slots, schedule.maxslots, per_col);
  std::string out = buf;
  // '-' is idle time inside the group, '#' has at least one hop on air
  for (const auto& g : schedule.groups) {
    std::string row(cols, ' ');
    for (int c = 0; c < cols; ++c) {
      const double lo = c * per_col, hi = lo + per_col;
      const int a = g.start_slot, b = g.start_slot + g.size_slots;
      if (!(lo < b && a < hi)) continue;
      row[c] = '-';
      for (const auto& p : g.placements)
        if (lo < a + p.end() && a + p.offset < hi) row[c] = '#';
    }
    std::snprintf(buf, sizeof buf, "G%-3d %5d+%-4d|", g.index, g.start_slot, g.size_slots);
    out += buf + row + "|";
    for (const auto& p : g.placements) {
      std::snprintf(buf, sizeof buf, " f%d.%d@%d+%d", p.hop.flow_id, p.hop.hop_index,
                    p.offset, p.hop.slots);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mmw
