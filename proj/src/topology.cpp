#include "mmwsched/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "mmwsched/rng.hpp"

namespace mmw {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double Room::diagonal() const { return std::hypot(width, height); }

bool Room::contains(Point p) const {
  return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

const Node& Topology::node(NodeId id) const { return nodes.at(id); }
Node& Topology::node(NodeId id) { return nodes.at(id); }

std::vector<Point> Topology::positions() const {
  std::vector<Point> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.position);
  return out;
}

Topology generate_topology(int node_count, Room room, std::uint64_t seed) {
  if (node_count < 2) throw ConfigError("node_count must be at least 2");
  if (!(room.width > 0.0) || !(room.height > 0.0))
    throw ConfigError("room dimensions must be positive");
  RandomStream rng(seed, "topology");
  Topology topo;
  topo.room = room;
  topo.nodes.reserve(node_count);
  for (int id = 0; id < node_count; ++id) {
    const double x = rng.uniform(0.0, room.width);
    const double y = rng.uniform(0.0, room.height);
    topo.nodes.push_back(Node{id, {x, y}, 0});
  }
  return topo;
}

double link_weight(const Node& i, const Node& j, double d_norm, double f_norm) {
  const double d = distance(i.position, j.position);
  return d * d / (d_norm * d_norm) + j.workload / f_norm;
}

double aligned_link_rate(Point a, Point b, const RadioParams& radio,
                         const AntennaConfig& antenna) {
  return link_rate(distance(a, b), radio, antenna.mainlobe_gain,
                   antenna.mainlobe_gain);
}

int direct_slots_for(const FlowRequest& request, const Topology& topo,
                     const RadioParams& radio, const AntennaConfig& antenna) {
  const double rate =
      aligned_link_rate(topo.node(request.source).position,
                        topo.node(request.destination).position, radio, antenna);
  return slots_required(request.payload_bits, rate, radio.slot_duration_s);
}

std::vector<NodeId> min_weight_path(NodeId from, NodeId to,
                                    const Topology& topo) {
  const std::size_t n = topo.nodes.size();
  const double d_norm = topo.room.diagonal();
  int max_load = 0;
  for (const auto& node : topo.nodes) max_load = std::max(max_load, node.workload);
  const double f_norm = max_load > 0 ? max_load : 1.0;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<NodeId> prev(n, -1);
  std::vector<bool> done(n, false);
  dist[from] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    NodeId u = -1;
    for (std::size_t k = 0; k < n; ++k) {
      if (!done[k] && (u < 0 || dist[k] < dist[u])) u = static_cast<NodeId>(k);
    }
    if (u < 0 || dist[u] == kInf) break;
    done[u] = true;
    if (u == to) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double w =
          dist[u] + link_weight(topo.nodes[u], topo.nodes[v], d_norm, f_norm);
      if (w < dist[v]) {
        dist[v] = w;
        prev[v] = u;
      }
    }
  }
  if (dist[to] == kInf) throw UnreachableLink("no path to destination");

  std::vector<NodeId> path;
  for (NodeId v = to; v != -1; v = prev[v]) path.push_back(v);
  return {path.rbegin(), path.rend()};
}

std::vector<HopTransmission> convert_to_multihop(const FlowRequest& request,
                                                 const Topology& topo,
                                                 const RadioParams& radio,
                                                 const AntennaConfig& antenna) {
  if (request.source == request.destination)
    throw std::invalid_argument("flow source equals destination");
  const int direct = direct_slots_for(request, topo, radio, antenna);
  const HopTransmission direct_hop{request.id, 1, request.source,
                                   request.destination, direct, 0.0};

  const auto path = min_weight_path(request.source, request.destination, topo);
  if (path.size() <= 2) return {direct_hop};

  std::vector<HopTransmission> hops;
  int total = 0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double rate =
        aligned_link_rate(topo.node(path[k]).position,
                          topo.node(path[k + 1]).position, radio, antenna);
    const int slots =
        slots_required(request.payload_bits, rate, radio.slot_duration_s);
    total += slots;
    hops.push_back({request.id, static_cast<int>(k) + 1, path[k], path[k + 1],
                    slots, 0.0});
  }
  if (total < direct) return hops;
  return {direct_hop};
}

ConflictOracle::ConflictOracle(std::vector<Point> positions,
                               const AntennaConfig& antenna)
    : positions_(std::move(positions)),
      antennas_(positions_.size(), antenna) {}

ConflictOracle::ConflictOracle(std::vector<Point> positions,
                               std::vector<AntennaConfig> per_node)
    : positions_(std::move(positions)), antennas_(std::move(per_node)) {
  if (antennas_.size() != positions_.size())
    throw ConfigError("one antenna configuration per node required");
}

bool ConflictOracle::in_beam(NodeId apex, NodeId toward, NodeId target) const {
  const Point o = positions_.at(apex);
  const Point a = positions_.at(toward);
  const Point b = positions_.at(target);
  const double ax = a.x - o.x, ay = a.y - o.y;
  const double bx = b.x - o.x, by = b.y - o.y;
  const double angle = std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by);
  return angle <= antennas_.at(apex).beamwidth_rad / 2.0;
}

bool ConflictOracle::beam_interferes(NodeId interferer_tx, NodeId interferer_rx,
                                     NodeId victim_tx, NodeId victim_rx) const {
  return in_beam(interferer_tx, interferer_rx, victim_rx) &&
         in_beam(victim_rx, victim_tx, interferer_tx);
}

bool ConflictOracle::sinr_blocked(NodeId interferer_tx, NodeId interferer_rx,
                                  NodeId victim_tx, NodeId victim_rx) const {
  const RadioParams& radio = sinr_->radio;
  auto gain_toward = [&](NodeId apex, NodeId boresight, NodeId target) {
    const Point o = positions_.at(apex);
    const Point a = positions_.at(boresight);
    const Point b = positions_.at(target);
    const double off = std::atan2(b.y - o.y, b.x - o.x) -
                       std::atan2(a.y - o.y, a.x - o.x);
    return flat_top_gain(off, antennas_.at(apex));
  };
  auto received = [&](NodeId from, NodeId to, double gt, double gr) {
    const double d = distance(positions_.at(from), positions_.at(to));
    return radio.tx_power_w * gt * gr * radio.wavelength_m * radio.wavelength_m /
           (16.0 * kPi * kPi * std::pow(d, radio.path_loss_exponent));
  };
  const double signal =
      received(victim_tx, victim_rx, antennas_.at(victim_tx).mainlobe_gain,
               antennas_.at(victim_rx).mainlobe_gain);
  const double interference =
      received(interferer_tx, victim_rx,
               gain_toward(interferer_tx, interferer_rx, victim_rx),
               gain_toward(victim_rx, victim_tx, interferer_tx));
  const double noise = radio.noise_density_w_per_hz * radio.bandwidth_hz;
  const double sinr_db = 10.0 * std::log10(signal / (noise + interference));
  return sinr_db < sinr_->threshold_db;
}

bool ConflictOracle::conflicts(const HopTransmission& a,
                               const HopTransmission& b) const {
  if (a.tx == b.tx || a.tx == b.rx || a.rx == b.tx || a.rx == b.rx) return true;
  if (sinr_) {
    return sinr_blocked(a.tx, a.rx, b.tx, b.rx) ||
           sinr_blocked(b.tx, b.rx, a.tx, a.rx);
  }
  return beam_interferes(a.tx, a.rx, b.tx, b.rx) ||
         beam_interferes(b.tx, b.rx, a.tx, a.rx);
}

bool conflicts(const HopTransmission& a, const HopTransmission& b,
               const ConflictOracle& oracle) {
  return oracle.conflicts(a, b);
}

ConflictGraph build_conflict_graph(std::span<const HopTransmission> hops,
                                   const ConflictOracle& oracle) {
  if (hops.empty()) throw std::invalid_argument("build_conflict_graph: no hops");
  ConflictGraph graph(hops.size());
  for (std::size_t p = 0; p < hops.size(); ++p) {
    graph.set(p, p, true);
    for (std::size_t q = p + 1; q < hops.size(); ++q)
      graph.set(p, q, oracle.conflicts(hops[p], hops[q]));
  }
  return graph;
}

void dump_topology(std::ostream& out, const Topology& topo) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& n : topo.nodes)
    out << n.id << ' ' << n.position.x << ' ' << n.position.y << '\n';
  out.precision(old);
}

Topology load_topology(std::istream& in, Room room) {
  Topology topo;
  topo.room = room;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    std::istringstream fields(line);
    Node node;
    if (!(fields >> node.id >> node.position.x >> node.position.y))
      throw ConfigError("topology line " + std::to_string(lineno) +
                        ": expected `id x y`");
    if (node.id != static_cast<NodeId>(topo.nodes.size()))
      throw ConfigError("topology line " + std::to_string(lineno) +
                        ": node ids must be consecutive from 0");
    if (!room.contains(node.position))
      throw ConfigError("topology line " + std::to_string(lineno) +
                        ": node outside room");
    topo.nodes.push_back(node);
  }
  if (topo.nodes.size() < 2) throw ConfigError("topology needs at least 2 nodes");
  return topo;
}

}  // namespace mmw
