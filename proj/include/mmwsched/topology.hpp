#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mmwsched/radio_model.hpp"

namespace mmw {

using NodeId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

struct Room {
  double width = 16.0;
  double height = 16.0;

  double diagonal() const;
  bool contains(Point p) const;
};

struct Node {
  NodeId id = 0;
  Point position;
  int workload = 0;  ///< slots assigned to this node (tx or rx) this superframe
};

struct Topology {
  Room room;
  std::vector<Node> nodes;  ///< nodes[k].id == k

  const Node& node(NodeId id) const;
  Node& node(NodeId id);
  std::vector<Point> positions() const;
};

/// A source-to-destination transfer request.
struct FlowRequest {
  int id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  double payload_bits = 0.0;
  int direct_slots = 0;
  std::vector<NodeId> hop_path;  ///< source ... destination
  std::vector<int> hop_slots;    ///< slots per edge of hop_path
  int miss_count = 0;
};

/// One directed link of a flow.
struct HopTransmission {
  int flow_id = 0;
  int hop_index = 1;  ///< 1-based position within the flow's path
  NodeId tx = 0;
  NodeId rx = 0;
  int slots = 1;
  double priority = 0.0;
};

/// Places `node_count` nodes uniformly at random in `room`. Identical seeds
/// give identical topologies.
Topology generate_topology(int node_count, Room room, std::uint64_t seed);

/// Relay selection weight d(i,j)^2 / D^2 + F(j) / F.
double link_weight(const Node& i, const Node& j, double d_norm, double f_norm);

/// Rate of a link whose ends point their mainlobes at each other.
double aligned_link_rate(Point a, Point b, const RadioParams& radio,
                         const AntennaConfig& antenna);

/// Direct source-to-destination slot requirement for `request`.
int direct_slots_for(const FlowRequest& request, const Topology& topo,
                     const RadioParams& radio, const AntennaConfig& antenna);

/// Minimum-weight path from `from` to `to` over the complete graph, with
/// edge weights given by link_weight and normalisers derived from `topo`.
std::vector<NodeId> min_weight_path(NodeId from, NodeId to,
                                    const Topology& topo);

/// Splits `request` into hops along the minimum-weight path when the summed
/// hop slots beat the direct link; otherwise returns the single direct hop.
std::vector<HopTransmission> convert_to_multihop(const FlowRequest& request,
                                                 const Topology& topo,
                                                 const RadioParams& radio,
                                                 const AntennaConfig& antenna);

/// Optional SINR-threshold rule layered on top of the geometric one.
struct SinrRule {
  RadioParams radio;
  double threshold_db = 10.0;
};

/// Decides whether two hop transmissions can share time. Immutable once
/// built and safe to share between threads.
class ConflictOracle {
 public:
  ConflictOracle(std::vector<Point> positions, const AntennaConfig& antenna);
  ConflictOracle(std::vector<Point> positions,
                 std::vector<AntennaConfig> per_node);

  void set_sinr_rule(std::optional<SinrRule> rule) { sinr_ = std::move(rule); }

  bool conflicts(const HopTransmission& a, const HopTransmission& b) const;

  /// True when `interferer_tx` (beamed at `interferer_rx`) lands inside its
  /// own mainlobe on `victim_rx`, and `victim_rx` (beamed at `victim_tx`)
  /// has `interferer_tx` inside its receive mainlobe.
  bool beam_interferes(NodeId interferer_tx, NodeId interferer_rx,
                       NodeId victim_tx, NodeId victim_rx) const;

  std::size_t node_count() const { return positions_.size(); }
  const std::vector<Point>& positions() const { return positions_; }
  const AntennaConfig& antenna(NodeId id) const { return antennas_.at(id); }

 private:
  bool in_beam(NodeId apex, NodeId toward, NodeId target) const;
  bool sinr_blocked(NodeId interferer_tx, NodeId interferer_rx,
                    NodeId victim_tx, NodeId victim_rx) const;

  std::vector<Point> positions_;
  std::vector<AntennaConfig> antennas_;
  std::optional<SinrRule> sinr_;
};

bool conflicts(const HopTransmission& a, const HopTransmission& b,
               const ConflictOracle& oracle);

/// Dense symmetric adjacency; the diagonal is set.
class ConflictGraph {
 public:
  explicit ConflictGraph(std::size_t n) : n_(n), bits_(n * n, 0) {}

  bool operator()(std::size_t p, std::size_t q) const {
    return bits_[p * n_ + q] != 0;
  }
  void set(std::size_t p, std::size_t q, bool v) {
    bits_[p * n_ + q] = v;
    bits_[q * n_ + p] = v;
  }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

ConflictGraph build_conflict_graph(std::span<const HopTransmission> hops,
                                   const ConflictOracle& oracle);

/// Plain-text topology: one `id x y` line per node.
void dump_topology(std::ostream& out, const Topology& topo);
Topology load_topology(std::istream& in, Room room);

}  // namespace mmw
