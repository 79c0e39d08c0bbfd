#pragma once

// Node placement, static hop-count routing and CBR flow generation for the
// five built-in traffic scenarios.

#include "ps2mac/core.hpp"
#include "ps2mac/mac.hpp"
#include "ps2mac/phy.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace ps2mac {

struct ScenarioSpec {
  std::string id = "custom";
  std::array<double, kNumClasses> mix{100.0 / 3, 100.0 / 3, 100.0 / 3}; // % of flows per class
  int node_count = 36;
  double area_width = 1000.0;  // m
  double area_height = 1000.0; // m
  int flow_count = 30;
  double cbr_rate = 4.0; // packets/s per flow
  int payload = 512;     // bytes
  WeightVector weights = WeightVector::defaults();

  /// The mix must be non-negative and sum to 100; thirds written as
  /// 33/33/33 are accepted (sum >= 99).
  void validate() const;
};

inline constexpr std::array<std::string_view, 5> kScenarioIds{"I", "II", "III", "IV", "V"};

/// Built-in scenarios I..V with the HP/MP/LP mixes 80/10/10, 50/30/20,
/// 33/33/33, 30/50/20 and 10/10/80. Throws on an unknown id.
ScenarioSpec builtin_scenario(std::string_view id);

class RouteTable {
public:
  RouteTable() = default;

  /// Breadth-first hop-count shortest paths; ties go to the lower node id.
  static RouteTable shortest_paths(const std::vector<std::vector<NodeId>>& adjacency);

  /// Next hop from `from` towards `to`, or -1 when unreachable or from == to.
  NodeId next_hop(NodeId from, NodeId to) const;
  /// Hop count, or -1 when unreachable.
  int hop_count(NodeId from, NodeId to) const;
  bool connected() const;
  std::size_t size() const noexcept { return m_next.size(); }

private:
  std::vector<std::vector<NodeId>> m_next;
  std::vector<std::vector<int>> m_hops;
};

struct Topology {
  std::vector<Position> positions;
  RouteTable routes;
};

std::vector<std::vector<NodeId>> unit_disk_adjacency(const std::vector<Position>& positions, double tx_range);

/// Uniform placement in the area, redrawn until the unit-disk graph is
/// connected. Throws std::runtime_error after `max_attempts` failures.
Topology build_topology(int node_count, double width, double height, double tx_range, Rng& rng,
                        int max_attempts = 1000);

/// rows x cols lattice with the given spacing, origin at (0, 0).
Topology grid_topology(int rows, int cols, double spacing, double tx_range);

struct Flow {
  NodeId src = 0;
  NodeId dst = 0;
  Priority priority = Priority::HP;
  SimTime start = 0;    // first packet
  SimTime interval = 0; // CBR spacing
};

/// Flows per class for `flow_count` flows split by `mix` (largest remainder,
/// ties to the higher-priority class).
std::array<int, kNumClasses> class_counts(const std::array<double, kNumClasses>& mix, int flow_count);

/// flow_count CBR flows between random distinct endpoints. Classes are
/// assigned per class_counts; the first packet of each flow starts at a
/// random offset within one interval.
std::vector<Flow> generate_flows(const ScenarioSpec& spec, const Topology& topo, Rng& rng);

/// Packets a flow generates in [0, duration).
std::size_t packets_before(const Flow& f, SimTime duration);

} // namespace ps2mac
