#include "ps2mac/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace ps2mac {

void ScenarioSpec::validate() const {
  double total = 0.0;
  for (double m : mix) {
    if (!(m >= 0.0)) {
      throw std::invalid_argument("scenario mix must be non-negative");
    }
    total += m;
  }
  if (total < 99.0 - 1e-9 || total > 100.0 + 1e-9) {
    throw std::invalid_argument("scenario mix must sum to 100");
  }
  if (node_count <= 0) {
    throw std::invalid_argument("node count must be positive");
  }
  if (!(area_width > 0.0) || !(area_height > 0.0)) {
    throw std::invalid_argument("area must be positive");
  }
  if (flow_count < 0) {
    throw std::invalid_argument("flow count cannot be negative");
  }
  if (flow_count > 0 && node_count < 2) {
    throw std::invalid_argument("flows need at least two nodes");
  }
  if (!(cbr_rate > 0.0) || payload <= 0) {
    throw std::invalid_argument("CBR rate and payload must be positive");
  }
}

ScenarioSpec builtin_scenario(std::string_view id) {
  ScenarioSpec s;
  s.id = std::string(id);
  if (id == "I") {
    s.mix = {80, 10, 10};
  } else if (id == "II") {
    s.mix = {50, 30, 20};
  } else if (id == "III") {
    s.mix = {33, 33, 33};
  } else if (id == "IV") {
    s.mix = {30, 50, 20};
  } else if (id == "V") {
    s.mix = {10, 10, 80};
  } else {
    throw std::invalid_argument("unknown scenario '" + std::string(id) + "' (expected I..V)");
  }
  return s;
}

RouteTable RouteTable::shortest_paths(const std::vector<std::vector<NodeId>>& adjacency) {
  const std::size_t n = adjacency.size();
  RouteTable t;
  t.m_next.assign(n, std::vector<NodeId>(n, -1));
  t.m_hops.assign(n, std::vector<int>(n, -1));

  for (std::size_t src = 0; src < n; ++src) {
    auto& first = t.m_next[src];
    auto& hops = t.m_hops[src];
    hops[src] = 0;
    std::queue<NodeId> frontier;
    frontier.push(static_cast<NodeId>(src));
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      std::vector<NodeId> nbrs = adjacency[static_cast<std::size_t>(u)];
      std::sort(nbrs.begin(), nbrs.end());
      for (NodeId v : nbrs) {
        const auto vi = static_cast<std::size_t>(v);
        if (hops[vi] >= 0) {
          continue;
        }
        hops[vi] = hops[static_cast<std::size_t>(u)] + 1;
        first[vi] = (static_cast<std::size_t>(u) == src) ? v : first[static_cast<std::size_t>(u)];
        frontier.push(v);
      }
    }
  }
  return t;
}

NodeId RouteTable::next_hop(NodeId from, NodeId to) const {
  return m_next.at(static_cast<std::size_t>(from)).at(static_cast<std::size_t>(to));
}

int RouteTable::hop_count(NodeId from, NodeId to) const {
  return m_hops.at(static_cast<std::size_t>(from)).at(static_cast<std::size_t>(to));
}

bool RouteTable::connected() const {
  for (const auto& row : m_hops) {
    if (std::any_of(row.begin(), row.end(), [](int h) { return h < 0; })) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<NodeId>> unit_disk_adjacency(const std::vector<Position>& positions, double tx_range) {
  std::vector<std::vector<NodeId>> adj(positions.size());
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = 0; b < positions.size(); ++b) {
      if (a != b && distance(positions[a], positions[b]) <= tx_range) {
        adj[a].push_back(static_cast<NodeId>(b));
      }
    }
  }
  return adj;
}

Topology build_topology(int node_count, double width, double height, double tx_range, Rng& rng,
                        int max_attempts) {
  if (node_count <= 0) {
    throw std::invalid_argument("node count must be positive");
  }
  std::uniform_real_distribution<double> ux(0.0, width);
  std::uniform_real_distribution<double> uy(0.0, height);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Position> pos(static_cast<std::size_t>(node_count));
    for (auto& p : pos) {
      p.x = ux(rng);
      p.y = uy(rng);
    }
    RouteTable routes = RouteTable::shortest_paths(unit_disk_adjacency(pos, tx_range));
    if (routes.connected()) {
      return {std::move(pos), std::move(routes)};
    }
  }
  throw std::runtime_error("no connected placement of " + std::to_string(node_count) + " nodes in " +
                           std::to_string(width) + "x" + std::to_string(height) + " m with range " +
                           std::to_string(tx_range) + " m after " + std::to_string(max_attempts) +
                           " attempts; shrink the area or raise the range");
}

Topology grid_topology(int rows, int cols, double spacing, double tx_range) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  std::vector<Position> pos;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      pos.push_back({c * spacing, r * spacing});
    }
  }
  RouteTable routes = RouteTable::shortest_paths(unit_disk_adjacency(pos, tx_range));
  return {std::move(pos), std::move(routes)};
}

std::array<int, kNumClasses> class_counts(const std::array<double, kNumClasses>& mix, int flow_count) {
  const double total = mix[0] + mix[1] + mix[2];
  std::array<int, kNumClasses> counts{};
  std::array<double, kNumClasses> frac{};
  int assigned = 0;
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    const double quota = total > 0.0 ? mix[i] / total * flow_count : 0.0;
    counts[i] = static_cast<int>(std::floor(quota + 1e-9));
    frac[i] = quota - counts[i];
    assigned += counts[i];
  }
  std::array<std::size_t, kNumClasses> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b] + 1e-12; });
  for (std::size_t i = 0; assigned < flow_count; i = (i + 1) % kNumClasses) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

std::vector<Flow> generate_flows(const ScenarioSpec& spec, const Topology& topo, Rng& rng) {
  spec.validate();
  const auto n = static_cast<NodeId>(topo.positions.size());
  if (spec.flow_count > 0 && n < 2) {
    throw std::invalid_argument("flows need at least two nodes");
  }
  const auto counts = class_counts(spec.mix, spec.flow_count);
  const SimTime interval = static_cast<SimTime>(std::llround(1e6 / spec.cbr_rate));
  std::uniform_int_distribution<NodeId> node(0, n - 1);
  std::uniform_int_distribution<SimTime> offset(0, interval - 1);

  std::vector<Flow> flows;
  for (Priority p : kAllClasses) {
    for (int i = 0; i < counts[index(p)]; ++i) {
      Flow f;
      f.src = node(rng);
      do {
        f.dst = node(rng);
      } while (f.dst == f.src);
      f.priority = p;
      f.interval = interval;
      f.start = offset(rng);
      flows.push_back(f);
    }
  }
  return flows;
}

std::size_t packets_before(const Flow& f, SimTime duration) {
  if (f.start >= duration || f.interval <= 0) {
    return 0;
  }
  return static_cast<std::size_t>((duration - 1 - f.start) / f.interval) + 1;
}

} // namespace ps2mac
