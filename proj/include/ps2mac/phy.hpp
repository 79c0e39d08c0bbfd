#pragma once

// Unit-disk shared channel: a node hears a transmission iff it is within
// range of the sender, and overlapping in-range transmissions destroy each
// other at the receiver (no capture). Propagation delay is zero.

#include "ps2mac/core.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace ps2mac {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b) noexcept;

/// ceil(8 * size / rate) in microseconds.
SimTime airtime(int size_bytes, double rate_bps);

class Channel {
public:
  using TxId = std::uint64_t;

  struct Reception {
    NodeId node;
    bool ok;
  };

  struct Completed {
    Frame frame;
    NodeId sender;
    SimTime start;
    SimTime end;
    std::vector<Reception> receptions; // every in-range node, in neighbour order
    std::size_t out_of_range;
  };

  struct Stats {
    std::uint64_t transmissions = 0;
    std::uint64_t delivered = 0;
    std::uint64_t collided = 0;
    std::uint64_t out_of_range = 0;
  };

  Channel(std::vector<Position> positions, double tx_range);

  std::size_t node_count() const noexcept { return m_positions.size(); }
  const Position& position(NodeId n) const { return m_positions.at(static_cast<std::size_t>(n)); }
  bool in_range(NodeId a, NodeId b) const;
  const std::vector<NodeId>& neighbors(NodeId n) const { return m_neighbors.at(static_cast<std::size_t>(n)); }

  /// Puts `f` on the air from `sender` over [start, end). Receptions already
  /// in progress at any affected node are marked collided, as is the new one.
  TxId begin(const Frame& f, NodeId sender, SimTime start, SimTime end);
  /// Removes the transmission and reports per-receiver outcomes.
  Completed finish(TxId id);

  /// Physical carrier sense: an in-range transmission covers t.
  bool busy(NodeId n, SimTime t) const;
  bool transmitting(NodeId n) const { return m_tx_of.at(static_cast<std::size_t>(n)).has_value(); }
  std::size_t in_flight() const noexcept { return m_active.size(); }

  const Stats& stats() const noexcept { return m_stats; }

private:
  struct Active {
    Frame frame;
    NodeId sender;
    SimTime start;
    SimTime end;
    std::vector<std::pair<NodeId, bool>> receivers; // (node, collided)
  };

  void corrupt(TxId id, NodeId at);

  std::vector<Position> m_positions;
  double m_range;
  std::vector<std::vector<NodeId>> m_neighbors;
  std::unordered_map<TxId, Active> m_active;
  std::vector<std::vector<TxId>> m_incoming;
  std::vector<std::optional<TxId>> m_tx_of;
  TxId m_next = 1;
  Stats m_stats;
};

} // namespace ps2mac
