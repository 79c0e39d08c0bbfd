#include "ps2mac/phy.hpp"

#include <algorithm>
#include <cmath>

namespace ps2mac {

double distance(const Position& a, const Position& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

SimTime airtime(int size_bytes, double rate_bps) {
  if (size_bytes <= 0) {
    throw std::invalid_argument("frame size must be positive");
  }
  if (!(rate_bps > 0.0)) {
    throw std::invalid_argument("data rate must be positive");
  }
  // Exact for integral rates; the epsilon keeps 8*540/2 from landing on 2160.0000001.
  const double us = 8.0 * static_cast<double>(size_bytes) * 1e6 / rate_bps;
  return static_cast<SimTime>(std::ceil(us - 1e-9));
}

Channel::Channel(std::vector<Position> positions, double tx_range)
    : m_positions(std::move(positions)), m_range(tx_range), m_neighbors(m_positions.size()),
      m_incoming(m_positions.size()), m_tx_of(m_positions.size()) {
  if (!(tx_range > 0.0)) {
    throw std::invalid_argument("transmission range must be positive");
  }
  for (std::size_t a = 0; a < m_positions.size(); ++a) {
    for (std::size_t b = 0; b < m_positions.size(); ++b) {
      if (a != b && distance(m_positions[a], m_positions[b]) <= m_range) {
        m_neighbors[a].push_back(static_cast<NodeId>(b));
      }
    }
  }
}

bool Channel::in_range(NodeId a, NodeId b) const {
  return a != b && distance(position(a), position(b)) <= m_range;
}

void Channel::corrupt(TxId id, NodeId at) {
  auto& tx = m_active.at(id);
  for (auto& [node, collided] : tx.receivers) {
    if (node == at) {
      collided = true;
    }
  }
}

Channel::TxId Channel::begin(const Frame& f, NodeId sender, SimTime start, SimTime end) {
  if (end <= start) {
    throw std::logic_error("transmission must have positive airtime");
  }
  const auto s = static_cast<std::size_t>(sender);
  if (m_tx_of.at(s)) {
    throw std::logic_error("node is already transmitting");
  }
  const TxId id = m_next++;
  Active tx{f, sender, start, end, {}};

  // Half duplex: whatever the sender was receiving is lost.
  for (TxId in : m_incoming[s]) {
    if (m_active.at(in).end > start) {
      corrupt(in, sender);
    }
  }

  for (NodeId r : m_neighbors[s]) {
    const auto ri = static_cast<std::size_t>(r);
    bool collided = false;
    for (TxId in : m_incoming[ri]) {
      // A transmission ending exactly now does not overlap [start, end).
      if (m_active.at(in).end > start) {
        corrupt(in, r);
        collided = true;
      }
    }
    if (m_tx_of[ri] && m_active.at(*m_tx_of[ri]).end > start) {
      collided = true;
    }
    tx.receivers.emplace_back(r, collided);
    m_incoming[ri].push_back(id);
  }
  m_active.emplace(id, std::move(tx));
  m_tx_of[s] = id;
  ++m_stats.transmissions;
  return id;
}

Channel::Completed Channel::finish(TxId id) {
  auto it = m_active.find(id);
  if (it == m_active.end()) {
    throw std::logic_error("unknown transmission");
  }
  Active tx = std::move(it->second);
  m_active.erase(it);

  Completed done{std::move(tx.frame), tx.sender, tx.start, tx.end, {}, 0};
  for (const auto& [node, collided] : tx.receivers) {
    auto& in = m_incoming[static_cast<std::size_t>(node)];
    in.erase(std::remove(in.begin(), in.end(), id), in.end());
    done.receptions.push_back({node, !collided});
    ++(collided ? m_stats.collided : m_stats.delivered);
  }
  done.out_of_range = m_positions.size() - 1 - tx.receivers.size();
  m_stats.out_of_range += done.out_of_range;
  m_tx_of[static_cast<std::size_t>(tx.sender)].reset();
  return done;
}

bool Channel::busy(NodeId n, SimTime t) const {
  for (TxId in : m_incoming.at(static_cast<std::size_t>(n))) {
    const auto& tx = m_active.at(in);
    if (tx.start <= t && t < tx.end) {
      return true;
    }
  }
  return false;
}

} // namespace ps2mac
