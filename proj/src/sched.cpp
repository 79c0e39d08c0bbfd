#include "ps2mac/sched.hpp"

#include <algorithm>
#include <cmath>

namespace ps2mac {

std::optional<QueuePercentages> queue_percentages(std::size_t ql_hp, std::size_t ql_mp, std::size_t ql_lp) {
  const std::size_t total = ql_hp + ql_mp + ql_lp;
  if (total == 0) {
    return std::nullopt;
  }
  const double t = static_cast<double>(total);
  return QueuePercentages(100.0 * static_cast<double>(ql_hp) / t, 100.0 * static_cast<double>(ql_mp) / t,
                          100.0 * static_cast<double>(ql_lp) / t);
}

QueuePercentages normalize_percentages(const QueuePercentages& p) {
  double x = p.x();
  double y = p.y();
  double z = p.z();
  if (x < kAveragePercentage) {
    x = kAveragePercentage;
  }
  if (y > x || y < z) {
    y = kAveragePercentage;
  }
  if (z > y || z > x) {
    z = kAveragePercentage;
  }
  return {x, y, z};
}

AccessRatio access_ratio(const WeightVector& w, const QueuePercentages& p) {
  return {w[Priority::HP] * p.x(), w[Priority::MP] * p.y(), w[Priority::LP] * p.z()};
}

Quanta ratio_to_quanta(const AccessRatio& r, double divisor) {
  // std::lround rounds halfway cases away from zero.
  Quanta q;
  q[Priority::HP] = static_cast<int>(std::lround(r.hp / divisor));
  q[Priority::MP] = static_cast<int>(std::lround(r.mp / divisor));
  q[Priority::LP] = static_cast<int>(std::lround(r.lp / divisor));
  return q;
}

Quanta cycle_quanta(const std::array<std::size_t, kNumClasses>& lengths, const WeightVector& w, double divisor) {
  const auto pct = queue_percentages(lengths[0], lengths[1], lengths[2]);
  if (!pct) {
    return {};
  }
  Quanta q = ratio_to_quanta(access_ratio(w, normalize_percentages(*pct)), divisor);
  for (Priority p : kAllClasses) {
    if (lengths[index(p)] > 0) {
      q[p] = std::max(q[p], 1);
    }
  }
  return q;
}

TriQueue::TriQueue(WeightVector weights, std::size_t capacity, double divisor)
    : m_weights(weights), m_capacity(capacity), m_divisor(divisor) {
  if (!(divisor > 0.0)) {
    throw std::invalid_argument("quantum divisor must be positive");
  }
}

bool TriQueue::enqueue(Frame f) {
  if (f.kind != FrameKind::Data) {
    throw std::invalid_argument("only DATA frames are queued");
  }
  auto& q = m_queues[index(f.priority)];
  if (m_capacity != 0 && q.size() >= m_capacity) {
    return false;
  }
  q.push_back(std::move(f));
  return true;
}

std::size_t TriQueue::size() const {
  return m_queues[0].size() + m_queues[1].size() + m_queues[2].size();
}

bool TriQueue::cycle_exhausted() const {
  for (Priority p : kAllClasses) {
    if (m_remaining[p] > 0 && !m_queues[index(p)].empty()) {
      return false;
    }
  }
  return true;
}

std::optional<Frame> TriQueue::dequeue_next() {
  if (size() == 0) {
    return std::nullopt;
  }
  if (cycle_exhausted()) {
    m_remaining = cycle_quanta({m_queues[0].size(), m_queues[1].size(), m_queues[2].size()}, m_weights, m_divisor);
    ++m_cycles;
  }
  for (Priority p : kAllClasses) {
    auto& q = m_queues[index(p)];
    if (m_remaining[p] > 0 && !q.empty()) {
      --m_remaining[p];
      Frame f = std::move(q.front());
      q.pop_front();
      return f;
    }
  }
  return std::nullopt; // unreachable: a fresh cycle always covers a non-empty class
}

bool FifoQueue::enqueue(Frame f) {
  if (f.kind != FrameKind::Data) {
    throw std::invalid_argument("only DATA frames are queued");
  }
  if (m_capacity != 0 && m_queue.size() >= m_capacity) {
    return false;
  }
  m_queue.push_back(std::move(f));
  return true;
}

std::optional<Frame> FifoQueue::dequeue_next() {
  if (m_queue.empty()) {
    return std::nullopt;
  }
  Frame f = std::move(m_queue.front());
  m_queue.pop_front();
  return f;
}

std::size_t FifoQueue::size(Priority p) const {
  return static_cast<std::size_t>(
      std::count_if(m_queue.begin(), m_queue.end(), [p](const Frame& f) { return f.priority == p; }));
}

} // namespace ps2mac
