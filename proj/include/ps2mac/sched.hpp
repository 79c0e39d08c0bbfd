#pragma once

// Per-node proportional-share scheduling: three class queues released in
// rationed quanta derived from queue occupancy and class weights.

#include "ps2mac/core.hpp"

#include <array>
#include <deque>
#include <optional>

namespace ps2mac {

/// Floor applied to a class percentage when the priority order would invert.
inline constexpr double kAveragePercentage = 33.0;
inline constexpr double kDefaultQuantumDivisor = 10.0;
inline constexpr std::size_t kDefaultClassCapacity = 500;

struct AccessRatio {
  double hp = 0.0;
  double mp = 0.0;
  double lp = 0.0;
};

struct Quanta {
  std::array<int, kNumClasses> n{0, 0, 0};

  int operator[](Priority p) const noexcept { return n[index(p)]; }
  int& operator[](Priority p) noexcept { return n[index(p)]; }
  bool operator==(const Quanta&) const = default;
};

/// Share of queued packets per class, in percent. nullopt when every queue
/// is empty (no service cycle to plan).
std::optional<QueuePercentages> queue_percentages(std::size_t ql_hp, std::size_t ql_mp, std::size_t ql_lp);

/// Rationed-dequeuing adjustment, applied step by step on already adjusted
/// values:
///   1. x < Av            -> x = Av
///   2. y > x or y < z    -> y = Av
///   3. z > y or z > x    -> z = Av
/// The result may sum to more than 100.
QueuePercentages normalize_percentages(const QueuePercentages& p);

AccessRatio access_ratio(const WeightVector& w, const QueuePercentages& normalized);

/// round-half-away-from-zero(r_i / divisor).
Quanta ratio_to_quanta(const AccessRatio& r, double divisor = kDefaultQuantumDivisor);

/// Full planning pipeline for one service cycle on the given queue lengths.
/// Every non-empty class gets at least one slot in the cycle, so a class with
/// a tiny share (e.g. 1 packet among 300) is never planned out entirely.
Quanta cycle_quanta(const std::array<std::size_t, kNumClasses>& lengths, const WeightVector& w,
                    double divisor = kDefaultQuantumDivisor);

/// Interface queue between the packet source/forwarder and the MAC.
class InterfaceQueue {
public:
  virtual ~InterfaceQueue() = default;

  /// Returns false (tail drop) when the frame's queue is full.
  virtual bool enqueue(Frame f) = 0;
  virtual std::optional<Frame> dequeue_next() = 0;
  virtual std::size_t size(Priority p) const = 0;
  virtual std::size_t size() const = 0;
  bool empty() const { return size() == 0; }
};

/// Three FIFOs (HP, MP, LP) served in rationed quanta. Quanta are recomputed
/// at service-cycle boundaries: when no non-empty class has quantum left.
/// Unspent quanta of an empty class are discarded with the cycle.
class TriQueue final : public InterfaceQueue {
public:
  /// capacity is per class; 0 means unbounded.
  explicit TriQueue(WeightVector weights, std::size_t capacity = kDefaultClassCapacity,
                    double divisor = kDefaultQuantumDivisor);

  bool enqueue(Frame f) override;
  std::optional<Frame> dequeue_next() override;
  std::size_t size(Priority p) const override { return m_queues[index(p)].size(); }
  std::size_t size() const override;

  const Quanta& remaining_quanta() const noexcept { return m_remaining; }
  /// Overrides the current cycle's quanta (tests and tracing).
  void set_remaining_quanta(const Quanta& q) noexcept { m_remaining = q; }
  std::size_t cycles_started() const noexcept { return m_cycles; }

private:
  bool cycle_exhausted() const;

  std::array<std::deque<Frame>, kNumClasses> m_queues;
  WeightVector m_weights;
  std::size_t m_capacity;
  double m_divisor;
  Quanta m_remaining;
  std::size_t m_cycles = 0;
};

/// Single FIFO with a total capacity, used by the AT-ST and plain DCF schemes.
class FifoQueue final : public InterfaceQueue {
public:
  explicit FifoQueue(std::size_t capacity = 3 * kDefaultClassCapacity) : m_capacity(capacity) {}

  bool enqueue(Frame f) override;
  std::optional<Frame> dequeue_next() override;
  std::size_t size(Priority p) const override;
  std::size_t size() const override { return m_queue.size(); }

private:
  std::deque<Frame> m_queue;
  std::size_t m_capacity;
};

} // namespace ps2mac
