#pragma once

// Discrete-event kernel: a (time, seq)-ordered event queue and seeded
// random substreams.

#include "ps2mac/core.hpp"
#include "ps2mac/mac.hpp"

#include <optional>
#include <queue>
#include <vector>

namespace ps2mac {

enum class EventKind : std::uint8_t { FrameStart, FrameEnd, TimerExpiry, PacketGen, SimEnd };

enum class TimerKind : std::uint8_t {
  Access,      // IFS + backoff elapsed on an idle medium
  CtsTimeout,
  AckTimeout,
  DataTimeout, // responder gave up waiting for DATA after its CTS-0
  NavExpiry,
};

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0; // assigned by the queue
  EventKind kind = EventKind::SimEnd;
  NodeId node = -1;
  TimerKind timer = TimerKind::Access;
  std::uint64_t token = 0; // timer generation; stale tokens are ignored
  std::uint64_t ref = 0;   // transmission id (FrameEnd) or flow index (PacketGen)
  std::optional<Frame> frame; // FrameStart payload
};

class EventQueue {
public:
  /// Inserts `ev` at `ev.time`. Equal-time events pop in insertion order.
  /// Scheduling before the current time is a logic error.
  void schedule(Event ev);
  /// Removes and returns the earliest event, advancing the clock to it.
  Event pop_next();

  bool empty() const noexcept { return m_heap.empty(); }
  std::size_t size() const noexcept { return m_heap.size(); }
  SimTime now() const noexcept { return m_now; }

private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> m_heap;
  std::uint64_t m_next_seq = 0;
  SimTime m_now = 0;
};

/// Independent generators derived from one master seed. Each node, the
/// topology and the traffic generator draw from their own stream, so a change
/// in one place does not shift the draws anywhere else.
class RngStreams {
public:
  explicit RngStreams(std::uint64_t master_seed) : m_master(master_seed) {}

  std::uint64_t master_seed() const noexcept { return m_master; }
  Rng node(NodeId n) const { return derive(0x6e6f6465ULL, static_cast<std::uint64_t>(n)); }
  Rng topology() const { return derive(0x746f706fULL, 0); }
  Rng traffic() const { return derive(0x74726166ULL, 0); }

  static std::uint64_t splitmix64(std::uint64_t x) noexcept;

private:
  Rng derive(std::uint64_t tag, std::uint64_t id) const;

  std::uint64_t m_master;
};

} // namespace ps2mac
