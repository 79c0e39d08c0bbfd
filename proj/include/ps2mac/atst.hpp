#pragma once

// Baseline alert/suspend scheme with two user classes. A HIGH node announces
// its pending backoff in an Alert-Transmission (AT) broadcast; a HIGH
// neighbour that would win the contention anyway answers with a
// Suspend-Transmission (ST) frame, and the alerting node backs off again.

#include "ps2mac/core.hpp"
#include "ps2mac/mac.hpp"

#include <optional>

namespace ps2mac {

enum class AtstClass : std::uint8_t { High, Low };

/// HP maps to HIGH; MP and LP share LOW.
constexpr AtstClass atst_class(Priority p) noexcept { return p == Priority::HP ? AtstClass::High : AtstClass::Low; }

/// Contention parameters used for each AT-ST class.
constexpr Priority atst_timing_class(AtstClass c) noexcept {
  return c == AtstClass::High ? Priority::HP : Priority::LP;
}

struct PendingAlert {
  std::uint64_t frame_id = 0;
  SimTime announced_backoff = 0;
};

struct AtstState {
  explicit AtstState(const MacTimingConfig& t) : mac(t) {}

  MacState mac;
  AtstClass cls = AtstClass::Low;
  std::optional<PendingAlert> pending_at;
};

/// True when a node with a ready frame of class `cls` must alert before it
/// counts down (once per transmission attempt).
constexpr bool needs_alert(AtstClass cls, bool has_frame, bool alert_sent) noexcept {
  return cls == AtstClass::High && has_frame && !alert_sent;
}

/// Builds the AT broadcast and records it as pending on `s`.
Frame send_alert(AtstState& s, std::uint64_t id, NodeId self, std::uint64_t frame_id, SimTime now,
                 const FrameSizes& sizes);

/// A HIGH receiver whose own backoff is strictly smaller than the announced
/// one replies with an ST addressed to the alerting node.
std::optional<Frame> on_alert_received(const AtstState& receiver, bool receiver_has_frame, NodeId self,
                                       const Frame& at, std::uint64_t id, SimTime now, const FrameSizes& sizes);

} // namespace ps2mac
