#include "ps2mac/atst.hpp"

namespace ps2mac {

Frame send_alert(AtstState& s, std::uint64_t id, NodeId self, std::uint64_t frame_id, SimTime now,
                 const FrameSizes& sizes) {
  Frame at = Frame::control(id, FrameKind::At, Priority::HP, self, kBroadcast, now, sizes);
  at.backoff = s.mac.backoff_remaining;
  s.pending_at = PendingAlert{frame_id, at.backoff};
  return at;
}

std::optional<Frame> on_alert_received(const AtstState& receiver, bool receiver_has_frame, NodeId self,
                                       const Frame& at, std::uint64_t id, SimTime now, const FrameSizes& sizes) {
  if (at.kind != FrameKind::At || receiver.cls != AtstClass::High || !receiver_has_frame) {
    return std::nullopt;
  }
  if (receiver.mac.backoff_remaining >= at.backoff) {
    return std::nullopt;
  }
  return Frame::control(id, FrameKind::St, Priority::HP, self, at.src, now, sizes);
}

} // namespace ps2mac
