#include "ps2mac/core.hpp"

#include <cmath>

namespace ps2mac {

Priority priority_from_code(int c) {
  if (c < 0 || c > 2) {
    throw std::invalid_argument("priority code must be 0, 1 or 2, got " + std::to_string(c));
  }
  return static_cast<Priority>(c);
}

std::string_view to_string(Priority p) noexcept {
  switch (p) {
  case Priority::HP:
    return "HP";
  case Priority::MP:
    return "MP";
  case Priority::LP:
    return "LP";
  }
  return "?";
}

std::string_view to_string(FrameKind k) noexcept {
  switch (k) {
  case FrameKind::Data:
    return "DATA";
  case FrameKind::Rts:
    return "RTS";
  case FrameKind::Cts:
    return "CTS";
  case FrameKind::Ack:
    return "ACK";
  case FrameKind::At:
    return "AT";
  case FrameKind::St:
    return "ST";
  }
  return "?";
}

WeightVector::WeightVector(double w0, double w1, double w2, double w_max) : m_w{w0, w1, w2}, m_max(w_max) {
  for (double w : m_w) {
    if (!std::isfinite(w)) {
      throw std::invalid_argument("weights must be finite");
    }
  }
  if (!(w_max > w0 && w0 > w1 && w1 > w2 && w2 > 0.0)) {
    throw std::invalid_argument("weights must satisfy w_max > w0 > w1 > w2 > 0");
  }
}

void MacTimingConfig::validate() const {
  if (sifs <= 0 || slot_time <= 0) {
    throw std::invalid_argument("SIFS and slot time must be positive");
  }
  if (cw_min <= 0 || cw_min > cw_max) {
    throw std::invalid_argument("contention window bounds must satisfy 0 < cw_min <= cw_max");
  }
  if (!(data_rate > 0.0) || !(tx_range > 0.0)) {
    throw std::invalid_argument("data rate and transmission range must be positive");
  }
}

void FrameSizes::validate() const {
  if (rts <= 0 || cts <= 0 || ack <= 0 || at <= 0 || st <= 0 || data_header < 0) {
    throw std::invalid_argument("frame sizes must be positive");
  }
  if (priority_field_extra < 0 || cts_flag_extra < 0) {
    throw std::invalid_argument("extra header bytes cannot be negative");
  }
}

int control_size(FrameKind kind, const FrameSizes& s) {
  switch (kind) {
  case FrameKind::Rts:
    return s.rts + s.priority_field_extra;
  case FrameKind::Cts:
    return s.cts + s.cts_flag_extra;
  case FrameKind::Ack:
    return s.ack;
  case FrameKind::At:
    return s.at;
  case FrameKind::St:
    return s.st;
  case FrameKind::Data:
    break;
  }
  throw std::invalid_argument("DATA is not a control frame");
}

Frame Frame::data(std::uint64_t id, Priority p, NodeId src, NodeId dst, NodeId flow_src, NodeId flow_dst,
                  int payload_bytes, SimTime created_at, const FrameSizes& sizes) {
  Frame f;
  f.id = id;
  f.kind = FrameKind::Data;
  f.priority = p;
  f.src = src;
  f.dst = dst;
  f.flow_src = flow_src;
  f.flow_dst = flow_dst;
  f.payload_bytes = payload_bytes;
  f.size_bytes = payload_bytes + sizes.data_header + sizes.priority_field_extra;
  f.created_at = created_at;
  f.validate();
  return f;
}

Frame Frame::control(std::uint64_t id, FrameKind kind, Priority p, NodeId src, NodeId dst, SimTime now,
                     const FrameSizes& sizes, int flag) {
  Frame f;
  f.id = id;
  f.kind = kind;
  f.priority = p;
  f.flag = flag;
  f.src = src;
  f.dst = dst;
  f.origin = src;
  f.size_bytes = control_size(kind, sizes);
  f.created_at = now;
  f.validate();
  return f;
}

void Frame::validate() const {
  if (size_bytes <= 0) {
    throw std::invalid_argument("frame size must be positive");
  }
  if (flag != 0 && flag != 1) {
    throw std::invalid_argument("CTS flag must be 0 or 1");
  }
  if (flag != 0 && kind != FrameKind::Cts) {
    throw std::invalid_argument("flag is only meaningful on CTS frames");
  }
  if (kind == FrameKind::Data && payload_bytes < 0) {
    throw std::invalid_argument("negative payload");
  }
}

QueuePercentages::QueuePercentages(double x, double y, double z) : m_v{x, y, z} {
  for (double v : m_v) {
    if (!(v >= 0.0 && v <= 100.0)) {
      throw std::invalid_argument("queue percentages must lie in [0, 100]");
    }
  }
}

PriorityFactors::PriorityFactors(double pf0, double pf1, double pf2) : m_pf{pf0, pf1, pf2} {
  if (!(0.0 < pf0 && pf0 < pf1 && pf1 < pf2 && pf2 < 1.0)) {
    throw std::invalid_argument("priority factors must satisfy 0 < pf0 < pf1 < pf2 < 1");
  }
}

} // namespace ps2mac
