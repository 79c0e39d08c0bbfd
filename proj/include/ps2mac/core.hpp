#pragma once

// Domain types shared by the scheduler, MAC, channel and simulator.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ps2mac {

/// Simulation time in integer microseconds.
using SimTime = std::int64_t;

using NodeId = int;
inline constexpr NodeId kBroadcast = -1;

/// User/packet priority class. The numeric code is the value carried in the
/// priority field; a lower code means a higher priority.
enum class Priority : std::uint8_t { HP = 0, MP = 1, LP = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Priority, kNumClasses> kAllClasses{Priority::HP, Priority::MP, Priority::LP};

constexpr int code(Priority p) noexcept { return static_cast<int>(p); }
constexpr std::size_t index(Priority p) noexcept { return static_cast<std::size_t>(p); }

Priority priority_from_code(int code);
std::string_view to_string(Priority p) noexcept;

/// Per-class weights w0 > w1 > w2 > 0, bounded above by w_max.
class WeightVector {
public:
  static constexpr double kDefaultMax = 10.0;

  WeightVector(double w0, double w1, double w2, double w_max = kDefaultMax);

  double operator[](Priority p) const noexcept { return m_w[index(p)]; }
  double sum() const noexcept { return m_w[0] + m_w[1] + m_w[2]; }
  double max() const noexcept { return m_max; }
  const std::array<double, kNumClasses>& values() const noexcept { return m_w; }

  /// Weights used in all reported experiments: 3, 2, 1.
  static WeightVector defaults() { return {3.0, 2.0, 1.0}; }

private:
  std::array<double, kNumClasses> m_w;
  double m_max;
};

struct MacTimingConfig {
  SimTime sifs = 10;       // us
  SimTime slot_time = 20;  // us
  int cw_min = 32;         // slots
  int cw_max = 1024;       // slots
  double data_rate = 2e6;  // bit/s
  double tx_range = 250.0; // m

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// On-air frame sizes in bytes. The priority field and CTS flag ride in
/// existing header padding by default; the extra_* knobs add bytes for
/// sensitivity runs.
struct FrameSizes {
  int rts = 20;
  int cts = 14;
  int ack = 14;
  int at = 20;
  int st = 14;
  int data_header = 28;
  int priority_field_extra = 0;
  int cts_flag_extra = 0;

  void validate() const;
};

enum class FrameKind : std::uint8_t { Data, Rts, Cts, Ack, At, St };

std::string_view to_string(FrameKind k) noexcept;
constexpr bool is_control(FrameKind k) noexcept { return k != FrameKind::Data; }

struct Frame {
  std::uint64_t id = 0;
  FrameKind kind = FrameKind::Data;
  Priority priority = Priority::HP;
  int flag = 0; // CTS only: 0 clear-to-send, 1 suspend-transmission
  NodeId src = 0;
  NodeId dst = 0;
  NodeId flow_src = 0; // DATA only
  NodeId flow_dst = 0; // DATA only
  int size_bytes = 0;
  SimTime created_at = 0;
  SimTime received_at = 0;

  // Protocol bookkeeping carried alongside the frame.
  std::uint64_t exchange = 0; // RTS/CTS/DATA/ACK of one attempt share this
  SimTime nav = 0;            // reservation announced to overhearing nodes
  int hops = 0;               // RTS: number of times it was relayed
  NodeId origin = 0;          // RTS: original requester (differs from src once relayed)
  SimTime backoff = 0;        // AT: sender's pending backoff
  int payload_bytes = 0;      // DATA only

  /// DATA frame stamped at the flow source with the user's priority.
  static Frame data(std::uint64_t id, Priority p, NodeId src, NodeId dst, NodeId flow_src, NodeId flow_dst,
                    int payload_bytes, SimTime created_at, const FrameSizes& sizes);
  /// Any non-DATA frame. `flag` must be 0 unless kind is CTS.
  static Frame control(std::uint64_t id, FrameKind kind, Priority p, NodeId src, NodeId dst, SimTime now,
                       const FrameSizes& sizes, int flag = 0);

  void validate() const;
};

int control_size(FrameKind kind, const FrameSizes& sizes);

/// Percentages of queued packets per class, each in [0, 100].
class QueuePercentages {
public:
  QueuePercentages(double x, double y, double z);

  double x() const noexcept { return m_v[0]; }
  double y() const noexcept { return m_v[1]; }
  double z() const noexcept { return m_v[2]; }
  double operator[](Priority p) const noexcept { return m_v[index(p)]; }
  double sum() const noexcept { return m_v[0] + m_v[1] + m_v[2]; }

private:
  std::array<double, kNumClasses> m_v;
};

/// Backoff multipliers, 0 < pf0 < pf1 < pf2 < 1.
class PriorityFactors {
public:
  PriorityFactors(double pf0, double pf1, double pf2);

  double operator[](Priority p) const noexcept { return m_pf[index(p)]; }

private:
  std::array<double, kNumClasses> m_pf;
};

} // namespace ps2mac
