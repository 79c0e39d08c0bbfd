#pragma once

// PS2-MAC channel access rules: weighted inter-frame spaces, prioritized
// backoff, contention-window growth, the priority-aware RTS/CTS handshake
// and retry-threshold boosting. The functions here are the protocol's
// decision logic; the simulator owns timing and the radio.

#include "ps2mac/core.hpp"

#include <array>
#include <optional>
#include <random>

namespace ps2mac {

using Rng = std::mt19937_64;

using Aifsn = std::array<int, kNumClasses>;

/// AIFSN_i = integer(sum(w) / w_i).
Aifsn aifsn(const WeightVector& w);

/// SIFS + AIFSN_i * slot time.
SimTime ifs(Priority p, const MacTimingConfig& t, const Aifsn& a);

/// PF_i = 1 - w_i / sum(w).
PriorityFactors priority_factors(const WeightVector& w);

/// integer(pf^(2+k) * u * slot); u is the uniform draw in [0, cw].
SimTime prioritized_backoff(double pf, int k, int u, SimTime slot_time);
/// integer(2^(2+k) * u * slot).
SimTime legacy_backoff(int k, int u, SimTime slot_time);

SimTime draw_backoff(Priority p, int k, int cw, const PriorityFactors& pf, SimTime slot_time, Rng& rng);
SimTime draw_backoff_legacy(int k, int cw, SimTime slot_time, Rng& rng);

enum class MacPhase : std::uint8_t { Idle, WaitIfs, Backoff, WaitCts, TxData, WaitAck, Deferred, Suspended };

std::string_view to_string(MacPhase p) noexcept;

struct RetryThresholds {
  int mp = 4;
  int lp = 7;

  void validate() const;
};

class MacState {
public:
  explicit MacState(const MacTimingConfig& t) : m_cw_min(t.cw_min), m_cw_max(t.cw_max), m_cw(t.cw_min) {}

  MacPhase phase = MacPhase::Idle;
  SimTime backoff_remaining = 0;
  SimTime nav = 0;
  int k = 0;
  int retry_counter_mp = 0;
  int retry_counter_lp = 0;
  bool boosted = false;

  int cw() const noexcept { return m_cw; }
  int cw_min() const noexcept { return m_cw_min; }
  int cw_max() const noexcept { return m_cw_max; }

  /// k += 1 and the window doubles, saturating at cw_max.
  void escalate() noexcept;
  /// k = 0, cw = cw_min.
  void reset_window() noexcept;

private:
  int m_cw_min;
  int m_cw_max;
  int m_cw;
};

/// Class whose IFS and priority factor a frame of class `p` contends with.
/// A boosted node contends as HP.
constexpr Priority contention_class(Priority p, bool boosted) noexcept { return boosted ? Priority::HP : p; }

/// CTS flag chosen by an RTS recipient: 1 (suspend) iff the recipient's own
/// head-of-line frame has strictly higher priority than the requester's.
int cts_flag(Priority rts_priority, std::optional<Priority> own_head_of_line) noexcept;

struct RtsResponse {
  bool forward = false; // relay the RTS once to this node's neighbours
  int cts_flag = 0;
};

/// Receiver side of the handshake for an RTS addressed to this node.
RtsResponse on_rts_received(const Frame& rts, std::optional<Priority> own_head_of_line, bool forwarding);

enum class CtsAction : std::uint8_t {
  SendData,    // addressed CTS-0
  Defer,       // addressed CTS-1: window escalated, counters updated; caller redraws backoff
  SetNav,      // overheard CTS-0
  ResumeState, // overheard CTS-1: drop the reservation of the matching RTS
  Ignore,      // stale CTS (no matching outstanding RTS)
};

/// Sender side. `outstanding` is the exchange id of this node's pending RTS.
CtsAction on_cts_received(MacState& s, const Frame& cts, NodeId self, std::optional<std::uint64_t> outstanding,
                          Priority frame_class, const RetryThresholds& thresholds);

/// Sets `boosted` once the class retry counter reaches its threshold. HP
/// nodes have no counter and are never boosted.
void apply_retry_threshold(MacState& s, Priority frame_class, const RetryThresholds& thresholds);

/// CTS/ACK timeout. Escalates the window and bumps the class retry counter.
/// Returns true when k exceeds `retry_limit`: the frame is to be dropped and
/// the window has already been reset.
bool on_collision_or_timeout(MacState& s, Priority frame_class, const RetryThresholds& thresholds, int retry_limit);

/// Successful DATA/ACK exchange: window, retry counters and boost reset.
void on_success(MacState& s) noexcept;

} // namespace ps2mac
