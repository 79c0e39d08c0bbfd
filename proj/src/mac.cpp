#include "ps2mac/mac.hpp"

#include <algorithm>
#include <cmath>

namespace ps2mac {

Aifsn aifsn(const WeightVector& w) {
  Aifsn a{};
  for (Priority p : kAllClasses) {
    a[index(p)] = static_cast<int>(w.sum() / w[p]);
  }
  return a;
}

SimTime ifs(Priority p, const MacTimingConfig& t, const Aifsn& a) {
  return t.sifs + static_cast<SimTime>(a[index(p)]) * t.slot_time;
}

PriorityFactors priority_factors(const WeightVector& w) {
  const double total = w.sum();
  return {1.0 - w[Priority::HP] / total, 1.0 - w[Priority::MP] / total, 1.0 - w[Priority::LP] / total};
}

SimTime prioritized_backoff(double pf, int k, int u, SimTime slot_time) {
  return static_cast<SimTime>(std::pow(pf, 2 + k) * u * static_cast<double>(slot_time));
}

SimTime legacy_backoff(int k, int u, SimTime slot_time) {
  return static_cast<SimTime>(std::ldexp(1.0, 2 + k) * u * static_cast<double>(slot_time));
}

SimTime draw_backoff(Priority p, int k, int cw, const PriorityFactors& pf, SimTime slot_time, Rng& rng) {
  std::uniform_int_distribution<int> u(0, cw);
  return prioritized_backoff(pf[p], k, u(rng), slot_time);
}

SimTime draw_backoff_legacy(int k, int cw, SimTime slot_time, Rng& rng) {
  std::uniform_int_distribution<int> u(0, cw);
  return legacy_backoff(k, u(rng), slot_time);
}

std::string_view to_string(MacPhase p) noexcept {
  switch (p) {
  case MacPhase::Idle:
    return "IDLE";
  case MacPhase::WaitIfs:
    return "WAIT_IFS";
  case MacPhase::Backoff:
    return "BACKOFF";
  case MacPhase::WaitCts:
    return "WAIT_CTS";
  case MacPhase::TxData:
    return "TX_DATA";
  case MacPhase::WaitAck:
    return "WAIT_ACK";
  case MacPhase::Deferred:
    return "DEFERRED";
  case MacPhase::Suspended:
    return "SUSPENDED";
  }
  return "?";
}

void RetryThresholds::validate() const {
  if (mp <= 0 || lp <= 0) {
    throw std::invalid_argument("retry thresholds must be positive");
  }
}

void MacState::escalate() noexcept {
  ++k;
  m_cw = std::min(2 * m_cw, m_cw_max);
}

void MacState::reset_window() noexcept {
  k = 0;
  m_cw = m_cw_min;
}

int cts_flag(Priority rts_priority, std::optional<Priority> own) noexcept {
  if (!own) {
    return 0;
  }
  return code(rts_priority) <= code(*own) ? 0 : 1;
}

RtsResponse on_rts_received(const Frame& rts, std::optional<Priority> own, bool forwarding) {
  RtsResponse r;
  r.forward = forwarding && rts.hops == 0;
  r.cts_flag = cts_flag(rts.priority, own);
  return r;
}

CtsAction on_cts_received(MacState& s, const Frame& cts, NodeId self, std::optional<std::uint64_t> outstanding,
                          Priority frame_class, const RetryThresholds& thresholds) {
  if (cts.dst != self) {
    return cts.flag == 0 ? CtsAction::SetNav : CtsAction::ResumeState;
  }
  if (!outstanding || *outstanding != cts.exchange) {
    return CtsAction::Ignore;
  }
  if (cts.flag == 0) {
    s.phase = MacPhase::TxData;
    return CtsAction::SendData;
  }
  s.phase = MacPhase::Deferred;
  s.escalate();
  if (frame_class == Priority::MP) {
    ++s.retry_counter_mp;
  } else if (frame_class == Priority::LP) {
    ++s.retry_counter_lp;
  }
  apply_retry_threshold(s, frame_class, thresholds);
  return CtsAction::Defer;
}

void apply_retry_threshold(MacState& s, Priority frame_class, const RetryThresholds& t) {
  if (frame_class == Priority::MP && s.retry_counter_mp >= t.mp) {
    s.boosted = true;
  } else if (frame_class == Priority::LP && s.retry_counter_lp >= t.lp) {
    s.boosted = true;
  }
}

bool on_collision_or_timeout(MacState& s, Priority frame_class, const RetryThresholds& t, int retry_limit) {
  s.escalate();
  if (frame_class == Priority::MP) {
    ++s.retry_counter_mp;
  } else if (frame_class == Priority::LP) {
    ++s.retry_counter_lp;
  }
  apply_retry_threshold(s, frame_class, t);
  if (s.k > retry_limit) {
    s.reset_window();
    return true;
  }
  return false;
}

void on_success(MacState& s) noexcept {
  s.reset_window();
  s.retry_counter_mp = 0;
  s.retry_counter_lp = 0;
  s.boosted = false;
}

} // namespace ps2mac
