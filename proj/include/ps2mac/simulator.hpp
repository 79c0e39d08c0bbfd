#pragma once

// Event-driven network simulation of one (scenario, scheme, seed) run.

#include "ps2mac/core.hpp"
#include "ps2mac/mac.hpp"
#include "ps2mac/metrics.hpp"
#include "ps2mac/phy.hpp"
#include "ps2mac/sched.hpp"
#include "ps2mac/traffic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ps2mac {

enum class Scheme : std::uint8_t {
  Ps2Mac,    // rationed dequeuing + prioritized IFS/backoff + flagged RTS/CTS
  Atst,      // two-class alert/suspend baseline, single FIFO
  LegacyDcf, // plain RTS/CTS DCF reference, single FIFO
};

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view s);

/// Which of the RTS recipient's own priorities is compared with the request.
enum class OwnPriorityRule : std::uint8_t {
  HeadOfLine,    // the frame its MAC is currently contending with
  HighestQueued, // the highest class it holds anywhere
};

struct SimConfig {
  Scheme scheme = Scheme::Ps2Mac;
  std::uint64_t seed = 1;
  double duration_s = 60.0;
  MacTimingConfig timing;
  FrameSizes sizes;
  RetryThresholds thresholds;
  int retry_limit = 7;
  std::size_t queue_capacity = kDefaultClassCapacity; // per class; 0 = unbounded
  double quantum_divisor = kDefaultQuantumDivisor;
  OwnPriorityRule own_priority = OwnPriorityRule::HeadOfLine;
  bool trace = false;

  void validate() const;
  SimTime duration_us() const;
};

enum class TraceEvent : std::uint8_t { TxStart, RxOk, Drop, Deliver };

struct TraceRecord {
  SimTime time = 0;
  TraceEvent event = TraceEvent::TxStart;
  NodeId node = 0; // transmitter, receiver, or the node dropping/delivering
  FrameKind kind = FrameKind::Data;
  std::uint64_t frame_id = 0;
  std::uint64_t exchange = 0;
  NodeId src = 0;
  NodeId dst = 0;
  Priority priority = Priority::HP;
  int flag = 0;
  int hops = 0;
  std::optional<Priority> own_priority; // CTS only: the responder's compared priority
};

struct RunResult {
  RunMetrics metrics;
  Channel::Stats channel;
  std::vector<TraceRecord> trace;
  std::uint64_t priority_mismatches = 0; // delivered DATA whose stamp differs from its flow
};

/// Runs the given flows over a fixed topology.
RunResult simulate(const ScenarioSpec& spec, const SimConfig& cfg, const Topology& topo,
                   const std::vector<Flow>& flows);

/// Builds the topology and flows from the seed, then simulates. Topology and
/// flows depend only on (spec, seed), so different schemes with the same seed
/// see identical traffic.
RunResult run(const ScenarioSpec& spec, const SimConfig& cfg);

struct AuditResult {
  bool ok = true;
  std::size_t checked = 0;
  std::string violation; // first failure, empty when ok
};

/// Every CTS-1 answers a strict priority reversal, every CTS-0 does not, and
/// no DATA is sent in an exchange that drew a CTS-1.
AuditResult audit_suspend(const std::vector<TraceRecord>& trace);
/// No RTS is relayed more than once.
AuditResult audit_forward_once(const std::vector<TraceRecord>& trace);
/// Every DATA transmission follows an addressed CTS-0 of the same exchange.
AuditResult audit_data_after_clear(const std::vector<TraceRecord>& trace);

} // namespace ps2mac
