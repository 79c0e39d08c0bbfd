#pragma once

#include "ps2mac/core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ps2mac {

struct ClassCounters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t bits_delivered = 0; // payload bits at the final destination
  std::int64_t sum_delay = 0;       // us, over delivered packets only
  std::uint64_t dropped_retry = 0;
  std::uint64_t dropped_queue = 0;
  std::uint64_t queued = 0;    // still in an interface queue at the end
  std::uint64_t in_flight = 0; // held by a MAC at the end

  ClassCounters& operator+=(const ClassCounters& o) noexcept;
  /// generated == delivered + drops + queued + in_flight
  bool balanced() const noexcept;
};

struct Diagnostics {
  std::uint64_t events = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t receptions_ok = 0;
  std::uint64_t receptions_collided = 0;
  std::uint64_t cts_clear = 0;
  std::uint64_t cts_suspend = 0;
  std::uint64_t stale_cts = 0;
  std::uint64_t rts_refused_nav = 0;  // addressed RTS ignored under NAV
  std::uint64_t rts_refused_busy = 0; // addressed RTS ignored while in another exchange
  std::uint64_t forwarded_rts = 0;
  std::uint64_t alerts = 0;
  std::uint64_t suspends = 0;
  std::uint64_t boosts = 0;
  std::uint64_t cts_timeouts = 0;
  std::uint64_t ack_timeouts = 0;
};

struct RunMetrics {
  std::array<ClassCounters, kNumClasses> per_class{};
  std::uint64_t control_bytes = 0;
  std::uint64_t data_bytes = 0;
  double duration_s = 0.0;
  Diagnostics diag;

  const ClassCounters& operator[](Priority p) const noexcept { return per_class[index(p)]; }
  ClassCounters& operator[](Priority p) noexcept { return per_class[index(p)]; }
  ClassCounters total() const noexcept;
  /// Conservation ledger holds for every class.
  bool balanced() const noexcept;
};

/// Delivered payload bits per second of simulated time.
double throughput(const RunMetrics& m, Priority p);
double throughput(const RunMetrics& m);

/// delivered / generated; nullopt when nothing was generated.
std::optional<double> pdr(const RunMetrics& m, Priority p);
std::optional<double> pdr(const RunMetrics& m);

/// Mean end-to-end delay in us; nullopt with no deliveries.
std::optional<double> avg_delay(const RunMetrics& m, Priority p);
std::optional<double> avg_delay(const RunMetrics& m);

/// 100 * control bytes / data bytes on the air; nullopt with no data bytes.
std::optional<double> control_overhead(const RunMetrics& m);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0; // sample standard deviation (n - 1)
  std::size_t n = 0;
};

/// Mean and sample stddev over the present values; absent entries are skipped.
Summary summarize(std::span<const std::optional<double>> values);
Summary summarize(std::span<const double> values);

} // namespace ps2mac
