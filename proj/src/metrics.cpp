#include "ps2mac/metrics.hpp"

#include <cmath>

namespace ps2mac {

ClassCounters& ClassCounters::operator+=(const ClassCounters& o) noexcept {
  generated += o.generated;
  delivered += o.delivered;
  bits_delivered += o.bits_delivered;
  sum_delay += o.sum_delay;
  dropped_retry += o.dropped_retry;
  dropped_queue += o.dropped_queue;
  queued += o.queued;
  in_flight += o.in_flight;
  return *this;
}

bool ClassCounters::balanced() const noexcept {
  return generated == delivered + dropped_retry + dropped_queue + queued + in_flight;
}

ClassCounters RunMetrics::total() const noexcept {
  ClassCounters t;
  for (const auto& c : per_class) {
    t += c;
  }
  return t;
}

bool RunMetrics::balanced() const noexcept {
  for (const auto& c : per_class) {
    if (!c.balanced() || c.delivered > c.generated) {
      return false;
    }
  }
  return true;
}

namespace {

double throughput_of(const ClassCounters& c, double duration_s) {
  return duration_s > 0.0 ? static_cast<double>(c.bits_delivered) / duration_s : 0.0;
}

std::optional<double> pdr_of(const ClassCounters& c) {
  if (c.generated == 0) {
    return std::nullopt;
  }
  return static_cast<double>(c.delivered) / static_cast<double>(c.generated);
}

std::optional<double> delay_of(const ClassCounters& c) {
  if (c.delivered == 0) {
    return std::nullopt;
  }
  return static_cast<double>(c.sum_delay) / static_cast<double>(c.delivered);
}

} // namespace

double throughput(const RunMetrics& m, Priority p) { return throughput_of(m[p], m.duration_s); }
double throughput(const RunMetrics& m) { return throughput_of(m.total(), m.duration_s); }
std::optional<double> pdr(const RunMetrics& m, Priority p) { return pdr_of(m[p]); }
std::optional<double> pdr(const RunMetrics& m) { return pdr_of(m.total()); }
std::optional<double> avg_delay(const RunMetrics& m, Priority p) { return delay_of(m[p]); }
std::optional<double> avg_delay(const RunMetrics& m) { return delay_of(m.total()); }

std::optional<double> control_overhead(const RunMetrics& m) {
  if (m.data_bytes == 0) {
    return std::nullopt;
  }
  return 100.0 * static_cast<double>(m.control_bytes) / static_cast<double>(m.data_bytes);
}

Summary summarize(std::span<const std::optional<double>> values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v) {
      present.push_back(*v);
    }
  }
  return summarize(std::span<const double>(present));
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) {
    return s;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) {
      sq += (v - s.mean) * (v - s.mean);
    }
    s.stddev = std::sqrt(sq / static_cast<double>(s.n - 1));
  }
  return s;
}

} // namespace ps2mac
