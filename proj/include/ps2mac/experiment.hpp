#pragma once

// Replications over seeds, aggregation and the CSV formats shared by the
// command line tool, the tests and the Python module.

#include "ps2mac/metrics.hpp"
#include "ps2mac/sched.hpp"
#include "ps2mac/simulator.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ps2mac {

/// seed_base, seed_base + 1, ...
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

/// One run per seed, `threads` at a time (0 = hardware concurrency). Results
/// are in seed order regardless of completion order.
std::vector<RunMetrics> run_seeds(const ScenarioSpec& spec, const SimConfig& cfg,
                                  const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

struct ClassAggregate {
  Summary throughput; // bits/s
  Summary pdr;
  Summary delay; // us
};

struct Aggregate {
  std::array<ClassAggregate, kNumClasses> per_class;
  ClassAggregate total;
  Summary overhead; // %
  std::size_t runs = 0;
  bool balanced = true; // every run's ledger balanced

  const ClassAggregate& operator[](Priority p) const noexcept { return per_class[index(p)]; }
};

Aggregate aggregate(std::span<const RunMetrics> runs);

/// scenario,scheme,seed,class,throughput_bps,pdr,avg_delay_us,control_overhead_pct,generated,delivered,dropped_retry,dropped_queue
std::string runs_csv_header();
/// Rows for HP, MP, LP and ALL. Absent metrics are empty fields.
std::string runs_csv_rows(std::string_view scenario, Scheme scheme, std::uint64_t seed, const RunMetrics& m);

std::string aggregate_csv_header();
std::string aggregate_csv_rows(std::string_view scenario, Scheme scheme, const Aggregate& a);

struct AccessTableRow {
  std::string scenario;
  QueuePercentages input;
  QueuePercentages normalized;
  AccessRatio ratio; // unrounded w_i * normalized share
  Quanta quanta;
};

/// The rationed-dequeuing pipeline applied to the five built-in scenario mixes.
std::vector<AccessTableRow> access_table(const WeightVector& w, double divisor = kDefaultQuantumDivisor);
/// Published quanta for the default weights, in scenario order I..V.
const std::array<Quanta, 5>& golden_access_table();

/// Fixed-precision decimal used in every CSV field.
std::string format_number(double v, int precision = 6);

} // namespace ps2mac
