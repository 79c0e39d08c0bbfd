#include "ps2mac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace ps2mac {

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) {
    seeds[i] = base + i;
  }
  return seeds;
}

std::vector<RunMetrics> run_seeds(const ScenarioSpec& spec, const SimConfig& cfg,
                                  const std::vector<std::uint64_t>& seeds, unsigned threads) {
  spec.validate();
  cfg.validate();
  std::vector<RunMetrics> out(seeds.size());
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        SimConfig c = cfg;
        c.seed = seeds[i];
        c.trace = false;
        out[i] = run(spec, c).metrics;
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

namespace {

void fold(ClassAggregate& agg, const std::vector<double>& thr, const std::vector<std::optional<double>>& pdrs,
          const std::vector<std::optional<double>>& delays) {
  agg.throughput = summarize(std::span<const double>(thr));
  agg.pdr = summarize(std::span<const std::optional<double>>(pdrs));
  agg.delay = summarize(std::span<const std::optional<double>>(delays));
}

} // namespace

Aggregate aggregate(std::span<const RunMetrics> runs) {
  Aggregate a;
  a.runs = runs.size();
  for (Priority p : kAllClasses) {
    std::vector<double> thr;
    std::vector<std::optional<double>> pdrs, delays;
    for (const auto& m : runs) {
      thr.push_back(throughput(m, p));
      pdrs.push_back(pdr(m, p));
      delays.push_back(avg_delay(m, p));
    }
    fold(a.per_class[index(p)], thr, pdrs, delays);
  }
  std::vector<double> thr;
  std::vector<std::optional<double>> pdrs, delays, overheads;
  for (const auto& m : runs) {
    thr.push_back(throughput(m));
    pdrs.push_back(pdr(m));
    delays.push_back(avg_delay(m));
    overheads.push_back(control_overhead(m));
    a.balanced = a.balanced && m.balanced();
  }
  fold(a.total, thr, pdrs, delays);
  a.overhead = summarize(std::span<const std::optional<double>>(overheads));
  return a;
}

std::vector<AccessTableRow> access_table(const WeightVector& w, double divisor) {
  std::vector<AccessTableRow> rows;
  for (auto id : kScenarioIds) {
    const auto mix = builtin_scenario(id).mix;
    const QueuePercentages in(mix[0], mix[1], mix[2]);
    const QueuePercentages norm = normalize_percentages(in);
    const AccessRatio r = access_ratio(w, norm);
    rows.push_back({std::string(id), in, norm, r, ratio_to_quanta(r, divisor)});
  }
  return rows;
}

const std::array<Quanta, 5>& golden_access_table() {
  static const std::array<Quanta, 5> golden{{
      {{24, 2, 1}},
      {{15, 6, 2}},
      {{10, 7, 3}},
      {{10, 7, 2}},
      {{10, 7, 3}},
  }};
  return golden;
}

std::string format_number(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string summary_fields(const Summary& s) {
  if (s.n == 0) {
    return ",";
  }
  return format_number(s.mean) + "," + format_number(s.stddev);
}

std::string row(std::string_view scenario, Scheme scheme, std::uint64_t seed, std::string_view cls, double thr,
                const std::optional<double>& p, const std::optional<double>& d, const std::optional<double>& ovh,
                const ClassCounters& c) {
  std::string r;
  r.append(scenario).append(",").append(to_string(scheme)).append(",").append(std::to_string(seed)).append(",");
  r.append(cls).append(",").append(format_number(thr)).append(",").append(opt(p)).append(",").append(opt(d));
  r.append(",").append(opt(ovh)).append(",").append(std::to_string(c.generated)).append(",");
  r.append(std::to_string(c.delivered)).append(",").append(std::to_string(c.dropped_retry)).append(",");
  r.append(std::to_string(c.dropped_queue)).append("\n");
  return r;
}

} // namespace

std::string runs_csv_header() {
  return "scenario,scheme,seed,class,throughput_bps,pdr,avg_delay_us,control_overhead_pct,generated,delivered,"
         "dropped_retry,dropped_queue\n";
}

std::string runs_csv_rows(std::string_view scenario, Scheme scheme, std::uint64_t seed, const RunMetrics& m) {
  const auto ovh = control_overhead(m);
  std::string out;
  for (Priority p : kAllClasses) {
    out += row(scenario, scheme, seed, to_string(p), throughput(m, p), pdr(m, p), avg_delay(m, p), ovh, m[p]);
  }
  out += row(scenario, scheme, seed, "ALL", throughput(m), pdr(m), avg_delay(m), ovh, m.total());
  return out;
}

std::string aggregate_csv_header() {
  return "scenario,scheme,class,runs,throughput_bps_mean,throughput_bps_sd,pdr_mean,pdr_sd,avg_delay_us_mean,"
         "avg_delay_us_sd,control_overhead_pct_mean,control_overhead_pct_sd\n";
}

std::string aggregate_csv_rows(std::string_view scenario, Scheme scheme, const Aggregate& a) {
  std::string out;
  auto emit = [&](std::string_view cls, const ClassAggregate& c) {
    out.append(scenario).append(",").append(to_string(scheme)).append(",").append(cls).append(",");
    out.append(std::to_string(a.runs)).append(",").append(summary_fields(c.throughput)).append(",");
    out.append(summary_fields(c.pdr)).append(",").append(summary_fields(c.delay)).append(",");
    out.append(summary_fields(a.overhead)).append("\n");
  };
  for (Priority p : kAllClasses) {
    emit(to_string(p), a[p]);
  }
  emit("ALL", a.total);
  return out;
}

} // namespace ps2mac
