#include "ps2mac/experiment.hpp"
#include "ps2mac/mac.hpp"
#include "ps2mac/sched.hpp"
#include "ps2mac/simulator.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ps2mac;

namespace {

WeightVector weights_from(const std::array<double, 3>& w) { return {w[0], w[1], w[2]}; }

py::dict class_dict(const RunMetrics& m, Priority p) {
  py::dict d;
  const auto& c = m[p];
  d["throughput_bps"] = throughput(m, p);
  d["pdr"] = pdr(m, p);
  d["avg_delay_us"] = avg_delay(m, p);
  d["generated"] = c.generated;
  d["delivered"] = c.delivered;
  d["dropped_retry"] = c.dropped_retry;
  d["dropped_queue"] = c.dropped_queue;
  d["queued"] = c.queued;
  d["in_flight"] = c.in_flight;
  return d;
}

py::dict metrics_dict(const RunMetrics& m) {
  py::dict d;
  for (Priority p : kAllClasses) {
    d[py::str(std::string(to_string(p)))] = class_dict(m, p);
  }
  d["control_overhead_pct"] = control_overhead(m);
  d["control_bytes"] = m.control_bytes;
  d["data_bytes"] = m.data_bytes;
  d["balanced"] = m.balanced();
  d["duration_s"] = m.duration_s;
  return d;
}

struct Args {
  std::string scenario;
  std::string scheme;
  double duration;
  std::array<double, 3> weights;
  std::array<int, 2> thresholds;
  int retry_limit;
  std::size_t queue_capacity;
};

std::pair<ScenarioSpec, SimConfig> build(const Args& a) {
  ScenarioSpec spec = builtin_scenario(a.scenario);
  spec.weights = weights_from(a.weights);
  SimConfig cfg;
  cfg.scheme = parse_scheme(a.scheme);
  cfg.duration_s = a.duration;
  cfg.thresholds = {a.thresholds[0], a.thresholds[1]};
  cfg.retry_limit = a.retry_limit;
  cfg.queue_capacity = a.queue_capacity;
  return {spec, cfg};
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Proportional-share scheduling and MAC simulator";

  py::register_exception<std::invalid_argument>(m, "ValidationError", PyExc_ValueError);

  m.def(
      "normalize_percentages",
      [](double x, double y, double z) {
        const auto n = normalize_percentages(QueuePercentages(x, y, z));
        return std::make_tuple(n.x(), n.y(), n.z());
      },
      py::arg("x"), py::arg("y"), py::arg("z"));

  m.def(
      "quanta",
      [](double x, double y, double z, std::array<double, 3> weights, double divisor) {
        const auto r = access_ratio(weights_from(weights), normalize_percentages(QueuePercentages(x, y, z)));
        return ratio_to_quanta(r, divisor).n;
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("weights") = std::array<double, 3>{3, 2, 1},
      py::arg("divisor") = kDefaultQuantumDivisor, "Dequeue quanta per class for queue shares x, y, z (percent).");

  m.def(
      "access_table",
      [](std::array<double, 3> weights) {
        py::list rows;
        for (const auto& r : access_table(weights_from(weights))) {
          py::dict d;
          d["scenario"] = r.scenario;
          d["input"] = std::make_tuple(r.input.x(), r.input.y(), r.input.z());
          d["normalized"] = std::make_tuple(r.normalized.x(), r.normalized.y(), r.normalized.z());
          d["ratio"] = std::make_tuple(r.ratio.hp, r.ratio.mp, r.ratio.lp);
          d["quanta"] = r.quanta.n;
          rows.append(d);
        }
        return rows;
      },
      py::arg("weights") = std::array<double, 3>{3, 2, 1});

  m.def("golden_access_table", [] {
    std::vector<std::array<int, 3>> out;
    for (const auto& q : golden_access_table()) {
      out.push_back(q.n);
    }
    return out;
  });

  m.def(
      "aifsn", [](std::array<double, 3> w) { return aifsn(weights_from(w)); },
      py::arg("weights") = std::array<double, 3>{3, 2, 1});
  m.def(
      "ifs",
      [](std::array<double, 3> w) {
        const MacTimingConfig t;
        const auto a = aifsn(weights_from(w));
        return std::array<SimTime, 3>{ifs(Priority::HP, t, a), ifs(Priority::MP, t, a), ifs(Priority::LP, t, a)};
      },
      py::arg("weights") = std::array<double, 3>{3, 2, 1}, "IFS per class in microseconds with default timing.");
  m.def(
      "priority_factors",
      [](std::array<double, 3> w) {
        const auto pf = priority_factors(weights_from(w));
        return std::array<double, 3>{pf[Priority::HP], pf[Priority::MP], pf[Priority::LP]};
      },
      py::arg("weights") = std::array<double, 3>{3, 2, 1});
  m.def("prioritized_backoff", &prioritized_backoff, py::arg("pf"), py::arg("k"), py::arg("u"),
        py::arg("slot_time") = 20);

  m.def(
      "run",
      [](const std::string& scenario, const std::string& scheme, std::uint64_t seed, double duration,
         std::array<double, 3> weights, std::array<int, 2> thresholds, int retry_limit, std::size_t queue_capacity) {
        auto [spec, cfg] = build({scenario, scheme, duration, weights, thresholds, retry_limit, queue_capacity});
        cfg.seed = seed;
        RunMetrics metrics;
        {
          py::gil_scoped_release release;
          metrics = run(spec, cfg).metrics;
        }
        return metrics_dict(metrics);
      },
      py::arg("scenario") = "III", py::arg("scheme") = "ps2mac", py::arg("seed") = 1, py::arg("duration") = 60.0,
      py::arg("weights") = std::array<double, 3>{3, 2, 1}, py::arg("thresholds") = std::array<int, 2>{4, 7},
      py::arg("retry_limit") = 7, py::arg("queue_capacity") = kDefaultClassCapacity,
      "Simulate one (scenario, scheme, seed) and return per-class metrics.");

  m.def(
      "run_csv",
      [](const std::string& scenario, const std::string& scheme, std::size_t seeds, std::uint64_t seed_base,
         double duration, unsigned threads) {
        auto [spec, cfg] = build({scenario, scheme, duration, {3, 2, 1}, {4, 7}, 7, kDefaultClassCapacity});
        const auto list = seed_range(seed_base, seeds);
        std::vector<RunMetrics> runs;
        {
          py::gil_scoped_release release;
          runs = run_seeds(spec, cfg, list, threads);
        }
        std::string csv = runs_csv_header();
        for (std::size_t i = 0; i < runs.size(); ++i) {
          csv += runs_csv_rows(spec.id, cfg.scheme, list[i], runs[i]);
        }
        std::string agg = aggregate_csv_header() + aggregate_csv_rows(spec.id, cfg.scheme, aggregate(runs));
        return std::make_pair(csv, agg);
      },
      py::arg("scenario") = "III", py::arg("scheme") = "ps2mac", py::arg("seeds") = 10, py::arg("seed_base") = 1,
      py::arg("duration") = 60.0, py::arg("threads") = 0,
      "Run several seeds and return (runs CSV, aggregate CSV) as text.");

  m.attr("SCENARIOS") = std::vector<std::string>(kScenarioIds.begin(), kScenarioIds.end());
}
