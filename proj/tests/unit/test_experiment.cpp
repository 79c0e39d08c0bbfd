#include "ps2mac/experiment.hpp"

#include <doctest.h>

using namespace ps2mac;

TEST_CASE("seed ranges") {
  CHECK(seed_range(5, 3) == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(seed_range(1, 0).empty());
}

TEST_CASE("parallel replications match sequential ones") {
  SimConfig cfg;
  cfg.duration_s = 3;
  const auto spec = builtin_scenario("IV");
  const auto seeds = seed_range(1, 4);
  const auto par = run_seeds(spec, cfg, seeds, 4);
  const auto seq = run_seeds(spec, cfg, seeds, 1);
  REQUIRE(par.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(runs_csv_rows("IV", cfg.scheme, seeds[i], par[i]) == runs_csv_rows("IV", cfg.scheme, seeds[i], seq[i]));
  }
}

TEST_CASE("csv layout") {
  CHECK(runs_csv_header() ==
        "scenario,scheme,seed,class,throughput_bps,pdr,avg_delay_us,control_overhead_pct,generated,delivered,"
        "dropped_retry,dropped_queue\n");
  RunMetrics m;
  m.duration_s = 1;
  m[Priority::HP].generated = 2;
  m[Priority::HP].delivered = 1;
  m[Priority::HP].bits_delivered = 4096;
  m[Priority::HP].sum_delay = 3000;
  m.data_bytes = 540;
  m.control_bytes = 54;
  const std::string rows = runs_csv_rows("I", Scheme::Ps2Mac, 3, m);
  CHECK(rows.rfind("I,ps2mac,3,HP,4096.000000,0.500000,3000.000000,10.000000,2,1,0,0\n", 0) == 0);
  CHECK(rows.find("I,ps2mac,3,MP,0.000000,,,10.000000,0,0,0,0\n") != std::string::npos);
  CHECK(rows.find(",ALL,") != std::string::npos);
}

TEST_CASE("aggregate over runs") {
  RunMetrics a, b;
  a.duration_s = b.duration_s = 1;
  a[Priority::LP].bits_delivered = 100;
  b[Priority::LP].bits_delivered = 300;
  const std::vector<RunMetrics> runs{a, b};
  const Aggregate g = aggregate(runs);
  CHECK(g.runs == 2);
  CHECK(g[Priority::LP].throughput.mean == 200);
  CHECK(g[Priority::LP].pdr.n == 0);
  CHECK(g.balanced);
  const std::string csv = aggregate_csv_rows("V", Scheme::Atst, g);
  CHECK(csv.find("V,atst,LP,2,200.000000,141.421356,,,,,,") != std::string::npos);
}

TEST_CASE("access table helper") {
  const auto rows = access_table(WeightVector::defaults());
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(rows[i].quanta == golden_access_table()[i]);
  }
  CHECK(rows[0].ratio.hp == 240);
  CHECK(access_table(WeightVector(4, 2, 1))[0].quanta == Quanta{{32, 2, 1}});
}
