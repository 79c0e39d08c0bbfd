#include "ps2mac/metrics.hpp"

#include <doctest.h>

#include <cmath>

using namespace ps2mac;

TEST_CASE("throughput") {
  RunMetrics m;
  m.duration_s = 60;
  m[Priority::HP].bits_delivered = 1'200'000;
  CHECK(throughput(m, Priority::HP) == doctest::Approx(20000));
  CHECK(throughput(m, Priority::LP) == 0);
  m[Priority::LP].bits_delivered = 240 * 512 * 8;
  CHECK(throughput(m, Priority::LP) == doctest::Approx(16384));
  CHECK(throughput(m) == doctest::Approx(20000 + 16384));
}

TEST_CASE("delivery ratio") {
  RunMetrics m;
  m[Priority::MP].generated = 240;
  m[Priority::MP].delivered = 180;
  CHECK(*pdr(m, Priority::MP) == doctest::Approx(0.75));
  CHECK_FALSE(pdr(m, Priority::HP).has_value());
  m[Priority::HP].generated = 240;
  m[Priority::HP].delivered = 240;
  CHECK(*pdr(m, Priority::HP) == 1.0);
  CHECK(*pdr(m) == doctest::Approx(420.0 / 480));
}

TEST_CASE("delay") {
  RunMetrics m;
  CHECK_FALSE(avg_delay(m, Priority::HP).has_value());
  m[Priority::HP].delivered = 2;
  m[Priority::HP].sum_delay = 5000;
  CHECK(*avg_delay(m, Priority::HP) == 2500);
}

TEST_CASE("control overhead") {
  RunMetrics m;
  CHECK_FALSE(control_overhead(m).has_value());
  m.data_bytes = 540;
  m.control_bytes = 20 + 14 + 14;
  CHECK(*control_overhead(m) == doctest::Approx(8.888888).epsilon(1e-6));
  m.control_bytes = 0;
  CHECK(*control_overhead(m) == 0);
}

TEST_CASE("conservation ledger") {
  ClassCounters c;
  c.generated = 10;
  c.delivered = 6;
  c.dropped_retry = 1;
  c.dropped_queue = 1;
  c.queued = 1;
  c.in_flight = 1;
  CHECK(c.balanced());
  c.in_flight = 0;
  CHECK_FALSE(c.balanced());
}

TEST_CASE("aggregation uses the sample standard deviation") {
  const std::vector<double> v{1, 2, 3, 4};
  const Summary s = summarize(std::span<const double>(v));
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3)));
  const std::vector<std::optional<double>> w{1.0, std::nullopt, 3.0};
  const Summary t = summarize(std::span<const std::optional<double>>(w));
  CHECK(t.n == 2);
  CHECK(t.mean == 2);
  const Summary one = summarize(std::span<const double>(std::vector<double>{5}));
  CHECK(one.stddev == 0);
}
