#include "ps2mac/mac.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ps2mac;

namespace {

const WeightVector kW = WeightVector::defaults();
const MacTimingConfig kT{};

Frame cts_frame(NodeId src, NodeId dst, std::uint64_t exchange, int flag) {
  Frame f = Frame::control(100, FrameKind::Cts, Priority::MP, src, dst, 0, FrameSizes{}, flag);
  f.exchange = exchange;
  return f;
}

} // namespace

TEST_CASE("aifsn") {
  CHECK(aifsn(kW) == Aifsn{2, 3, 6});
  CHECK(aifsn(WeightVector(6, 3, 2)) == Aifsn{1, 3, 5});
}

TEST_CASE("inter-frame spaces") {
  const Aifsn a = aifsn(kW);
  CHECK(ifs(Priority::HP, kT, a) == 50);
  CHECK(ifs(Priority::MP, kT, a) == 70);
  CHECK(ifs(Priority::LP, kT, a) == 130);
  CHECK(ifs(Priority::HP, kT, Aifsn{0, 1, 2}) == kT.sifs);
}

TEST_CASE("priority factors") {
  const auto pf = priority_factors(kW);
  CHECK(pf[Priority::HP] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pf[Priority::MP] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(pf[Priority::LP] == doctest::Approx(5.0 / 6).epsilon(1e-12));
  const auto pf2 = priority_factors(WeightVector(4, 2, 1));
  CHECK(pf2[Priority::HP] == doctest::Approx(3.0 / 7));
  CHECK(pf2[Priority::MP] == doctest::Approx(5.0 / 7));
  CHECK(pf2[Priority::LP] == doctest::Approx(6.0 / 7));
}

TEST_CASE("random weight triples keep IFS and PF ordered") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  int checked = 0;
  while (checked < 2000) {
    std::array<double, 3> w{u(rng), u(rng), u(rng)};
    std::sort(w.begin(), w.end(), std::greater<>());
    if (!(w[0] > w[1] && w[1] > w[2])) {
      continue;
    }
    const WeightVector wv(w[0], w[1], w[2]);
    const auto a = aifsn(wv);
    REQUIRE(ifs(Priority::HP, kT, a) <= ifs(Priority::MP, kT, a));
    REQUIRE(ifs(Priority::MP, kT, a) <= ifs(Priority::LP, kT, a));
    REQUIRE_NOTHROW(priority_factors(wv));
    ++checked;
  }
  // Strict IFS ordering holds for the default weights.
  const auto a = aifsn(kW);
  CHECK(ifs(Priority::HP, kT, a) < ifs(Priority::MP, kT, a));
  CHECK(ifs(Priority::MP, kT, a) < ifs(Priority::LP, kT, a));
}

TEST_CASE("prioritized backoff values") {
  CHECK(prioritized_backoff(0.5, 0, 32, 20) == 160);
  CHECK(prioritized_backoff(5.0 / 6, 0, 32, 20) == 444);
  CHECK(prioritized_backoff(2.0 / 3, 0, 32, 20) == 284);
  CHECK(prioritized_backoff(0.5, 3, 0, 20) == 0);
  CHECK(prioritized_backoff(0.5, 1, 64, 20) == 160);
}

TEST_CASE("legacy backoff values") {
  CHECK(legacy_backoff(0, 1, 20) == 80);
  CHECK(legacy_backoff(2, 1, 20) == 320);
  CHECK(legacy_backoff(5, 0, 20) == 0);
}

TEST_CASE("backoff draws are reproducible and bounded") {
  const auto pf = priority_factors(kW);
  Rng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    const SimTime x = draw_backoff(Priority::LP, 0, 32, pf, 20, a);
    REQUIRE(x == draw_backoff(Priority::LP, 0, 32, pf, 20, b));
    REQUIRE(x >= 0);
    REQUIRE(x <= 444);
  }
  Rng c(3);
  for (int i = 0; i < 1000; ++i) {
    const SimTime x = draw_backoff_legacy(1, 64, 20, c);
    REQUIRE(x >= 0);
    REQUIRE(x <= 8 * 64 * 20);
    REQUIRE(x % 160 == 0);
  }
}

TEST_CASE("contention window doubles up to the maximum") {
  MacState s(kT);
  std::vector<int> seen{s.cw()};
  for (int i = 0; i < 7; ++i) {
    s.escalate();
    seen.push_back(s.cw());
  }
  CHECK(seen == std::vector<int>{32, 64, 128, 256, 512, 1024, 1024, 1024});
  CHECK(s.k == 7);
  s.reset_window();
  CHECK(s.cw() == 32);
  CHECK(s.k == 0);
}

TEST_CASE("cts flag from the priority comparison") {
  CHECK(cts_flag(Priority::HP, Priority::MP) == 0);
  CHECK(cts_flag(Priority::LP, Priority::HP) == 1);
  CHECK(cts_flag(Priority::MP, Priority::MP) == 0);
  CHECK(cts_flag(Priority::LP, std::nullopt) == 0);
  CHECK(cts_flag(Priority::MP, Priority::HP) == 1);
}

TEST_CASE("rts recipient forwards once") {
  Frame rts = Frame::control(1, FrameKind::Rts, Priority::LP, 0, 1, 0, FrameSizes{});
  auto r = on_rts_received(rts, Priority::HP, true);
  CHECK(r.forward);
  CHECK(r.cts_flag == 1);
  rts.hops = 1;
  CHECK_FALSE(on_rts_received(rts, std::nullopt, true).forward);
  rts.hops = 0;
  CHECK_FALSE(on_rts_received(rts, std::nullopt, false).forward);
}

TEST_CASE("cts handling at the requester") {
  const RetryThresholds th;
  SUBCASE("clear to send") {
    MacState s(kT);
    CHECK(on_cts_received(s, cts_frame(1, 0, 5, 0), 0, 5, Priority::MP, th) == CtsAction::SendData);
    CHECK(s.k == 0);
  }
  SUBCASE("suspend defers and escalates") {
    MacState s(kT);
    CHECK(on_cts_received(s, cts_frame(1, 0, 5, 1), 0, 5, Priority::MP, th) == CtsAction::Defer);
    CHECK(s.phase == MacPhase::Deferred);
    CHECK(s.k == 1);
    CHECK(s.cw() == 64);
    CHECK(s.retry_counter_mp == 1);
  }
  SUBCASE("overheard") {
    MacState s(kT);
    CHECK(on_cts_received(s, cts_frame(1, 2, 5, 0), 0, 5, Priority::MP, th) == CtsAction::SetNav);
    CHECK(on_cts_received(s, cts_frame(1, 2, 5, 1), 0, 5, Priority::MP, th) == CtsAction::ResumeState);
    CHECK(s.k == 0);
  }
  SUBCASE("stale") {
    MacState s(kT);
    CHECK(on_cts_received(s, cts_frame(1, 0, 5, 0), 0, std::nullopt, Priority::MP, th) == CtsAction::Ignore);
    CHECK(on_cts_received(s, cts_frame(1, 0, 5, 0), 0, 6, Priority::MP, th) == CtsAction::Ignore);
  }
}

TEST_CASE("retry thresholds boost MP and LP only") {
  const RetryThresholds th;
  MacState mp(kT);
  for (int i = 0; i < 3; ++i) {
    on_cts_received(mp, cts_frame(1, 0, 5, 1), 0, 5, Priority::MP, th);
  }
  CHECK_FALSE(mp.boosted);
  on_cts_received(mp, cts_frame(1, 0, 5, 1), 0, 5, Priority::MP, th);
  CHECK(mp.boosted);
  CHECK(contention_class(Priority::MP, mp.boosted) == Priority::HP);
  on_success(mp);
  CHECK_FALSE(mp.boosted);
  CHECK(mp.retry_counter_mp == 0);
  CHECK(mp.k == 0);

  MacState hp(kT);
  for (int i = 0; i < 7; ++i) {
    on_collision_or_timeout(hp, Priority::HP, th, 7);
  }
  CHECK_FALSE(hp.boosted);

  MacState lp(kT);
  for (int i = 0; i < 6; ++i) {
    on_collision_or_timeout(lp, Priority::LP, th, 100);
  }
  CHECK_FALSE(lp.boosted);
  on_collision_or_timeout(lp, Priority::LP, th, 100);
  CHECK(lp.boosted);
  CHECK_THROWS(RetryThresholds{0, 7}.validate());
}

TEST_CASE("frame dropped once k exceeds the retry limit") {
  MacState s(kT);
  const RetryThresholds th;
  for (int i = 0; i < 7; ++i) {
    CHECK_FALSE(on_collision_or_timeout(s, Priority::HP, th, 7));
  }
  CHECK(s.k == 7);
  CHECK(on_collision_or_timeout(s, Priority::HP, th, 7));
  CHECK(s.k == 0);
  CHECK(s.cw() == 32);
}
