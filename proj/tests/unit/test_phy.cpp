#include "ps2mac/phy.hpp"

#include <doctest.h>

using namespace ps2mac;

namespace {

Frame rts(std::uint64_t id, NodeId src, NodeId dst) {
  return Frame::control(id, FrameKind::Rts, Priority::HP, src, dst, 0, FrameSizes{});
}

bool ok_at(const Channel::Completed& c, NodeId n) {
  for (const auto& r : c.receptions) {
    if (r.node == n) {
      return r.ok;
    }
  }
  FAIL("node not in range");
  return false;
}

} // namespace

TEST_CASE("airtime at 2 Mbit/s") {
  CHECK(airtime(540, 2e6) == 2160);
  CHECK(airtime(20, 2e6) == 80);
  CHECK(airtime(14, 2e6) == 56);
  CHECK(airtime(1, 3e6) == 3); // 2.67 us rounds up
  CHECK_THROWS(airtime(0, 2e6));
  CHECK_THROWS(airtime(20, 0));
}

TEST_CASE("unit-disk neighbourhoods") {
  Channel ch({{0, 0}, {250, 0}, {500, 0}, {250.5, 0.0}}, 250);
  CHECK(ch.in_range(0, 1));
  CHECK(ch.in_range(1, 2));
  CHECK_FALSE(ch.in_range(0, 2));
  CHECK_FALSE(ch.in_range(0, 3));
  CHECK(ch.in_range(1, 0) == ch.in_range(0, 1));
  CHECK(ch.neighbors(1) == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("hidden terminals collide at the common receiver") {
  // A=0 and C=2 both reach B=1 but not each other.
  Channel ch({{0, 0}, {200, 0}, {400, 0}}, 250);
  const auto a = ch.begin(rts(1, 0, 1), 0, 0, 80);
  CHECK_FALSE(ch.busy(2, 10));
  const auto c = ch.begin(rts(2, 2, 1), 2, 40, 120);
  const auto da = ch.finish(a);
  const auto dc = ch.finish(c);
  CHECK_FALSE(ok_at(da, 1));
  CHECK_FALSE(ok_at(dc, 1));
  CHECK(da.out_of_range == 1);
  CHECK(ch.stats().collided == 2);
}

TEST_CASE("disjoint transmissions are both delivered") {
  Channel ch({{0, 0}, {200, 0}, {400, 0}}, 250);
  const auto a = ch.begin(rts(1, 0, 1), 0, 0, 80);
  CHECK(ch.busy(1, 0));
  CHECK(ch.busy(1, 79));
  CHECK_FALSE(ch.busy(1, 80));
  const auto da = ch.finish(a);
  const auto c = ch.begin(rts(2, 2, 1), 2, 80, 160);
  const auto dc = ch.finish(c);
  CHECK(ok_at(da, 1));
  CHECK(ok_at(dc, 1));
}

TEST_CASE("back-to-back frames do not overlap") {
  Channel ch({{0, 0}, {200, 0}, {400, 0}}, 250);
  const auto a = ch.begin(rts(1, 0, 1), 0, 0, 80);
  const auto c = ch.begin(rts(2, 2, 1), 2, 80, 160); // starts as the first ends
  CHECK(ok_at(ch.finish(a), 1));
  CHECK(ok_at(ch.finish(c), 1));
}

TEST_CASE("half duplex: a transmitting node loses its reception") {
  Channel ch({{0, 0}, {200, 0}}, 250);
  const auto a = ch.begin(rts(1, 0, 1), 0, 0, 80);
  const auto b = ch.begin(rts(2, 1, 0), 1, 20, 100);
  CHECK_FALSE(ok_at(ch.finish(a), 1));
  CHECK_FALSE(ok_at(ch.finish(b), 0));
  CHECK(ch.in_flight() == 0);
  CHECK_FALSE(ch.transmitting(0));
}

TEST_CASE("reception accounting adds up") {
  Channel ch({{0, 0}, {200, 0}, {400, 0}, {900, 0}}, 250);
  const auto a = ch.begin(rts(1, 1, 0), 1, 0, 80);
  const auto d = ch.finish(a);
  CHECK(d.receptions.size() + d.out_of_range == 3);
  const auto& s = ch.stats();
  CHECK(s.delivered + s.collided + s.out_of_range == 3);
  CHECK_THROWS(ch.finish(a));
}
