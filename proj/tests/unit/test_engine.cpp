#include "ps2mac/engine.hpp"

#include <doctest.h>

using namespace ps2mac;

namespace {

Event at(SimTime t, std::uint64_t ref) {
  Event e;
  e.time = t;
  e.kind = EventKind::TimerExpiry;
  e.ref = ref;
  return e;
}

} // namespace

TEST_CASE("events pop in time order, ties in insertion order") {
  EventQueue q;
  q.schedule(at(7, 1));
  q.schedule(at(3, 2));
  q.schedule(at(7, 3));
  q.schedule(at(5, 4));
  std::vector<std::uint64_t> order;
  while (!q.empty()) {
    order.push_back(q.pop_next().ref);
  }
  CHECK(order == std::vector<std::uint64_t>{2, 4, 1, 3});
  CHECK(q.now() == 7);
}

TEST_CASE("scheduling in the past is rejected") {
  EventQueue q;
  q.schedule(at(10, 0));
  q.pop_next();
  CHECK_NOTHROW(q.schedule(at(10, 1)));
  CHECK_THROWS_AS(q.schedule(at(9, 2)), std::logic_error);
}

TEST_CASE("random substreams") {
  const RngStreams a(5), b(5), c(6);
  CHECK(a.node(3)() == b.node(3)());
  CHECK(a.node(3)() != a.node(4)());
  CHECK(a.node(3)() != c.node(3)());
  CHECK(a.topology()() != a.traffic()());
  CHECK(RngStreams::splitmix64(0) == 0xe220a8397b1dcdafULL);
}
