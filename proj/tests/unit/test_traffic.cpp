#include "ps2mac/traffic.hpp"

#include "ps2mac/engine.hpp"

#include <doctest.h>

#include <queue>
#include <set>

using namespace ps2mac;

namespace {

// Independent connectivity check by flood fill from node 0.
bool connected(const std::vector<Position>& pos, double range) {
  std::vector<bool> seen(pos.size(), false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (std::size_t v = 0; v < pos.size(); ++v) {
      if (!seen[v] && distance(pos[u], pos[v]) <= range) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == pos.size();
}

} // namespace

TEST_CASE("built-in scenarios") {
  CHECK(builtin_scenario("I").mix == std::array<double, 3>{80, 10, 10});
  CHECK(builtin_scenario("IV").mix == std::array<double, 3>{30, 50, 20});
  CHECK_NOTHROW(builtin_scenario("III").validate());
  CHECK_THROWS(builtin_scenario("VI"));
  ScenarioSpec bad = builtin_scenario("I");
  bad.mix = {50, 10, 10};
  CHECK_THROWS(bad.validate());
  bad = builtin_scenario("I");
  bad.cbr_rate = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("flows per class") {
  CHECK(class_counts({80, 10, 10}, 30) == std::array<int, 3>{24, 3, 3});
  CHECK(class_counts({50, 30, 20}, 30) == std::array<int, 3>{15, 9, 6});
  CHECK(class_counts({33, 33, 33}, 30) == std::array<int, 3>{10, 10, 10});
  CHECK(class_counts({30, 50, 20}, 30) == std::array<int, 3>{9, 15, 6});
  CHECK(class_counts({10, 10, 80}, 30) == std::array<int, 3>{3, 3, 24});
  CHECK(class_counts({50, 30, 20}, 7) == std::array<int, 3>{4, 2, 1});
}

TEST_CASE("grid routes") {
  const Topology g = grid_topology(6, 6, 200, 250);
  CHECK(g.positions.size() == 36);
  CHECK(g.routes.connected());
  CHECK(g.routes.hop_count(0, 35) == 10);
  CHECK(g.routes.hop_count(0, 1) == 1);
  CHECK(g.routes.next_hop(0, 0) == -1);
  // Ties go to the lower id: from 0 towards 7 both 1 and 6 are on shortest paths.
  CHECK(g.routes.next_hop(0, 7) == 1);
  const Topology sparse = grid_topology(1, 3, 300, 250);
  CHECK_FALSE(sparse.routes.connected());
  CHECK(sparse.routes.next_hop(0, 2) == -1);
}

TEST_CASE("random placements are connected") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng = RngStreams(seed).topology();
    const Topology t = build_topology(36, 1000, 1000, 250, rng);
    REQUIRE(t.positions.size() == 36);
    REQUIRE(connected(t.positions, 250));
    REQUIRE(t.routes.connected());
    for (const auto& p : t.positions) {
      REQUIRE(p.x >= 0);
      REQUIRE(p.x <= 1000);
    }
  }
  Rng rng(1);
  CHECK_THROWS_AS(build_topology(36, 100000, 100000, 10, rng, 3), std::runtime_error);
}

TEST_CASE("generated flows") {
  const ScenarioSpec spec = builtin_scenario("I");
  Rng trng = RngStreams(3).topology();
  const Topology topo = build_topology(36, 1000, 1000, 250, trng);
  Rng frng = RngStreams(3).traffic();
  const auto flows = generate_flows(spec, topo, frng);
  REQUIRE(flows.size() == 30);
  std::array<int, 3> per{};
  for (const auto& f : flows) {
    CHECK(f.src != f.dst);
    CHECK(f.interval == 250000);
    CHECK(f.start >= 0);
    CHECK(f.start < 250000);
    ++per[index(f.priority)];
  }
  CHECK(per == std::array<int, 3>{24, 3, 3});
  Rng again = RngStreams(3).traffic();
  const auto flows2 = generate_flows(spec, topo, again);
  CHECK(flows2[7].src == flows[7].src);
  CHECK(flows2[7].start == flows[7].start);
}

TEST_CASE("packets per flow") {
  Flow f;
  f.interval = 250000;
  f.start = 0;
  CHECK(packets_before(f, 60'000'000) == 240);
  f.start = 249999;
  CHECK(packets_before(f, 60'000'000) == 240);
  f.start = 60'000'000;
  CHECK(packets_before(f, 60'000'000) == 0);
}
