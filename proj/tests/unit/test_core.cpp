#include "ps2mac/core.hpp"

#include <doctest.h>

using namespace ps2mac;

TEST_CASE("priority codes") {
  CHECK(code(Priority::HP) == 0);
  CHECK(code(Priority::MP) == 1);
  CHECK(code(Priority::LP) == 2);
  CHECK(priority_from_code(1) == Priority::MP);
  CHECK_THROWS_AS(priority_from_code(3), std::invalid_argument);
  CHECK_THROWS_AS(priority_from_code(-1), std::invalid_argument);
  CHECK(to_string(Priority::LP) == "LP");
}

TEST_CASE("weight vector invariants") {
  const WeightVector d = WeightVector::defaults();
  CHECK(d[Priority::HP] == 3);
  CHECK(d[Priority::MP] == 2);
  CHECK(d[Priority::LP] == 1);
  CHECK(d.sum() == 6);
  CHECK(d.max() == 10);
  CHECK_NOTHROW(WeightVector(6, 3, 2));
  CHECK_THROWS_AS(WeightVector(2, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector(3, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector(3, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector(12, 2, 1), std::invalid_argument);
}

TEST_CASE("timing and sizes validate") {
  CHECK_NOTHROW(MacTimingConfig{}.validate());
  MacTimingConfig t;
  t.cw_max = 16;
  CHECK_THROWS(t.validate());
  t = {};
  t.data_rate = 0;
  CHECK_THROWS(t.validate());

  FrameSizes s;
  CHECK_NOTHROW(s.validate());
  s.cts = 0;
  CHECK_THROWS(s.validate());
}

TEST_CASE("frame construction") {
  const FrameSizes sizes;
  const Frame d = Frame::data(1, Priority::MP, 0, 1, 0, 5, 512, 100, sizes);
  CHECK(d.size_bytes == 540);
  CHECK(d.payload_bytes == 512);
  CHECK(d.flow_dst == 5);
  CHECK(d.created_at == 100);
  CHECK_NOTHROW(d.validate());

  const Frame rts = Frame::control(2, FrameKind::Rts, Priority::LP, 3, 4, 0, sizes);
  CHECK(rts.size_bytes == 20);
  CHECK(rts.origin == 3);
  CHECK(Frame::control(3, FrameKind::Cts, Priority::HP, 4, 3, 0, sizes, 1).flag == 1);
  CHECK_THROWS(Frame::control(4, FrameKind::Rts, Priority::HP, 4, 3, 0, sizes, 1));

  FrameSizes extra;
  extra.priority_field_extra = 1;
  extra.cts_flag_extra = 1;
  CHECK(control_size(FrameKind::Rts, extra) == 21);
  CHECK(control_size(FrameKind::Cts, extra) == 15);
  CHECK(control_size(FrameKind::Ack, extra) == 14);
  CHECK(control_size(FrameKind::At, sizes) == 20);
  CHECK(control_size(FrameKind::St, sizes) == 14);
}

TEST_CASE("queue percentages and priority factors validate") {
  CHECK_NOTHROW(QueuePercentages(80, 10, 10));
  CHECK_THROWS(QueuePercentages(101, 0, 0));
  CHECK_THROWS(QueuePercentages(-1, 50, 50));
  CHECK_NOTHROW(PriorityFactors(0.5, 0.6, 0.8));
  CHECK_THROWS(PriorityFactors(0.6, 0.6, 0.8));
  CHECK_THROWS(PriorityFactors(0.5, 0.6, 1.0));
}
