#include "ps2mac/engine.hpp"

#include <stdexcept>
#include <string>

namespace ps2mac {

void EventQueue::schedule(Event ev) {
  if (ev.time < m_now) {
    throw std::logic_error("event scheduled in the past: t=" + std::to_string(ev.time) +
                           " now=" + std::to_string(m_now));
  }
  ev.seq = m_next_seq++;
  m_heap.push(std::move(ev));
}

Event EventQueue::pop_next() {
  if (m_heap.empty()) {
    throw std::logic_error("pop on empty event queue");
  }
  Event ev = m_heap.top();
  m_heap.pop();
  m_now = ev.time;
  return ev;
}

std::uint64_t RngStreams::splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng RngStreams::derive(std::uint64_t tag, std::uint64_t id) const {
  const std::uint64_t a = splitmix64(m_master ^ splitmix64(tag));
  return Rng(splitmix64(a + splitmix64(id)));
}

} // namespace ps2mac
