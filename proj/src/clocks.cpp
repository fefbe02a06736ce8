#include "snapcheck/clocks.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace snapcheck {

std::ostream& operator<<(std::ostream& os, const EventId& id) {
  return os << 'P' << id.process << '.' << id.seq;
}

std::string to_string(const EventId& id) {
  std::ostringstream os;
  os << id;
  return os.str();
}

EventPair EventPair::of(EventId a, EventId b) {
  if (a == b) throw std::invalid_argument("event pair needs two distinct events: " + to_string(a));
  return a < b ? EventPair{a, b} : EventPair{b, a};
}

std::ostream& operator<<(std::ostream& os, const EventPair& pair) {
  return os << '{' << pair.first << ", " << pair.second << '}';
}

std::ostream& operator<<(std::ostream& os, const VectorStamp& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os << ']';
}

const char* to_string(Order order) {
  switch (order) {
    case Order::Before: return "Before";
    case Order::After: return "After";
    case Order::Concurrent: return "Concurrent";
  }
  return "?";
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("logical clock overflow");
  return out;
}

namespace {

void require_positive(const ClockParams& params) {
  if (params.d == 0) throw std::invalid_argument("clock increment d must be >= 1");
}

void require_owner(std::size_t n, ProcessId owner) {
  if (owner >= n) {
    throw std::out_of_range("vector clock owner " + std::to_string(owner) + " out of range for " +
                            std::to_string(n) + " slots");
  }
}

}  // namespace

SnapshotStamp snapshot_tick(SnapshotStamp clock, const ClockParams& params) {
  require_positive(params);
  return {checked_add(clock.tick, params.d)};
}

SnapshotStamp snapshot_merge(SnapshotStamp local, SnapshotStamp incoming,
                             const ClockParams& params) {
  SnapshotStamp merged{std::max(local.tick, incoming.tick)};
  return params.tick_after_merge ? snapshot_tick(merged, params) : merged;
}

VectorStamp vector_tick(VectorStamp clock, ProcessId owner, const ClockParams& params) {
  require_positive(params);
  require_owner(clock.size(), owner);
  clock.slots_[owner] = checked_add(clock.slots_[owner], params.d);
  return clock;
}

VectorStamp vector_merge(const VectorStamp& local, const VectorStamp& incoming, ProcessId owner,
                         const ClockParams& params) {
  if (local.size() != incoming.size()) {
    throw std::invalid_argument("vector stamp length mismatch: " + std::to_string(local.size()) +
                                " vs " + std::to_string(incoming.size()));
  }
  require_owner(local.size(), owner);
  VectorStamp out = local;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.slots_[i] = std::max(local.slots_[i], incoming.slots_[i]);
  }
  return vector_tick(std::move(out), owner, params);
}

bool vector_leq(const VectorStamp& a, const VectorStamp& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector stamp length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

bool happened_before(const VectorStamp& a, const VectorStamp& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector stamp length mismatch");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    strict = strict || a[i] < b[i];
  }
  return strict;
}

bool is_well_formed(const Interval<SnapshotStamp>& i) { return i.lo < i.hi; }
bool is_well_formed(const Interval<PhysicalStamp>& i) { return i.lo < i.hi && i.lo.micros >= 0; }
bool is_well_formed(const Interval<VectorStamp>& i) {
  return i.lo.size() == i.hi.size() && vector_leq(i.lo, i.hi);
}

namespace {

template <class Stamp>
Order compare_half_open(const Interval<Stamp>& a, const Interval<Stamp>& b) {
  // Stamps in [lo, hi) are all <= every stamp of the other side exactly when
  // the upper bound does not pass the other's lower bound.
  if (a.hi <= b.lo) return Order::Before;
  if (b.hi <= a.lo) return Order::After;
  return Order::Concurrent;
}

}  // namespace

Order interval_compare(const Interval<SnapshotStamp>& a, const Interval<SnapshotStamp>& b) {
  return compare_half_open(a, b);
}

Order interval_compare(const Interval<PhysicalStamp>& a, const Interval<PhysicalStamp>& b) {
  return compare_half_open(a, b);
}

Order interval_compare(const Interval<VectorStamp>& a, const Interval<VectorStamp>& b) {
  if (happened_before(a.hi, b.lo)) return Order::Before;
  if (happened_before(b.hi, a.lo)) return Order::After;
  return Order::Concurrent;
}

}  // namespace snapcheck
