#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "snapcheck/clocks.hpp"
#include "snapcheck/rng.hpp"

namespace snapcheck {
namespace {

SnapshotStamp S(std::uint64_t t) { return {t}; }
Interval<SnapshotStamp> span(std::uint64_t lo, std::uint64_t hi) { return {S(lo), S(hi)}; }

TEST(SnapshotTick, AddsD) {
  EXPECT_EQ(snapshot_tick(S(5)).tick, 6u);
  EXPECT_EQ(snapshot_tick(S(0)).tick, 1u);
  EXPECT_EQ(snapshot_tick(S(7), {.d = 3}).tick, 10u);
}

TEST(SnapshotTick, RejectsZeroIncrement) {
  EXPECT_THROW(snapshot_tick(S(1), {.d = 0}), std::invalid_argument);
}

TEST(SnapshotMerge, IsBareMax) {
  EXPECT_EQ(snapshot_merge(S(7), S(10)).tick, 10u);
  EXPECT_EQ(snapshot_merge(S(10), S(7)).tick, 10u);
  EXPECT_EQ(snapshot_merge(S(4), S(4)).tick, 4u);
}

TEST(SnapshotMerge, OptionalTickAfterMerge) {
  const ClockParams lamport{.d = 1, .tick_after_merge = true};
  EXPECT_EQ(snapshot_merge(S(7), S(10), lamport).tick, 11u);
  EXPECT_EQ(snapshot_merge(S(4), S(4), lamport).tick, 5u);
}

TEST(SnapshotClock, OverflowIsAHardFault) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  EXPECT_THROW(snapshot_tick(S(max)), std::overflow_error);
  EXPECT_THROW(checked_add(max - 1, 2), std::overflow_error);
  EXPECT_EQ(checked_add(max - 1, 1), max);
}

TEST(SnapshotClock, MonotoneUnderAnyRuleSequence) {
  Rng rng(11, "clock-monotone");
  SnapshotStamp clock;
  for (int i = 0; i < 5000; ++i) {
    const auto before = clock;
    if (rng.uniform_int(0, 1) == 0) {
      clock = snapshot_tick(clock);
      EXPECT_GT(clock, before);
    } else {
      clock = snapshot_merge(clock, S(static_cast<std::uint64_t>(rng.uniform_int(0, 2 * i + 2))));
      EXPECT_GE(clock, before);
    }
  }
}

TEST(VectorTick, IncrementsOwnerSlotOnly) {
  EXPECT_EQ(vector_tick(VectorStamp{0, 0, 0}, 1), (VectorStamp{0, 1, 0}));
  EXPECT_EQ(vector_tick(VectorStamp{2, 5, 1}, 0), (VectorStamp{3, 5, 1}));
  EXPECT_EQ(vector_tick(VectorStamp{2, 5, 1}, 2, {.d = 2}), (VectorStamp{2, 5, 3}));
}

TEST(VectorTick, OwnerOutOfRange) {
  EXPECT_THROW(vector_tick(VectorStamp{0, 0}, 2), std::out_of_range);
}

TEST(VectorMerge, MaxThenTick) {
  EXPECT_EQ(vector_merge(VectorStamp{1, 0}, VectorStamp{0, 2}, 0), (VectorStamp{2, 2}));
  EXPECT_EQ(vector_merge(VectorStamp{3, 3}, VectorStamp{3, 3}, 1), (VectorStamp{3, 4}));
  EXPECT_EQ(vector_merge(VectorStamp{0, 0, 5}, VectorStamp{4, 0, 0}, 2), (VectorStamp{4, 0, 6}));
}

TEST(VectorMerge, LengthMismatch) {
  EXPECT_THROW(vector_merge(VectorStamp{1, 0}, VectorStamp{0, 2, 0}, 0), std::invalid_argument);
  EXPECT_THROW(happened_before(VectorStamp{1}, VectorStamp{1, 1}), std::invalid_argument);
}

TEST(VectorMerge, MaxPartIsOrderIndependent) {
  Rng rng(5, "merge-commutes");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 6));
    std::vector<VectorStamp> incoming;
    for (int k = 0; k < 5; ++k) {
      std::vector<std::uint64_t> slots(n);
      for (auto& s : slots) s = static_cast<std::uint64_t>(rng.uniform_int(0, 20));
      incoming.emplace_back(slots);
    }
    // The owner slot depends on where its ticks land relative to the maxes,
    // so only the other slots are compared.
    auto fold = [&](const std::vector<std::size_t>& order) {
      VectorStamp clock(n);
      for (auto i : order) clock = vector_merge(clock, incoming[i], 0);
      return std::vector<std::uint64_t>(clock.slots().begin() + 1, clock.slots().end());
    };
    std::vector<std::size_t> order(incoming.size());
    std::iota(order.begin(), order.end(), 0);
    const auto reference = fold(order);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
      }
      EXPECT_EQ(fold(order), reference);
    }
  }
}

TEST(VectorOrder, HappenedBeforeIsStrict) {
  EXPECT_TRUE(happened_before(VectorStamp{1, 0}, VectorStamp{1, 1}));
  EXPECT_FALSE(happened_before(VectorStamp{1, 1}, VectorStamp{1, 1}));
  EXPECT_FALSE(happened_before(VectorStamp{2, 0}, VectorStamp{0, 2}));
  EXPECT_TRUE(vector_leq(VectorStamp{1, 1}, VectorStamp{1, 1}));
}

TEST(IntervalCompare, ScalarExamples) {
  EXPECT_EQ(interval_compare(span(1, 3), span(5, 9)), Order::Before);
  EXPECT_EQ(interval_compare(span(1, 6), span(4, 9)), Order::Concurrent);
  EXPECT_EQ(interval_compare(span(2, 4), span(2, 4)), Order::Concurrent);
  EXPECT_EQ(interval_compare(span(5, 9), span(1, 3)), Order::After);
  // Half-open: touching endpoints do not overlap.
  EXPECT_EQ(interval_compare(span(1, 3), span(3, 4)), Order::Before);
}

TEST(IntervalCompare, PhysicalHalfOpen) {
  using P = PhysicalStamp;
  EXPECT_EQ(interval_compare(Interval<P>{{10}, {20}}, Interval<P>{{20}, {40}}), Order::Before);
  EXPECT_EQ(interval_compare(Interval<P>{{10}, {30}}, Interval<P>{{20}, {40}}), Order::Concurrent);
}

TEST(IntervalCompare, VectorUsesSlotOrder) {
  const Interval<VectorStamp> a{{1, 0}, {2, 0}};
  const Interval<VectorStamp> b{{2, 1}, {2, 3}};
  const Interval<VectorStamp> c{{0, 1}, {0, 2}};
  EXPECT_EQ(interval_compare(a, b), Order::Before);
  EXPECT_EQ(interval_compare(b, a), Order::After);
  EXPECT_EQ(interval_compare(a, c), Order::Concurrent);
}

TEST(IntervalCompare, AntisymmetricAndConcurrentSymmetric) {
  Rng rng(3, "antisymmetry");
  auto flip = [](Order o) {
    return o == Order::Before ? Order::After : o == Order::After ? Order::Before : Order::Concurrent;
  };
  for (int i = 0; i < 2000; ++i) {
    const auto lo1 = static_cast<std::uint64_t>(rng.uniform_int(0, 20));
    const auto lo2 = static_cast<std::uint64_t>(rng.uniform_int(0, 20));
    const auto a = span(lo1, lo1 + static_cast<std::uint64_t>(rng.uniform_int(1, 6)));
    const auto b = span(lo2, lo2 + static_cast<std::uint64_t>(rng.uniform_int(1, 6)));
    EXPECT_EQ(interval_compare(b, a), flip(interval_compare(a, b)));

    std::vector<std::uint64_t> x(3), y(3);
    for (auto& s : x) s = static_cast<std::uint64_t>(rng.uniform_int(0, 4));
    for (auto& s : y) s = static_cast<std::uint64_t>(rng.uniform_int(0, 4));
    auto widen = [&](std::vector<std::uint64_t> v) {
      for (auto& s : v) s += static_cast<std::uint64_t>(rng.uniform_int(0, 2));
      return v;
    };
    const Interval<VectorStamp> va{VectorStamp(x), VectorStamp(widen(x))};
    const Interval<VectorStamp> vb{VectorStamp(y), VectorStamp(widen(y))};
    EXPECT_EQ(interval_compare(vb, va), flip(interval_compare(va, vb)));
  }
}

TEST(IntervalShape, WellFormed) {
  EXPECT_TRUE(is_well_formed(span(3, 4)));
  EXPECT_FALSE(is_well_formed(span(4, 4)));
  EXPECT_FALSE(is_well_formed(Interval<VectorStamp>{{1, 2}, {2, 1}}));
  EXPECT_FALSE(is_well_formed(Interval<VectorStamp>{{1, 2}, {2, 2, 2}}));
}

}  // namespace
}  // namespace snapcheck
