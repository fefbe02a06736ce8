// Randomized and exhaustive properties over generated traces. Generators are
// hand-rolled on the library's seeded Rng so every failure reproduces from
// the printed seed.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "causal_enum.hpp"
#include "snapcheck/metrics.hpp"
#include "snapcheck/replay.hpp"
#include "snapcheck/rng.hpp"
#include "snapcheck/trace_io.hpp"
#include "trace_helpers.hpp"

namespace snapcheck {
namespace {

SimConfig random_small_config(Rng& rng, std::uint64_t seed) {
  SimConfig c;
  c.nodes = static_cast<std::uint32_t>(rng.uniform_int(2, 4));
  c.instances_per_node = static_cast<std::uint32_t>(rng.uniform_int(1, 2));
  c.events_per_process = static_cast<std::uint32_t>(rng.uniform_int(1, 8));
  const double hi = std::exp(std::log(0.05) + rng.uniform01() * std::log(200 / 0.05));
  c.message_delay_ms = {hi * rng.uniform01(), hi};
  c.error_rate = rng.uniform01() * 0.5;
  c.seed = seed;
  return c;
}

const Interval<SnapshotStamp>& own(const RunResult& r, EventId e) {
  for (const auto& q : r.snapshot_intervals) {
    if (q.event == e) return q.span;
  }
  throw std::out_of_range("no interval");
}

bool subset(const PairSet& a, const PairSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

TEST(Properties, DetectorsAreDeterministic) {
  Rng rng(101, "prop-determinism");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_small_config(rng, seed);
    const auto a = generate_trace(c);
    const auto b = generate_trace(c);
    for (auto family : {DetectorFamily::SECA, DetectorFamily::CEDA, DetectorFamily::PCA}) {
      const auto ra = run_trace(a, family);
      const auto rb = run_trace(b, family);
      EXPECT_EQ(ra.detected, rb.detected) << "seed " << seed;
      EXPECT_EQ(ra.counters, rb.counters) << "seed " << seed;
    }
  }
}

TEST(Properties, SecaAndCedaAreSound) {
  Rng rng(102, "prop-soundness");
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto t = generate_trace(random_small_config(rng, seed));
    const auto truth = ground_truth(t).concurrent_pairs;
    EXPECT_TRUE(subset(run_trace(t, DetectorFamily::SECA).detected, truth)) << "seed " << seed;
    EXPECT_TRUE(subset(run_trace(t, DetectorFamily::CEDA).detected, truth)) << "seed " << seed;
    EXPECT_EQ(run_trace(t, DetectorFamily::PCA).detected, truth) << "seed " << seed;
  }
}

// If b causally precedes c then b's snapshot interval never comes after c's.
TEST(Properties, SnapshotOrderRespectsCausality) {
  Rng rng(103, "prop-theorem-forward");
  std::size_t ordered_pairs = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto t = generate_trace(random_small_config(rng, seed));
    const testing::EventCausality causal(t);
    const auto r = run_trace(t, DetectorFamily::SECA);
    for (const auto& b : t.events) {
      for (const auto& c : t.events) {
        if (!causal.precedes(b.id, c.id)) continue;
        ++ordered_pairs;
        EXPECT_NE(interval_compare(own(r, b.id), own(r, c.id)), Order::After)
            << "seed " << seed << ": " << b.id << " -> " << c.id;
      }
    }
  }
  EXPECT_GT(ordered_pairs, 1000u);
}

// Vector-stamped intervals order exactly the causally ordered events.
TEST(Properties, VectorIntervalsCharacterizeCausality) {
  Rng rng(104, "prop-vector-exact");
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto t = generate_trace(random_small_config(rng, seed));
    const testing::EventCausality causal(t);
    const auto r = run_trace(t, DetectorFamily::CEDA);
    for (const auto& a : r.vector_intervals) {
      for (const auto& b : r.vector_intervals) {
        if (a.event == b.event) continue;
        const bool before = interval_compare(a.span, b.span) == Order::Before;
        EXPECT_EQ(before, causal.precedes(a.event, b.event)) << "seed " << seed << ": " << a.event << ", " << b.event;
      }
    }
  }
}

TEST(Properties, VectorOrderEqualsReachabilityExhaustively) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto stats = testing::enumerate_causal_computations(n, 7);
    EXPECT_EQ(stats.mismatches, 0u) << n << " processes";
    EXPECT_GT(stats.pairs_checked, 0u);
  }
}

TEST(Properties, BrokenClockIsCaughtByTheEnumeration) {
  EXPECT_GT(testing::enumerate_causal_computations(2, 4, true).mismatches, 0u);
}

TEST(Properties, ConsistencyCheckIsIdempotent) {
  Rng rng(105, "prop-idempotent");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = generate_trace(random_small_config(rng, seed));
    const auto process_count = t.process_count;
    std::vector<SecaState> states;
    for (ProcessId p = 0; p < process_count; ++p) states.emplace_back(p, process_count);
    // Drive the detector directly: every event occurs and is announced.
    for (const auto& e : t.events) {
      const auto b = states[e.id.process].on_local_event(e.id);
      for (ProcessId p = 0; p < process_count; ++p) {
        if (p != e.id.process) states[p].on_broadcast(b);
      }
    }
    for (auto& s : states) {
      const PairSet first = s.check_consistency();
      EXPECT_EQ(s.check_consistency(), first);
    }
  }
}

// Clock payload per broadcast: one word for snapshot stamps, one word per
// process for vector stamps.
TEST(Properties, PayloadSizePerSend) {
  for (std::uint32_t nodes : {2u, 8u, 20u}) {
    SimConfig c;
    c.nodes = nodes;
    c.events_per_process = 10;
    c.message_delay_ms = {0.25, 8};
    c.seed = nodes;
    const auto t = generate_trace(c);
    const auto notes = build_notifications(t);
    const auto sends = static_cast<std::uint64_t>(std::count_if(
        notes.begin(), notes.end(), [](const Notification& n) { return n.kind == NotificationKind::Send; }));
    ASSERT_GT(sends, 0u);
    const auto seca = run_trace(t, DetectorFamily::SECA).counters;
    const auto ceda = run_trace(t, DetectorFamily::CEDA).counters;
    EXPECT_EQ(seca.stamp_words_sent, seca.events_processed + sends);
    EXPECT_EQ(ceda.stamp_words_sent, sends * t.process_count);
  }
}

// Shrinking delays brings both logical detectors toward the physical one.
TEST(Properties, LowDelayApproachesPhysicalView) {
  std::vector<double> seca_gap, ceda_gap;
  for (MsRange delay : {MsRange{8, 80}, MsRange{0.25, 8}, MsRange{0, 1}}) {
    double seca = 0, ceda = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      SimConfig c;
      c.nodes = 4;
      c.events_per_process = 30;
      c.message_delay_ms = delay;
      c.seed = seed;
      const auto t = generate_trace(c);
      const auto truth = ground_truth(t);
      seca += score(run_trace(t, DetectorFamily::SECA).detected, truth).recall;
      ceda += score(run_trace(t, DetectorFamily::CEDA).detected, truth).recall;
    }
    // The physical detector's recall is exactly 1.
    seca_gap.push_back(1.0 - seca / 6);
    ceda_gap.push_back(1.0 - ceda / 6);
  }
  EXPECT_GT(seca_gap[0], seca_gap[1]);
  EXPECT_GT(seca_gap[1], seca_gap[2]);
  EXPECT_GT(ceda_gap[0], ceda_gap[1]);
  EXPECT_GT(ceda_gap[1], ceda_gap[2]);
}

TEST(Properties, TraceFilesRoundTripForRandomConfigs) {
  Rng rng(106, "prop-roundtrip");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = generate_trace(random_small_config(rng, seed));
    std::ostringstream os;
    write_trace(os, t);
    std::istringstream is(os.str());
    const auto back = read_trace(is);
    EXPECT_EQ(run_trace(back, DetectorFamily::SECA).detected, run_trace(t, DetectorFamily::SECA).detected);
  }
}

}  // namespace
}  // namespace snapcheck
