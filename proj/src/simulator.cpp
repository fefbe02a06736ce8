#include "snapcheck/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "snapcheck/rng.hpp"

namespace snapcheck {

Micros ms_to_micros(double ms) { return static_cast<Micros>(std::llround(ms * 1000.0)); }

void SimConfig::validate() const {
  if (nodes < 2 || nodes > 1000) throw ConfigError("nodes", "must be in 2..=1000");
  if (instances_per_node < 1) throw ConfigError("instances_per_node", "must be >= 1");
  if (!(event_lifespan_ms.lo >= 0) || event_lifespan_ms.hi < event_lifespan_ms.lo) {
    throw ConfigError("event_lifespan_ms", "need 0 <= lo <= hi");
  }
  if (ms_to_micros(event_lifespan_ms.lo) < 1) {
    throw ConfigError("event_lifespan_ms", "lifespan must be at least 1 microsecond");
  }
  if (!(message_delay_ms.lo >= 0) || message_delay_ms.hi < message_delay_ms.lo) {
    throw ConfigError("message_delay_ms", "need 0 <= lo <= hi");
  }
  if (!(error_rate >= 0.0 && error_rate < 1.0)) throw ConfigError("error_rate", "must be in [0, 1)");
  if (!(stay_mean_ms > 0)) throw ConfigError("stay_mean_ms", "must be positive");
  if (events_per_process < 1) throw ConfigError("events_per_process", "must be >= 1");
  if (users < 1) throw ConfigError("users", "must be >= 1");
  if (rooms < 2) throw ConfigError("rooms", "must be >= 2");
}

std::span<const TraceEvent> Trace::process_events(ProcessId p) const {
  if (p >= process_count || offsets_.size() != process_count + 1) {
    throw std::out_of_range("process " + std::to_string(p) + " not in trace");
  }
  return std::span(events).subspan(offsets_[p], offsets_[p + 1] - offsets_[p]);
}

const TraceEvent& Trace::event(EventId id) const {
  auto evs = process_events(id.process);
  if (id.seq >= evs.size()) throw std::out_of_range("unknown event " + to_string(id));
  return evs[id.seq];
}

ReadingMap Trace::readings() const {
  ReadingMap out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (e.reading) out.emplace(e.id, *e.reading);
  }
  return out;
}

void Trace::reindex() {
  offsets_.assign(process_count + 1, 0);
  for (const auto& e : events) {
    if (e.id.process >= process_count) {
      throw std::invalid_argument("event " + to_string(e.id) + " names a process beyond " +
                                  std::to_string(process_count));
    }
    ++offsets_[e.id.process + 1];
  }
  for (std::size_t p = 0; p < process_count; ++p) offsets_[p + 1] += offsets_[p];
}

void Trace::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("malformed trace: " + what); };
  if (offsets_.size() != process_count + 1) fail("index not built");
  if (!std::is_sorted(events.begin(), events.end(),
                      [](const TraceEvent& a, const TraceEvent& b) { return a.id < b.id; })) {
    fail("events not sorted by id");
  }
  for (ProcessId p = 0; p < process_count; ++p) {
    auto evs = process_events(p);
    for (std::size_t k = 0; k < evs.size(); ++k) {
      const auto& e = evs[k];
      if (e.id.seq != k) fail("sequence gap at " + to_string(e.id));
      if (e.start < 0 || e.start >= e.end) fail("empty or negative span at " + to_string(e.id));
      if (k > 0 && evs[k - 1].end > e.start) fail("overlapping events at process " + std::to_string(p));
      if (e.reading && e.reading->erroneous != (e.reading->location != e.reading->true_location)) {
        fail("reading error flag inconsistent at " + to_string(e.id));
      }
    }
  }
  for (const auto& m : messages) {
    if (m.from.process == m.to.process) fail("message within one process " + to_string(m.from));
    const auto& from = event(m.from);
    const auto& to = event(m.to);
    if (m.deliver < m.send) fail("message delivered before sent from " + to_string(m.from));
    if (m.send < from.start || m.send >= from.end) fail("send outside sender span " + to_string(m.from));
    if (m.deliver < to.start || m.deliver >= to.end) fail("delivery outside receiver span " + to_string(m.to));
  }
}

namespace {

/// Piecewise-constant room of one user, sampled lazily along the time axis.
class StayTrajectory {
 public:
  StayTrajectory(Rng& rng, const SimConfig& config, Micros horizon) {
    const double mean_us = config.stay_mean_ms * 1000.0;
    RoomId room = static_cast<RoomId>(rng.uniform_int(0, config.rooms - 1));
    Micros t = 0;
    changes_.push_back({0, room});
    while (t <= horizon) {
      t += std::max<Micros>(1, static_cast<Micros>(rng.exponential(mean_us)));
      auto next = static_cast<RoomId>(rng.uniform_int(0, config.rooms - 2));
      if (next >= room) ++next;
      room = next;
      changes_.push_back({t, room});
    }
  }

  RoomId at(Micros t) const {
    auto it = std::upper_bound(changes_.begin(), changes_.end(), t,
                               [](Micros v, const Change& c) { return v < c.time; });
    return std::prev(it)->room;
  }

 private:
  struct Change {
    Micros time;
    RoomId room;
  };
  std::vector<Change> changes_;
};

const TraceEvent* live_event_at(std::span<const TraceEvent> evs, Micros t) {
  auto it = std::upper_bound(evs.begin(), evs.end(), t,
                             [](Micros v, const TraceEvent& e) { return v < e.start; });
  if (it == evs.begin()) return nullptr;
  const TraceEvent& e = *std::prev(it);
  return t < e.end ? &e : nullptr;
}

constexpr int kDeliveryAttempts = 4;  // first try plus three resamples

}  // namespace

Trace generate_trace(const SimConfig& config) {
  config.validate();

  Trace trace;
  trace.config = config;
  trace.process_count = config.process_count();
  const std::size_t n = trace.process_count;

  Rng layout(config.seed, "layout");
  const Micros life_lo = ms_to_micros(config.event_lifespan_ms.lo);
  const Micros life_hi = ms_to_micros(config.event_lifespan_ms.hi);

  // Each process runs its events back to back from a random phase offset.
  std::vector<Micros> send_times;
  trace.events.reserve(n * config.events_per_process);
  send_times.reserve(n * config.events_per_process);
  Micros horizon = 0;
  for (ProcessId p = 0; p < n; ++p) {
    Micros t = layout.uniform_int(0, life_hi);
    for (std::uint32_t k = 0; k < config.events_per_process; ++k) {
      const Micros len = layout.uniform_int(life_lo, life_hi);
      trace.events.push_back({EventId{p, k}, t, t + len, std::nullopt});
      send_times.push_back(layout.uniform_int(t, t + len - 1));
      t += len;
    }
    horizon = std::max(horizon, t);
  }
  trace.reindex();

  Rng users(config.seed, "users");
  std::vector<StayTrajectory> trajectories;
  trajectories.reserve(config.users);
  for (std::uint32_t u = 0; u < config.users; ++u) trajectories.emplace_back(users, config, horizon);

  // One uniform and one alternative room per event regardless of the rate,
  // so the corrupted set only grows as error_rate rises.
  Rng errors(config.seed, "errors");
  for (auto& e : trace.events) {
    const auto user = static_cast<UserId>(users.uniform_int(0, config.users - 1));
    const RoomId truth = trajectories[user].at(e.start);
    const double u = errors.uniform01();
    auto wrong = static_cast<RoomId>(errors.uniform_int(0, config.rooms - 2));
    if (wrong >= truth) ++wrong;
    const bool corrupt = u < config.error_rate;
    e.reading = ContextReading{user, corrupt ? wrong : truth, truth, corrupt};
  }

  Rng delays(config.seed, "delays");
  const Micros delay_lo = ms_to_micros(config.message_delay_ms.lo);
  const Micros delay_hi = ms_to_micros(config.message_delay_ms.hi);
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& sender = trace.events[i];
    const Micros sent = send_times[i];
    for (ProcessId q = 0; q < n; ++q) {
      if (q == sender.id.process) continue;
      const auto peer = trace.process_events(q);
      bool delivered = false;
      for (int attempt = 0; attempt < kDeliveryAttempts && !delivered; ++attempt) {
        const Micros at = sent + delays.uniform_int(delay_lo, delay_hi);
        if (const TraceEvent* target = live_event_at(peer, at)) {
          trace.messages.push_back({sender.id, target->id, sent, at});
          delivered = true;
        }
      }
      if (!delivered) ++trace.generation_drops;
    }
  }
  return trace;
}

GroundTruth ground_truth(const Trace& trace) {
  GroundTruth truth;
  std::vector<const TraceEvent*> by_start;
  by_start.reserve(trace.events.size());
  for (const auto& e : trace.events) by_start.push_back(&e);
  std::sort(by_start.begin(), by_start.end(), [](const TraceEvent* a, const TraceEvent* b) {
    return a->start != b->start ? a->start < b->start : a->id < b->id;
  });
  // Sorted by start: every later interval that begins before this one ends
  // overlaps it, and the scan can stop at the first that does not.
  for (std::size_t i = 0; i < by_start.size(); ++i) {
    const TraceEvent& a = *by_start[i];
    for (std::size_t j = i + 1; j < by_start.size() && by_start[j]->start < a.end; ++j) {
      const TraceEvent& b = *by_start[j];
      const auto pair = EventPair::of(a.id, b.id);
      truth.concurrent_pairs.insert(pair);
      truth.overlap_us.emplace(pair, std::min(a.end, b.end) - b.start);
    }
  }
  truth.violations = violation_filter(truth.concurrent_pairs, trace.readings());
  return truth;
}

PairSet brute_force_overlaps(const Trace& trace) {
  PairSet out;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    for (std::size_t j = i + 1; j < trace.events.size(); ++j) {
      const auto& a = trace.events[i];
      const auto& b = trace.events[j];
      if (a.start < b.end && b.start < a.end) out.insert(EventPair::of(a.id, b.id));
    }
  }
  return out;
}

}  // namespace snapcheck
