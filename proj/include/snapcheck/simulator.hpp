#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "snapcheck/context.hpp"
#include "snapcheck/ids.hpp"

namespace snapcheck {

/// Invalid configuration; field() names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Inclusive millisecond range.
struct MsRange {
  double lo = 0;
  double hi = 0;

  friend bool operator==(const MsRange&, const MsRange&) = default;
};

struct SimConfig {
  std::uint32_t nodes = 5;
  std::uint32_t instances_per_node = 2;
  MsRange event_lifespan_ms{20, 50};
  MsRange message_delay_ms{250, 8000};
  double error_rate = 0.1;
  double stay_mean_ms = 60000;
  std::uint32_t events_per_process = 50;
  std::uint32_t users = 8;
  std::uint32_t rooms = 16;
  std::uint64_t seed = 0;

  std::size_t process_count() const { return std::size_t{nodes} * instances_per_node; }

  /// Throws ConfigError naming the first bad field.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Milliseconds to integer microseconds, rounded to nearest.
Micros ms_to_micros(double ms);

struct TraceEvent {
  EventId id;
  Micros start = 0;
  Micros end = 0;
  std::optional<ContextReading> reading;
};

struct TraceMessage {
  EventId from;
  EventId to;
  Micros send = 0;
  Micros deliver = 0;
};

struct Trace {
  SimConfig config;
  std::size_t process_count = 0;
  /// Sorted by (process, seq); seq is dense from 0 at every process.
  std::vector<TraceEvent> events;
  std::vector<TraceMessage> messages;
  /// Messages abandoned at generation time (no live receiver after retries).
  std::uint64_t generation_drops = 0;

  /// Events of one process in program order.
  std::span<const TraceEvent> process_events(ProcessId p) const;
  const TraceEvent& event(EventId id) const;
  ReadingMap readings() const;

  /// Checks every structural invariant; throws std::invalid_argument.
  void validate() const;
  /// Rebuilds the per-process index after events were edited in place.
  void reindex();

 private:
  std::vector<std::size_t> offsets_;
};

/// Deterministic in (config, seed). Draws come from independent named
/// streams (layout, users, errors, delays) so that changing one parameter
/// leaves the draws of unrelated streams untouched.
Trace generate_trace(const SimConfig& config);

struct GroundTruth {
  PairSet concurrent_pairs;
  /// Wall overlap of every concurrent pair, in microseconds.
  std::map<EventPair, Micros> overlap_us;
  std::vector<Violation> violations;
};

GroundTruth ground_truth(const Trace& trace);

/// O(n^2) reference overlap scan, kept for cross-checking.
PairSet brute_force_overlaps(const Trace& trace);

}  // namespace snapcheck
