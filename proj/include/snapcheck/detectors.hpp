#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "snapcheck/clocks.hpp"
#include "snapcheck/context.hpp"
#include "snapcheck/counters.hpp"
#include "snapcheck/ids.hpp"

namespace snapcheck {

/// Point-to-point message as seen by the receiving detector. send_stamp is
/// the sender's clock right after its send tick.
template <class Stamp>
struct MessageRecord {
  EventId from_event;
  EventId to_event;
  Stamp send_stamp;
  std::optional<ContextReading> payload;
};

// ---------------------------------------------------------------------------
// Snapshot-clock detector
// ---------------------------------------------------------------------------

/// Stamp announced to every peer through the system broadcast primitive.
/// Occurrence opens a new interval at the peers; Send re-stamps an event that
/// is already known (the sender ticked before sending).
struct SnapshotBroadcast {
  enum class Kind { Occurrence, Send };
  Kind kind = Kind::Occurrence;
  ProcessId origin = 0;
  EventId event;
  SnapshotStamp stamp;
};

struct QueuedStamp {
  EventId event;
  SnapshotStamp stamp;
};

struct QueuedInterval {
  EventId event;
  Interval<SnapshotStamp> span;
};

/// Receiver event, sender event and the send stamp x carried by the message.
struct CommunicatingPair {
  EventId receiver;
  EventId sender;
  SnapshotStamp send_stamp;
};

/// Per-process state of the snapshot-clock detector: the local clock, a
/// replica of every process's event queue and interval queue, the queue of
/// communicating pairs waiting for a check, and the detected pairs.
///
/// Single owner; not synchronized.
class SecaState {
 public:
  SecaState(ProcessId self, std::size_t process_count, ClockParams params = {});

  ProcessId self() const { return self_; }
  std::size_t process_count() const { return eq_.size(); }
  SnapshotStamp clock() const { return clock_; }
  const ClockParams& params() const { return params_; }

  /// Ticks the clock, opens [tick, tick + d) for e and returns the broadcast
  /// for the peers. Throws std::invalid_argument if e is not owned by this
  /// process or is not newer than the last local event.
  SnapshotBroadcast on_local_event(EventId e);

  /// Tick before sending on behalf of the live event e. The returned stamp is
  /// both broadcast and carried inline by the outgoing messages.
  SnapshotBroadcast on_send(EventId e);

  /// Peer-side bookkeeping for a broadcast from another process: replica
  /// queues are updated and the local clock merges with the stamp.
  void on_broadcast(const SnapshotBroadcast& b);

  /// Receive handler. Re-stamps the sender's top replica entry, widens the
  /// sender's current interval and the receiving event's interval, merges
  /// the clock and queues the communicating pair. A message whose sender
  /// event is absent from the replica is rejected and counted in drops().
  void on_message(const MessageRecord<SnapshotStamp>& m);

  /// Drains the pending pairs. A pair is kept when both events hold
  /// well-formed intervals and lo <= x < hi on the receiver's interval.
  const PairSet& check_consistency();

  const std::vector<QueuedStamp>& event_queue(ProcessId p) const { return eq_.at(p); }
  const std::vector<QueuedInterval>& interval_queue(ProcessId p) const { return iq_.at(p); }
  const std::vector<CommunicatingPair>& pending_pairs() const { return ee_; }
  const PairSet& detected() const { return out_; }
  const OpCounters& counters() const { return counters_; }
  std::uint64_t drops() const { return drops_; }

  const Interval<SnapshotStamp>* find_interval(EventId e) const;

 private:
  Interval<SnapshotStamp>* find_interval_mut(EventId e);
  void open_interval(ProcessId owner, EventId e, SnapshotStamp stamp);

  ProcessId self_;
  ClockParams params_;
  SnapshotStamp clock_;
  std::vector<std::vector<QueuedStamp>> eq_;
  std::vector<std::vector<QueuedInterval>> iq_;
  std::vector<CommunicatingPair> ee_;
  PairSet out_;
  OpCounters counters_;
  std::uint64_t drops_ = 0;
};

// ---------------------------------------------------------------------------
// Vector-clock baseline
// ---------------------------------------------------------------------------

struct VectorInterval {
  EventId event;
  Interval<VectorStamp> span;
};

/// Mutual happened-before test between interval endpoints over every pair
/// (j, k): lo_j -> hi_k and lo_k -> hi_j. Quadratic pairwise scan; each pair
/// examined adds one to counters->pair_checks. Throws std::invalid_argument
/// on stamps of different lengths.
PairSet ceda_detect(std::span<const VectorInterval> intervals, OpCounters* counters = nullptr);

/// Vector clocks at every process; completed intervals are collected for a
/// central check.
class CedaDetector {
 public:
  explicit CedaDetector(std::size_t process_count, ClockParams params = {});

  VectorStamp on_local_event(EventId e);
  VectorStamp on_send(EventId e);
  void on_message(const MessageRecord<VectorStamp>& m);
  void on_event_end(EventId e);

  const VectorStamp& clock(ProcessId p) const { return clocks_.at(p); }
  /// Closed intervals in completion order.
  const std::vector<VectorInterval>& intervals() const { return closed_; }
  PairSet detect();
  const OpCounters& counters() const { return counters_; }

 private:
  ClockParams params_;
  std::vector<VectorStamp> clocks_;
  std::vector<std::optional<VectorInterval>> open_;
  std::vector<VectorInterval> closed_;
  OpCounters counters_;
};

// ---------------------------------------------------------------------------
// Physical-clock baseline
// ---------------------------------------------------------------------------

struct PhysicalInterval {
  EventId event;
  Interval<PhysicalStamp> span;
};

/// All pairs whose half-open wall intervals overlap. Sweep line over starts
/// with an active set, O(n log n + output).
PairSet pca_detect(std::span<const PhysicalInterval> intervals, OpCounters* counters = nullptr);

class PcaDetector {
 public:
  explicit PcaDetector(std::size_t process_count);

  PhysicalStamp on_local_event(EventId e, Micros now);
  PhysicalStamp on_send(EventId e, Micros now);
  void on_message(const MessageRecord<PhysicalStamp>& m);
  void on_event_end(EventId e, Micros now);

  const std::vector<PhysicalInterval>& intervals() const { return closed_; }
  PairSet detect();
  const OpCounters& counters() const { return counters_; }

 private:
  std::vector<std::optional<PhysicalInterval>> open_;
  std::vector<PhysicalInterval> closed_;
  OpCounters counters_;
};

}  // namespace snapcheck
