#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "snapcheck/detectors.hpp"
#include "snapcheck/simulator.hpp"

namespace snapcheck {

enum class DetectorFamily { SECA, CEDA, PCA };

const char* to_string(DetectorFamily family);
/// Accepts "SECA", "CEDA", "PCA" (case-insensitive).
std::optional<DetectorFamily> parse_family(std::string_view name);

/// Ranks order simultaneous notifications so that causes precede effects:
/// an event ends before the next one starts, starts before it sends, and a
/// send is processed before a zero-delay delivery.
enum class NotificationKind { EventEnd = 0, LocalEvent = 1, Send = 2, Receive = 3 };

struct Notification {
  Micros time = 0;
  NotificationKind kind = NotificationKind::LocalEvent;
  ProcessId at = 0;
  EventId event;
  /// Send: every message of the multicast; Receive: exactly one. Indices
  /// into Trace::messages.
  std::vector<std::size_t> messages;
};

/// Replay schedule in a deterministic total order: (time, kind, process,
/// event, message). Messages sharing a sender event and send time form one
/// Send notification.
std::vector<Notification> build_notifications(const Trace& trace);

struct RunOptions {
  ClockParams clock;
  /// Degraded when the detector rejected more than this many messages.
  std::uint64_t drop_threshold = 0;
};

struct RunResult {
  DetectorFamily family = DetectorFamily::SECA;
  PairSet detected;
  std::vector<Violation> violations;
  OpCounters counters;
  std::uint64_t drops = 0;
  bool degraded = false;

  /// Final per-event intervals, for inspection. Only the family's own kind is
  /// filled; snapshot intervals are taken from the owning process.
  std::vector<QueuedInterval> snapshot_intervals;
  std::vector<VectorInterval> vector_intervals;
  std::vector<PhysicalInterval> physical_intervals;
};

RunResult run_trace(const Trace& trace, DetectorFamily family, const RunOptions& options = {});

}  // namespace snapcheck
