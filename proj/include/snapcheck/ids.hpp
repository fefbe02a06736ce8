#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>

namespace snapcheck {

using ProcessId = std::uint32_t;

/// Simulated wall time in integer microseconds since trace start.
using Micros = std::int64_t;

/// Identifies one event: the owning process and its per-process sequence
/// number (0, 1, 2, ... in program order).
struct EventId {
  ProcessId process = 0;
  std::uint32_t seq = 0;

  friend constexpr auto operator<=>(const EventId&, const EventId&) = default;
};

std::ostream& operator<<(std::ostream& os, const EventId& id);
std::string to_string(const EventId& id);

/// Unordered pair of distinct events, stored with first < second.
struct EventPair {
  EventId first;
  EventId second;

  /// Canonicalizes (a, b); throws std::invalid_argument when a == b.
  static EventPair of(EventId a, EventId b);

  friend constexpr auto operator<=>(const EventPair&, const EventPair&) = default;
};

std::ostream& operator<<(std::ostream& os, const EventPair& pair);

using PairSet = std::set<EventPair>;

}  // namespace snapcheck

template <>
struct std::hash<snapcheck::EventId> {
  std::size_t operator()(const snapcheck::EventId& id) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{id.process} << 32) | id.seq);
  }
};
