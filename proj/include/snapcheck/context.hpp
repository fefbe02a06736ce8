#pragma once

#include <compare>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "snapcheck/ids.hpp"

namespace snapcheck {

using UserId = std::uint32_t;
using RoomId = std::uint32_t;

/// One RFID location sample. `location` is what the reader reported;
/// `true_location` is where the user actually was.
struct ContextReading {
  UserId user = 0;
  RoomId location = 0;
  RoomId true_location = 0;
  bool erroneous = false;

  friend bool operator==(const ContextReading&, const ContextReading&) = default;
};

/// Two concurrent readings placing the same user in different rooms.
struct Violation {
  EventPair pair;
  UserId user = 0;
  RoomId first_location = 0;
  RoomId second_location = 0;

  friend auto operator<=>(const Violation&, const Violation&) = default;
};

using ReadingMap = std::unordered_map<EventId, ContextReading>;

/// Keeps the pairs whose readings put one user in two rooms at once.
/// Pairs with a missing reading on either side are dropped.
std::vector<Violation> violation_filter(const PairSet& pairs, const ReadingMap& readings);

}  // namespace snapcheck
