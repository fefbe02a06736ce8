#pragma once

#include <cstdint>

namespace snapcheck {

/// Operation and space counters behind the complexity comparison.
///
/// stamp_words_sent counts clock payload once per send operation: a broadcast
/// or a multicast to several peers carries one copy of the stamp, so it adds
/// the stamp's width in 64-bit words once.
struct OpCounters {
  std::uint64_t clock_updates = 0;
  std::uint64_t stamp_words_sent = 0;
  std::uint64_t pair_checks = 0;
  std::uint64_t events_processed = 0;

  OpCounters& operator+=(const OpCounters& o) {
    clock_updates += o.clock_updates;
    stamp_words_sent += o.stamp_words_sent;
    pair_checks += o.pair_checks;
    events_processed += o.events_processed;
    return *this;
  }

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace snapcheck
