#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "snapcheck/ids.hpp"

namespace snapcheck {

/// Scalar logical tick attached to event starts, sends and receives.
struct SnapshotStamp {
  std::uint64_t tick = 0;

  friend constexpr auto operator<=>(const SnapshotStamp&, const SnapshotStamp&) = default;
};

/// Synchronized physical time; equals the simulator's schedule time.
struct PhysicalStamp {
  Micros micros = 0;

  friend constexpr auto operator<=>(const PhysicalStamp&, const PhysicalStamp&) = default;
};

struct ClockParams {
  std::uint64_t d = 1;
  /// Apply a further +d after the max on receipt (classical Lamport rule).
  /// Off by default: the snapshot receive rule is a bare max.
  bool tick_after_merge = false;
};

/// n-slot logical timestamp. The length is fixed at construction.
class VectorStamp {
 public:
  VectorStamp() = default;
  explicit VectorStamp(std::size_t n) : slots_(n, 0) {}
  VectorStamp(std::initializer_list<std::uint64_t> slots) : slots_(slots) {}
  explicit VectorStamp(std::vector<std::uint64_t> slots) : slots_(std::move(slots)) {}

  std::size_t size() const { return slots_.size(); }
  std::uint64_t operator[](std::size_t i) const { return slots_[i]; }
  std::span<const std::uint64_t> slots() const { return slots_; }

  friend bool operator==(const VectorStamp&, const VectorStamp&) = default;

 private:
  friend VectorStamp vector_tick(VectorStamp, ProcessId, const ClockParams&);
  friend VectorStamp vector_merge(const VectorStamp&, const VectorStamp&, ProcessId,
                                  const ClockParams&);
  std::vector<std::uint64_t> slots_;
};

std::ostream& operator<<(std::ostream& os, const VectorStamp& v);

/// Half-open [lo, hi) for scalar and physical stamps; slot-wise lo <= hi for
/// vector stamps.
template <class Stamp>
struct Interval {
  Stamp lo;
  Stamp hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Order { Before, After, Concurrent };

const char* to_string(Order order);

SnapshotStamp snapshot_tick(SnapshotStamp clock, const ClockParams& params = {});

/// max(local, incoming); adds d afterwards only when params.tick_after_merge.
SnapshotStamp snapshot_merge(SnapshotStamp local, SnapshotStamp incoming,
                             const ClockParams& params = {});

/// Throws std::out_of_range when owner >= clock.size().
VectorStamp vector_tick(VectorStamp clock, ProcessId owner, const ClockParams& params = {});

/// Slot-wise max, then slot[owner] += d. Throws std::invalid_argument on a
/// length mismatch and std::out_of_range on a bad owner.
VectorStamp vector_merge(const VectorStamp& local, const VectorStamp& incoming, ProcessId owner,
                         const ClockParams& params = {});

/// a <= b slot-wise.
bool vector_leq(const VectorStamp& a, const VectorStamp& b);

/// a -> b: a <= b slot-wise and a != b.
bool happened_before(const VectorStamp& a, const VectorStamp& b);

bool is_well_formed(const Interval<SnapshotStamp>& i);
bool is_well_formed(const Interval<PhysicalStamp>& i);
bool is_well_formed(const Interval<VectorStamp>& i);

Order interval_compare(const Interval<SnapshotStamp>& a, const Interval<SnapshotStamp>& b);
Order interval_compare(const Interval<PhysicalStamp>& a, const Interval<PhysicalStamp>& b);
Order interval_compare(const Interval<VectorStamp>& a, const Interval<VectorStamp>& b);

/// Checked addition for stamp arithmetic. Overflow is a hard fault
/// (std::overflow_error), never a wraparound.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

}  // namespace snapcheck
