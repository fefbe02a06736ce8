#include <algorithm>
#include <stdexcept>
#include <string>

#include "snapcheck/detectors.hpp"

namespace snapcheck {

PairSet ceda_detect(std::span<const VectorInterval> intervals, OpCounters* counters) {
  PairSet out;
  std::uint64_t checks = 0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& a = intervals[i];
    for (std::size_t j = i + 1; j < intervals.size(); ++j) {
      const auto& b = intervals[j];
      ++checks;
      if (happened_before(a.span.lo, b.span.hi) && happened_before(b.span.lo, a.span.hi)) {
        out.insert(EventPair::of(a.event, b.event));
      }
    }
  }
  if (counters) counters->pair_checks += checks;
  return out;
}

CedaDetector::CedaDetector(std::size_t process_count, ClockParams params)
    : params_(params), clocks_(process_count, VectorStamp(process_count)), open_(process_count) {}

VectorStamp CedaDetector::on_local_event(EventId e) {
  auto& slot = open_.at(e.process);
  if (slot) throw std::invalid_argument("event " + to_string(e) + " starts before " + to_string(slot->event) + " ended");
  auto& clock = clocks_[e.process];
  clock = vector_tick(std::move(clock), e.process, params_);
  slot = VectorInterval{e, {clock, clock}};
  ++counters_.clock_updates;
  ++counters_.events_processed;
  return clock;
}

VectorStamp CedaDetector::on_send(EventId e) {
  const auto& slot = open_.at(e.process);
  if (!slot || slot->event != e) throw std::invalid_argument("send from event " + to_string(e) + " that is not live");
  auto& clock = clocks_[e.process];
  clock = vector_tick(std::move(clock), e.process, params_);
  ++counters_.clock_updates;
  counters_.stamp_words_sent += clock.size();
  return clock;
}

void CedaDetector::on_message(const MessageRecord<VectorStamp>& m) {
  const ProcessId p = m.to_event.process;
  const auto& slot = open_.at(p);
  if (!slot || slot->event != m.to_event) {
    throw std::invalid_argument("message for event " + to_string(m.to_event) + " that is not live");
  }
  clocks_[p] = vector_merge(clocks_[p], m.send_stamp, p, params_);
  ++counters_.clock_updates;
}

void CedaDetector::on_event_end(EventId e) {
  auto& slot = open_.at(e.process);
  if (!slot || slot->event != e) throw std::invalid_argument("end of event " + to_string(e) + " that is not live");
  auto& clock = clocks_[e.process];
  clock = vector_tick(std::move(clock), e.process, params_);
  slot->span.hi = clock;
  closed_.push_back(std::move(*slot));
  slot.reset();
  ++counters_.clock_updates;
}

PairSet CedaDetector::detect() { return ceda_detect(closed_, &counters_); }

PairSet pca_detect(std::span<const PhysicalInterval> intervals, OpCounters* counters) {
  std::vector<const PhysicalInterval*> order;
  order.reserve(intervals.size());
  for (const auto& i : intervals) order.push_back(&i);
  std::sort(order.begin(), order.end(), [](const PhysicalInterval* a, const PhysicalInterval* b) {
    return a->span.lo != b->span.lo ? a->span.lo < b->span.lo : a->event < b->event;
  });

  PairSet out;
  std::uint64_t checks = 0;
  std::vector<const PhysicalInterval*> active;
  for (const auto* current : order) {
    std::erase_if(active, [&](const PhysicalInterval* a) { return a->span.hi <= current->span.lo; });
    for (const auto* a : active) {
      ++checks;
      out.insert(EventPair::of(a->event, current->event));
    }
    active.push_back(current);
  }
  if (counters) counters->pair_checks += checks;
  return out;
}

PcaDetector::PcaDetector(std::size_t process_count) : open_(process_count) {}

PhysicalStamp PcaDetector::on_local_event(EventId e, Micros now) {
  auto& slot = open_.at(e.process);
  if (slot) throw std::invalid_argument("event " + to_string(e) + " starts before " + to_string(slot->event) + " ended");
  slot = PhysicalInterval{e, {PhysicalStamp{now}, PhysicalStamp{now}}};
  ++counters_.clock_updates;
  ++counters_.events_processed;
  return PhysicalStamp{now};
}

PhysicalStamp PcaDetector::on_send(EventId e, Micros now) {
  const auto& slot = open_.at(e.process);
  if (!slot || slot->event != e) throw std::invalid_argument("send from event " + to_string(e) + " that is not live");
  ++counters_.clock_updates;
  ++counters_.stamp_words_sent;
  return PhysicalStamp{now};
}

void PcaDetector::on_message(const MessageRecord<PhysicalStamp>& m) {
  const auto& slot = open_.at(m.to_event.process);
  if (!slot || slot->event != m.to_event) {
    throw std::invalid_argument("message for event " + to_string(m.to_event) + " that is not live");
  }
}

void PcaDetector::on_event_end(EventId e, Micros now) {
  auto& slot = open_.at(e.process);
  if (!slot || slot->event != e) throw std::invalid_argument("end of event " + to_string(e) + " that is not live");
  slot->span.hi = PhysicalStamp{now};
  closed_.push_back(*slot);
  slot.reset();
  ++counters_.clock_updates;
}

PairSet PcaDetector::detect() { return pca_detect(closed_, &counters_); }

}  // namespace snapcheck
