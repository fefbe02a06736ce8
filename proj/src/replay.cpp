#include "snapcheck/replay.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace snapcheck {

const char* to_string(DetectorFamily family) {
  switch (family) {
    case DetectorFamily::SECA: return "SECA";
    case DetectorFamily::CEDA: return "CEDA";
    case DetectorFamily::PCA: return "PCA";
  }
  return "?";
}

std::optional<DetectorFamily> parse_family(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "SECA") return DetectorFamily::SECA;
  if (upper == "CEDA") return DetectorFamily::CEDA;
  if (upper == "PCA") return DetectorFamily::PCA;
  return std::nullopt;
}

std::vector<Notification> build_notifications(const Trace& trace) {
  std::vector<Notification> out;
  out.reserve(trace.events.size() * 3 + trace.messages.size());
  for (const auto& e : trace.events) {
    out.push_back({e.start, NotificationKind::LocalEvent, e.id.process, e.id, {}});
    out.push_back({e.end, NotificationKind::EventEnd, e.id.process, e.id, {}});
  }
  std::map<std::pair<EventId, Micros>, std::vector<std::size_t>> multicasts;
  for (std::size_t i = 0; i < trace.messages.size(); ++i) {
    const auto& m = trace.messages[i];
    multicasts[{m.from, m.send}].push_back(i);
    out.push_back({m.deliver, NotificationKind::Receive, m.to.process, m.to, {i}});
  }
  for (auto& [key, indices] : multicasts) {
    out.push_back({key.second, NotificationKind::Send, key.first.process, key.first, std::move(indices)});
  }
  std::sort(out.begin(), out.end(), [](const Notification& a, const Notification& b) {
    auto key = [](const Notification& n) {
      return std::tuple(n.time, static_cast<int>(n.kind), n.at, n.event,
                        n.messages.empty() ? std::size_t{0} : n.messages.front());
    };
    return key(a) < key(b);
  });
  return out;
}

namespace {

class SecaFamily {
 public:
  using Stamp = SnapshotStamp;

  SecaFamily(std::size_t n, const ClockParams& params) {
    states_.reserve(n);
    for (ProcessId p = 0; p < n; ++p) states_.emplace_back(p, n, params);
  }

  void start(EventId e, Micros) { broadcast(states_[e.process].on_local_event(e)); }
  Stamp send(EventId e, Micros) {
    auto b = states_[e.process].on_send(e);
    broadcast(b);
    return b.stamp;
  }
  void receive(const MessageRecord<Stamp>& m, Micros) { states_[m.to_event.process].on_message(m); }
  void end(EventId, Micros) {}

  void finish(RunResult& result) {
    for (auto& s : states_) {
      const auto& found = s.check_consistency();
      result.detected.insert(found.begin(), found.end());
      result.counters += s.counters();
      result.drops += s.drops();
      const auto& own = s.interval_queue(s.self());
      result.snapshot_intervals.insert(result.snapshot_intervals.end(), own.begin(), own.end());
    }
  }

 private:
  // System broadcast: delivered to every peer at the instant it is issued.
  void broadcast(const SnapshotBroadcast& b) {
    for (auto& s : states_) {
      if (s.self() != b.origin) s.on_broadcast(b);
    }
  }

  std::vector<SecaState> states_;
};

class CedaFamily {
 public:
  using Stamp = VectorStamp;

  CedaFamily(std::size_t n, const ClockParams& params) : detector_(n, params) {}

  void start(EventId e, Micros) { detector_.on_local_event(e); }
  Stamp send(EventId e, Micros) { return detector_.on_send(e); }
  void receive(const MessageRecord<Stamp>& m, Micros) { detector_.on_message(m); }
  void end(EventId e, Micros) { detector_.on_event_end(e); }

  void finish(RunResult& result) {
    result.detected = detector_.detect();
    result.counters = detector_.counters();
    result.vector_intervals = detector_.intervals();
  }

 private:
  CedaDetector detector_;
};

class PcaFamily {
 public:
  using Stamp = PhysicalStamp;

  PcaFamily(std::size_t n, const ClockParams&) : detector_(n) {}

  void start(EventId e, Micros now) { detector_.on_local_event(e, now); }
  Stamp send(EventId e, Micros now) { return detector_.on_send(e, now); }
  void receive(const MessageRecord<Stamp>& m, Micros) { detector_.on_message(m); }
  void end(EventId e, Micros now) { detector_.on_event_end(e, now); }

  void finish(RunResult& result) {
    result.detected = detector_.detect();
    result.counters = detector_.counters();
    result.physical_intervals = detector_.intervals();
  }

 private:
  PcaDetector detector_;
};

template <class Family>
void replay(const Trace& trace, Family& family, RunResult& result) {
  using Stamp = typename Family::Stamp;
  std::vector<std::optional<Stamp>> in_flight(trace.messages.size());

  for (const auto& n : build_notifications(trace)) {
    switch (n.kind) {
      case NotificationKind::LocalEvent:
        family.start(n.event, n.time);
        break;
      case NotificationKind::Send: {
        Stamp stamp = family.send(n.event, n.time);
        for (std::size_t i : n.messages) in_flight[i] = stamp;
        break;
      }
      case NotificationKind::Receive: {
        const std::size_t i = n.messages.front();
        const auto& m = trace.messages[i];
        if (!in_flight[i]) throw std::logic_error("delivery scheduled before its send");
        const auto& reading = trace.event(m.from).reading;
        family.receive(MessageRecord<Stamp>{m.from, m.to, std::move(*in_flight[i]), reading}, n.time);
        in_flight[i].reset();
        break;
      }
      case NotificationKind::EventEnd:
        family.end(n.event, n.time);
        break;
    }
  }
  family.finish(result);
}

}  // namespace

RunResult run_trace(const Trace& trace, DetectorFamily family, const RunOptions& options) {
  RunResult result;
  result.family = family;
  const std::size_t n = trace.process_count;
  switch (family) {
    case DetectorFamily::SECA: {
      SecaFamily f(n, options.clock);
      replay(trace, f, result);
      break;
    }
    case DetectorFamily::CEDA: {
      CedaFamily f(n, options.clock);
      replay(trace, f, result);
      break;
    }
    case DetectorFamily::PCA: {
      PcaFamily f(n, options.clock);
      replay(trace, f, result);
      break;
    }
  }
  result.violations = violation_filter(result.detected, trace.readings());
  result.degraded = result.drops > options.drop_threshold;
  return result;
}

}  // namespace snapcheck
