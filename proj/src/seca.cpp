#include <algorithm>
#include <stdexcept>
#include <string>

#include "snapcheck/detectors.hpp"

namespace snapcheck {

namespace {

std::vector<QueuedInterval>::iterator locate(std::vector<QueuedInterval>& q, EventId e) {
  auto it = std::lower_bound(q.begin(), q.end(), e.seq, [](const QueuedInterval& entry, std::uint32_t seq) {
    return entry.event.seq < seq;
  });
  return (it != q.end() && it->event == e) ? it : q.end();
}

}  // namespace

SecaState::SecaState(ProcessId self, std::size_t process_count, ClockParams params)
    : self_(self), params_(params), eq_(process_count), iq_(process_count) {
  if (self >= process_count) throw std::out_of_range("detector process index out of range");
  if (params.d == 0) throw std::invalid_argument("clock increment d must be >= 1");
}

const Interval<SnapshotStamp>* SecaState::find_interval(EventId e) const {
  return const_cast<SecaState*>(this)->find_interval_mut(e);
}

Interval<SnapshotStamp>* SecaState::find_interval_mut(EventId e) {
  if (e.process >= iq_.size()) return nullptr;
  auto& q = iq_[e.process];
  auto it = locate(q, e);
  return it == q.end() ? nullptr : &it->span;
}

void SecaState::open_interval(ProcessId owner, EventId e, SnapshotStamp stamp) {
  auto& q = iq_[owner];
  if (!q.empty() && q.back().event.seq >= e.seq) {
    throw std::invalid_argument("duplicate or out-of-order event " + to_string(e));
  }
  eq_[owner].push_back({e, stamp});
  q.push_back({e, {stamp, SnapshotStamp{checked_add(stamp.tick, 1)}}});
}

SnapshotBroadcast SecaState::on_local_event(EventId e) {
  if (e.process != self_) throw std::invalid_argument("event " + to_string(e) + " is not local");
  if (!iq_[self_].empty() && iq_[self_].back().event.seq >= e.seq) {
    throw std::invalid_argument("duplicate or out-of-order event " + to_string(e));
  }
  clock_ = snapshot_tick(clock_, params_);
  open_interval(self_, e, clock_);
  ++counters_.clock_updates;
  ++counters_.events_processed;
  ++counters_.stamp_words_sent;
  return {SnapshotBroadcast::Kind::Occurrence, self_, e, clock_};
}

SnapshotBroadcast SecaState::on_send(EventId e) {
  auto* own = e.process == self_ ? find_interval_mut(e) : nullptr;
  if (own == nullptr) throw std::invalid_argument("send from unknown local event " + to_string(e));
  clock_ = snapshot_tick(clock_, params_);
  eq_[self_].push_back({e, clock_});
  own->hi = std::max(own->hi, SnapshotStamp{checked_add(clock_.tick, 1)});
  ++counters_.clock_updates;
  ++counters_.stamp_words_sent;
  return {SnapshotBroadcast::Kind::Send, self_, e, clock_};
}

void SecaState::on_broadcast(const SnapshotBroadcast& b) {
  if (b.origin == self_ || b.origin >= eq_.size() || b.event.process != b.origin) {
    throw std::invalid_argument("broadcast origin must be a peer process");
  }
  if (b.kind == SnapshotBroadcast::Kind::Occurrence) {
    open_interval(b.origin, b.event, b.stamp);
  } else if (auto* span = find_interval_mut(b.event)) {
    eq_[b.origin].push_back({b.event, b.stamp});
    span->hi = std::max(span->hi, SnapshotStamp{checked_add(b.stamp.tick, 1)});
  } else {
    open_interval(b.origin, b.event, b.stamp);
  }
  clock_ = snapshot_merge(clock_, b.stamp, params_);
  ++counters_.clock_updates;
}

void SecaState::on_message(const MessageRecord<SnapshotStamp>& m) {
  if (m.to_event.process != self_) {
    throw std::invalid_argument("message for " + to_string(m.to_event) + " delivered to P" +
                                std::to_string(self_));
  }
  const ProcessId j = m.from_event.process;
  if (j == self_ || j >= eq_.size()) throw std::invalid_argument("message sender must be a peer process");
  auto* receiver = find_interval_mut(m.to_event);
  if (receiver == nullptr) throw std::invalid_argument("receiving event " + to_string(m.to_event) + " has not started");

  if (find_interval_mut(m.from_event) == nullptr || eq_[j].empty()) {
    ++drops_;
    return;
  }

  // Shadow tick of the sender's newest known stamp, kept on this replica.
  const QueuedStamp top = eq_[j].back();
  const SnapshotStamp restamp{checked_add(top.stamp.tick, params_.d)};
  eq_[j].push_back({top.event, restamp});
  auto& current = iq_[j].back().span;
  current.hi = std::max(current.hi, SnapshotStamp{checked_add(restamp.tick, 1)});

  clock_ = snapshot_merge(clock_, restamp, params_);
  ++counters_.clock_updates;

  receiver->hi = std::max(receiver->hi, restamp);
  ee_.push_back({m.to_event, m.from_event, m.send_stamp});
}

const PairSet& SecaState::check_consistency() {
  for (const auto& pending : ee_) {
    ++counters_.pair_checks;
    const auto* receiver = find_interval(pending.receiver);
    const auto* sender = find_interval(pending.sender);
    if (receiver == nullptr || sender == nullptr) continue;
    if (!is_well_formed(*receiver) || !is_well_formed(*sender)) continue;
    if (receiver->lo <= pending.send_stamp && pending.send_stamp < receiver->hi) {
      out_.insert(EventPair::of(pending.receiver, pending.sender));
    }
  }
  ee_.clear();
  return out_;
}

}  // namespace snapcheck
