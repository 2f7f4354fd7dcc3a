#include "ptd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ptd {

namespace {

constexpr double kScoreChangeTolerance = 1e-9;

bool passes_threshold(double dom, double rdom, std::size_t delta) {
  return dom >= 1.0 && rdom < static_cast<double>(delta);
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::LocalCandidateUpload: return "LocalCandidateUpload";
    case MessageKind::UpdateInfoUpload: return "UpdateInfoUpload";
    case MessageKind::GlobalCandidateBroadcast: return "GlobalCandidateBroadcast";
    case MessageKind::ScoreUpload: return "ScoreUpload";
    case MessageKind::CheckingTimeBroadcast: return "CheckingTimeBroadcast";
  }
  return "?";
}

MessageKind message_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kMessageKindCount; ++i) {
    const auto kind = static_cast<MessageKind>(i);
    if (to_string(kind) == name) return kind;
  }
  throw FormatError("unknown message kind '" + std::string(name) + "'");
}

std::size_t Message::entries() const {
  return std::visit([](const auto& v) { return v.size(); }, payload);
}

void ProtocolParams::validate() const {
  if (m < 1) throw ConfigError("m must be at least 1");
  if (window < 1) throw ConfigError("|SW_j| must be at least 1");
  if (degree < 2) throw ConfigError("R-tree degree must be at least 2");
  if (k < 1) throw ConfigError("k must be at least 1");
  if (delta < 1) throw ConfigError("delta must be at least 1");
  if (delta > k) throw ConfigError("delta must not exceed k");
  if (instances < 1) throw ConfigError("n must be at least 1");
}

// ---------------------------------------------------------------------------
// Monitor

Monitor::Monitor(StreamIndex index, const ProtocolParams& params, MonitorMode mode)
    : index_(index), params_(params), mode_(mode), window_(params.window) {}

void Monitor::preload(const ObjectPtr& object) {
  if (object->stream() != index_)
    throw ProtocolError("object " + std::to_string(object->id()) + " routed to monitor " + std::to_string(index_));
  window_.push(object);
}

bool Monitor::deferred(ObjectId id, TimeSlot t) const {
  auto it = ct_copy_.find(id);
  return it != ct_copy_.end() && it->second > t;
}

CheckCounter Monitor::take_checks() {
  CheckCounter out = checks_;
  checks_.reset();
  return out;
}

Message Monitor::step(std::span<const ObjectPtr> arrivals, TimeSlot now, bool initial) {
  for (const auto& obj : arrivals) {
    if (obj->stream() != index_)
      throw ProtocolError("object " + std::to_string(obj->id()) + " from stream " + std::to_string(obj->stream()) +
                          " routed to monitor " + std::to_string(index_));
    if (obj->arrival() != now)
      throw ProtocolError("object " + std::to_string(obj->id()) + " arrives at " + std::to_string(obj->arrival()) +
                          " but slot is " + std::to_string(now));
  }
  std::vector<ObjectPtr> evicted;
  for (const auto& obj : arrivals) {
    if (auto old = window_.push(obj)) evicted.push_back(std::move(*old));
  }
  const auto contents = window_.snapshot();
  tree_ = RTree::bulk_load(contents, params_.degree);

  const bool full = initial || mode_ == MonitorMode::FullRecompute;
  std::set<ObjectId> working;
  for (const auto& [id, c] : tks_) working.insert(id);

  // Objects whose dom or r-dom can differ from the previous slot: the new
  // arrivals and everything related by dominance to an arrival or eviction.
  std::map<ObjectId, ObjectPtr> probes;
  if (full) {
    for (const auto& obj : contents) probes.emplace(obj->id(), obj);
  } else {
    for (const auto& obj : arrivals) {
      probes.emplace(obj->id(), obj);
      for (auto& rel : related_objects(*obj, tree_, &checks_)) probes.emplace(rel->id(), rel);
    }
    for (const auto& obj : evicted) {
      for (auto& rel : related_objects(*obj, tree_, &checks_)) probes.emplace(rel->id(), rel);
    }
  }
  for (const auto& obj : evicted) {
    tks_.erase(obj->id());
    working.erase(obj->id());
  }
  for (const auto& [id, obj] : probes) working.insert(id);
  last_working_set_ = working.size();
  last_scored_ = probes.size();

  std::vector<ObjectId> added, removed;
  for (const auto& [id, obj] : probes) {
    const double d = dom_via_index(*obj, tree_, &checks_);
    const double r = rdom_via_index(*obj, tree_, &checks_);
    const bool pass = passes_threshold(d, r, params_.delta);
    auto it = tks_.find(id);
    if (it != tks_.end()) {
      if (pass) {
        it->second.dom = d;
        it->second.rdom = r;
      } else {
        tks_.erase(it);
        removed.push_back(id);
      }
    } else if (pass) {
      tks_.emplace(id, LocalCandidate{obj, d, r, d, r});
      added.push_back(id);
    }
  }

  Message msg;
  msg.from = index_;
  msg.to = kCoordinatorNode;
  msg.slot = now;
  if (full) {
    msg.kind = MessageKind::LocalCandidateUpload;
    std::vector<CandidateRecord> records;
    records.reserve(tks_.size());
    for (auto& [id, c] : tks_) {
      c.sent_dom = c.dom;
      c.sent_rdom = c.rdom;
      records.push_back({c.object, c.dom, c.rdom});
    }
    msg.payload = std::move(records);
    return msg;
  }

  msg.kind = MessageKind::UpdateInfoUpload;
  std::vector<UpdateEntry> updates;
  const std::set<ObjectId> added_set(added.begin(), added.end());
  for (ObjectId id : removed) updates.push_back({UpdateOp::Remove, id, nullptr, 0.0, 0.0});
  for (auto& [id, c] : tks_) {
    if (added_set.count(id)) {
      updates.push_back({UpdateOp::Add, id, c.object, c.dom, c.rdom});
      continue;
    }
    const bool changed = std::abs(c.dom - c.sent_dom) > kScoreChangeTolerance ||
                         std::abs(c.rdom - c.sent_rdom) > kScoreChangeTolerance;
    // Deferred candidates are not rescored before their checking time, so
    // their score changes wait until then.
    if (changed && !deferred(id, now)) {
      c.sent_dom = c.dom;
      c.sent_rdom = c.rdom;
      updates.push_back({UpdateOp::Change, id, nullptr, c.dom, c.rdom});
    }
  }
  msg.payload = std::move(updates);
  return msg;
}

Message Monitor::rescore(const Message& broadcast) {
  if (broadcast.kind != MessageKind::GlobalCandidateBroadcast)
    throw ProtocolError("monitor rescore expects a global candidate broadcast");
  const auto& records = std::get<std::vector<CandidateRecord>>(broadcast.payload);
  std::vector<PartialScore> scores;
  for (const auto& rec : records) {
    if (!tree_.empty() && rec.object->dim() != tree_.dim())
      throw DimensionError("broadcast candidate " + std::to_string(rec.object->id()) + " has dimension " +
                           std::to_string(rec.object->dim()) + ", window has " + std::to_string(tree_.dim()));
    const double d = dom_via_index(*rec.object, tree_, &checks_);
    const double r = rdom_via_index(*rec.object, tree_, &checks_);
    if (r >= static_cast<double>(params_.delta)) {
      scores.push_back({rec.object->id(), d, r, true});
    } else if (d > 0.0 || r > 0.0) {
      scores.push_back({rec.object->id(), d, r, false});
    }
  }
  Message msg;
  msg.kind = MessageKind::ScoreUpload;
  msg.from = index_;
  msg.to = kCoordinatorNode;
  msg.slot = broadcast.slot;
  msg.payload = std::move(scores);
  return msg;
}

void Monitor::apply_checking_times(const Message& message) {
  if (message.kind != MessageKind::CheckingTimeBroadcast)
    throw ProtocolError("expected a checking-time broadcast");
  for (const auto& u : std::get<std::vector<CheckingTimeUpdate>>(message.payload)) {
    if (u.erase) {
      ct_copy_.erase(u.id);
    } else {
      ct_copy_[u.id] = u.mct;
    }
  }
  // Entries due by the next slot are implied by their absence.
  std::erase_if(ct_copy_, [&](const auto& kv) { return kv.second <= message.slot + 1; });
}

// ---------------------------------------------------------------------------
// Coordinator

Coordinator::Coordinator(const ProtocolParams& params, CoordinatorMode mode)
    : params_(params), mode_(mode), window_(params.global_window()), tks_by_monitor_(params.m) {}

void Coordinator::check_uploads(std::span<const Message> uploads, TimeSlot now, bool scores) const {
  if (uploads.size() != params_.m)
    throw ProtocolError("expected " + std::to_string(params_.m) + " uploads, received " +
                        std::to_string(uploads.size()));
  std::vector<bool> seen(params_.m + 1, false);
  for (const auto& msg : uploads) {
    if (msg.from < 1 || msg.from > params_.m || seen[msg.from])
      throw ProtocolError("upload from unexpected or duplicate monitor " + std::to_string(msg.from));
    seen[msg.from] = true;
    if (msg.slot != now) throw ProtocolError("upload for slot " + std::to_string(msg.slot) + " at slot " +
                                             std::to_string(now));
    const bool ok = scores ? msg.kind == MessageKind::ScoreUpload
                           : (msg.kind == MessageKind::LocalCandidateUpload || msg.kind == MessageKind::UpdateInfoUpload);
    if (!ok) throw ProtocolError("unexpected message kind " + std::string(to_string(msg.kind)));
  }
}

Message Coordinator::merge(std::span<const Message> uploads, std::span<const ObjectPtr> arrivals, TimeSlot now) {
  check_uploads(uploads, now, false);

  for (const auto& obj : arrivals) {
    live_.emplace(obj->id(), obj);
    if (auto old = window_.push(obj)) {
      const ObjectId gone = (*old)->id();
      live_.erase(gone);
      for (auto& tks : tks_by_monitor_) tks.erase(gone);
      global_.erase(gone);
      ct_.erase(gone);
    }
  }

  std::vector<const Message*> ordered;
  for (const auto& msg : uploads) ordered.push_back(&msg);
  std::sort(ordered.begin(), ordered.end(), [](const Message* a, const Message* b) { return a->from < b->from; });

  for (const Message* msg : ordered) {
    auto& tks = tks_by_monitor_[msg->from - 1];
    if (msg->kind == MessageKind::LocalCandidateUpload) {
      tks.clear();
      for (const auto& rec : std::get<std::vector<CandidateRecord>>(msg->payload)) {
        if (!live_.count(rec.object->id()))
          throw ProtocolError("candidate " + std::to_string(rec.object->id()) + " is outside the global window");
        tks[rec.object->id()] = rec;
      }
      continue;
    }
    for (const auto& u : std::get<std::vector<UpdateEntry>>(msg->payload)) {
      switch (u.op) {
        case UpdateOp::Add:
          if (!u.object || !live_.count(u.id))
            throw ProtocolError("added candidate " + std::to_string(u.id) + " is outside the global window");
          tks[u.id] = {u.object, u.dom, u.rdom};
          break;
        case UpdateOp::Change: {
          auto it = tks.find(u.id);
          if (it == tks.end()) throw ProtocolError("score change for unknown candidate " + std::to_string(u.id));
          it->second.dom = u.dom;
          it->second.rdom = u.rdom;
          break;
        }
        case UpdateOp::Remove:
          tks.erase(u.id);
          break;
      }
    }
  }

  // CS^t: union of the local candidate sets. With the checking-time table
  // the last global scores prune candidates that cannot re-enter the
  // k-skyband yet: each slot moves any score by at most m.
  std::vector<const CandidateRecord*> candidates;
  for (const auto& tks : tks_by_monitor_) {
    for (const auto& [id, rec] : tks) candidates.push_back(&rec);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateRecord* a, const CandidateRecord* b) { return a->object->id() < b->object->id(); });
  union_size_ = candidates.size();

  cs_.clear();
  rescored_.clear();
  deferred_.clear();
  std::vector<CandidateRecord> broadcast;
  const double m = static_cast<double>(params_.m);
  for (const CandidateRecord* rec : candidates) {
    const ObjectId id = rec->object->id();
    double dom = rec->dom, rdom = rec->rdom;
    if (auto g = global_.find(id); g != global_.end()) {
      dom = g->second.dom;
      rdom = g->second.rdom;
      if (mode_ == CoordinatorMode::MinimumCheckingTime) {
        const double drift = m * static_cast<double>(now - g->second.scored_at);
        if (dom + drift < 1.0 || rdom - drift >= static_cast<double>(params_.k)) continue;
      }
    }
    cs_.push_back(id);
    if (mode_ == CoordinatorMode::MinimumCheckingTime && !params_.force_rescore && ct_.deferred(id, now)) {
      deferred_.push_back(id);
      continue;
    }
    rescored_.push_back(id);
    broadcast.push_back({rec->object, dom, rdom});
  }
  if (mode_ == CoordinatorMode::MinimumCheckingTime) {
    const std::set<ObjectId> in_cs(cs_.begin(), cs_.end());
    std::vector<ObjectId> stale;
    for (const auto& [id, e] : ct_.entries()) {
      if (!in_cs.count(id)) stale.push_back(id);
    }
    for (ObjectId id : stale) ct_.erase(id);
  }

  Message msg;
  msg.kind = MessageKind::GlobalCandidateBroadcast;
  msg.from = kCoordinatorNode;
  msg.to = kCoordinatorNode;
  msg.recipients = params_.m;
  msg.slot = now;
  msg.payload = std::move(broadcast);
  return msg;
}

std::vector<CheckingTimeUpdate> Coordinator::checking_time_delta(TimeSlot now) {
  // The monitors' copy holds only entries deferred beyond the next slot;
  // anything else is due and needs no entry.
  std::vector<CheckingTimeUpdate> delta;
  for (const auto& [id, e] : ct_.entries()) {
    if (e.mct <= now + 1) continue;
    auto it = ct_mirror_.find(id);
    if (it == ct_mirror_.end() || it->second != e.mct) {
      delta.push_back({id, e.mct, false});
      ct_mirror_[id] = e.mct;
    }
  }
  for (auto it = ct_mirror_.begin(); it != ct_mirror_.end();) {
    const auto* e = ct_.find(it->first);
    const bool still_deferred = e && e->mct > now + 1;
    if (still_deferred) {
      ++it;
      continue;
    }
    if (it->second > now + 1) delta.push_back({it->first, 0, true});
    it = ct_mirror_.erase(it);
  }
  std::sort(delta.begin(), delta.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return delta;
}

Coordinator::Finalized Coordinator::finalize(std::span<const Message> score_uploads, TimeSlot now) {
  check_uploads(score_uploads, now, true);

  std::unordered_map<ObjectId, PartialScore> sums;
  for (ObjectId id : rescored_) sums[id] = {id, 0.0, 0.0, false};
  std::vector<const Message*> ordered;
  for (const auto& msg : score_uploads) ordered.push_back(&msg);
  std::sort(ordered.begin(), ordered.end(), [](const Message* a, const Message* b) { return a->from < b->from; });
  for (const Message* msg : ordered) {
    for (const auto& p : std::get<std::vector<PartialScore>>(msg->payload)) {
      auto it = sums.find(p.id);
      if (it == sums.end()) throw ProtocolError("score for candidate " + std::to_string(p.id) + " was not requested");
      it->second.dom += p.dom;
      it->second.rdom += p.rdom;
      it->second.pruned = it->second.pruned || p.pruned;
    }
  }

  std::vector<ScoredObject> eligible;
  std::vector<ObjectId> ineligible;
  for (ObjectId id : rescored_) {
    const auto& s = sums[id];
    global_[id] = {s.dom, s.rdom, now};
    const ObjectPtr& obj = live_.at(id);
    if (!s.pruned && passes_threshold(s.dom, s.rdom, params_.delta)) {
      eligible.push_back({id, s.dom, s.rdom, obj->arrival()});
    } else {
      ineligible.push_back(id);
    }
  }
  ptd_ = select_top_k(eligible, params_.k);

  Finalized out;
  out.ptd = ptd_;
  if (mode_ != CoordinatorMode::MinimumCheckingTime) return out;

  const std::set<ObjectId> in_ptd(ptd_.begin(), ptd_.end());
  const auto expiry_of = [&](ObjectId id) {
    return live_.at(id)->arrival() + static_cast<TimeSlot>(params_.window);
  };
  std::vector<TimedScore> ptd_timed, others;
  for (const auto& s : eligible) {
    (in_ptd.count(s.id) ? ptd_timed : others).push_back({s, expiry_of(s.id)});
  }
  for (ObjectId id : ineligible) ct_.erase(id);
  ct_.update(others, ptd_timed, now, params_.m, params_.instances);
  if (params_.force_rescore) ct_.force_next_slot(now);

  Message msg;
  msg.kind = MessageKind::CheckingTimeBroadcast;
  msg.from = kCoordinatorNode;
  msg.to = kCoordinatorNode;
  msg.recipients = params_.m;
  msg.slot = now;
  msg.payload = checking_time_delta(now);
  out.checking_times = std::move(msg);
  return out;
}

// ---------------------------------------------------------------------------
// Pipelines

std::size_t SlotRecord::cost() const {
  std::size_t total = 0;
  for (const auto& m : messages) total += m.cost();
  return total;
}

std::size_t SlotRecord::cost_of(MessageKind kind) const {
  std::size_t total = 0;
  for (const auto& m : messages) {
    if (m.kind == kind) total += m.cost();
  }
  return total;
}

std::uint64_t SlotRecord::total_checks() const {
  std::uint64_t total = 0;
  for (const auto& [node, c] : checks) total += c;
  return total;
}

std::size_t Trace::total_cost() const {
  std::size_t total = 0;
  for (const auto& s : slots) total += s.cost();
  return total;
}

std::uint64_t Trace::total_checks() const {
  std::uint64_t total = 0;
  for (const auto& s : slots) total += s.total_checks();
  return total;
}

std::size_t monitoring_period(std::size_t objects_per_stream, std::size_t window) {
  return objects_per_stream > window ? objects_per_stream - window : 1;
}

Schedule make_schedule(const StreamSet& streams, std::size_t window) {
  TimeSlot last = -1;
  for (const auto& s : streams) {
    for (const auto& obj : s) last = std::max(last, obj->arrival());
  }
  if (last < 0) throw ConfigError("no input objects");
  const auto per_stream = static_cast<std::size_t>(last + 1);
  Schedule sched;
  sched.slots = monitoring_period(per_stream, window);
  sched.first = std::min<TimeSlot>(last, static_cast<TimeSlot>(window));
  return sched;
}

namespace {

// Walks the streams slot by slot: objects before the schedule start are
// the warm-up fill, then each slot yields the arrivals stamped with it.
class StreamFeed {
 public:
  StreamFeed(const StreamSet& streams) : streams_(streams), cursor_(streams.size(), 0) {}

  std::vector<std::vector<ObjectPtr>> take_until(TimeSlot last_inclusive) {
    std::vector<std::vector<ObjectPtr>> out(streams_.size());
    for (std::size_t j = 0; j < streams_.size(); ++j) {
      auto& c = cursor_[j];
      while (c < streams_[j].size() && streams_[j][c]->arrival() <= last_inclusive) out[j].push_back(streams_[j][c++]);
    }
    return out;
  }

 private:
  const StreamSet& streams_;
  std::vector<std::size_t> cursor_;
};

// Global push order: by arrival slot, then stream index, then id.
std::vector<ObjectPtr> interleave(const std::vector<std::vector<ObjectPtr>>& per_stream) {
  std::vector<ObjectPtr> all;
  for (const auto& s : per_stream) all.insert(all.end(), s.begin(), s.end());
  std::stable_sort(all.begin(), all.end(), [](const ObjectPtr& a, const ObjectPtr& b) {
    if (a->arrival() != b->arrival()) return a->arrival() < b->arrival();
    if (a->stream() != b->stream()) return a->stream() < b->stream();
    return a->id() < b->id();
  });
  return all;
}

void check_streams(const ProtocolParams& params, const StreamSet& streams) {
  params.validate();
  if (streams.size() != params.m)
    throw ConfigError("expected " + std::to_string(params.m) + " streams, got " + std::to_string(streams.size()));
}

MessageLogEntry log_entry(const Message& m) { return {m.kind, m.from, m.entries(), m.recipients}; }

Trace run_distributed(const ProtocolParams& params, const StreamSet& streams, bool mct, const std::string& name) {
  check_streams(params, streams);
  const Schedule sched = make_schedule(streams, params.window);
  const MonitorMode mmode = mct ? MonitorMode::Incremental : MonitorMode::FullRecompute;
  std::vector<Monitor> monitors;
  monitors.reserve(params.m);
  for (std::size_t j = 0; j < params.m; ++j) monitors.emplace_back(static_cast<StreamIndex>(j + 1), params, mmode);
  Coordinator coordinator(params, mct ? CoordinatorMode::MinimumCheckingTime : CoordinatorMode::GlobalSkyband);

  StreamFeed feed(streams);
  const auto warm = feed.take_until(sched.first - 1);
  for (std::size_t j = 0; j < params.m; ++j) {
    for (const auto& obj : warm[j]) monitors[j].preload(obj);
  }
  for (const auto& obj : interleave(warm)) coordinator.preload(obj);

  Trace trace;
  trace.method = name;
  trace.slots.reserve(sched.slots);
  for (std::size_t t = 0; t < sched.slots; ++t) {
    const TimeSlot now = sched.first + static_cast<TimeSlot>(t);
    const auto arrivals = feed.take_until(now);
    SlotRecord rec;
    rec.slot = t;
    rec.time = now;

    std::vector<Message> uploads;
    uploads.reserve(params.m);
    for (std::size_t j = 0; j < params.m; ++j) {
      uploads.push_back(monitors[j].step(arrivals[j], now, t == 0));
      rec.scored_objects += monitors[j].last_scored();
    }
    const auto global_arrivals = interleave(arrivals);
    const Message broadcast = coordinator.merge(uploads, global_arrivals, now);

    std::vector<Message> scores;
    scores.reserve(params.m);
    for (auto& mon : monitors) scores.push_back(mon.rescore(broadcast));
    auto fin = coordinator.finalize(scores, now);
    if (fin.checking_times) {
      for (auto& mon : monitors) mon.apply_checking_times(*fin.checking_times);
    }

    for (const auto& u : uploads) rec.messages.push_back(log_entry(u));
    rec.messages.push_back(log_entry(broadcast));
    for (const auto& s : scores) rec.messages.push_back(log_entry(s));
    if (fin.checking_times) rec.messages.push_back(log_entry(*fin.checking_times));

    for (auto& mon : monitors)
      rec.checks.emplace_back("monitor_" + std::to_string(mon.index()), mon.take_checks().total());
    rec.checks.emplace_back("coordinator", 0);

    rec.ptd = std::move(fin.ptd);
    rec.cs_size = coordinator.candidate_set().size();
    rec.tks_union_size = coordinator.candidate_union_size();
    rec.ct_size = coordinator.checking_table().size();
    rec.rescored = coordinator.rescored().size();
    rec.deferred = coordinator.deferred();
    trace.slots.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace

void Coordinator::preload(const ObjectPtr& object) {
  live_.emplace(object->id(), object);
  if (auto old = window_.push(object)) live_.erase((*old)->id());
}

Trace run_ptdmus(const ProtocolParams& params, const StreamSet& streams) {
  return run_distributed(params, streams, true, "PTDMUS");
}

Trace run_ptdsky(const ProtocolParams& params, const StreamSet& streams) {
  return run_distributed(params, streams, false, "PTDSky");
}

Trace run_ptdbf(const ProtocolParams& params, const StreamSet& streams) {
  check_streams(params, streams);
  const Schedule sched = make_schedule(streams, params.window);
  SlidingWindow window(params.global_window());
  StreamFeed feed(streams);
  for (const auto& obj : interleave(feed.take_until(sched.first - 1))) window.push(obj);

  Trace trace;
  trace.method = "PTDBF";
  trace.slots.reserve(sched.slots);
  for (std::size_t t = 0; t < sched.slots; ++t) {
    const TimeSlot now = sched.first + static_cast<TimeSlot>(t);
    for (const auto& obj : interleave(feed.take_until(now))) window.push(obj);
    const auto contents = window.snapshot();
    const RTree tree = RTree::bulk_load(contents, params.degree);
    CheckCounter checks;
    const auto scored = score_window(contents, tree, &checks);
    SlotRecord rec;
    rec.slot = t;
    rec.time = now;
    rec.ptd = select_top_k(scored, params.k);
    rec.checks.emplace_back("central", checks.total());
    rec.scored_objects = contents.size();
    rec.cs_size = contents.size();
    trace.slots.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace ptd
