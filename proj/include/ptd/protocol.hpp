#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "ptd/core_model.hpp"
#include "ptd/dominance.hpp"
#include "ptd/skyband.hpp"
#include "ptd/spatial_index.hpp"

namespace ptd {

using NodeId = std::uint32_t;
inline constexpr NodeId kCoordinatorNode = 0;  // monitors are 1..m

enum class MessageKind {
  LocalCandidateUpload,
  UpdateInfoUpload,
  GlobalCandidateBroadcast,
  ScoreUpload,
  CheckingTimeBroadcast,
};
inline constexpr std::size_t kMessageKindCount = 5;

std::string_view to_string(MessageKind kind);
MessageKind message_kind_from_string(std::string_view name);

// Candidate object with the scores known to the sender.
struct CandidateRecord {
  ObjectPtr object;
  double dom = 0.0;
  double rdom = 0.0;
};

enum class UpdateOp { Add, Change, Remove };

struct UpdateEntry {
  UpdateOp op = UpdateOp::Add;
  ObjectId id = 0;
  ObjectPtr object;  // set for Add
  double dom = 0.0;
  double rdom = 0.0;
};

// Partial score of one candidate against one monitor's window. `pruned`
// marks candidates whose local r-dom alone already reaches delta.
struct PartialScore {
  ObjectId id = 0;
  double dom = 0.0;
  double rdom = 0.0;
  bool pruned = false;
};

// One change to the monitors' copy of the checking-time table.
struct CheckingTimeUpdate {
  ObjectId id = 0;
  TimeSlot mct = 0;
  bool erase = false;
};

using Payload = std::variant<std::vector<CandidateRecord>, std::vector<UpdateEntry>, std::vector<PartialScore>,
                             std::vector<CheckingTimeUpdate>>;

struct Message {
  MessageKind kind = MessageKind::LocalCandidateUpload;
  NodeId from = 0;
  NodeId to = 0;
  std::size_t recipients = 1;  // broadcasts are costed once per recipient
  TimeSlot slot = 0;
  Payload payload;

  std::size_t entries() const;
  std::size_t cost() const { return entries() * recipients; }
};

struct ProtocolParams {
  std::size_t m = 10;          // monitor nodes
  std::size_t window = 960;    // |SW_j|
  std::size_t degree = 6;      // R-tree fanout
  std::size_t delta = 30;      // threshold, delta <= k
  std::size_t k = 100;
  std::size_t instances = 5;   // n, used by the checking-time bound
  bool force_rescore = false;  // every checking-time entry is due next slot

  void validate() const;
  std::size_t global_window() const { return m * window; }
};

// Local candidate held by a monitor: current scores plus the scores last
// reported to the coordinator.
struct LocalCandidate {
  ObjectPtr object;
  double dom = 0.0;
  double rdom = 0.0;
  double sent_dom = 0.0;
  double sent_rdom = 0.0;
};

enum class MonitorMode {
  Incremental,    // rescores only objects whose scores can have changed
  FullRecompute,  // rescores the whole window every slot
};

class Monitor {
 public:
  Monitor(StreamIndex index, const ProtocolParams& params, MonitorMode mode);

  StreamIndex index() const { return index_; }

  // Fills the window before monitoring starts; no messages.
  void preload(const ObjectPtr& object);

  // Slides the window by the slot's arrivals, maintains the local
  // threshold-based k-skyband and returns the candidate upload.
  Message step(std::span<const ObjectPtr> arrivals, TimeSlot now, bool initial);

  // Partial dom / r-dom of every broadcast candidate against this window.
  Message rescore(const Message& broadcast);

  void apply_checking_times(const Message& message);

  const SlidingWindow& window() const { return window_; }
  const std::map<ObjectId, LocalCandidate>& candidates() const { return tks_; }
  const std::map<ObjectId, TimeSlot>& checking_time_copy() const { return ct_copy_; }
  std::size_t last_working_set() const { return last_working_set_; }
  std::size_t last_scored() const { return last_scored_; }

  CheckCounter take_checks();

 private:
  bool deferred(ObjectId id, TimeSlot t) const;

  StreamIndex index_;
  ProtocolParams params_;
  MonitorMode mode_;
  SlidingWindow window_;
  RTree tree_;
  std::map<ObjectId, LocalCandidate> tks_;
  std::map<ObjectId, TimeSlot> ct_copy_;
  CheckCounter checks_;
  std::size_t last_working_set_ = 0;
  std::size_t last_scored_ = 0;
};

enum class CoordinatorMode {
  MinimumCheckingTime,  // candidate deltas, checking-time table, MCT skip
  GlobalSkyband,        // full candidate sets every slot, no table
};

struct GlobalScore {
  double dom = 0.0;
  double rdom = 0.0;
  TimeSlot scored_at = 0;
};

class Coordinator {
 public:
  Coordinator(const ProtocolParams& params, CoordinatorMode mode);

  // Warm-up fill of SW_H; no messages.
  void preload(const ObjectPtr& object);

  // Absorbs the monitors' uploads and the slot's arrivals, forms CS^t and
  // returns the broadcast of candidates to rescore.
  Message merge(std::span<const Message> uploads, std::span<const ObjectPtr> arrivals, TimeSlot now);

  struct Finalized {
    std::vector<ObjectId> ptd;
    std::optional<Message> checking_times;
  };
  Finalized finalize(std::span<const Message> score_uploads, TimeSlot now);

  const SlidingWindow& window() const { return window_; }
  const std::vector<ObjectId>& candidate_set() const { return cs_; }
  const std::vector<ObjectId>& rescored() const { return rescored_; }
  const std::vector<ObjectId>& deferred() const { return deferred_; }
  std::size_t candidate_union_size() const { return union_size_; }
  const CheckingTimeTable& checking_table() const { return ct_; }
  const std::vector<ObjectId>& ptd() const { return ptd_; }
  const std::unordered_map<ObjectId, GlobalScore>& global_scores() const { return global_; }

 private:
  void check_uploads(std::span<const Message> uploads, TimeSlot now, bool scores) const;
  std::vector<CheckingTimeUpdate> checking_time_delta(TimeSlot now);

  ProtocolParams params_;
  CoordinatorMode mode_;
  SlidingWindow window_;
  std::unordered_map<ObjectId, ObjectPtr> live_;
  std::vector<std::map<ObjectId, CandidateRecord>> tks_by_monitor_;
  std::unordered_map<ObjectId, GlobalScore> global_;
  CheckingTimeTable ct_;
  std::map<ObjectId, TimeSlot> ct_mirror_;
  std::vector<ObjectId> cs_;
  std::vector<ObjectId> rescored_;
  std::vector<ObjectId> deferred_;
  std::size_t union_size_ = 0;
  std::vector<ObjectId> ptd_;
};

// ---------------------------------------------------------------------------
// Pipelines

using StreamSet = std::vector<std::vector<ObjectPtr>>;

struct MessageLogEntry {
  MessageKind kind = MessageKind::LocalCandidateUpload;
  NodeId from = 0;
  std::size_t entries = 0;
  std::size_t recipients = 1;

  std::size_t cost() const { return entries * recipients; }
};

struct SlotRecord {
  std::size_t slot = 0;  // 0-based monitoring slot
  TimeSlot time = 0;     // arrival slot processed
  std::vector<ObjectId> ptd;
  std::vector<MessageLogEntry> messages;
  std::vector<std::pair<std::string, std::uint64_t>> checks;  // per node
  std::size_t cs_size = 0;
  std::size_t tks_union_size = 0;
  std::size_t ct_size = 0;
  std::size_t rescored = 0;
  std::size_t scored_objects = 0;  // probes scored by monitors or the central node
  std::vector<ObjectId> deferred;  // candidates skipped by the MCT rule
  std::size_t early_mct_entries = 0;

  std::size_t cost() const;
  std::size_t cost_of(MessageKind kind) const;
  std::uint64_t total_checks() const;
};

struct Trace {
  std::string method;
  std::vector<SlotRecord> slots;

  std::size_t total_cost() const;
  std::uint64_t total_checks() const;
};

struct Schedule {
  TimeSlot first = 0;     // arrival slot processed at monitoring slot 0
  std::size_t slots = 1;  // monitoring period
};

std::size_t monitoring_period(std::size_t objects_per_stream, std::size_t window);
Schedule make_schedule(const StreamSet& streams, std::size_t window);

Trace run_ptdmus(const ProtocolParams& params, const StreamSet& streams);
Trace run_ptdsky(const ProtocolParams& params, const StreamSet& streams);
Trace run_ptdbf(const ProtocolParams& params, const StreamSet& streams);

}  // namespace ptd
