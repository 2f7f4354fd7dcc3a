#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "ptd/core_model.hpp"
#include "ptd/spatial_index.hpp"

namespace ptd {

// Scores every object against the tree that indexes exactly those objects.
std::vector<ScoredObject> score_window(std::span<const ObjectPtr> objects, const RTree& tree,
                                       CheckCounter* counter = nullptr);

// {u | dom(u) >= 1 and r-dom(u) < k}, in input order.
std::vector<ScoredObject> k_skyband(std::span<const ScoredObject> scored, std::size_t k);

// {u | dom(u) >= 1 and r-dom(u) < delta}, with delta <= k.
std::vector<ScoredObject> threshold_k_skyband(std::span<const ScoredObject> scored, std::size_t delta,
                                              std::size_t k);

bool ranks_before(const ScoredObject& a, const ScoredObject& b);

// The k highest-dom ids ordered by (dom desc, arrival asc, id asc).
std::vector<ObjectId> select_top_k(std::span<const ScoredObject> scored, std::size_t k);

// Earliest slot at which a non-result candidate could overtake the k-th
// result: min(exp_min, floor((dom_k - dom_u) / (m n)) + t_cur).
TimeSlot compute_mct(double dom_u, double dom_k, TimeSlot exp_min, TimeSlot t_cur, std::size_t m,
                     std::size_t n);

struct CheckingTimeEntry {
  ObjectId object_id = 0;
  TimeSlot mct = 0;
  TimeSlot expiry = 0;  // slot at which the object leaves the global window

  bool operator==(const CheckingTimeEntry&) const = default;
};

// A scored candidate together with the slot at which it expires.
struct TimedScore {
  ScoredObject score;
  TimeSlot expiry = 0;
};

class CheckingTimeTable {
 public:
  using Map = std::map<ObjectId, CheckingTimeEntry>;

  const CheckingTimeEntry* find(ObjectId id) const;
  bool contains(ObjectId id) const { return entries_.count(id) != 0; }
  // True when the object is deferred past slot t.
  bool deferred(ObjectId id, TimeSlot t) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }

  void erase(ObjectId id) { entries_.erase(id); }
  void purge_expired(TimeSlot t_cur);
  // Every remaining entry becomes due at the next slot.
  void force_next_slot(TimeSlot t_cur);

  // Recomputes the entry of every candidate outside `ptd`, removes PTD members
  // and purges expired entries. Candidates that are PTD members are ignored.
  void update(std::span<const TimedScore> candidates, std::span<const TimedScore> ptd, TimeSlot t_cur,
              std::size_t m, std::size_t n);

 private:
  Map entries_;
};

inline void update_checking_table(CheckingTimeTable& table, std::span<const TimedScore> candidates,
                                  std::span<const TimedScore> ptd, TimeSlot t_cur, std::size_t m,
                                  std::size_t n) {
  table.update(candidates, ptd, t_cur, m, n);
}

}  // namespace ptd
