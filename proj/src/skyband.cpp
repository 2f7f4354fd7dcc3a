#include "ptd/skyband.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ptd {

std::vector<ScoredObject> score_window(std::span<const ObjectPtr> objects, const RTree& tree,
                                       CheckCounter* counter) {
  if (objects.size() != tree.size())
    throw ConsistencyError("score_window: tree indexes " + std::to_string(tree.size()) + " objects, window has " +
                           std::to_string(objects.size()));
  std::unordered_set<ObjectId> indexed;
  for (const auto& obj : tree.objects()) indexed.insert(obj->id());
  std::vector<ScoredObject> out;
  out.reserve(objects.size());
  for (const auto& obj : objects) {
    if (!indexed.count(obj->id()))
      throw ConsistencyError("score_window: object " + std::to_string(obj->id()) + " is not indexed");
    out.push_back({obj->id(), dom_via_index(*obj, tree, counter), rdom_via_index(*obj, tree, counter),
                   obj->arrival()});
  }
  return out;
}

namespace {

std::vector<ScoredObject> skyband_filter(std::span<const ScoredObject> scored, std::size_t bound) {
  std::vector<ScoredObject> out;
  for (const auto& s : scored) {
    if (s.dom >= 1.0 && s.rdom < static_cast<double>(bound)) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<ScoredObject> k_skyband(std::span<const ScoredObject> scored, std::size_t k) {
  if (k < 1) throw ParameterError("k must be at least 1");
  return skyband_filter(scored, k);
}

std::vector<ScoredObject> threshold_k_skyband(std::span<const ScoredObject> scored, std::size_t delta,
                                              std::size_t k) {
  if (k < 1) throw ParameterError("k must be at least 1");
  if (delta < 1) throw ParameterError("delta must be at least 1");
  if (delta > k) throw ParameterError("delta must not exceed k");
  return skyband_filter(scored, delta);
}

bool ranks_before(const ScoredObject& a, const ScoredObject& b) {
  if (a.dom != b.dom) return a.dom > b.dom;
  if (a.arrival != b.arrival) return a.arrival < b.arrival;
  return a.id < b.id;
}

std::vector<ObjectId> select_top_k(std::span<const ScoredObject> scored, std::size_t k) {
  std::vector<ScoredObject> sorted(scored.begin(), scored.end());
  const std::size_t take = std::min(k, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), sorted.end(), ranks_before);
  std::vector<ObjectId> ids;
  ids.reserve(take);
  for (std::size_t i = 0; i < take; ++i) ids.push_back(sorted[i].id);
  return ids;
}

TimeSlot compute_mct(double dom_u, double dom_k, TimeSlot exp_min, TimeSlot t_cur, std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw ParameterError("compute_mct: m and n must be positive");
  if (dom_u > dom_k + kProbabilityTolerance)
    throw PreconditionError("compute_mct: candidate score exceeds the k-th result score");
  if (exp_min <= t_cur) throw PreconditionError("compute_mct: exp_min must lie after the current slot");
  const double gap = std::max(0.0, dom_k - dom_u);
  const double slots = std::floor(gap / static_cast<double>(m * n));
  const double predicted = slots + static_cast<double>(t_cur);
  if (predicted >= static_cast<double>(exp_min)) return exp_min;
  return static_cast<TimeSlot>(predicted);
}

const CheckingTimeEntry* CheckingTimeTable::find(ObjectId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

bool CheckingTimeTable::deferred(ObjectId id, TimeSlot t) const {
  auto it = entries_.find(id);
  return it != entries_.end() && it->second.mct > t;
}

void CheckingTimeTable::purge_expired(TimeSlot t_cur) {
  std::erase_if(entries_, [t_cur](const auto& kv) { return kv.second.expiry <= t_cur; });
}

void CheckingTimeTable::force_next_slot(TimeSlot t_cur) {
  for (auto& [id, e] : entries_) e.mct = std::min(t_cur + 1, e.expiry);
}

void CheckingTimeTable::update(std::span<const TimedScore> candidates, std::span<const TimedScore> ptd,
                               TimeSlot t_cur, std::size_t m, std::size_t n) {
  std::unordered_set<ObjectId> in_ptd;
  double dom_k = 0.0;
  TimeSlot exp_min = 0;
  bool first = true;
  for (const auto& p : ptd) {
    in_ptd.insert(p.score.id);
    if (first || p.score.dom < dom_k) dom_k = p.score.dom;
    if (first || p.expiry < exp_min) exp_min = p.expiry;
    first = false;
  }
  for (ObjectId id : in_ptd) entries_.erase(id);

  for (const auto& c : candidates) {
    if (in_ptd.count(c.score.id)) continue;
    if (c.expiry <= t_cur) continue;
    TimeSlot mct = t_cur + 1;
    if (!ptd.empty() && exp_min > t_cur && c.score.dom <= dom_k + kProbabilityTolerance) {
      mct = compute_mct(c.score.dom, dom_k, exp_min, t_cur, m, n);
      if (mct == t_cur) mct = t_cur + 1;
    }
    mct = std::min(mct, c.expiry);
    entries_[c.score.id] = {c.score.id, mct, c.expiry};
  }
  purge_expired(t_cur);
}

}  // namespace ptd
