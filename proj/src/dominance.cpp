#include "ptd/dominance.hpp"

namespace ptd {

std::string_view to_string(DominanceClass c) {
  switch (c) {
    case DominanceClass::Complete: return "Complete";
    case DominanceClass::Partial: return "Partial";
    case DominanceClass::Missing: return "Missing";
  }
  return "?";
}

bool instance_dominates(const Instance& a, const Instance& b) {
  if (a.dim() != b.dim()) throw DimensionError("instance_dominates: dimension mismatch");
  bool strict = false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.coords[i] > b.coords[i]) return false;
    if (a.coords[i] < b.coords[i]) strict = true;
  }
  return strict;
}

namespace {

void check_pair(const UncertainObject& ui, const UncertainObject& uj) {
  if (ui.id() == uj.id()) throw SelfComparisonError("object " + std::to_string(ui.id()) + " compared with itself");
  if (ui.dim() != uj.dim()) throw DimensionError("objects " + std::to_string(ui.id()) + " and " +
                                                 std::to_string(uj.id()) + " differ in dimension");
}

}  // namespace

double object_dominance_prob(const UncertainObject& ui, const UncertainObject& uj, CheckCounter* counter) {
  check_pair(ui, uj);
  double total = 0.0;
  for (const auto& a : ui.instances()) {
    double dominated_mass = 0.0;
    for (const auto& b : uj.instances()) {
      if (instance_dominates(a, b)) dominated_mass += b.prob;
    }
    total += a.prob * dominated_mass;
  }
  if (counter) counter->instance_tests += ui.instance_count() * uj.instance_count();
  return total;
}

DominanceClass classify_object_dominance(const UncertainObject& ui, const UncertainObject& uj,
                                         CheckCounter* counter) {
  check_pair(ui, uj);
  std::size_t hits = 0;
  for (const auto& a : ui.instances()) {
    for (const auto& b : uj.instances()) {
      if (instance_dominates(a, b)) ++hits;
    }
  }
  const std::size_t pairs = ui.instance_count() * uj.instance_count();
  if (counter) counter->instance_tests += pairs;
  if (hits == pairs) return DominanceClass::Complete;
  if (hits == 0) return DominanceClass::Missing;
  return DominanceClass::Partial;
}

bool any_instance_dominates(const UncertainObject& ui, const UncertainObject& uj, CheckCounter* counter) {
  check_pair(ui, uj);
  std::uint64_t tests = 0;
  bool found = false;
  for (const auto& a : ui.instances()) {
    for (const auto& b : uj.instances()) {
      ++tests;
      if (instance_dominates(a, b)) {
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (counter) counter->instance_tests += tests;
  return found;
}

namespace {

template <bool Forward>
double bruteforce_score(const UncertainObject& u, std::span<const ObjectPtr> others, CheckCounter* counter) {
  double score = 0.0;
  for (const auto& v : others) {
    if (v->id() == u.id())
      throw SelfComparisonError("object " + std::to_string(u.id()) + " is contained in its comparison set");
    score += Forward ? object_dominance_prob(u, *v, counter) : object_dominance_prob(*v, u, counter);
  }
  return score;
}

}  // namespace

double dom_bruteforce(const UncertainObject& u, std::span<const ObjectPtr> others, CheckCounter* counter) {
  return bruteforce_score<true>(u, others, counter);
}

double rdom_bruteforce(const UncertainObject& u, std::span<const ObjectPtr> others, CheckCounter* counter) {
  return bruteforce_score<false>(u, others, counter);
}

}  // namespace ptd
