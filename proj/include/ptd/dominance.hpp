#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "ptd/core_model.hpp"

namespace ptd {

enum class DominanceClass { Complete, Partial, Missing };

std::string_view to_string(DominanceClass c);

// Counts dominance work performed by one query or one node. Instance tests are
// pairwise instance comparisons; MBR tests are box classifications.
struct CheckCounter {
  std::uint64_t instance_tests = 0;
  std::uint64_t mbr_tests = 0;

  std::uint64_t total() const { return instance_tests + mbr_tests; }
  void reset() { *this = {}; }
  CheckCounter& operator+=(const CheckCounter& other) {
    instance_tests += other.instance_tests;
    mbr_tests += other.mbr_tests;
    return *this;
  }
};

bool instance_dominates(const Instance& a, const Instance& b);

// Probability that `ui` dominates `uj`: sum over instances a of ui of
// Pr(a) times the mass of uj's instances dominated by a.
double object_dominance_prob(const UncertainObject& ui, const UncertainObject& uj,
                             CheckCounter* counter = nullptr);

DominanceClass classify_object_dominance(const UncertainObject& ui, const UncertainObject& uj,
                                         CheckCounter* counter = nullptr);

// True iff at least one instance pair of (ui, uj) dominates; stops at the
// first hit.
bool any_instance_dominates(const UncertainObject& ui, const UncertainObject& uj,
                            CheckCounter* counter = nullptr);

// Exhaustive scores over `others`, which must not contain `u` (by id).
double dom_bruteforce(const UncertainObject& u, std::span<const ObjectPtr> others,
                      CheckCounter* counter = nullptr);
double rdom_bruteforce(const UncertainObject& u, std::span<const ObjectPtr> others,
                       CheckCounter* counter = nullptr);

}  // namespace ptd
