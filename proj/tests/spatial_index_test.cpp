#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "ptd/spatial_index.hpp"
#include "test_support.hpp"

using namespace ptd;

namespace {

Mbr box(std::vector<double> lo, std::vector<double> hi) { return {std::move(lo), std::move(hi)}; }

}  // namespace

TEST_CASE("mbr classification on the four-object example") {
  const auto u = ptd_test::example_four();
  CHECK(classify_mbr_dominance(u[0]->mbr(), u[2]->mbr()) == DominanceClass::Complete);
  CHECK(classify_mbr_dominance(u[2]->mbr(), u[0]->mbr()) == DominanceClass::Missing);
  CHECK(classify_mbr_dominance(u[1]->mbr(), u[3]->mbr()) == DominanceClass::Partial);
}

TEST_CASE("mbr classification at boundaries") {
  // touching corner: every point of a is <= every point of b, strict in x
  CHECK(classify_mbr_dominance(box({0, 0}, {1, 1}), box({2, 1}, {3, 2})) == DominanceClass::Complete);
  // identical points cannot dominate each other
  CHECK(classify_mbr_dominance(box({1, 1}, {1, 1}), box({1, 1}, {1, 1})) == DominanceClass::Missing);
  // a.lo >= b.hi everywhere: nothing in a can be strictly better
  CHECK(classify_mbr_dominance(box({2, 2}, {3, 3}), box({1, 1}, {2, 2})) == DominanceClass::Missing);
  // overlapping boxes stay partial
  CHECK(classify_mbr_dominance(box({0, 0}, {2, 2}), box({1, 1}, {3, 3})) == DominanceClass::Partial);
  CHECK_THROWS_AS(classify_mbr_dominance(box({0}, {1}), box({0, 0}, {1, 1})), DimensionError);
}

TEST_CASE("property: mbr class is consistent with the instance pairs") {
  std::mt19937_64 rng(3);
  for (std::size_t trial = 0; trial < 80; ++trial) {
    auto w = ptd_test::random_window(rng, {.size = 10, .dim = 1 + trial % 3, .instances = 1 + trial % 4,
                                           .margin = 400, .range = 1200, .lattice = true});
    for (const auto& a : w) {
      for (const auto& b : w) {
        if (a == b) continue;
        const double p = ptd_test::naive_prob(*a, *b);
        switch (classify_mbr_dominance(a->mbr(), b->mbr())) {
          case DominanceClass::Complete: CHECK(std::abs(p - 1.0) <= 1e-9); break;
          case DominanceClass::Missing: CHECK(p == 0.0); break;
          case DominanceClass::Partial: break;
        }
      }
    }
  }
}

TEST_CASE("bulk load shapes") {
  std::mt19937_64 rng(5);
  SUBCASE("empty") {
    auto t = RTree::bulk_load({}, 6);
    CHECK(t.empty());
    CHECK(t.height() == 0);
    CHECK_NOTHROW(t.check_invariants());
  }
  SUBCASE("one object") {
    auto w = ptd_test::random_window(rng, {.size = 1});
    auto t = bulk_load(w, 6);
    CHECK(t.height() == 1);
    CHECK(t.leaf_count() == 1);
  }
  SUBCASE("forty objects, degree six") {
    // 7 leaves cannot sit under one root of fanout 6, so two internal
    // levels are needed above the leaves.
    auto w = ptd_test::random_window(rng, {.size = 40, .dim = 2});
    auto t = bulk_load(w, 6);
    CHECK(t.leaf_count() == 7);
    CHECK(t.height() == 3);
    CHECK_NOTHROW(t.check_invariants());
  }
  SUBCASE("bad degree") { CHECK_THROWS_AS(RTree::bulk_load({}, 1), ParameterError); }
  SUBCASE("mixed dimensions") {
    std::vector<ObjectPtr> w{make_object(1, 0, 1, {{{1, 2}, 1}}), make_object(2, 0, 1, {{{1, 2, 3}, 1}})};
    CHECK_THROWS_AS(bulk_load(w, 4), DimensionError);
  }
}

TEST_CASE("property: bulk-loaded trees satisfy their invariants") {
  std::mt19937_64 rng(17);
  for (std::size_t trial = 0; trial < 120; ++trial) {
    const std::size_t size = 1 + rng() % 250;
    const std::size_t degree = 2 + rng() % 9;
    auto w = ptd_test::random_window(rng, {.size = size, .dim = 1 + trial % 5, .instances = 2});
    auto t = bulk_load(w, degree);
    CHECK(t.size() == size);
    CHECK_NOTHROW(t.check_invariants());
  }
}

TEST_CASE("index scores on the four-object example") {
  const auto u = ptd_test::example_four();
  auto t = bulk_load(u, 2);
  CHECK(std::abs(dom_via_index(*u[0], t) - 2.0) <= 1e-9);
  CHECK(std::abs(dom_via_index(*u[1], t) - 1.92) <= 1e-9);
  CHECK(std::abs(rdom_via_index(*u[3], t) - 1.92) <= 1e-9);
  CHECK(rdom_via_index(*u[0], t) == 0.0);
  auto three = make_object(99, 0, 1, {{{1, 2, 3}, 1.0}});
  CHECK_THROWS_AS(dom_via_index(*three, t), DimensionError);
  CHECK(dom_via_index(*three, RTree{}) == 0.0);
}

TEST_CASE("property: index scores equal the naive oracle and prune work") {
  std::mt19937_64 rng(23);
  std::uint64_t pruned_runs = 0;
  for (std::size_t trial = 0; trial < 60; ++trial) {
    auto w = ptd_test::random_window(rng, {.size = 20 + rng() % 100, .dim = 2 + trial % 3,
                                           .instances = 1 + trial % 3, .margin = trial % 2 ? 0.0 : 160.0,
                                           .lattice = trial % 4 == 0});
    auto t = bulk_load(w, 2 + trial % 6);
    CheckCounter idx;
    for (const auto& obj : w) {
      const auto s = ptd_test::naive_score(*obj, w);
      CHECK(std::abs(dom_via_index(*obj, t, &idx) - s.dom) <= 1e-9);
      CHECK(std::abs(rdom_via_index(*obj, t, &idx) - s.rdom) <= 1e-9);
    }
    const std::uint64_t brute = 2 * w.size() * (w.size() - 1) * w[0]->instance_count() * w[0]->instance_count();
    if (idx.instance_tests < brute) ++pruned_runs;
  }
  CHECK(pruned_runs == 60);
}

TEST_CASE("property: related objects are exactly the non-zero pairs") {
  std::mt19937_64 rng(29);
  for (std::size_t trial = 0; trial < 40; ++trial) {
    auto w = ptd_test::random_window(rng, {.size = 60, .dim = 2 + trial % 2, .instances = 3, .lattice = trial % 2 == 1});
    auto t = bulk_load(w, 4);
    auto probe = ptd_test::random_window(rng, {.size = 1, .dim = 2 + trial % 2, .instances = 3}, 1000)[0];
    std::set<ObjectId> expect;
    for (const auto& o : w)
      if (ptd_test::naive_prob(*probe, *o) > 0 || ptd_test::naive_prob(*o, *probe) > 0) expect.insert(o->id());
    std::set<ObjectId> got;
    for (const auto& o : related_objects(*probe, t)) got.insert(o->id());
    CHECK(got == expect);
  }
}
