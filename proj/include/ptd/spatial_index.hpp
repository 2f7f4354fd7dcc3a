#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptd/core_model.hpp"
#include "ptd/dominance.hpp"

namespace ptd {

// Three-way dominance between boxes with `a` as the dominator. Complete and
// Missing are only claimed when they hold for every instance pair the boxes
// could contain; everything else is Partial.
DominanceClass classify_mbr_dominance(const Mbr& a, const Mbr& b);

// Sort-tile-recursive packed R-tree over object MBRs. The tree is immutable
// after construction; queries take their own CheckCounter.
class RTree {
 public:
  struct Node {
    Mbr box;
    bool leaf = true;
    // Leaf: indices into objects(). Internal: indices into nodes().
    std::vector<std::uint32_t> entries;
    std::size_t object_count = 0;
  };

  RTree() = default;

  static RTree bulk_load(std::span<const ObjectPtr> objects, std::size_t degree);

  bool empty() const { return objects_.empty(); }
  std::size_t size() const { return objects_.size(); }
  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  // Number of node levels; 0 for an empty tree, 1 when the root is a leaf.
  std::size_t height() const { return height_; }
  std::size_t leaf_count() const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<ObjectPtr>& objects() const { return objects_; }
  std::uint32_t root() const { return root_; }

  // Throws ConsistencyError describing the first broken structural invariant.
  void check_invariants() const;

 private:
  std::size_t degree_ = 0;
  std::size_t dim_ = 0;
  std::size_t height_ = 0;
  std::uint32_t root_ = 0;
  std::vector<Node> nodes_;
  std::vector<ObjectPtr> objects_;
};

inline RTree bulk_load(std::span<const ObjectPtr> objects, std::size_t degree) {
  return RTree::bulk_load(objects, degree);
}

// dom(u) and r-dom(u) against every indexed object except u itself, using
// target-set / next-target-set descent with MBR pruning.
double dom_via_index(const UncertainObject& u, const RTree& tree, CheckCounter* counter = nullptr);
double rdom_via_index(const UncertainObject& u, const RTree& tree, CheckCounter* counter = nullptr);

// Indexed objects (other than `probe`) that have a non-zero probability of
// dominating or being dominated by `probe`.
std::vector<ObjectPtr> related_objects(const UncertainObject& probe, const RTree& tree,
                                       CheckCounter* counter = nullptr);

}  // namespace ptd
