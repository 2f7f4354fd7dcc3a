#include "ptd/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace ptd {

DominanceClass classify_mbr_dominance(const Mbr& a, const Mbr& b) {
  if (a.dim() != b.dim()) throw DimensionError("classify_mbr_dominance: dimension mismatch");
  const std::size_t d = a.dim();

  bool complete = true;
  bool complete_strict = false;
  bool lo_at_least_hi_everywhere = true;
  for (std::size_t i = 0; i < d; ++i) {
    // Some dimension where every instance of a is worse than every one of b.
    if (a.lo[i] > b.hi[i]) return DominanceClass::Missing;
    if (a.lo[i] < b.hi[i]) lo_at_least_hi_everywhere = false;
    if (a.hi[i] > b.lo[i]) complete = false;
    if (a.hi[i] < b.lo[i]) complete_strict = true;
  }
  if (complete && complete_strict) return DominanceClass::Complete;
  // a.lo >= b.hi in every dimension leaves only coordinate-equal pairs, which
  // never dominate.
  if (lo_at_least_hi_everywhere) return DominanceClass::Missing;
  return DominanceClass::Partial;
}

namespace {

struct Centers {
  std::vector<std::vector<double>> values;  // [item][dim]

  explicit Centers(std::size_t count) : values(count) {}
  void set(std::size_t item, const Mbr& box) {
    auto& c = values[item];
    c.resize(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) c[i] = 0.5 * (box.lo[i] + box.hi[i]);
  }
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t slab_count(std::size_t pages, std::size_t remaining_dims) {
  std::size_t s = 1;
  while (true) {
    std::size_t power = 1;
    for (std::size_t i = 0; i < remaining_dims && power < pages; ++i) power *= s;
    if (power >= pages) return s;
    ++s;
  }
}

// Orders items [first, last) in tile order: slabs along `dim`, then
// recursively along the following dimensions inside each slab.
void str_order(std::vector<std::uint32_t>::iterator first, std::vector<std::uint32_t>::iterator last,
               std::size_t dim, std::size_t d, std::size_t cap, const Centers& centers) {
  auto by_dim = [&](std::uint32_t x, std::uint32_t y) {
    const double cx = centers.values[x][dim], cy = centers.values[y][dim];
    return cx < cy || (cx == cy && x < y);
  };
  std::sort(first, last, by_dim);
  const auto n = static_cast<std::size_t>(last - first);
  if (n <= cap || dim + 1 >= d) return;
  const std::size_t pages = ceil_div(n, cap);
  const std::size_t slabs = slab_count(pages, d - dim);
  const std::size_t slab_size = ceil_div(pages, slabs) * cap;
  for (auto it = first; it < last;) {
    auto end = (static_cast<std::size_t>(last - it) > slab_size) ? it + static_cast<std::ptrdiff_t>(slab_size) : last;
    str_order(it, end, dim + 1, d, cap, centers);
    it = end;
  }
}

// Cuts an ordered sequence into groups of at most cap; the trailing two
// groups are rebalanced so no group falls below ceil(cap/2).
std::vector<std::pair<std::size_t, std::size_t>> pack_groups(std::size_t n, std::size_t cap) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t start = 0; start < n; start += cap) groups.emplace_back(start, std::min(n, start + cap));
  const std::size_t min_fill = ceil_div(cap, 2);
  if (groups.size() >= 2) {
    auto& last = groups.back();
    auto& prev = groups[groups.size() - 2];
    if (last.second - last.first < min_fill) {
      const std::size_t total = last.second - prev.first;
      const std::size_t split = prev.first + ceil_div(total, 2);
      prev.second = split;
      last.first = split;
    }
  }
  return groups;
}

}  // namespace

RTree RTree::bulk_load(std::span<const ObjectPtr> objects, std::size_t degree) {
  if (degree < 2) throw ParameterError("R-tree degree must be at least 2");
  RTree tree;
  tree.degree_ = degree;
  tree.objects_.assign(objects.begin(), objects.end());
  if (objects.empty()) return tree;
  tree.dim_ = objects.front()->dim();
  for (const auto& obj : objects) {
    if (obj->dim() != tree.dim_) throw DimensionError("bulk_load: objects differ in dimension");
  }

  // Leaf level.
  std::vector<std::uint32_t> order(objects.size());
  std::iota(order.begin(), order.end(), 0u);
  {
    Centers centers(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i) centers.set(i, objects[i]->mbr());
    str_order(order.begin(), order.end(), 0, tree.dim_, degree, centers);
  }
  std::vector<std::uint32_t> level;
  for (auto [s, e] : pack_groups(order.size(), degree)) {
    Node leaf;
    leaf.leaf = true;
    for (std::size_t i = s; i < e; ++i) {
      leaf.entries.push_back(order[i]);
      leaf.box.expand(objects[order[i]]->mbr());
    }
    leaf.object_count = leaf.entries.size();
    level.push_back(static_cast<std::uint32_t>(tree.nodes_.size()));
    tree.nodes_.push_back(std::move(leaf));
  }
  tree.height_ = 1;

  while (level.size() > 1) {
    std::vector<std::uint32_t> local(level.size());
    std::iota(local.begin(), local.end(), 0u);
    Centers centers(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) centers.set(i, tree.nodes_[level[i]].box);
    str_order(local.begin(), local.end(), 0, tree.dim_, degree, centers);

    std::vector<std::uint32_t> parents;
    for (auto [s, e] : pack_groups(local.size(), degree)) {
      Node parent;
      parent.leaf = false;
      for (std::size_t i = s; i < e; ++i) {
        const std::uint32_t child = level[local[i]];
        parent.entries.push_back(child);
        parent.box.expand(tree.nodes_[child].box);
        parent.object_count += tree.nodes_[child].object_count;
      }
      parents.push_back(static_cast<std::uint32_t>(tree.nodes_.size()));
      tree.nodes_.push_back(std::move(parent));
    }
    level = std::move(parents);
    ++tree.height_;
  }
  tree.root_ = level.front();
  return tree;
}

std::size_t RTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

void RTree::check_invariants() const {
  if (objects_.empty()) {
    if (!nodes_.empty()) throw ConsistencyError("empty tree holds nodes");
    return;
  }
  const std::size_t min_fill = (degree_ + 1) / 2;
  std::vector<int> seen(objects_.size(), 0);
  std::vector<int> node_refs(nodes_.size(), 0);

  struct Frame {
    std::uint32_t node;
    std::size_t depth;
  };
  std::vector<Frame> stack{{root_, 1}};
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    const Node& node = nodes_[idx];
    ++node_refs[idx];
    const std::size_t count = node.entries.size();
    if (count == 0 || count > degree_) throw ConsistencyError("node fanout outside 1..degree");
    if (idx != root_ && count < min_fill) throw ConsistencyError("non-root node below minimum fill");
    std::size_t objects_below = 0;
    if (node.leaf) {
      if (depth != height_) throw ConsistencyError("leaves at unequal depth");
      for (auto e : node.entries) {
        if (!node.box.contains(objects_[e]->mbr())) throw ConsistencyError("leaf box misses an object MBR");
        ++seen[e];
      }
      objects_below = count;
    } else {
      for (auto c : node.entries) {
        if (!node.box.contains(nodes_[c].box)) throw ConsistencyError("parent box misses a child box");
        objects_below += nodes_[c].object_count;
        stack.push_back({c, depth + 1});
      }
    }
    if (objects_below != node.object_count) throw ConsistencyError("subtree object count mismatch");
  }
  for (int s : seen) {
    if (s != 1) throw ConsistencyError("object not referenced by exactly one leaf");
  }
  for (int r : node_refs) {
    if (r != 1) throw ConsistencyError("node not reachable exactly once from the root");
  }
}

namespace {

struct Entry {
  std::uint32_t index;
  bool is_object;
};

void seed_targets(const RTree& tree, std::vector<Entry>& ts) {
  const auto& root = tree.nodes()[tree.root()];
  for (auto e : root.entries) ts.push_back({e, root.leaf});
}

void push_children(const RTree& tree, std::uint32_t node_index, std::vector<Entry>& nts) {
  const auto& node = tree.nodes()[node_index];
  for (auto e : node.entries) nts.push_back({e, node.leaf});
}

// Forward: probe dominates entries. Backward: entries dominate the probe.
template <bool Forward>
double score_via_index(const UncertainObject& u, const RTree& tree, CheckCounter* counter) {
  if (tree.empty()) return 0.0;
  if (u.dim() != tree.dim()) throw DimensionError("probe dimension differs from the indexed objects");
  CheckCounter local;
  double score = 0.0;
  std::vector<Entry> ts, nts;
  seed_targets(tree, ts);
  while (!ts.empty()) {
    for (const Entry& e : ts) {
      if (e.is_object) {
        const auto& obj = *tree.objects()[e.index];
        if (obj.id() == u.id()) continue;
        ++local.mbr_tests;
        const auto cls = Forward ? classify_mbr_dominance(u.mbr(), obj.mbr())
                                 : classify_mbr_dominance(obj.mbr(), u.mbr());
        if (cls == DominanceClass::Complete) {
          score += 1.0;
        } else if (cls == DominanceClass::Partial) {
          score += Forward ? object_dominance_prob(u, obj, &local) : object_dominance_prob(obj, u, &local);
        }
      } else {
        const auto& node = tree.nodes()[e.index];
        ++local.mbr_tests;
        const auto cls = Forward ? classify_mbr_dominance(u.mbr(), node.box)
                                 : classify_mbr_dominance(node.box, u.mbr());
        if (cls == DominanceClass::Complete) {
          // A box that u completely dominates (or is completely dominated by)
          // cannot contain u, so every object below counts with full mass.
          score += static_cast<double>(node.object_count);
        } else if (cls == DominanceClass::Partial) {
          push_children(tree, e.index, nts);
        }
      }
    }
    ts.swap(nts);
    nts.clear();
  }
  if (counter) *counter += local;
  return score;
}

template <bool Forward>
void collect_related(const UncertainObject& probe, const RTree& tree, CheckCounter& local,
                     std::unordered_set<std::uint32_t>& hits) {
  std::vector<Entry> ts, nts;
  std::vector<std::uint32_t> stack;
  seed_targets(tree, ts);
  auto take_subtree = [&](std::uint32_t node_index) {
    stack.assign(1, node_index);
    while (!stack.empty()) {
      const auto& node = tree.nodes()[stack.back()];
      stack.pop_back();
      if (node.leaf) {
        for (auto obj : node.entries) {
          if (tree.objects()[obj]->id() != probe.id()) hits.insert(obj);
        }
      } else {
        stack.insert(stack.end(), node.entries.begin(), node.entries.end());
      }
    }
  };
  while (!ts.empty()) {
    for (const Entry& e : ts) {
      if (e.is_object) {
        const auto& obj = *tree.objects()[e.index];
        if (obj.id() == probe.id() || hits.count(e.index)) continue;
        ++local.mbr_tests;
        const auto cls = Forward ? classify_mbr_dominance(probe.mbr(), obj.mbr())
                                 : classify_mbr_dominance(obj.mbr(), probe.mbr());
        if (cls == DominanceClass::Complete) {
          hits.insert(e.index);
        } else if (cls == DominanceClass::Partial) {
          const bool related = Forward ? any_instance_dominates(probe, obj, &local)
                                       : any_instance_dominates(obj, probe, &local);
          if (related) hits.insert(e.index);
        }
      } else {
        const auto& node = tree.nodes()[e.index];
        ++local.mbr_tests;
        const auto cls = Forward ? classify_mbr_dominance(probe.mbr(), node.box)
                                 : classify_mbr_dominance(node.box, probe.mbr());
        if (cls == DominanceClass::Complete) {
          take_subtree(e.index);
        } else if (cls == DominanceClass::Partial) {
          push_children(tree, e.index, nts);
        }
      }
    }
    ts.swap(nts);
    nts.clear();
  }
}

}  // namespace

double dom_via_index(const UncertainObject& u, const RTree& tree, CheckCounter* counter) {
  return score_via_index<true>(u, tree, counter);
}

double rdom_via_index(const UncertainObject& u, const RTree& tree, CheckCounter* counter) {
  return score_via_index<false>(u, tree, counter);
}

std::vector<ObjectPtr> related_objects(const UncertainObject& probe, const RTree& tree, CheckCounter* counter) {
  if (tree.empty()) return {};
  if (probe.dim() != tree.dim()) throw DimensionError("probe dimension differs from the indexed objects");
  CheckCounter local;
  std::unordered_set<std::uint32_t> hits;
  collect_related<true>(probe, tree, local, hits);
  collect_related<false>(probe, tree, local, hits);
  std::vector<std::uint32_t> sorted(hits.begin(), hits.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<ObjectPtr> out;
  out.reserve(sorted.size());
  for (auto i : sorted) out.push_back(tree.objects()[i]);
  if (counter) *counter += local;
  return out;
}

}  // namespace ptd
