#include <algorithm>
#include <set>
#include <string>

#include "tapc/error.hpp"
#include "tapc/graph.hpp"

namespace tapc {

namespace {

class ClassEnumerator {
 public:
  explicit ClassEnumerator(const Dag& g)
      : p_(g.size()), edges_(skeleton_of(g).edges()), partial_(g.size()) {
    for (const VStructure& s : v_structures(g)) colliders_.insert(s);
    target_ = v_structures(g);
    skeleton_ = skeleton_of(g);
  }

  std::vector<Dag> run() {
    search(0);
    return std::move(found_);
  }

 private:
  // A new arrow x -> y may only complete colliders present in the target.
  bool admissible(NodeId x, NodeId y) const {
    for (NodeId z = 0; z < p_; ++z) {
      if (z == x || !partial_.has_edge(z, y) || skeleton_.adjacent(x, z)) continue;
      const VStructure s{std::min(x, z), y, std::max(x, z)};
      if (!colliders_.contains(s)) return false;
    }
    return true;
  }

  void search(std::size_t index) {
    if (index == edges_.size()) {
      if (v_structures(partial_) == target_) found_.push_back(partial_);
      return;
    }
    const Edge e = edges_[index];
    for (const auto& [x, y] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}}) {
      if (!admissible(x, y)) continue;
      try {
        partial_.add_edge(x, y);
      } catch (const InvalidArgument&) {
        continue;  // cycle
      }
      search(index + 1);
      partial_.remove_edge(x, y);
    }
  }

  int p_;
  std::vector<Edge> edges_;
  Dag partial_;
  Skeleton skeleton_;
  std::set<VStructure> colliders_;
  std::vector<VStructure> target_;
  std::vector<Dag> found_;
};

}  // namespace

std::vector<Dag> enumerate_equivalence_class(const Dag& g) {
  if (g.size() > kMaxEnumerationNodes) {
    throw InvalidArgument("enumerate_equivalence_class: " + std::to_string(g.size()) +
                          " nodes exceeds the limit of " +
                          std::to_string(kMaxEnumerationNodes));
  }
  return ClassEnumerator(g).run();
}

}  // namespace tapc
