#pragma once

#include <vector>

namespace segeval {

// Maximum-cardinality bipartite matching via augmenting paths (Kuhn).
// adj[i] lists the right-side nodes reachable from left node i. Graphs here
// are tiny (boundary sets of one dialogue), so O(V*E) is plenty.
class BipartiteMatcher {
 public:
  BipartiteMatcher(int left, int right) : adj_(left), match_right_(right, -1) {}

  void add_edge(int left, int right) { adj_[left].push_back(right); }

  int solve() {
    int matched = 0;
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      visited_.assign(match_right_.size(), false);
      if (try_augment(static_cast<int>(v))) ++matched;
    }
    return matched;
  }

 private:
  bool try_augment(int v) {
    for (int u : adj_[v]) {
      if (visited_[u]) continue;
      visited_[u] = true;
      if (match_right_[u] == -1 || try_augment(match_right_[u])) {
        match_right_[u] = v;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> match_right_;
  std::vector<bool> visited_;
};

}  // namespace segeval
