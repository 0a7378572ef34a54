#ifndef ISOSCHED_PREFIX_TRIE_HPP
#define ISOSCHED_PREFIX_TRIE_HPP

#include <vector>

#include "isosched/neighborhood.hpp"

namespace isosched {

// Node of the allgather prefix trie. Each level consumes one dimension (in
// the trie's dimension order), so a node at depth t stands for the partial
// displacement given by the edge values on its root path. Neighbors sharing
// a prefix share the node, which is what lets their transport be combined.
struct TrieNode {
  int parent = -1;
  int edge_value = 0;  // coordinate on the edge from the parent
  int depth = 0;
  std::vector<int> children;  // ids, ascending edge value
  std::vector<int> leaves;    // neighbor indices ending here (depth == d)
  int min_leaf = -1;          // smallest neighbor index in the subtree
  int zero_leaf = -1;         // smallest neighbor index reachable through
                              // zero-valued edges only, -1 if none
};

class PrefixTrie {
 public:
  PrefixTrie(const Neighborhood& n, std::vector<int> dim_order);

  const std::vector<TrieNode>& nodes() const { return nodes_; }
  const TrieNode& node(int id) const { return nodes_[id]; }
  const std::vector<int>& dim_order() const { return dim_order_; }
  int root() const { return 0; }

  // Node ids at the given depth, in id (creation) order.
  const std::vector<int>& level(int depth) const { return levels_[depth]; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }

  // Total hop count over all edges: sum of |edge_value|.
  long long edge_weight_sum() const;

 private:
  std::vector<TrieNode> nodes_;
  std::vector<std::vector<int>> levels_;
  std::vector<int> dim_order_;
};

// Dimension visit order for the allgather trie: fewest distinct coordinate
// values first (more prefix sharing near the root), ties by dimension index.
std::vector<int> allgather_dim_order(const Neighborhood& n);

}  // namespace isosched

#endif  // ISOSCHED_PREFIX_TRIE_HPP
