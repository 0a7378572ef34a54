#include "isosched/prefix_trie.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

namespace isosched {

PrefixTrie::PrefixTrie(const Neighborhood& n, std::vector<int> dim_order)
    : dim_order_(std::move(dim_order)) {
  const int d = n.d;
  {
    std::vector<int> sorted = dim_order_;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < d; ++j)
      if (j >= static_cast<int>(sorted.size()) || sorted[j] != j)
        throw std::invalid_argument("dimension order is not a permutation of 0.." +
                                    std::to_string(d - 1));
  }

  // Insert neighbors in lexicographic order of their permuted coordinates so
  // that each node's children come out ascending by edge value and node ids
  // are a preorder walk. Ties keep the lower neighbor index first.
  std::vector<int> order(n.size());
  std::iota(order.begin(), order.end(), 0);
  auto permuted_less = [&](int a, int b) {
    for (int t = 0; t < d; ++t) {
      int va = n.offsets[a][dim_order_[t]];
      int vb = n.offsets[b][dim_order_[t]];
      if (va != vb) return va < vb;
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), permuted_less);

  nodes_.push_back(TrieNode{});
  for (int i : order) {
    int cur = 0;
    for (int t = 0; t < d; ++t) {
      int value = n.offsets[i][dim_order_[t]];
      int child = -1;
      if (!nodes_[cur].children.empty()) {
        int last = nodes_[cur].children.back();
        if (nodes_[last].edge_value == value) child = last;
      }
      if (child < 0) {
        child = static_cast<int>(nodes_.size());
        TrieNode node;
        node.parent = cur;
        node.edge_value = value;
        node.depth = t + 1;
        nodes_.push_back(node);
        nodes_[cur].children.push_back(child);
      }
      cur = child;
    }
    nodes_[cur].leaves.push_back(i);
  }

  // Children always have larger ids than their parent, so one reverse sweep
  // settles the subtree summaries.
  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    TrieNode& node = nodes_[id];
    int min_leaf = node.leaves.empty() ? -1 : node.leaves.front();
    for (int child : node.children) {
      int m = nodes_[child].min_leaf;
      if (min_leaf < 0 || (m >= 0 && m < min_leaf)) min_leaf = m;
    }
    node.min_leaf = min_leaf;
    if (node.depth == d) {
      node.zero_leaf = node.leaves.front();
    } else {
      node.zero_leaf = -1;
      for (int child : node.children)
        if (nodes_[child].edge_value == 0) node.zero_leaf = nodes_[child].zero_leaf;
    }
  }

  levels_.resize(d + 1);
  for (int id = 0; id < static_cast<int>(nodes_.size()); ++id)
    levels_[nodes_[id].depth].push_back(id);
}

long long PrefixTrie::edge_weight_sum() const {
  long long sum = 0;
  for (std::size_t id = 1; id < nodes_.size(); ++id)
    sum += std::llabs(nodes_[id].edge_value);
  return sum;
}

std::vector<int> allgather_dim_order(const Neighborhood& n) {
  std::vector<int> distinct(n.d, 0);
  for (int j = 0; j < n.d; ++j) {
    std::set<int> values;
    for (const Offset& c : n.offsets) values.insert(c[j]);
    distinct[j] = static_cast<int>(values.size());
  }
  std::vector<int> order(n.d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (distinct[a] != distinct[b]) return distinct[a] < distinct[b];
    return a < b;
  });
  return order;
}

}  // namespace isosched
