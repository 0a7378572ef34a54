#include "isosched/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "isosched/prefix_trie.hpp"

namespace isosched {

namespace {

void check_sizes(const Neighborhood& n, const BlockSizeMap& sizes, bool need_equal) {
  if (static_cast<int>(sizes.size()) != n.size())
    throw std::invalid_argument("size map has " + std::to_string(sizes.size()) +
                                " entries for " + std::to_string(n.size()) +
                                " neighbors");
  for (long long b : sizes)
    if (b < 0) throw std::invalid_argument("block sizes must be nonnegative");
  if (need_equal)
    for (long long b : sizes)
      if (b != sizes.front())
        throw std::invalid_argument("allgather schedules need equal block sizes");
}

Offset unit_offset(int d, int dim, int value) {
  Offset o(d, 0);
  o[dim] = value;
  return o;
}

std::vector<int> identity_order(int d) {
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

// Tracks a block through its hops. The landing slot alternates: with an even
// number of hops left the copy goes to the staging slot, with an odd number
// to the receive slot, so consecutive hops never send from the slot being
// received into and the last hop (one left) lands in the receive slot.
struct HopRouter {
  std::vector<long long> remaining;
  std::vector<BufferRef> at;

  void take_hop(Step& step, int block) {
    BufferRef dst = remaining[block] % 2 == 0
                        ? BufferRef{BufferKind::Inter, block}
                        : BufferRef{BufferKind::Recv, block};
    step.parts.push_back({block, at[block], dst, block});
    at[block] = dst;
    --remaining[block];
  }
};

// Buffer placement for allgather trie nodes. A node's block settles in its
// "home": the receive slot of the neighbor whose offset the node's path plus
// trailing zeros spells out, or a scratch slot when there is no such
// neighbor. Zero-valued edges move no data, so their child shares the
// parent's home. Multi-hop edges stage intermediate landings in "alt", the
// staging slot of the smallest neighbor index below the node; subtrees at
// one level are disjoint, so those slots never clash within a step.
struct TrieSlots {
  std::vector<BufferRef> home;
  std::vector<BufferRef> alt;
  int scratch_slots = 0;
};

TrieSlots assign_trie_slots(const PrefixTrie& trie) {
  const auto& nodes = trie.nodes();
  TrieSlots ts;
  ts.home.resize(nodes.size());
  ts.alt.resize(nodes.size());
  ts.home[0] = {BufferKind::Send, 0};
  for (std::size_t id = 1; id < nodes.size(); ++id) {
    const TrieNode& node = nodes[id];
    if (node.edge_value == 0)
      ts.home[id] = ts.home[node.parent];
    else if (node.zero_leaf >= 0)
      ts.home[id] = {BufferKind::Recv, node.zero_leaf};
    else
      ts.home[id] = {BufferKind::Scratch, ts.scratch_slots++};
    ts.alt[id] = {BufferKind::Inter, node.min_leaf};
  }
  return ts;
}

void add_allgather_copies(Schedule& sch, const Neighborhood& n, const PrefixTrie& trie,
                          const TrieSlots& ts) {
  // Zero offsets never ride a step; hand them over locally.
  for (int i = 0; i < n.size(); ++i)
    if (is_zero(n.offsets[i]))
      sch.local_copies.push_back(
          {{BufferKind::Send, 0}, {BufferKind::Recv, i}});
  // Duplicate neighbors share one delivered copy; fan it out afterwards.
  for (int id : trie.level(trie.depth())) {
    const TrieNode& t = trie.node(id);
    if (ts.home[id].buffer == BufferKind::Send) continue;  // zero offset
    for (std::size_t k = 1; k < t.leaves.size(); ++k)
      sch.finalize_copies.push_back({{BufferKind::Recv, t.leaves.front()},
                                     {BufferKind::Recv, t.leaves[k]}});
  }
}

}  // namespace

Schedule build_direct(const Neighborhood& n, const BlockSizeMap& sizes,
                      CollectiveKind kind) {
  check_sizes(n, sizes, kind == CollectiveKind::Allgather);
  Schedule sch;
  sch.kind = kind;
  sch.algorithm = AlgorithmKind::Direct;
  sch.d = n.d;
  sch.num_blocks = n.size();
  sch.dim_order = identity_order(n.d);
  sch.block_sizes = sizes;
  for (int i = 0; i < n.size(); ++i) {
    BufferRef src{BufferKind::Send, kind == CollectiveKind::Alltoall ? i : 0};
    if (is_zero(n.offsets[i])) {
      sch.local_copies.push_back({src, {BufferKind::Recv, i}});
      continue;
    }
    Step step;
    step.send_offset = n.offsets[i];
    step.parts.push_back({i, src, {BufferKind::Recv, i}, i});
    sch.steps.push_back(std::move(step));
  }
  return sch;
}

Schedule build_torus_alltoall(const Neighborhood& n, const BlockSizeMap& sizes) {
  check_sizes(n, sizes, false);
  Schedule sch;
  sch.kind = CollectiveKind::Alltoall;
  sch.algorithm = AlgorithmKind::Torus;
  sch.d = n.d;
  sch.num_blocks = n.size();
  sch.dim_order = identity_order(n.d);
  sch.block_sizes = sizes;

  HopRouter router;
  for (int i = 0; i < n.size(); ++i) {
    router.remaining.push_back(l1_norm(n.offsets[i]));
    router.at.push_back({BufferKind::Send, i});
    if (router.remaining.back() == 0)
      sch.local_copies.push_back({{BufferKind::Send, i}, {BufferKind::Recv, i}});
  }

  for (int j = 0; j < n.d; ++j) {
    int maxpos = 0, maxneg = 0;
    for (const Offset& c : n.offsets) {
      maxpos = std::max(maxpos, c[j]);
      maxneg = std::max(maxneg, -c[j]);
    }
    for (int h = 0; h < maxpos; ++h) {
      Step step;
      step.send_offset = unit_offset(n.d, j, 1);
      for (int i = 0; i < n.size(); ++i)
        if (n.offsets[i][j] > h) router.take_hop(step, i);
      sch.steps.push_back(std::move(step));
    }
    for (int h = 0; h < maxneg; ++h) {
      Step step;
      step.send_offset = unit_offset(n.d, j, -1);
      for (int i = 0; i < n.size(); ++i)
        if (-n.offsets[i][j] > h) router.take_hop(step, i);
      sch.steps.push_back(std::move(step));
    }
  }
  return sch;
}

Schedule build_torusdirect_alltoall(const Neighborhood& n, const BlockSizeMap& sizes) {
  check_sizes(n, sizes, false);
  Schedule sch;
  sch.kind = CollectiveKind::Alltoall;
  sch.algorithm = AlgorithmKind::TorusDirect;
  sch.d = n.d;
  sch.num_blocks = n.size();
  sch.dim_order = identity_order(n.d);
  sch.block_sizes = sizes;

  HopRouter router;
  for (int i = 0; i < n.size(); ++i) {
    router.remaining.push_back(nonzero_count(n.offsets[i]));
    router.at.push_back({BufferKind::Send, i});
    if (router.remaining.back() == 0)
      sch.local_copies.push_back({{BufferKind::Send, i}, {BufferKind::Recv, i}});
  }

  for (int j = 0; j < n.d; ++j) {
    std::set<int> values;
    for (const Offset& c : n.offsets)
      if (c[j] != 0) values.insert(c[j]);
    for (int v : values) {
      Step step;
      step.send_offset = unit_offset(n.d, j, v);
      for (int i = 0; i < n.size(); ++i)
        if (n.offsets[i][j] == v) router.take_hop(step, i);
      sch.steps.push_back(std::move(step));
    }
  }
  return sch;
}

Schedule build_torus_allgather(const Neighborhood& n, const BlockSizeMap& sizes) {
  check_sizes(n, sizes, true);
  Schedule sch;
  sch.kind = CollectiveKind::Allgather;
  sch.algorithm = AlgorithmKind::Torus;
  sch.d = n.d;
  sch.num_blocks = n.size();
  sch.dim_order = allgather_dim_order(n);
  sch.block_sizes = sizes;

  PrefixTrie trie(n, sch.dim_order);
  TrieSlots ts = assign_trie_slots(trie);
  sch.scratch_slots = ts.scratch_slots;
  add_allgather_copies(sch, n, trie, ts);

  for (int t = 0; t < n.d; ++t) {
    int dim = sch.dim_order[t];
    int maxpos = 0, maxneg = 0;
    for (int parent : trie.level(t))
      for (int child : trie.node(parent).children) {
        maxpos = std::max(maxpos, trie.node(child).edge_value);
        maxneg = std::max(maxneg, -trie.node(child).edge_value);
      }
    // An edge of weight w moves its copy in the first w steps of its
    // direction. The first hop reads the parent's home; later hops read
    // wherever the previous hop landed, which the hop parity pins down.
    for (int h = 0; h < maxpos; ++h) {
      Step step;
      step.send_offset = unit_offset(n.d, dim, 1);
      for (int parent : trie.level(t))
        for (int child : trie.node(parent).children) {
          int v = trie.node(child).edge_value;
          if (v <= h) continue;
          long long remaining = v - h;
          BufferRef src = h == 0 ? ts.home[parent]
                                 : (remaining % 2 == 0 ? ts.home[child]
                                                       : ts.alt[child]);
          BufferRef dst = remaining % 2 == 0 ? ts.alt[child] : ts.home[child];
          step.parts.push_back({child, src, dst, trie.node(child).min_leaf});
        }
      sch.steps.push_back(std::move(step));
    }
    for (int h = 0; h < maxneg; ++h) {
      Step step;
      step.send_offset = unit_offset(n.d, dim, -1);
      for (int parent : trie.level(t))
        for (int child : trie.node(parent).children) {
          int v = trie.node(child).edge_value;
          if (-v <= h) continue;
          long long remaining = -v - h;
          BufferRef src = h == 0 ? ts.home[parent]
                                 : (remaining % 2 == 0 ? ts.home[child]
                                                       : ts.alt[child]);
          BufferRef dst = remaining % 2 == 0 ? ts.alt[child] : ts.home[child];
          step.parts.push_back({child, src, dst, trie.node(child).min_leaf});
        }
      sch.steps.push_back(std::move(step));
    }
  }
  return sch;
}

Schedule build_torusdirect_allgather(const Neighborhood& n, const BlockSizeMap& sizes) {
  check_sizes(n, sizes, true);
  Schedule sch;
  sch.kind = CollectiveKind::Allgather;
  sch.algorithm = AlgorithmKind::TorusDirect;
  sch.d = n.d;
  sch.num_blocks = n.size();
  sch.dim_order = allgather_dim_order(n);
  sch.block_sizes = sizes;

  PrefixTrie trie(n, sch.dim_order);
  TrieSlots ts = assign_trie_slots(trie);
  sch.scratch_slots = ts.scratch_slots;
  add_allgather_copies(sch, n, trie, ts);

  for (int t = 0; t < n.d; ++t) {
    int dim = sch.dim_order[t];
    std::set<int> values;
    for (int parent : trie.level(t))
      for (int child : trie.node(parent).children)
        if (trie.node(child).edge_value != 0) values.insert(trie.node(child).edge_value);
    for (int v : values) {
      Step step;
      step.send_offset = unit_offset(n.d, dim, v);
      for (int parent : trie.level(t))
        for (int child : trie.node(parent).children)
          if (trie.node(child).edge_value == v)
            step.parts.push_back(
                {child, ts.home[parent], ts.home[child], trie.node(child).min_leaf});
      sch.steps.push_back(std::move(step));
    }
  }
  return sch;
}

ScheduleStats schedule_stats(const Schedule& s) {
  ScheduleStats stats;
  stats.rounds = static_cast<long long>(s.steps.size());
  for (const Step& step : s.steps)
    for (const Part& part : step.parts) {
      ++stats.blocks;
      if (part.size_index < 0 ||
          part.size_index >= static_cast<int>(s.block_sizes.size()))
        throw std::out_of_range("part size index " + std::to_string(part.size_index) +
                                " outside the size map");
      stats.bytes += s.block_sizes[part.size_index];
    }
  return stats;
}

std::vector<std::string> check_dataflow(const Schedule& s) {
  std::vector<std::string> out;
  const int send_slots = s.kind == CollectiveKind::Alltoall ? s.num_blocks : 1;
  std::vector<char> recv(s.num_blocks, 0), inter(s.num_blocks, 0),
      scratch(std::max(s.scratch_slots, 0), 0);

  auto slot_count = [&](BufferKind b) {
    switch (b) {
      case BufferKind::Send: return send_slots;
      case BufferKind::Recv: return s.num_blocks;
      case BufferKind::Inter: return s.num_blocks;
      case BufferKind::Scratch: return s.scratch_slots;
    }
    return 0;
  };
  auto in_range = [&](const BufferRef& ref) {
    return ref.slot >= 0 && ref.slot < slot_count(ref.buffer);
  };
  auto written = [&](const BufferRef& ref) {
    switch (ref.buffer) {
      case BufferKind::Send: return true;
      case BufferKind::Recv: return recv[ref.slot] != 0;
      case BufferKind::Inter: return inter[ref.slot] != 0;
      case BufferKind::Scratch: return scratch[ref.slot] != 0;
    }
    return false;
  };
  auto mark = [&](const BufferRef& ref, const std::string& where) {
    switch (ref.buffer) {
      case BufferKind::Send:
        out.push_back(where + " writes the send buffer");
        break;
      case BufferKind::Recv: recv[ref.slot] = 1; break;
      case BufferKind::Inter: inter[ref.slot] = 1; break;
      case BufferKind::Scratch: scratch[ref.slot] = 1; break;
    }
  };
  auto check_copy = [&](const CopyOp& copy, const std::string& where) {
    if (!in_range(copy.src) || !in_range(copy.dst)) {
      out.push_back(where + " references a slot out of range");
      return;
    }
    if (!written(copy.src))
      out.push_back(where + " reads unwritten " + to_string(copy.src));
    mark(copy.dst, where);
  };

  for (std::size_t k = 0; k < s.local_copies.size(); ++k)
    check_copy(s.local_copies[k], "local copy " + std::to_string(k));

  for (std::size_t si = 0; si < s.steps.size(); ++si) {
    const Step& step = s.steps[si];
    std::string where = "step " + std::to_string(si);
    if (static_cast<int>(step.send_offset.size()) != s.d)
      out.push_back(where + " send offset has wrong dimension count");
    if (step.parts.empty()) out.push_back(where + " moves no parts");
    // Sends read the state before the round, so check all reads first and
    // apply the writes afterwards.
    for (std::size_t pi = 0; pi < step.parts.size(); ++pi) {
      const Part& part = step.parts[pi];
      std::string at = where + " part " + std::to_string(pi);
      if (!in_range(part.src) || !in_range(part.dst)) {
        out.push_back(at + " references a slot out of range");
        continue;
      }
      if (part.src == part.dst)
        out.push_back(at + " sends from the slot it receives into");
      if (!written(part.src))
        out.push_back(at + " reads unwritten " + to_string(part.src));
      if (part.size_index < 0 ||
          part.size_index >= static_cast<int>(s.block_sizes.size()))
        out.push_back(at + " size index outside the size map");
    }
    for (std::size_t pi = 0; pi < step.parts.size(); ++pi) {
      const Part& part = step.parts[pi];
      if (in_range(part.dst))
        mark(part.dst, where + " part " + std::to_string(pi));
    }
  }

  for (std::size_t k = 0; k < s.finalize_copies.size(); ++k)
    check_copy(s.finalize_copies[k], "finalize copy " + std::to_string(k));

  if (s.kind == CollectiveKind::Alltoall) {
    // A block's last hop has to land in its receive slot; blocks that never
    // hop need a local copy instead.
    std::vector<char> hops(s.num_blocks, 0);
    std::vector<BufferRef> last(s.num_blocks);
    for (const Step& step : s.steps)
      for (const Part& part : step.parts)
        if (part.block >= 0 && part.block < s.num_blocks) {
          hops[part.block] = 1;
          last[part.block] = part.dst;
        }
    std::vector<char> copied(s.num_blocks, 0);
    for (const CopyOp& copy : s.local_copies)
      if (copy.dst.buffer == BufferKind::Recv && copy.dst.slot >= 0 &&
          copy.dst.slot < s.num_blocks)
        copied[copy.dst.slot] = 1;
    for (int i = 0; i < s.num_blocks; ++i) {
      if (hops[i]) {
        if (!(last[i] == BufferRef{BufferKind::Recv, i}))
          out.push_back("block " + std::to_string(i) + " ends in " +
                        to_string(last[i]) + " instead of RECV:" + std::to_string(i));
      } else if (!copied[i]) {
        out.push_back("block " + std::to_string(i) + " is never delivered");
      }
    }
  } else {
    for (int i = 0; i < s.num_blocks; ++i)
      if (!written({BufferKind::Recv, i}))
        out.push_back("receive slot " + std::to_string(i) + " is never written");
  }
  return out;
}

std::string to_string(CollectiveKind kind) {
  return kind == CollectiveKind::Alltoall ? "alltoall" : "allgather";
}

std::string to_string(AlgorithmKind algorithm) {
  switch (algorithm) {
    case AlgorithmKind::Direct: return "direct";
    case AlgorithmKind::Torus: return "torus";
    case AlgorithmKind::TorusDirect: return "torus-direct";
  }
  return "?";
}

std::string to_string(const BufferRef& ref) {
  const char* name = "?";
  switch (ref.buffer) {
    case BufferKind::Send: name = "SEND"; break;
    case BufferKind::Recv: name = "RECV"; break;
    case BufferKind::Inter: name = "INTER"; break;
    case BufferKind::Scratch: name = "SCRATCH"; break;
  }
  return std::string(name) + ":" + std::to_string(ref.slot);
}

CollectiveKind collective_from_string(const std::string& text) {
  if (text == "alltoall") return CollectiveKind::Alltoall;
  if (text == "allgather") return CollectiveKind::Allgather;
  throw std::invalid_argument("unknown collective '" + text +
                              "', expected alltoall or allgather");
}

AlgorithmKind algorithm_from_string(const std::string& text) {
  if (text == "direct") return AlgorithmKind::Direct;
  if (text == "torus") return AlgorithmKind::Torus;
  if (text == "torus-direct") return AlgorithmKind::TorusDirect;
  throw std::invalid_argument("unknown algorithm '" + text +
                              "', expected direct, torus or torus-direct");
}

BufferRef buffer_ref_from_string(const std::string& text) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad buffer reference '" + text + "'");
  std::string name = text.substr(0, colon);
  BufferRef ref;
  if (name == "SEND")
    ref.buffer = BufferKind::Send;
  else if (name == "RECV")
    ref.buffer = BufferKind::Recv;
  else if (name == "INTER")
    ref.buffer = BufferKind::Inter;
  else if (name == "SCRATCH")
    ref.buffer = BufferKind::Scratch;
  else
    throw std::invalid_argument("bad buffer reference '" + text + "'");
  std::string slot = text.substr(colon + 1);
  std::size_t used = 0;
  ref.slot = std::stoi(slot, &used);
  if (used != slot.size())
    throw std::invalid_argument("bad buffer reference '" + text + "'");
  return ref;
}

}  // namespace isosched
