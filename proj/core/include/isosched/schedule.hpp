#ifndef ISOSCHED_SCHEDULE_HPP
#define ISOSCHED_SCHEDULE_HPP

#include <string>
#include <vector>

#include "isosched/neighborhood.hpp"

namespace isosched {

enum class CollectiveKind { Alltoall, Allgather };
enum class AlgorithmKind { Direct, Torus, TorusDirect };

enum class BufferKind {
  Send,     // caller's send blocks; never written
  Recv,     // caller's receive blocks, one per neighbor
  Inter,    // staging area mirroring the receive layout
  Scratch,  // staging slots for allgather trie nodes without a receive slot
};

struct BufferRef {
  BufferKind buffer = BufferKind::Send;
  int slot = 0;

  friend bool operator==(const BufferRef& a, const BufferRef& b) = default;
};

// One block movement inside a step: the sender reads src from its own
// buffers, the receiver writes the incoming copy to dst. Since every rank
// runs the same schedule, a single part describes both roles.
struct Part {
  int block = 0;  // neighbor index, or trie node id for allgather schedules
  BufferRef src;
  BufferRef dst;
  int size_index = 0;  // lookup into Schedule::block_sizes

  friend bool operator==(const Part& a, const Part& b) = default;
};

// One communication round: every rank sends one message to rank + send_offset
// and receives one from rank - send_offset. The parts list the blocks packed
// into that message, in order.
struct Step {
  Offset send_offset;
  std::vector<Part> parts;

  friend bool operator==(const Step& a, const Step& b) = default;
};

struct CopyOp {
  BufferRef src;
  BufferRef dst;

  friend bool operator==(const CopyOp& a, const CopyOp& b) = default;
};

struct Schedule {
  CollectiveKind kind = CollectiveKind::Alltoall;
  AlgorithmKind algorithm = AlgorithmKind::Direct;
  int d = 0;
  int num_blocks = 0;          // send/receive slots per rank
  std::vector<int> dim_order;  // dimension visit order used while building
  int scratch_slots = 0;
  BlockSizeMap block_sizes;
  std::vector<CopyOp> local_copies;  // executed before the first step
  std::vector<Step> steps;
  std::vector<CopyOp> finalize_copies;  // executed after the last step

  friend bool operator==(const Schedule& a, const Schedule& b) = default;
};

struct ScheduleStats {
  long long rounds = 0;
  long long blocks = 0;  // blocks sent per rank over the whole schedule
  long long bytes = 0;   // same, weighted by block_sizes
};

// One step per neighbor: rank sends block i straight to rank + C^i. The
// baseline everything else is measured against, and the oracle the simulator
// compares the combining schedules to. For allgather every part sends the
// single send block.
Schedule build_direct(const Neighborhood& n, const BlockSizeMap& sizes,
                      CollectiveKind kind = CollectiveKind::Alltoall);

// Hop-by-hop all-to-all over the torus, dimension by dimension, with unit
// send offsets. Blocks travel |C^i|_1 hops; messages for a step share one
// neighbor, so blocks heading the same way combine. Receives alternate
// between the receive and staging slot of the block so that a rank can
// forward the previous copy while the next one arrives, which is what makes
// the schedule zero-copy: a block with an even number of hops left lands in
// the staging slot, odd in the receive slot, and the final hop (one left)
// always lands in the receive slot.
Schedule build_torus_alltoall(const Neighborhood& n, const BlockSizeMap& sizes);

// Hop-by-hop allgather. Neighbors sharing a displacement prefix (in the
// trie's dimension order) share one traveling copy, so the volume drops from
// the sum of L1 norms to the trie's edge weight sum. A copy that completes
// the prefix of neighbor i parks in receive slot i and is forwarded from
// there; prefixes that match no neighbor park in scratch slots. Requires
// equal block sizes.
Schedule build_torus_allgather(const Neighborhood& n, const BlockSizeMap& sizes);

// All-to-all with one direct step per distinct nonzero coordinate per
// dimension instead of unit hops. Blocks travel one hop per nonzero
// coordinate, with the same alternation rule on the reduced hop count.
Schedule build_torusdirect_alltoall(const Neighborhood& n, const BlockSizeMap& sizes);

// Allgather over the same prefix trie as build_torus_allgather, but each
// edge is one direct step to the projected offset, grouped by edge value.
Schedule build_torusdirect_allgather(const Neighborhood& n, const BlockSizeMap& sizes);

ScheduleStats schedule_stats(const Schedule& s);

// Static soundness walk, no simulation: flags parts that read a slot before
// anything wrote it, parts that send and receive the same slot, out-of-range
// slots, empty steps, and blocks whose last hop misses their receive slot.
// Returns a description per violation; empty means sound.
std::vector<std::string> check_dataflow(const Schedule& s);

std::string to_string(CollectiveKind kind);
std::string to_string(AlgorithmKind algorithm);
std::string to_string(const BufferRef& ref);  // "RECV:3"
CollectiveKind collective_from_string(const std::string& text);
AlgorithmKind algorithm_from_string(const std::string& text);
BufferRef buffer_ref_from_string(const std::string& text);

}  // namespace isosched

#endif  // ISOSCHED_SCHEDULE_HPP
