#ifndef ISOSCHED_SIMULATOR_HPP
#define ISOSCHED_SIMULATOR_HPP

#include <string>
#include <vector>

#include "isosched/schedule.hpp"
#include "isosched/torus.hpp"

namespace isosched {

// Tagged payload standing in for a message block: which rank produced it and
// which send slot it came from. origin < 0 marks a slot nothing wrote yet.
struct BlockPayload {
  int origin = -1;
  int tag = -1;

  bool valid() const { return origin >= 0; }
  friend bool operator==(const BlockPayload& a, const BlockPayload& b) = default;
};

struct ProcState {
  int rank = 0;
  std::vector<BlockPayload> send, recv, inter, scratch;
  long long blocks_sent = 0;
  long long bytes_sent = 0;
};

struct SimResult {
  long long rounds_executed = 0;
  long long total_blocks = 0;  // blocks sent per rank (identical on every rank)
  long long total_bytes = 0;   // bytes sent per rank
  std::vector<ProcState> per_process;
  std::vector<std::string> violations;

  bool clean() const { return violations.empty(); }
};

// Lock-step execution of a schedule on every virtual rank of the torus. Each
// step is one uniform shift: rank R sends to R + send_offset and receives
// from R - send_offset, reading all part sources before any destination is
// written. Send slots start out holding (rank, slot) payloads, a single
// (rank, 0) payload for allgather. Reads of unwritten or out-of-range slots
// and send/receive mismatches are recorded as violations, not exceptions,
// so damaged schedules can be diagnosed. Deterministic.
SimResult run(const Schedule& s, const TorusShape& shape);

struct DeliveryReport {
  bool ok = false;
  std::vector<std::string> mismatches;
};

// Checks the outcome against the collective's definition: after an
// all-to-all, receive slot i of rank R holds block i of rank R - C^i; after
// an allgather it holds the (single) send block of rank R - C^i. Simulation
// violations fail the report as well.
DeliveryReport verify_delivery(const SimResult& result, CollectiveKind kind,
                               const Neighborhood& n, const TorusShape& shape);

struct EquivalenceReport {
  bool equal = false;
  std::string detail;
};

// Runs both schedules and compares the final receive buffers rank by rank.
// The schedules must implement the same collective.
EquivalenceReport compare_oracle(const Schedule& a, const Schedule& b,
                                 const Neighborhood& n, const TorusShape& shape);

// Counters, violations and receive buffers as a JSON document.
std::string sim_result_to_json(const SimResult& result);

}  // namespace isosched

#endif  // ISOSCHED_SIMULATOR_HPP
