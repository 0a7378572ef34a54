#include "isosched/simulator.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace isosched {

namespace {

constexpr std::size_t kMaxDiagnostics = 64;

void record(std::vector<std::string>& sink, std::string msg) {
  if (sink.size() < kMaxDiagnostics)
    sink.push_back(std::move(msg));
  else if (sink.size() == kMaxDiagnostics)
    sink.push_back("further diagnostics suppressed");
}

struct SlotAccess {
  const Schedule& sched;
  std::vector<std::string>& violations;

  std::vector<BlockPayload>* buffer_of(ProcState& ps, BufferKind kind) const {
    switch (kind) {
      case BufferKind::Send: return &ps.send;
      case BufferKind::Recv: return &ps.recv;
      case BufferKind::Inter: return &ps.inter;
      case BufferKind::Scratch: return &ps.scratch;
    }
    return nullptr;
  }

  BlockPayload read(ProcState& ps, const BufferRef& ref, const std::string& where) {
    auto* buf = buffer_of(ps, ref.buffer);
    if (!buf || ref.slot < 0 || ref.slot >= static_cast<int>(buf->size())) {
      record(violations, where + " at rank " + std::to_string(ps.rank) +
                             " reads out-of-range " + to_string(ref));
      return {};
    }
    BlockPayload payload = (*buf)[ref.slot];
    if (!payload.valid())
      record(violations, where + " at rank " + std::to_string(ps.rank) +
                             " reads " + to_string(ref) +
                             " before anything wrote it");
    return payload;
  }

  void write(ProcState& ps, const BufferRef& ref, const BlockPayload& payload,
             const std::string& where) {
    auto* buf = buffer_of(ps, ref.buffer);
    if (!buf || ref.slot < 0 || ref.slot >= static_cast<int>(buf->size())) {
      record(violations, where + " at rank " + std::to_string(ps.rank) +
                             " writes out-of-range " + to_string(ref));
      return;
    }
    if (ref.buffer == BufferKind::Send) {
      record(violations,
             where + " at rank " + std::to_string(ps.rank) + " writes the send buffer");
      return;
    }
    (*buf)[ref.slot] = payload;
  }
};

}  // namespace

SimResult run(const Schedule& s, const TorusShape& shape) {
  if (s.d != shape.ndims())
    throw std::invalid_argument("schedule built for " + std::to_string(s.d) +
                                " dimensions, shape " + shape.to_string() + " has " +
                                std::to_string(shape.ndims()));
  if (s.num_blocks < 1) throw std::invalid_argument("schedule has no blocks");

  const int nproc = static_cast<int>(shape.total());
  const int send_slots = s.kind == CollectiveKind::Alltoall ? s.num_blocks : 1;

  SimResult result;
  SlotAccess access{s, result.violations};

  std::vector<ProcState> procs(nproc);
  for (int r = 0; r < nproc; ++r) {
    ProcState& ps = procs[r];
    ps.rank = r;
    ps.send.resize(send_slots);
    for (int i = 0; i < send_slots; ++i) ps.send[i] = {r, i};
    ps.recv.assign(s.num_blocks, {});
    ps.inter.assign(s.num_blocks, {});
    ps.scratch.assign(std::max(s.scratch_slots, 0), {});
  }

  for (std::size_t k = 0; k < s.local_copies.size(); ++k) {
    std::string where = "local copy " + std::to_string(k);
    for (ProcState& ps : procs)
      access.write(ps, s.local_copies[k].dst, access.read(ps, s.local_copies[k].src, where),
                   where);
  }

  std::vector<std::vector<BlockPayload>> outbox(nproc);
  for (std::size_t si = 0; si < s.steps.size(); ++si) {
    const Step& step = s.steps[si];
    std::string where = "step " + std::to_string(si);
    if (static_cast<int>(step.send_offset.size()) != s.d) {
      record(result.violations, where + " send offset has wrong dimension count");
      continue;
    }

    // Phase one: every rank packs its outgoing message from the pre-round
    // state. Phase two delivers, so a slot both sent from and received into
    // within one round behaves like a simultaneous send/recv.
    for (int r = 0; r < nproc; ++r) {
      ProcState& ps = procs[r];
      outbox[r].clear();
      for (std::size_t pi = 0; pi < step.parts.size(); ++pi) {
        const Part& part = step.parts[pi];
        outbox[r].push_back(
            access.read(ps, part.src, where + " part " + std::to_string(pi)));
        ps.blocks_sent += 1;
        if (part.size_index >= 0 &&
            part.size_index < static_cast<int>(s.block_sizes.size()))
          ps.bytes_sent += s.block_sizes[part.size_index];
        else
          record(result.violations,
                 where + " part " + std::to_string(pi) + " size index outside the size map");
      }
    }
    for (int r = 0; r < nproc; ++r) {
      ProcState& ps = procs[r];
      int peer = shape.rank_of(shape.sub(shape.coord_of(r), step.send_offset));
      const std::vector<BlockPayload>& inbox = outbox[peer];
      if (inbox.size() != step.parts.size()) {
        record(result.violations,
               where + ": rank " + std::to_string(r) + " expects " +
                   std::to_string(step.parts.size()) + " parts from rank " +
                   std::to_string(peer) + ", got " + std::to_string(inbox.size()));
        continue;
      }
      for (std::size_t pi = 0; pi < step.parts.size(); ++pi)
        access.write(ps, step.parts[pi].dst, inbox[pi],
                     where + " part " + std::to_string(pi));
    }
    result.rounds_executed += 1;
  }

  for (std::size_t k = 0; k < s.finalize_copies.size(); ++k) {
    std::string where = "finalize copy " + std::to_string(k);
    for (ProcState& ps : procs)
      access.write(ps, s.finalize_copies[k].dst,
                   access.read(ps, s.finalize_copies[k].src, where), where);
  }

  result.total_blocks = procs.empty() ? 0 : procs.front().blocks_sent;
  result.total_bytes = procs.empty() ? 0 : procs.front().bytes_sent;
  for (const ProcState& ps : procs)
    if (ps.blocks_sent != result.total_blocks || ps.bytes_sent != result.total_bytes)
      record(result.violations, "rank " + std::to_string(ps.rank) +
                                    " sent a different amount than rank 0");
  result.per_process = std::move(procs);
  return result;
}

DeliveryReport verify_delivery(const SimResult& result, CollectiveKind kind,
                               const Neighborhood& n, const TorusShape& shape) {
  DeliveryReport report;
  if (static_cast<long long>(result.per_process.size()) != shape.total()) {
    report.mismatches.push_back("result has " +
                                std::to_string(result.per_process.size()) +
                                " ranks, shape has " + std::to_string(shape.total()));
    return report;
  }
  for (const ProcState& ps : result.per_process) {
    if (static_cast<int>(ps.recv.size()) != n.size()) {
      record(report.mismatches, "rank " + std::to_string(ps.rank) + " has " +
                                    std::to_string(ps.recv.size()) +
                                    " receive slots for " + std::to_string(n.size()) +
                                    " neighbors");
      continue;
    }
    Coord here = shape.coord_of(ps.rank);
    for (int i = 0; i < n.size(); ++i) {
      BlockPayload expected{shape.rank_of(shape.sub(here, n.offsets[i])),
                            kind == CollectiveKind::Alltoall ? i : 0};
      if (!(ps.recv[i] == expected)) {
        std::ostringstream os;
        os << "rank " << ps.rank << " slot " << i << ": expected block (origin "
           << expected.origin << ", tag " << expected.tag << "), found ";
        if (ps.recv[i].valid())
          os << "(origin " << ps.recv[i].origin << ", tag " << ps.recv[i].tag << ")";
        else
          os << "nothing";
        record(report.mismatches, os.str());
      }
    }
  }
  for (const std::string& v : result.violations)
    record(report.mismatches, "simulation violation: " + v);
  report.ok = report.mismatches.empty();
  return report;
}

EquivalenceReport compare_oracle(const Schedule& a, const Schedule& b,
                                 const Neighborhood& n, const TorusShape& shape) {
  if (a.kind != b.kind)
    throw std::invalid_argument("cannot compare a " + to_string(a.kind) +
                                " schedule against a " + to_string(b.kind) +
                                " schedule");
  if (a.num_blocks != n.size() || b.num_blocks != n.size())
    throw std::invalid_argument("schedules and neighborhood disagree on block count");

  SimResult ra = run(a, shape);
  SimResult rb = run(b, shape);
  EquivalenceReport report;
  for (const std::string& v : ra.violations) {
    report.detail = to_string(a.algorithm) + " run: " + v;
    return report;
  }
  for (const std::string& v : rb.violations) {
    report.detail = to_string(b.algorithm) + " run: " + v;
    return report;
  }
  for (std::size_t r = 0; r < ra.per_process.size(); ++r)
    for (int i = 0; i < n.size(); ++i)
      if (!(ra.per_process[r].recv[i] == rb.per_process[r].recv[i])) {
        std::ostringstream os;
        os << "rank " << r << " slot " << i << ": " << to_string(a.algorithm)
           << " delivered (origin " << ra.per_process[r].recv[i].origin << ", tag "
           << ra.per_process[r].recv[i].tag << "), " << to_string(b.algorithm)
           << " delivered (origin " << rb.per_process[r].recv[i].origin << ", tag "
           << rb.per_process[r].recv[i].tag << ")";
        report.detail = os.str();
        return report;
      }
  report.equal = true;
  return report;
}

std::string sim_result_to_json(const SimResult& result) {
  nlohmann::ordered_json doc;
  doc["rounds_executed"] = result.rounds_executed;
  doc["total_blocks"] = result.total_blocks;
  doc["total_bytes"] = result.total_bytes;
  doc["violations"] = result.violations;
  nlohmann::ordered_json ranks = nlohmann::ordered_json::array();
  for (const ProcState& ps : result.per_process) {
    nlohmann::ordered_json entry;
    entry["rank"] = ps.rank;
    entry["blocks_sent"] = ps.blocks_sent;
    entry["bytes_sent"] = ps.bytes_sent;
    nlohmann::ordered_json recv = nlohmann::ordered_json::array();
    for (const BlockPayload& p : ps.recv)
      recv.push_back({p.origin, p.tag});
    entry["recv"] = recv;
    ranks.push_back(std::move(entry));
  }
  doc["per_process"] = ranks;
  return doc.dump(2) + "\n";
}

}  // namespace isosched
