// Acceptance gate: structural and metric checks that pin down the round
// reduction, the moved volumes, oracle equivalence on randomized inputs, the
// additive basis solver, and the cost model, each reported on its own line.
#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isosched/additive_basis.hpp"
#include "isosched/costmodel.hpp"
#include "isosched/neighborhood.hpp"
#include "isosched/schedule.hpp"
#include "isosched/simulator.hpp"
#include "isosched/torus.hpp"

using namespace isosched;

namespace {

int failures = 0;

void report(int index, const std::string& label, bool ok, const std::string& detail) {
  if (ok) {
    std::cout << "[PASS] " << index << ". " << label << "\n";
  } else {
    std::cout << "[FAIL] " << index << ". " << label
              << (detail.empty() ? "" : ": " + detail) << "\n";
    ++failures;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Neighborhood random_neighborhood(std::mt19937& rng) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> count(1, 40);
  std::uniform_int_distribution<int> coord(-4, 4);
  int d = dim(rng);
  int s = count(rng);
  std::vector<Offset> offsets;
  for (int i = 0; i < s; ++i) {
    Offset c(d);
    for (int j = 0; j < d; ++j) c[j] = coord(rng);
    offsets.push_back(std::move(c));
  }
  return Neighborhood(d, std::move(offsets));
}

TorusShape random_shape(std::mt19937& rng, int d, int lo, int hi) {
  std::uniform_int_distribution<int> extent(lo, hi);
  std::vector<int> dims(d);
  for (int j = 0; j < d; ++j) dims[j] = extent(rng);
  return TorusShape(dims);
}

void criterion_round_reduction() {
  auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool ok = true;

  Neighborhood n = gen_moore(3, 1);
  long long torus = schedule_stats(build_torus_alltoall(n, uniform_sizes(26, 1))).rounds;
  long long direct = schedule_stats(build_direct(n, uniform_sizes(26, 1))).rounds;
  if (torus != 6 || direct != 26) {
    ok = false;
    detail << "got " << torus << " vs " << direct << " rounds, expected 6 vs 26";
  }

  const int grid[][2] = {{1, 1}, {1, 3}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}};
  for (auto [d, r] : grid) {
    Neighborhood m = gen_moore(d, r);
    long long rounds =
        schedule_stats(build_torus_alltoall(m, uniform_sizes(m.size(), 1))).rounds;
    if (rounds != 2LL * r * d) {
      ok = false;
      detail << " box d=" << d << " r=" << r << " gives " << rounds << " rounds";
    }
  }

  double elapsed = seconds_since(start);
  if (elapsed >= 1.0) {
    ok = false;
    detail << " took " << elapsed << " s, limit 1 s";
  }
  report(1, "hop-combined all-to-all runs in 6 rounds against 26 direct, 2rd in general",
         ok, detail.str());
}

void criterion_alltoall_volume() {
  auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool ok = true;
  std::mt19937 rng(20260822);
  for (int trial = 0; trial < 200 && ok; ++trial) {
    Neighborhood n = random_neighborhood(rng);
    TorusShape shape = random_shape(rng, n.d, 2, 5);
    NeighborhoodMetrics m = compute_metrics(n);
    Schedule s = build_torus_alltoall(n, uniform_sizes(n.size(), 1));
    SimResult result = run(s, shape);
    if (!result.clean() || result.total_blocks != m.alltoall_volume ||
        result.rounds_executed != m.torus_rounds ||
        !verify_delivery(result, CollectiveKind::Alltoall, n, shape).ok) {
      ok = false;
      detail << "trial " << trial << " on " << shape.to_string() << ": moved "
             << result.total_blocks << " blocks in " << result.rounds_executed
             << " rounds, metrics say " << m.alltoall_volume << " and "
             << m.torus_rounds;
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 30.0) {
    ok = false;
    detail << " took " << elapsed << " s, limit 30 s";
  }
  report(2, "simulated all-to-all block count matches the volume formula on 200 random cases",
         ok, detail.str());
}

void criterion_allgather_volume() {
  std::ostringstream detail;
  bool ok = true;
  std::mt19937 rng(20260823);
  for (int trial = 0; trial < 200 && ok; ++trial) {
    Neighborhood n = random_neighborhood(rng);
    TorusShape shape = random_shape(rng, n.d, 2, 5);
    NeighborhoodMetrics m = compute_metrics(n);
    Schedule s = build_torus_allgather(n, uniform_sizes(n.size(), 1));
    SimResult result = run(s, shape);
    if (!result.clean() || result.total_blocks != m.allgather_volume ||
        m.allgather_volume > m.alltoall_volume ||
        !verify_delivery(result, CollectiveKind::Allgather, n, shape).ok) {
      ok = false;
      detail << "trial " << trial << ": moved " << result.total_blocks
             << " blocks, trie weight " << m.allgather_volume << ", all-to-all "
             << m.alltoall_volume;
    }
  }
  report(3, "simulated allgather block count matches the trie weight, never above the all-to-all volume",
         ok, detail.str());
}

void criterion_oracle_equivalence() {
  std::ostringstream detail;
  bool ok = true;
  std::mt19937 rng(20260824);
  for (int trial = 0; trial < 100 && ok; ++trial) {
    Neighborhood n = random_neighborhood(rng);
    TorusShape shape = trial < 25 ? TorusShape(std::vector<int>(n.d, 2))
                                  : random_shape(rng, n.d, 2, 5);
    BlockSizeMap one = uniform_sizes(n.size(), 1);

    Schedule direct_a2a = build_direct(n, one);
    if (!verify_delivery(run(direct_a2a, shape), CollectiveKind::Alltoall, n, shape).ok) {
      ok = false;
      detail << "trial " << trial << ": direct all-to-all misdelivers";
      break;
    }
    for (Schedule s : {build_torus_alltoall(n, one), build_torusdirect_alltoall(n, one)}) {
      EquivalenceReport r = compare_oracle(s, direct_a2a, n, shape);
      if (!r.equal) {
        ok = false;
        detail << "trial " << trial << " " << to_string(s.algorithm)
               << " all-to-all on " << shape.to_string() << ": " << r.detail;
        break;
      }
    }
    if (!ok) break;

    Schedule direct_ag = build_direct(n, one, CollectiveKind::Allgather);
    for (Schedule s :
         {build_torus_allgather(n, one), build_torusdirect_allgather(n, one)}) {
      EquivalenceReport r = compare_oracle(s, direct_ag, n, shape);
      if (!r.equal) {
        ok = false;
        detail << "trial " << trial << " " << to_string(s.algorithm)
               << " allgather on " << shape.to_string() << ": " << r.detail;
        break;
      }
    }
  }
  report(4, "combining schedules agree with the direct oracle on 100 random tori, wrap-around included",
         ok, detail.str());
}

void criterion_torusdirect_rounds() {
  Neighborhood n = gen_shales(3, {3, 7});
  BlockSizeMap one = uniform_sizes(n.size(), 1);
  long long hop = schedule_stats(build_torus_alltoall(n, one)).rounds;
  long long jump = schedule_stats(build_torusdirect_alltoall(n, one)).rounds;
  std::ostringstream detail;
  if (hop != 42 || jump != 12)
    detail << "got " << hop << " hop rounds and " << jump << " jump rounds";
  report(5, "two-shale neighborhood: 42 hop rounds against 12 value-jump rounds",
         hop == 42 && jump == 12, detail.str());
}

void criterion_additive_basis() {
  auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool ok = true;

  auto interval = [](int n) {
    std::vector<Offset> t;
    for (int v = 1; v <= n; ++v) t.push_back({v});
    return t;
  };
  const int expected[][2] = {{3, 2}, {7, 3}, {8, 4}};
  for (auto [n, size] : expected) {
    std::vector<Offset> basis = find_min_additive_basis(interval(n));
    if (static_cast<int>(basis.size()) != size ||
        !is_additive_basis(interval(n), basis)) {
      ok = false;
      detail << " targets 1.." << n << " gave size " << basis.size() << ", expected "
             << size;
    }
  }
  if (!is_additive_basis(interval(7), {{1}, {2}, {4}})) {
    ok = false;
    detail << " {1,2,4} rejected for 1..7";
  }
  if (!is_additive_basis(interval(8), {{1}, {2}, {3}, {6}})) {
    ok = false;
    detail << " {1,2,3,6} rejected for 1..8";
  }

  double elapsed = seconds_since(start);
  if (elapsed >= 10.0) {
    ok = false;
    detail << " took " << elapsed << " s, limit 10 s";
  }
  report(6, "additive basis solver finds sizes 2, 3, 4 and confirms the hand witnesses",
         ok, detail.str());
}

void criterion_cost_crossover() {
  std::ostringstream detail;
  bool ok = true;
  for (const Neighborhood& n :
       {gen_moore(2, 1), gen_moore(3, 1), gen_moore(2, 2), gen_octant(2, 2),
        gen_shales(2, {1, 3})}) {
    NeighborhoodMetrics m = compute_metrics(n);
    if (!(m.torus_rounds < m.size && m.size < m.alltoall_volume)) {
      ok = false;
      detail << "neighborhood with s=" << m.size << " out of the strict regime";
      break;
    }
    for (int ratio = 1; ratio <= 25 && ok; ++ratio)
      for (int blocks = 1; blocks <= 40 && ok; ++blocks) {
        CostParams p{static_cast<double>(ratio), 1.0, blocks};
        bool combining_wins = estimate(p, m.torus_rounds, m.alltoall_volume) <
                              estimate(p, m.size, m.size);
        Crossover c = crossover_blocksize(ratio, 1.0, m.size, m.torus_rounds,
                                          m.alltoall_volume);
        bool predicted = blocks < c.block_size;
        if (c.kind != CrossoverKind::Threshold || combining_wins != predicted) {
          ok = false;
          detail << "s=" << m.size << " ratio=" << ratio << " m=" << blocks
                 << ": model says " << combining_wins << ", threshold "
                 << c.block_size << " says " << predicted;
        }
      }
    if (!ok) break;
  }
  report(7, "cost model and crossover threshold agree on a 1000-point grid per neighborhood",
         ok, detail.str());
}

void criterion_dataflow() {
  std::ostringstream detail;
  bool ok = true;
  std::mt19937 rng(20260825);
  for (int trial = 0; trial < 200 && ok; ++trial) {
    Neighborhood n = random_neighborhood(rng);
    BlockSizeMap one = uniform_sizes(n.size(), 1);
    Schedule all[] = {build_direct(n, one),
                      build_torus_alltoall(n, one),
                      build_torusdirect_alltoall(n, one),
                      build_direct(n, one, CollectiveKind::Allgather),
                      build_torus_allgather(n, one),
                      build_torusdirect_allgather(n, one)};
    for (const Schedule& s : all) {
      std::vector<std::string> out = check_dataflow(s);
      if (!out.empty()) {
        ok = false;
        detail << "trial " << trial << " " << to_string(s.algorithm) << " "
               << to_string(s.kind) << ": " << out.front();
        break;
      }
    }
  }
  report(8, "static dataflow walk finds no violations across 1200 random schedules",
         ok, detail.str());
}

}  // namespace

int main() {
  criterion_round_reduction();
  criterion_alltoall_volume();
  criterion_allgather_volume();
  criterion_oracle_equivalence();
  criterion_torusdirect_rounds();
  criterion_additive_basis();
  criterion_cost_crossover();
  criterion_dataflow();
  if (failures == 0) {
    std::cout << "all acceptance criteria hold\n";
    return 0;
  }
  std::cout << failures << " acceptance criteria failed\n";
  return 1;
}
