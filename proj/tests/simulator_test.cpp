#include <doctest.h>

#include <stdexcept>

#include <json.hpp>

#include "isosched/neighborhood.hpp"
#include "isosched/schedule.hpp"
#include "isosched/simulator.hpp"

using namespace isosched;

TEST_SUITE("simulator") {

TEST_CASE("direct alltoall lands every block where it belongs") {
  Neighborhood n = gen_moore(2, 1);
  TorusShape shape({4, 4});
  Schedule s = build_direct(n, uniform_sizes(8, 1));
  SimResult result = run(s, shape);
  CHECK(result.clean());
  CHECK(result.rounds_executed == 8);
  CHECK(result.total_blocks == 8);
  CHECK(result.total_bytes == 8);
  REQUIRE(result.per_process.size() == 16);

  const ProcState& p0 = result.per_process[0];
  for (int i = 0; i < 8; ++i) {
    Coord src = shape.sub({0, 0}, n.offsets[i]);
    CHECK(p0.recv[i] == BlockPayload{shape.rank_of(src), i});
  }
  CHECK(verify_delivery(result, CollectiveKind::Alltoall, n, shape).ok);
}

TEST_CASE("send slots start out holding the owner's blocks") {
  Neighborhood n = gen_octant(1, 2);
  TorusShape shape({5});
  SimResult a = run(build_direct(n, uniform_sizes(2, 1)), shape);
  CHECK(a.per_process[3].send == std::vector<BlockPayload>{{3, 0}, {3, 1}});
  SimResult g = run(build_direct(n, uniform_sizes(2, 1), CollectiveKind::Allgather),
                    shape);
  CHECK(g.per_process[3].send == std::vector<BlockPayload>{{3, 0}});
}

TEST_CASE("every builder delivers on a comfortable torus") {
  Neighborhood n = gen_moore(2, 1);
  TorusShape shape({4, 5});
  BlockSizeMap one = uniform_sizes(8, 1);
  for (Schedule s : {build_direct(n, one), build_torus_alltoall(n, one),
                     build_torusdirect_alltoall(n, one)}) {
    SimResult result = run(s, shape);
    CHECK(result.clean());
    CHECK(verify_delivery(result, CollectiveKind::Alltoall, n, shape).ok);
  }
  for (Schedule s : {build_direct(n, one, CollectiveKind::Allgather),
                     build_torus_allgather(n, one),
                     build_torusdirect_allgather(n, one)}) {
    SimResult result = run(s, shape);
    CHECK(result.clean());
    CHECK(verify_delivery(result, CollectiveKind::Allgather, n, shape).ok);
  }
}

TEST_CASE("wrap-around aliasing on a two-wide torus still delivers") {
  Neighborhood n = gen_moore(2, 1);
  TorusShape shape({2, 2});
  BlockSizeMap one = uniform_sizes(8, 1);
  for (Schedule s : {build_direct(n, one), build_torus_alltoall(n, one),
                     build_torusdirect_alltoall(n, one)}) {
    SimResult result = run(s, shape);
    CHECK(result.clean());
    CHECK(verify_delivery(result, CollectiveKind::Alltoall, n, shape).ok);
  }
  Schedule g = build_torus_allgather(n, one);
  SimResult result = run(g, shape);
  CHECK(verify_delivery(result, CollectiveKind::Allgather, n, shape).ok);
}

TEST_CASE("torus schedule moves exactly the combined volume") {
  Neighborhood n = gen_moore(2, 1);
  TorusShape shape({4, 4});
  SimResult a = run(build_torus_alltoall(n, uniform_sizes(8, 1)), shape);
  CHECK(a.rounds_executed == 4);
  CHECK(a.total_blocks == 12);
  CHECK(a.total_bytes == 12);
  SimResult g = run(build_torus_allgather(n, uniform_sizes(8, 1)), shape);
  CHECK(g.rounds_executed == 4);
  CHECK(g.total_blocks == 8);
}

TEST_CASE("sizes weight the byte counters") {
  Neighborhood n = gen_moore(2, 1);
  TorusShape shape({4, 4});
  SimResult r = run(build_torus_alltoall(n, gen_irregular_sizes(n, 4)), shape);
  CHECK(r.total_blocks == 12);
  CHECK(r.total_bytes == 24);
}

TEST_CASE("misrouted schedules fail verification but run cleanly") {
  Neighborhood n = gen_octant(1, 1);
  TorusShape shape({4});
  Schedule s = build_direct(n, {1});
  s.steps[0].send_offset = {2};
  SimResult result = run(s, shape);
  CHECK(result.clean());
  DeliveryReport report = verify_delivery(result, CollectiveKind::Alltoall, n, shape);
  CHECK_FALSE(report.ok);
  REQUIRE_FALSE(report.mismatches.empty());
  CHECK(report.mismatches[0].find("rank 0 slot 0") != std::string::npos);
}

TEST_CASE("reading a slot nothing wrote is recorded, not thrown") {
  Schedule s;
  s.kind = CollectiveKind::Alltoall;
  s.algorithm = AlgorithmKind::Torus;
  s.d = 1;
  s.num_blocks = 1;
  s.dim_order = {0};
  s.block_sizes = {1};
  s.steps.push_back({{1}, {{0, {BufferKind::Inter, 0}, {BufferKind::Recv, 0}, 0}}});
  SimResult result = run(s, TorusShape({3}));
  CHECK_FALSE(result.clean());
  REQUIRE_FALSE(result.violations.empty());
  CHECK(result.violations[0].find("before anything wrote it") != std::string::npos);
  CHECK_FALSE(verify_delivery(result, CollectiveKind::Alltoall,
                              Neighborhood(1, {{1}}), TorusShape({3}))
                   .ok);
}

TEST_CASE("writing into a send slot is a violation") {
  Schedule s;
  s.kind = CollectiveKind::Alltoall;
  s.algorithm = AlgorithmKind::Direct;
  s.d = 1;
  s.num_blocks = 1;
  s.dim_order = {0};
  s.block_sizes = {1};
  s.steps.push_back({{1}, {{0, {BufferKind::Send, 0}, {BufferKind::Send, 0}, 0}}});
  SimResult result = run(s, TorusShape({3}));
  CHECK_FALSE(result.clean());
  bool found = false;
  for (const std::string& v : result.violations)
    found = found || v.find("writes the send buffer") != std::string::npos;
  CHECK(found);
}

TEST_CASE("out-of-range slots are reported with context") {
  Schedule s;
  s.kind = CollectiveKind::Alltoall;
  s.algorithm = AlgorithmKind::Direct;
  s.d = 1;
  s.num_blocks = 1;
  s.dim_order = {0};
  s.block_sizes = {1};
  s.steps.push_back({{1}, {{0, {BufferKind::Send, 0}, {BufferKind::Recv, 9}, 0}}});
  SimResult result = run(s, TorusShape({3}));
  bool found = false;
  for (const std::string& v : result.violations)
    found = found || v.find("out-of-range RECV:9") != std::string::npos;
  CHECK(found);
}

TEST_CASE("schedule and shape have to agree on the dimension count") {
  Schedule s = build_direct(gen_moore(2, 1), uniform_sizes(8, 1));
  CHECK_THROWS_AS(run(s, TorusShape({4, 4, 4})), std::invalid_argument);
}

TEST_CASE("oracle comparison matches the combining schedules to direct") {
  Neighborhood n = gen_moore(2, 1);
  TorusShape shape({4, 4});
  BlockSizeMap one = uniform_sizes(8, 1);
  Schedule direct = build_direct(n, one);
  CHECK(compare_oracle(build_torus_alltoall(n, one), direct, n, shape).equal);
  CHECK(compare_oracle(build_torusdirect_alltoall(n, one), direct, n, shape).equal);

  Schedule gdirect = build_direct(n, one, CollectiveKind::Allgather);
  CHECK(compare_oracle(build_torus_allgather(n, one), gdirect, n, shape).equal);
  CHECK(compare_oracle(build_torusdirect_allgather(n, one), gdirect, n, shape).equal);
}

TEST_CASE("oracle comparison pinpoints a difference") {
  Neighborhood n = gen_octant(1, 1);
  TorusShape shape({4});
  Schedule direct = build_direct(n, {1});
  Schedule skew = direct;
  skew.steps[0].send_offset = {3};
  EquivalenceReport report = compare_oracle(skew, direct, n, shape);
  CHECK_FALSE(report.equal);
  CHECK(report.detail.find("rank 0 slot 0") != std::string::npos);

  Schedule gather = build_direct(n, {1}, CollectiveKind::Allgather);
  CHECK_THROWS_AS(compare_oracle(gather, direct, n, shape), std::invalid_argument);
}

TEST_CASE("result serializes to json") {
  Neighborhood n = gen_octant(1, 1);
  TorusShape shape({3});
  SimResult result = run(build_direct(n, {2}), shape);
  nlohmann::json doc = nlohmann::json::parse(sim_result_to_json(result));
  CHECK(doc["rounds_executed"] == 1);
  CHECK(doc["total_blocks"] == 1);
  CHECK(doc["total_bytes"] == 2);
  CHECK(doc["violations"].empty());
  REQUIRE(doc["per_process"].size() == 3);
  CHECK(doc["per_process"][1]["rank"] == 1);
  CHECK(doc["per_process"][1]["recv"][0][0] == 0);
  CHECK(doc["per_process"][1]["recv"][0][1] == 0);
}

}
