#include "darp/insertion.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "test_util.hpp"

using namespace darp;

namespace {

Instance random_instance(darp::Rng& rng, std::size_t vehicles, std::size_t requests,
                         Seconds max_delay) {
  const RoadGraph g = testutil::random_scc_graph(rng, 12);
  auto matrix = testutil::shared_matrix(compute_travel_time_matrix(g, 1));
  const auto& ids = matrix->node_ids();
  std::vector<testutil::VehicleSpec> vs;
  for (std::size_t i = 0; i < vehicles; ++i)
    vs.push_back({ids[rng.below(ids.size())], 4});
  std::vector<testutil::RequestSpec> rs;
  for (std::size_t i = 0; i < requests; ++i) {
    NodeId o = ids[rng.below(ids.size())], d = ids[rng.below(ids.size())];
    while (d == o) d = ids[rng.below(ids.size())];
    rs.push_back({o, d, rng.below(600)});
  }
  return testutil::make_instance(std::move(matrix), vs, rs, max_delay, 600);
}

}  // namespace

TEST(Insertion, SingleRequestMatchesOracle) {
  darp::Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_instance(rng, 1 + rng.below(3), 1, 100000);
    const Solution sol = solve_ih(inst);
    EXPECT_TRUE(validate_solution(sol, inst).empty());
    // One request: cheapest insertion == global optimum.
    EXPECT_EQ(sol.total_cost, testutil::oracle_optimal_cost(inst).value()) << "trial " << trial;
  }
}

TEST(Insertion, ServesEveryRequestWhenDelayIsLoose) {
  darp::Rng rng(32);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = random_instance(rng, 1 + rng.below(3), 2 + rng.below(5), 1000000);
    const Solution sol = solve_ih(inst);
    const auto violations = validate_solution(sol, inst);
    EXPECT_TRUE(violations.empty()) << "trial " << trial;
  }
}

TEST(Insertion, PrefersCheaperVehicle) {
  // Vehicle 1 already sits at the origin; inserting there costs 60, vehicle 0
  // would pay 120.
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(3),
                                                    {{0, 4}, {1, 4}}, {{1, 2, 0}}, 600);
  const Solution sol = solve_ih(inst);
  EXPECT_TRUE(sol.routes[0].stops.empty());
  ASSERT_EQ(sol.routes[1].stops.size(), 2u);
  EXPECT_EQ(sol.total_cost, 60u);
}

TEST(Insertion, TieBreaksToLowestVehicleId) {
  // Both vehicles are symmetric; the first enumerated (lower id) must win.
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(3),
                                                    {{1, 4}, {1, 4}}, {{1, 2, 0}}, 600);
  const Solution sol = solve_ih(inst);
  EXPECT_EQ(sol.routes[0].stops.size(), 2u);
  EXPECT_TRUE(sol.routes[1].stops.empty());
}

TEST(Insertion, PoolsRidesAlongTheLine) {
  // Two same-direction requests; one vehicle can chain them cheaper than the
  // naive back-and-forth.
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(5), {{0, 4}},
                                                    {{0, 4, 0}, {1, 3, 0}}, 100000);
  const Solution sol = solve_ih(inst);
  EXPECT_TRUE(validate_solution(sol, inst).empty());
  // p0 (node 0), p1 (1), d1 (3), d0 (4): pure forward sweep, 240 s.
  EXPECT_EQ(sol.total_cost, 240u);
  EXPECT_EQ(sol.routes[0].stops,
            (std::vector<Stop>{pickup(0), pickup(1), dropoff(1), dropoff(0)}));
}

TEST(Insertion, RunInsertionReportsUnserved) {
  // Tight delay: vehicle 0 can reach request 0 in time but nothing can serve
  // request 1 at the far end.
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(6), {{0, 4}},
                                                    {{0, 1, 0}, {5, 4, 0}}, 30);
  const auto out = run_insertion(inst);
  EXPECT_EQ(out.solution.routes[0].stops.size(), 2u);
  ASSERT_EQ(out.unserved.size(), 1u);
  EXPECT_EQ(out.unserved[0], 1u);
}

TEST(Insertion, SolveThrowsWithDiagnostics) {
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(6), {{0, 4}},
                                                    {{0, 1, 0}, {5, 4, 0}}, 30);
  try {
    solve_ih(inst);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("request 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("vehicle 0"), std::string::npos) << msg;
  }
}

TEST(Insertion, DeterministicAcrossRuns) {
  darp::Rng rng(33);
  const Instance inst = random_instance(rng, 3, 8, 100000);
  const Solution a = solve_ih(inst);
  const Solution b = solve_ih(inst);
  EXPECT_EQ(a.total_cost, b.total_cost);
  for (std::size_t i = 0; i < a.routes.size(); ++i)
    EXPECT_EQ(a.routes[i].stops, b.routes[i].stops);
}

TEST(Insertion, CostMatchesRecomputation) {
  darp::Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = random_instance(rng, 2, 6, 100000);
    const Solution sol = solve_ih(inst);
    Seconds total = 0;
    for (const Route& r : sol.routes) total += route_cost(r, inst);
    EXPECT_EQ(sol.total_cost, total);
  }
}
