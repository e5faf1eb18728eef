#include "darp/travel_time_matrix.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "test_util.hpp"

using namespace darp;
namespace fs = std::filesystem;

TEST(Matrix, ConstructionAndLookup) {
  const TravelTimeMatrix m({10, 20}, {0, 5, 7, 0});
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at(10, 20), 5u);
  EXPECT_EQ(m.at(20, 10), 7u);
  EXPECT_EQ(m.at(10, 10), 0u);
  EXPECT_EQ(m.at_index(0, 1), 5u);
  EXPECT_EQ(m.index_of(20), 1u);
  EXPECT_TRUE(m.has_node(10));
  EXPECT_FALSE(m.has_node(15));
  EXPECT_THROW(m.at(10, 99), ValidationError);
  EXPECT_EQ(travel_time(m, 20, 10), 7u);
}

TEST(Matrix, RejectsBadConstruction) {
  EXPECT_THROW(TravelTimeMatrix({1, 2}, {0, 1, 2}), ValidationError);       // size
  EXPECT_THROW(TravelTimeMatrix({1, 1}, {0, 1, 1, 0}), ValidationError);    // dup id
  EXPECT_THROW(TravelTimeMatrix({1, 2}, {3, 1, 1, 0}), ValidationError);    // diagonal
}

TEST(Matrix, DijkstraMatchesBellmanFordOracle) {
  darp::Rng rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    const RoadGraph g = testutil::random_scc_graph(rng, 30);
    const TravelTimeMatrix m = compute_travel_time_matrix(g, 1);
    for (const RoadNode& src : g.nodes()) {
      const auto oracle = testutil::bellman_ford(g, src.id);
      for (const RoadNode& dst : g.nodes())
        ASSERT_EQ(m.at(src.id, dst.id), oracle.at(dst.id))
            << "trial " << trial << " " << src.id << "->" << dst.id;
    }
  }
}

TEST(Matrix, LineGraphDistances) {
  const TravelTimeMatrix m = compute_travel_time_matrix(testutil::line_graph(4, 60), 1);
  EXPECT_EQ(m.at(0, 3), 180u);
  EXPECT_EQ(m.at(3, 0), 180u);
  EXPECT_EQ(m.at(1, 2), 60u);
  EXPECT_EQ(m.at(2, 2), 0u);
}

TEST(Matrix, ThreadCountDoesNotChangeResult) {
  darp::Rng rng(99);
  const RoadGraph g = testutil::random_scc_graph(rng, 40);
  const TravelTimeMatrix a = compute_travel_time_matrix(g, 1);
  const TravelTimeMatrix b = compute_travel_time_matrix(g, 4);
  EXPECT_EQ(a, b);
}

TEST(Matrix, DisconnectedGraphThrows) {
  // 0 -> 1 with no way back.
  const RoadGraph g({{0, {}}, {1, {}}}, {{0, 1, 10, 1, 10}});
  EXPECT_THROW(compute_travel_time_matrix(g, 1), ValidationError);
}

TEST(MatrixIo, RoundTripAndByteStability) {
  darp::Rng rng(7);
  const RoadGraph g = testutil::random_scc_graph(rng, 20);
  const TravelTimeMatrix m = compute_travel_time_matrix(g, 1);

  const fs::path p1 = fs::temp_directory_path() / "m1.matrix";
  const fs::path p2 = fs::temp_directory_path() / "m2.matrix";
  write_matrix(m, p1);
  write_matrix(m, p2);

  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  EXPECT_EQ(b1, b2);
  EXPECT_EQ(b1.substr(0, 4), "DTTM");

  const TravelTimeMatrix back = read_matrix(p1);
  EXPECT_EQ(back, m);
}

TEST(MatrixIo, Errors) {
  const fs::path dir = fs::temp_directory_path();
  EXPECT_THROW(read_matrix(dir / "nope.matrix"), IoError);

  {
    std::ofstream out(dir / "bad_magic.matrix", std::ios::binary);
    out << "NOPE";
  }
  EXPECT_THROW(read_matrix(dir / "bad_magic.matrix"), ParseError);

  const TravelTimeMatrix m({1, 2}, {0, 4, 6, 0});
  write_matrix(m, dir / "ok.matrix");
  {
    std::ifstream in(dir / "ok.matrix", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream out(dir / "trunc.matrix", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 3));
  }
  EXPECT_THROW(read_matrix(dir / "trunc.matrix"), ParseError);
  {
    std::ifstream in(dir / "ok.matrix", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    bytes += '\0';
    std::ofstream out(dir / "extra.matrix", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  EXPECT_THROW(read_matrix(dir / "extra.matrix"), ParseError);
}
