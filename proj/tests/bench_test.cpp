#include "darp/bench.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "test_util.hpp"

using namespace darp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunRecord sample_record() {
  RunRecord r;
  r.area = "downtown";
  r.duration_min = 0.5;
  r.delta_min = 3;
  r.method = "vga";
  r.requests = 42;
  r.vehicles = 7;
  r.total_cost_s = 1234;
  r.cost_per_request_s = 1234.0 / 42.0;
  r.wall_time_ms = 99;
  r.status = SolveStatus::optimal;
  return r;
}

// Writes `inst` plus its matrix under `dir`, returns the instance path.
fs::path store_instance(const fs::path& dir, const std::string& stem, Instance inst) {
  fs::create_directories(dir);
  inst.config.area = stem;
  inst.config.matrix_file = stem + ".matrix";
  write_matrix(*inst.matrix, dir / (stem + ".matrix"));
  write_instance(inst, dir / (stem + ".inst"));
  return dir / (stem + ".inst");
}

using StableFields =
    std::tuple<std::string, double, double, std::string, std::uint64_t, std::uint64_t,
               std::optional<Seconds>, std::string>;

StableFields stable(const RunRecord& r) {
  return {r.area,     r.duration_min, r.delta_min,    r.method,
          r.requests, r.vehicles,     r.total_cost_s, to_string(r.status)};
}

}  // namespace

TEST(Records, HeaderIsFixed) {
  EXPECT_STREQ(results_header(),
               "area,duration_min,delta_min,method,requests,vehicles,total_cost_s,"
               "cost_per_request_s,wall_time_ms,status");
}

TEST(Records, FormatAndParseRoundTrip) {
  const fs::path p = fs::temp_directory_path() / "bench_rt.csv";
  RunRecord full = sample_record();
  RunRecord empty;
  empty.area = "uptown";
  empty.duration_min = 16;
  empty.delta_min = 10;
  empty.method = "vga";
  empty.requests = 3;
  empty.vehicles = 2;
  empty.wall_time_ms = 5;
  empty.status = SolveStatus::timeout;

  {
    std::ofstream out(p);
    out << results_header() << "\n" << format_record(full) << "\n"
        << format_record(empty) << "\n";
  }
  const auto records = read_records(p);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].area, "downtown");
  EXPECT_EQ(records[0].duration_min, 0.5);
  EXPECT_EQ(records[0].total_cost_s, std::optional<Seconds>(1234));
  // The CSV keeps 10 significant digits, so parse-back is near-exact.
  EXPECT_NEAR(*records[0].cost_per_request_s, 1234.0 / 42.0, 1e-7);
  EXPECT_EQ(records[0].status, SolveStatus::optimal);
  EXPECT_FALSE(records[1].total_cost_s.has_value());
  EXPECT_FALSE(records[1].cost_per_request_s.has_value());
  EXPECT_EQ(records[1].status, SolveStatus::timeout);

  // Re-serializing what was parsed reproduces the file byte for byte.
  std::string again = std::string(results_header()) + "\n";
  for (const auto& r : records) again += format_record(r) + "\n";
  EXPECT_EQ(again, slurp(p));
}

TEST(Records, ParseStatusVocabulary) {
  EXPECT_EQ(parse_status("optimal"), SolveStatus::optimal);
  EXPECT_EQ(parse_status("feasible"), SolveStatus::feasible);
  EXPECT_EQ(parse_status("timeout"), SolveStatus::timeout);
  EXPECT_EQ(parse_status("error"), SolveStatus::error);
  EXPECT_THROW(parse_status("done"), ParseError);
}

TEST(Records, ReadErrors) {
  EXPECT_THROW(read_records(fs::temp_directory_path() / "no_such.csv"), IoError);
  const fs::path p = fs::temp_directory_path() / "bench_bad.csv";
  std::ofstream(p) << results_header() << "\na,b,c\n";
  EXPECT_THROW(read_records(p), ParseError);
  std::ofstream(p) << results_header() << "\nA,1,3,ih,2,1,10,5,0,finished\n";
  EXPECT_THROW(read_records(p), ParseError);
  std::ofstream(p) << results_header() << "\n";
  EXPECT_TRUE(read_records(p).empty());
}

TEST(RunOne, InsertionHeuristicProducesFeasibleRecord) {
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}},
                                                    {{1, 2, 0}}, 180);
  BenchConfig cfg;
  cfg.solutions_dir = fs::temp_directory_path() / "bench_sols";
  fs::create_directories(cfg.solutions_dir);
  const RunRecord rec = run_one(inst, "somewhere/tiny.inst", "ih", cfg);
  EXPECT_EQ(rec.method, "ih");
  EXPECT_EQ(rec.status, SolveStatus::feasible);
  EXPECT_EQ(rec.requests, 1u);
  EXPECT_EQ(rec.vehicles, 1u);
  EXPECT_EQ(rec.total_cost_s, std::optional<Seconds>(120));
  EXPECT_DOUBLE_EQ(*rec.cost_per_request_s, 120.0);
  ASSERT_TRUE(fs::exists(cfg.solutions_dir / "tiny.ih.sol"));
  const SolutionFile sf = read_solution(cfg.solutions_dir / "tiny.ih.sol", inst);
  EXPECT_EQ(sf.method, "ih");
  EXPECT_EQ(sf.total_cost_s, 120u);
}

TEST(RunOne, VgaProducesOptimalRecord) {
  const Instance inst = testutil::instance_on_graph(
      testutil::line_graph(5), {{0, 4}}, {{0, 4, 0}, {1, 3, 0}}, 100000);
  BenchConfig cfg;
  cfg.solver_threads = 1;
  const RunRecord rec = run_one(inst, "x.inst", "vga", cfg);
  EXPECT_EQ(rec.status, SolveStatus::optimal);
  EXPECT_EQ(rec.total_cost_s, std::optional<Seconds>(240));
}

TEST(RunOne, UnknownMethodBecomesErrorRecord) {
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}},
                                                    {{1, 2, 0}}, 180);
  const RunRecord rec = run_one(inst, "x.inst", "magic", {});
  EXPECT_EQ(rec.status, SolveStatus::error);
  EXPECT_FALSE(rec.total_cost_s.has_value());
  EXPECT_FALSE(rec.cost_per_request_s.has_value());
}

TEST(RunOne, UnservableInstanceBecomesErrorRecord) {
  const Instance inst = testutil::instance_on_graph(testutil::line_graph(6), {{0, 4}},
                                                    {{5, 4, 0}}, 30);
  const RunRecord rec = run_one(inst, "x.inst", "ih", {});
  EXPECT_EQ(rec.status, SolveStatus::error);
  EXPECT_FALSE(rec.total_cost_s.has_value());
}

TEST(RunGrid, RunsEveryMethodPerInstanceAndFilters) {
  const fs::path dir = fs::temp_directory_path() / "bench_grid";
  const auto a = store_instance(
      dir, "cell_a",
      testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}}, {{1, 2, 0}}, 180, 30));
  const auto b = store_instance(
      dir, "cell_b",
      testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}}, {{1, 2, 0}}, 180, 60));

  BenchConfig cfg;
  cfg.solver_threads = 1;
  const auto all = run_grid({a, b}, nullptr, cfg);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[0].area, "cell_a");
  EXPECT_EQ(all[0].method, "ih");
  EXPECT_EQ(all[1].method, "vga");
  EXPECT_EQ(all[2].area, "cell_b");

  ExperimentGrid grid;
  grid.durations_min = {0.5};
  grid.deltas_min = {3};
  const auto filtered = run_grid({a, b}, &grid, cfg);
  ASSERT_EQ(filtered.size(), 2u);  // cell_b (1 min) is off-grid
  EXPECT_EQ(filtered[0].area, "cell_a");
  EXPECT_EQ(filtered[1].area, "cell_a");
}

TEST(RunGrid, UnreadableInstanceBecomesErrorRecord) {
  BenchConfig cfg;
  const auto recs = run_grid({fs::temp_directory_path() / "ghost.inst"}, nullptr, cfg);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].status, SolveStatus::error);
  EXPECT_EQ(recs[1].status, SolveStatus::error);
}

TEST(RunGrid, JobCountDoesNotChangeResults) {
  const fs::path dir = fs::temp_directory_path() / "bench_jobs";
  std::vector<fs::path> paths;
  for (int i = 0; i < 3; ++i)
    paths.push_back(store_instance(
        dir, "j" + std::to_string(i),
        testutil::instance_on_graph(testutil::line_graph(4), {{0, 4}},
                                    {{1, 2, 0}, {0, 3, 5}}, 600, 30)));
  BenchConfig one, many;
  one.solver_threads = many.solver_threads = 1;
  one.jobs = 1;
  many.jobs = 3;
  const auto ra = run_grid(paths, nullptr, one);
  const auto rb = run_grid(paths, nullptr, many);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(stable(ra[i]), stable(rb[i]));
}

TEST(RunGrid, EmitsRecordsAsTheyFinish) {
  const fs::path dir = fs::temp_directory_path() / "bench_emit";
  const auto a = store_instance(
      dir, "emit",
      testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}}, {{1, 2, 0}}, 180, 30));
  BenchConfig cfg;
  cfg.solver_threads = 1;
  std::vector<std::string> seen;
  run_grid({a}, nullptr, cfg,
           [&](const RunRecord& r) { seen.push_back(r.method); });
  EXPECT_EQ(seen, (std::vector<std::string>{"ih", "vga"}));
}

TEST(Tables, CostRatio) {
  auto rec = [](const std::string& area, double dur, double delta,
                const std::string& method, std::optional<Seconds> cost) {
    RunRecord r;
    r.area = area;
    r.duration_min = dur;
    r.delta_min = delta;
    r.method = method;
    r.total_cost_s = cost;
    r.status = cost ? SolveStatus::feasible : SolveStatus::timeout;
    return r;
  };
  const std::vector<RunRecord> records = {
      rec("A", 1, 3, "ih", 120), rec("A", 1, 3, "vga", 100),
      rec("A", 2, 3, "ih", 100), rec("A", 2, 3, "vga", 100),
      rec("B", 1, 3, "ih", 50),  rec("B", 1, 3, "vga", std::nullopt),
  };
  EXPECT_EQ(cost_ratio_table(records),
            "area,duration_min,delta_min,ih_over_vga_percent\n"
            "A,1,3,20.00\n"
            "A,2,3,0.00\n"
            "B,1,3,x\n");
  EXPECT_EQ(cost_ratio_table(records), cost_ratio_table(records));
}

TEST(Tables, CostPerRequestAveragesCells) {
  auto rec = [](const std::string& area, const std::string& method,
                std::optional<double> cpr) {
    RunRecord r;
    r.area = area;
    r.duration_min = 1;
    r.delta_min = 5;
    r.method = method;
    r.cost_per_request_s = cpr;
    return r;
  };
  const std::vector<RunRecord> records = {
      rec("A", "ih", 100.0),
      rec("A", "ih", 140.0),
      rec("A", "vga", std::nullopt),
  };
  EXPECT_EQ(cost_per_request_table(records),
            "area,duration_min,delta_min,method,cost_per_request_s\n"
            "A,1,5,ih,120\n"
            "A,1,5,vga,x\n");
}

TEST(Tables, OccupancyReport) {
  const fs::path dir = fs::temp_directory_path() / "bench_occ";
  fs::create_directories(dir);
  Instance inst = testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}},
                                              {{1, 2, 0}}, 180);
  inst.config.matrix_file = "occ.matrix";
  write_matrix(*inst.matrix, dir / "occ.matrix");
  write_instance(inst, dir / "occ.inst");
  Solution sol;
  sol.routes.push_back({0, {pickup(0), dropoff(0)}, {60, 120}});
  sol.total_cost = 120;
  write_solution(sol, "occ.inst", "ih", 1, dir / "occ.sol");

  const std::string report = occupancy_report({dir / "occ.sol"});
  const std::string path = (dir / "occ.sol").string();
  EXPECT_EQ(report, "solution,occupancy,seconds,share_percent\n" +
                        path + ",0,60,50.00\n" +
                        path + ",1,60,50.00\n" +
                        path + ",2,0,0.00\n" +
                        path + ",3,0,0.00\n" +
                        path + ",4,0,0.00\n");
}

TEST(Tables, OccupancyReportRejectsInvalidSolution) {
  const fs::path dir = fs::temp_directory_path() / "bench_occ_bad";
  fs::create_directories(dir);
  Instance inst = testutil::instance_on_graph(testutil::line_graph(3), {{0, 4}},
                                              {{1, 2, 0}}, 180);
  inst.config.matrix_file = "bad.matrix";
  write_matrix(*inst.matrix, dir / "bad.matrix");
  write_instance(inst, dir / "bad.inst");
  Solution sol;  // leaves the request unserved
  sol.routes.push_back({0, {}, {}});
  sol.total_cost = 0;
  write_solution(sol, "bad.inst", "ih", 1, dir / "bad.sol");
  EXPECT_THROW(occupancy_report({dir / "bad.sol"}), ValidationError);
}
