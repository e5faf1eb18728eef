// End-to-end tests driving the built binary (path baked in as DARP_CLI_PATH)
// through generate / solve / validate / bench / report, including exit codes
// and byte-level reproducibility.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "darp/darp.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CmdResult run_cli(const fs::path& cwd, const std::string& argline) {
  const fs::path so = cwd / "_stdout.txt", se = cwd / "_stderr.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" DARP_CLI_PATH "' " +
                          argline + " > '" + so.string() + "' 2> '" + se.string() + "'";
  const int rc = std::system(cmd.c_str());
  CmdResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(so);
  res.err = slurp(se);
  return res;
}

// Complete 4-node digraph, every arc 600 m at 10 m/s (60 s): nothing is
// contractable and the matrix is all-60s off the diagonal.
const char* kGraph =
    "nodes 4\n"
    "node 0\nnode 1\nnode 2\nnode 3\n"
    "edges 12\n"
    "edge 0 1 600 10\nedge 1 0 600 10\n"
    "edge 0 2 600 10\nedge 2 0 600 10\n"
    "edge 0 3 600 10\nedge 3 0 600 10\n"
    "edge 1 2 600 10\nedge 2 1 600 10\n"
    "edge 1 3 600 10\nedge 3 1 600 10\n"
    "edge 2 3 600 10\nedge 3 2 600 10\n";

const char* kZones = "zone 1 0 1\nzone 2 2 3\n";

// Epoch 2022-04-05T18:00:00Z = 1649181600. Five records land in the 2-minute
// window, three earlier ones feed the vehicle lookback pool.
const char* kDemand =
    "record n:0 n:2 t:1649181610\n"
    "record z:1 z:2 t:1649181630\n"
    "record n:3 z:1 t:1649181650\n"
    "record n:1 n:3 t:1649181700\n"
    "record z:1 z:2 i:1649181600-1649181720\n"
    "record n:0 n:1 t:1649180000\n"
    "record n:2 n:3 t:1649180500\n"
    "record z:2 n:0 t:1649181000\n";

class CliTest : public ::testing::Test {
 protected:
  static fs::path base() { return fs::temp_directory_path() / "darp_cli_test"; }

  static void SetUpTestSuite() {
    fs::remove_all(base());
    fs::create_directories(base());
  }

  fs::path fresh_dir(const std::string& name) {
    const fs::path dir = base() / name;
    fs::create_directories(dir);
    std::ofstream(dir / "graph.txt") << kGraph;
    std::ofstream(dir / "zones.txt") << kZones;
    std::ofstream(dir / "demand.txt") << kDemand;
    return dir;
  }

  std::string generate_args(const std::string& out, std::uint64_t seed) {
    return "generate --graph graph.txt --zones zones.txt --demand demand.txt "
           "--start 2022-04-05T18:00:00Z --duration 2 --max-delay 3 --lookback 60 "
           "--capacity 4 --seed " + std::to_string(seed) + " --out " + out;
  }
};

std::string field_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return "";
  const auto start = pos + key.size() + 1;
  const auto end = text.find('\n', start);
  return text.substr(start, end - start);
}

}  // namespace

TEST_F(CliTest, GenerateSolveValidateRoundTrip) {
  const fs::path dir = fresh_dir("roundtrip");
  const CmdResult gen = run_cli(dir, generate_args("city.inst", 7));
  ASSERT_EQ(gen.exit_code, 0) << gen.err;
  EXPECT_TRUE(fs::exists(dir / "city.inst"));
  EXPECT_TRUE(fs::exists(dir / "city.matrix"));
  EXPECT_NE(gen.out.find("requests"), std::string::npos);

  const darp::Instance inst = darp::read_instance(dir / "city.inst");
  EXPECT_EQ(inst.requests.size(), 5u);
  EXPECT_GE(inst.vehicles.size(), 2u);
  EXPECT_EQ(inst.config.max_delay_s, 180u);
  EXPECT_EQ(inst.config.duration_s, 120u);

  const CmdResult ih =
      run_cli(dir, "solve --method ih --instance city.inst --out ih.sol");
  ASSERT_EQ(ih.exit_code, 0) << ih.err;
  EXPECT_EQ(field_after(ih.out, "status"), "feasible");

  const CmdResult vga =
      run_cli(dir, "solve --method vga --instance city.inst --threads 1 --out vga.sol");
  ASSERT_EQ(vga.exit_code, 0) << vga.err;
  EXPECT_EQ(field_after(vga.out, "status"), "optimal");

  const auto ih_cost = std::stoull(field_after(ih.out, "total_cost_s"));
  const auto vga_cost = std::stoull(field_after(vga.out, "total_cost_s"));
  EXPECT_GE(ih_cost, vga_cost);

  for (const char* sol : {"ih.sol", "vga.sol"}) {
    const CmdResult val = run_cli(dir, std::string("validate --solution ") + sol);
    EXPECT_EQ(val.exit_code, 0) << val.err;
    EXPECT_NE(val.out.find("valid"), std::string::npos);
  }
  const CmdResult vi = run_cli(dir, "validate --instance city.inst");
  EXPECT_EQ(vi.exit_code, 0);
}

TEST_F(CliTest, SameSeedReproducesFilesByteForByte) {
  const fs::path d1 = fresh_dir("repro1");
  const fs::path d2 = fresh_dir("repro2");
  ASSERT_EQ(run_cli(d1, generate_args("city.inst", 99)).exit_code, 0);
  ASSERT_EQ(run_cli(d2, generate_args("city.inst", 99)).exit_code, 0);
  EXPECT_EQ(slurp(d1 / "city.inst"), slurp(d2 / "city.inst"));
  EXPECT_EQ(slurp(d1 / "city.matrix"), slurp(d2 / "city.matrix"));

  const fs::path d3 = fresh_dir("repro3");
  ASSERT_EQ(run_cli(d3, generate_args("city.inst", 100)).exit_code, 0);
  EXPECT_NE(slurp(d1 / "city.inst"), slurp(d3 / "city.inst"));
}

TEST_F(CliTest, GlobalSeedFlagMatchesSubcommandSeed) {
  const fs::path d1 = fresh_dir("gseed1");
  const fs::path d2 = fresh_dir("gseed2");
  ASSERT_EQ(run_cli(d1, generate_args("city.inst", 11)).exit_code, 0);
  ASSERT_EQ(run_cli(d2, "--seed 11 generate --graph graph.txt --zones zones.txt "
                        "--demand demand.txt --start 2022-04-05T18:00:00Z --duration 2 "
                        "--max-delay 3 --lookback 60 --capacity 4 --out city.inst")
                .exit_code,
            0);
  EXPECT_EQ(slurp(d1 / "city.inst"), slurp(d2 / "city.inst"));
}

TEST_F(CliTest, SolveRoutesAreDeterministic) {
  const fs::path dir = fresh_dir("deterministic");
  ASSERT_EQ(run_cli(dir, generate_args("city.inst", 3)).exit_code, 0);
  ASSERT_EQ(
      run_cli(dir, "solve --method vga --instance city.inst --threads 1 --out a.sol")
          .exit_code,
      0);
  ASSERT_EQ(
      run_cli(dir, "solve --method vga --instance city.inst --threads 1 --out b.sol")
          .exit_code,
      0);
  // Identical except the wall-clock line.
  auto strip_wall = [](std::string s) {
    const auto pos = s.find("wall_time_ms");
    const auto end = s.find('\n', pos);
    return s.erase(pos, end - pos);
  };
  EXPECT_EQ(strip_wall(slurp(dir / "a.sol")), strip_wall(slurp(dir / "b.sol")));
}

TEST_F(CliTest, UsageErrorsExitOne) {
  const fs::path dir = fresh_dir("usage");
  EXPECT_EQ(run_cli(dir, "conjure").exit_code, 1);
  EXPECT_EQ(run_cli(dir, "solve --instance missing-method.inst").exit_code, 1);
  EXPECT_EQ(run_cli(dir, "validate").exit_code, 1);
  EXPECT_EQ(run_cli(dir, "report --kind nonsense --results r.csv").exit_code, 1);

  ASSERT_EQ(run_cli(dir, generate_args("city.inst", 1)).exit_code, 0);
  EXPECT_EQ(run_cli(dir, "solve --method magic --instance city.inst").exit_code, 1);
}

TEST_F(CliTest, ValidationFailuresExitTwo) {
  const fs::path dir = fresh_dir("validation");
  EXPECT_EQ(run_cli(dir, "validate --instance nowhere.inst").exit_code, 2);

  // A parseable solution that leaves the request unserved.
  darp::Instance bad = testutil::instance_on_graph(testutil::line_graph(6), {{0, 4}},
                                                   {{5, 4, 0}}, 30);
  bad.config.matrix_file = "bad.matrix";
  darp::write_matrix(*bad.matrix, dir / "bad.matrix");
  darp::write_instance(bad, dir / "bad.inst");
  std::ofstream(dir / "empty.sol")
      << "[solution]\ninstance = bad.inst\nmethod = ih\ntotal_cost_s = 0\n"
         "wall_time_ms = 0\nroute 0\n";
  const CmdResult val = run_cli(dir, "validate --solution empty.sol");
  EXPECT_EQ(val.exit_code, 2);
  EXPECT_NE(val.out.find("invalid"), std::string::npos);
  EXPECT_NE(val.err.find("unserved"), std::string::npos);
}

TEST_F(CliTest, SolverFailuresExitThree) {
  const fs::path dir = fresh_dir("solver");
  darp::Instance bad = testutil::instance_on_graph(testutil::line_graph(6), {{0, 4}},
                                                   {{5, 4, 0}}, 30);
  bad.config.matrix_file = "bad.matrix";
  darp::write_matrix(*bad.matrix, dir / "bad.matrix");
  darp::write_instance(bad, dir / "bad.inst");

  const CmdResult ih = run_cli(dir, "solve --method ih --instance bad.inst");
  EXPECT_EQ(ih.exit_code, 3);
  EXPECT_NE(ih.err.find("solver error"), std::string::npos);
  EXPECT_EQ(run_cli(dir, "solve --method vga --instance bad.inst --threads 1").exit_code, 3);
}

TEST_F(CliTest, BenchAppendsRecordsAndReportsDerive) {
  const fs::path dir = fresh_dir("bench");
  ASSERT_EQ(run_cli(dir, generate_args("city.inst", 5)).exit_code, 0);

  const CmdResult b1 = run_cli(
      dir, "bench --instances city.inst --out results.csv --threads 1 "
           "--solutions-dir sols");
  ASSERT_EQ(b1.exit_code, 0) << b1.err;
  {
    const std::string csv = slurp(dir / "results.csv");
    EXPECT_EQ(csv.rfind(darp::results_header(), 0), 0u);  // starts with header
    EXPECT_NE(csv.find(",ih,"), std::string::npos);
    EXPECT_NE(csv.find(",vga,"), std::string::npos);
    EXPECT_EQ(darp::read_records(dir / "results.csv").size(), 2u);
  }
  EXPECT_TRUE(fs::exists(dir / "sols" / "city.ih.sol"));
  EXPECT_TRUE(fs::exists(dir / "sols" / "city.vga.sol"));

  // Appending: a second bench run adds rows but no second header.
  ASSERT_EQ(run_cli(dir, "bench --instances city.inst --out results.csv --threads 1")
                .exit_code,
            0);
  EXPECT_EQ(darp::read_records(dir / "results.csv").size(), 4u);

  const CmdResult ratio =
      run_cli(dir, "report --kind ratio --results results.csv --out ratio.csv");
  ASSERT_EQ(ratio.exit_code, 0) << ratio.err;
  const std::string table = slurp(dir / "ratio.csv");
  EXPECT_EQ(table.rfind("area,duration_min,delta_min,ih_over_vga_percent", 0), 0u);
  EXPECT_NE(table.find("city,2,3,"), std::string::npos);

  const CmdResult cpr = run_cli(dir, "report --kind cost-per-request --results results.csv");
  ASSERT_EQ(cpr.exit_code, 0);
  EXPECT_EQ(cpr.out.rfind("area,duration_min,delta_min,method,cost_per_request_s", 0), 0u);

  const CmdResult occ =
      run_cli(dir, "report --kind occupancy --solutions sols/city.vga.sol");
  ASSERT_EQ(occ.exit_code, 0) << occ.err;
  EXPECT_EQ(occ.out.rfind("solution,occupancy,seconds,share_percent", 0), 0u);
  EXPECT_NE(occ.out.find(",0,"), std::string::npos);
}

TEST_F(CliTest, BenchGridFilterSkipsOffGridInstances) {
  const fs::path dir = fresh_dir("grid");
  ASSERT_EQ(run_cli(dir, generate_args("city.inst", 5)).exit_code, 0);
  // duration 2 min / delta 3 min sit on the default grid; a filter that
  // excludes them yields zero records, --all brings them back.
  const CmdResult none = run_cli(
      dir, "bench --instances city.inst --out none.csv --durations 5 --threads 1");
  ASSERT_EQ(none.exit_code, 0) << none.err;
  EXPECT_TRUE(darp::read_records(dir / "none.csv").empty());

  const CmdResult all = run_cli(
      dir, "bench --instances city.inst --out all.csv --durations 5 --all --threads 1");
  ASSERT_EQ(all.exit_code, 0) << all.err;
  EXPECT_EQ(darp::read_records(dir / "all.csv").size(), 2u);
}
