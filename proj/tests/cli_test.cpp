#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string command = std::string(BDTEST_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string value_of(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bdtest_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, Generate) {
  auto r = cli("generate 'grid(10,10)' --out " + path("g.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(slurp(path("g.txt")).substr(0, 6), "100 4\n");
  EXPECT_EQ(value_of(r.out, "n"), "100");
  r = cli("generate 'cycle(12)'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 13);
  EXPECT_EQ(cli("generate 'cycle(12'").code, 3);
  EXPECT_EQ(cli("generate").code, 3);
  EXPECT_EQ(cli("frobnicate").code, 3);
}

TEST_F(Cli, Stats) {
  EXPECT_EQ(value_of(cli("stats 'cycle(12)' --radius 1").out, "support"), "1");
  EXPECT_EQ(value_of(cli("stats 'path(12)' --radius 1").out, "support"), "2");
  EXPECT_EQ(value_of(cli("stats 'grid(5,5)' --radius 0").out, "support"), "1");
  EXPECT_EQ(cli("stats " + path("missing.txt")).code, 3);
}

TEST_F(Cli, Rho) {
  EXPECT_EQ(value_of(cli("rho 'cycle(12)' 'cycle(12)' -r 1").out, "rho"), "0");
  EXPECT_EQ(value_of(cli("rho 'cycle(12)' 'path(12)' -r 1").out, "rho"), "0.3333333333");
  EXPECT_EQ(value_of(cli("rho 'cycle(12)' 'cycle(24)' -r 2").out, "rho"), "0");
}

TEST_F(Cli, Partition) {
  EXPECT_EQ(value_of(cli("partition 'cycle(9)' --k 3 --mode exact").out, "cut_size"), "3");
  EXPECT_EQ(value_of(cli("partition 'union_copies(complete(3),5)' --k 3").out, "cut_size"), "0");
  EXPECT_EQ(cli("partition 'grid(100,100)' --k 3 --mode exact").code, 3);
}

TEST_F(Cli, CutExperimentIsReproducible) {
  const std::string args = "cut-experiment 'grid(10,10)' --k 4 --trials 10 --seed 3 --jobs 2 --out ";
  EXPECT_EQ(cli(args + path("a.csv")).code, 0);
  EXPECT_EQ(cli(args + path("b.csv")).code, 0);
  const auto a = slurp(path("a.csv"));
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_EQ(a.substr(0, a.find('\n')), "trial,seed,cut_size,boundary_edges,leftover_edges,uncovered,selected,max_component");
  const auto t = cli("cut-experiment 'union_copies(complete(3),10)' --k 3 --eps 0.1 --trials 5 --out " + path("t.csv"));
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(value_of(t.out, "mean"), "0");
}

TEST_F(Cli, TransferExperiment) {
  const auto r = cli("transfer-experiment 'cycle(12)' 'cycle(24)' --k 2 --trials 50 --out " + path("t.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "rho_r"), "0");
  EXPECT_EQ(value_of(r.out, "within"), "yes");
}

TEST_F(Cli, ConfigFillsMissingOptions) {
  std::ofstream(path("cfg.json")) << R"({"k": 4, "trials": 7, "seed": 11})";
  auto r = cli("--config " + path("cfg.json") + " cut-experiment 'grid(8,8)' --out " + path("c.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "trials"), "7");
  r = cli("--config " + path("cfg.json") + " cut-experiment 'grid(8,8)' --trials 3 --out " + path("c.csv"));
  EXPECT_EQ(value_of(r.out, "trials"), "3");
  std::ofstream(path("bad.json")) << "{";
  EXPECT_EQ(cli("--config " + path("bad.json") + " stats 'cycle(5)'").code, 3);
}

TEST_F(Cli, TestReportsWilsonInterval) {
  const std::string profile = std::string(BDTEST_DATA_DIR) + "/profiles/planarity_eps0.1_d4.json";
  const auto r = cli("test 'grid(20,20)' --profile " + profile + " --trials 10 --out " + path("v.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "trials"), "10");
  EXPECT_FALSE(value_of(r.out, "wilson95").empty());
  const auto csv = slurp(path("v.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,seed,decision,phase,queries_used,distance,nearest,witness");
  EXPECT_EQ(cli("test 'grid(20,20)' --profile " + path("none.json")).code, 3);
}

TEST_F(Cli, CalibrateEmptyCorpusFails) {
  for (const char* part : {"net", "accept", "reject"}) fs::create_directories(dir_ / "corpus" / part);
  EXPECT_EQ(cli("calibrate " + path("corpus") + " --eps 0.1").code, 1);
}

}  // namespace
