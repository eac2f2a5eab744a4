#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(DIVBANDIT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("divbandit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kConfigs = DIVBANDIT_CONFIG_DIR;

}  // namespace

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli(""), 2);
  EXPECT_EQ(cli("run --no-such-flag"), 2);
}

TEST(Cli, MalformedConfigIsConfigError) {
  const auto dir = scratch("bad");
  std::ofstream(dir / "bad.ini") << "[instance]\nmeans = 1, banana\nb = 0.5\n";
  EXPECT_EQ(cli("run --config " + (dir / "bad.ini").string() + " --out " + dir.string()), 2);
  std::ofstream(dir / "typo.ini") << "[instance]\nmeans = 1, 0\nb = 0.5\n[run]\nhorizon = 5\n";
  EXPECT_EQ(cli("run --config " + (dir / "typo.ini").string() + " --out " + dir.string()), 2);
  EXPECT_EQ(cli("run --config " + (dir / "missing.ini").string()), 2);
  EXPECT_EQ(cli("run --out " + dir.string()), 2);
}

TEST(Cli, VerifyLemma1) {
  const auto dir = scratch("lemma1");
  EXPECT_EQ(cli("verify-lemma1 --max-k 4 --max-t 16 --out " + dir.string()), 0);
  const std::string csv = slurp(dir / "lemma1.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "K,T,b,max_lhs,rhs,slack");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 15 * 4);
  EXPECT_EQ(cli("verify-lemma1 --max-k 5 --out " + dir.string()), 2);
}

TEST(Cli, VerifyConcentrationReportsTwoAsAnomaly) {
  const auto dir = scratch("conc");
  EXPECT_EQ(cli("verify-concentration --t 3..200 --trials 2000 --out " + dir.string()), 0);
  EXPECT_EQ(cli("verify-concentration --t 2..20 --trials 2000 --out " + dir.string()), 0);
  const std::string csv = slurp(dir / "spectral.csv");
  EXPECT_NE(csv.find("\n2,1.1715728752538099,1.0397207708399179,0\n"), std::string::npos) << csv.substr(0, 200);
  EXPECT_TRUE(fs::exists(dir / "tail.csv"));
}

TEST(Cli, RunWritesTracesAndSummaryDeterministically) {
  const auto a = scratch("run_a");
  const auto b = scratch("run_b");
  const std::string cfg = kConfigs + "/se_two_arm.ini";
  ASSERT_EQ(cli("run --config " + cfg + " --out " + a.string()), 0);
  ASSERT_EQ(cli("run --config " + cfg + " --out " + b.string()), 0);
  for (const char* f : {"summary.csv", "trace_0.csv", "trace_7.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Cli, SweepAndEstimate) {
  const auto dir = scratch("sweep");
  const std::string cfg = kConfigs + "/se_two_arm.ini";
  EXPECT_EQ(cli("sweep --config " + cfg + " --axis T --values 100,200,400 --out " + dir.string()), 0);
  const std::string csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(cli("sweep --config " + cfg + " --axis Q --values 1,2 --out " + dir.string()), 2);
  EXPECT_EQ(cli("sweep --config " + cfg + " --axis T --values 400,100 --out " + dir.string()), 2);
  EXPECT_EQ(cli("estimate-b --config " + kConfigs + "/estimate_b.ini --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "b_estimate.csv"));
}
