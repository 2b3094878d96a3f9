#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NUMRANGE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) row.push_back(f.empty() ? NAN : std::stod(f));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, RangeJordanCsv) {
  const auto r = run("range --gallery jordan:2 -m 720 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 720U);
  double top = 0.0;
  for (const auto& row : rows) {
    top = std::max(top, row[1]);
    EXPECT_NEAR(std::hypot(row[2], row[3]), 0.5, 1e-12);
  }
  EXPECT_NEAR(top, 0.5, 1e-12);
}

TEST(Cli, RangeOfIdentityFromFile) {
  const std::string path = ::testing::TempDir() + "id3.json";
  std::ofstream(path) << R"({"n":3,"entries":[[1,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[1,0]]})";
  const auto r = run("range --in " + path);
  ASSERT_EQ(r.code, 0);
  for (const auto& row : csv_rows(r.out)) {
    EXPECT_NEAR(row[2], 1.0, 1e-14);
    EXPECT_NEAR(row[3], 0.0, 1e-14);
  }
}

TEST(Cli, RangeSvgHasFourVertexHull) {
  const auto r = run("range --gallery normal:1,i,-1,-i --format svg");
  ASSERT_EQ(r.code, 0);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.out, m, std::regex("<path d=\"([^\"]*)\"")));
  const std::string d = m[1].str();
  EXPECT_EQ(std::count(d.begin(), d.end(), 'L'), 3);
  EXPECT_NE(r.out.find("viewBox=\"0 0 800 800\""), std::string::npos);
}

TEST(Cli, ClassifyVerdicts) {
  EXPECT_EQ(json::parse(run("classify --gallery normal:1,i,-1,-i --lam 1").out)["verdict"], "LinearVertex");
  EXPECT_EQ(json::parse(run("classify --gallery jordan:2 --lam 0.5").out)["verdict"], "SmoothFinite");
  // A polygon vertex: both adjacent edges are straight, and the outward
  // normals run from -pi/2 (the diameter) to pi/64 (the first chord).
  const auto h = json::parse(run("classify --gallery halfdisk:33 --lam 1").out);
  EXPECT_TRUE(h["corner_flag"].get<bool>());
  EXPECT_EQ(h["verdict"], "LinearVertex");
  const double pi = std::acos(-1.0);
  EXPECT_NEAR(h["normal_cone_width"].get<double>(), pi / 2 + pi / 64, 1e-6);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("classify --gallery jordan:2 --lam 0.1").code, 4);
  EXPECT_EQ(run("classify --gallery jordan:2 --lam 5").code, 4);
  EXPECT_EQ(run("range --gallery nope:3").code, 2);
  EXPECT_EQ(run("range --in /nonexistent.json").code, 2);
  EXPECT_EQ(run("range").code, 2);
  EXPECT_EQ(run("range --gallery jordan:2 -m 4").code, 2);
  EXPECT_EQ(run("classify --gallery jordan:2 --lam x").code, 2);
  EXPECT_EQ(run("range --gallery jordan:2 --format pdf").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  const std::string bad = ::testing::TempDir() + "bad.json";
  std::ofstream(bad) << R"({"n":2,"entries":[[1,0]]})";
  EXPECT_EQ(run("range --in " + bad).code, 2);
}

TEST(Cli, ReduceCertificate) {
  const auto r = run("reduce --gallery normal:2,0 --lam 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["dimension"], 1);
  EXPECT_LE(j["max_residual"].get<double>(), 1e-10);
  const auto corners = json::parse(run("reduce --gallery normal:1,i,-1,-i").out);
  EXPECT_EQ(corners.size(), 4U);
}

TEST(Cli, AndersonReports) {
  const auto r = run("anderson --m 5,9,17,33");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 4U);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_TRUE(j[k]["terminated"].get<bool>());
    if (k > 0) { EXPECT_LT(j[k]["hausdorff_to_halfdisk"].get<double>(), j[k - 1]["hausdorff_to_halfdisk"].get<double>()); }
  }
}

TEST(Cli, JointCertificateAndCloud) {
  const auto r = run("joint --gallery \"normal:1,i,-1;normal:2,0,-2\" --lam 1,2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["certificate"]["dimension"], 1);
  const auto smooth = json::parse(run("joint --gallery \"jordan:2;jordan:2\" --lam 0.5,0.5").out);
  EXPECT_FALSE(smooth["hypothesis_met"].get<bool>());
  const auto cloud = run("joint --gallery \"jordan:2;normal:1,0\" --samples 50");
  EXPECT_EQ(csv_rows(cloud.out).size(), 50U);
}

TEST(Cli, TraceCsv) {
  const auto r = run("trace --gallery \"normal:0/(corner:0,1,(jordan:2))\" --lam 0 --steps 50");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 50U);
  EXPECT_LT(rows.back()[3] + rows.back()[4], 1e-3 * (rows.front()[3] + rows.front()[4]));
}

TEST(Cli, DeterministicOutput) {
  for (const char* args : {"range --gallery random:5 --seed 3", "classify --gallery random:4 --seed 2 --lam 0 --format json",
                           "reduce --gallery corner:0,1,(random:3) --seed 5", "joint --gallery random:3 --samples 100 --seed 9",
                           "trace --gallery jordan:3 --lam 0.70710678118654757 --seed 4"}) {
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, OutFileWrittenAtomically) {
  const std::string path = ::testing::TempDir() + "range.csv";
  std::remove(path.c_str());
  ASSERT_EQ(run("range --gallery jordan:2 --out " + path).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), run("range --gallery jordan:2").out);
  EXPECT_FALSE(std::ifstream(path + ".tmp").good());
}

TEST(Cli, HelpForEveryCommand) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> expect = {
      {"range", {"--in", "--gallery", "--angles", "--tol", "--seed", "--format", "--out", "--scales"}},
      {"classify", {"--lam", "--scales", "--angles"}},
      {"reduce", {"--lam", "--tol"}},
      {"trace", {"--lam", "--steps", "--mode", "--alpha0"}},
      {"anderson", {"--m", "--angles"}},
      {"joint", {"--lam", "--samples"}},
      {"gallery", {"list", "materialize"}},
  };
  for (const auto& [cmd, flags] : expect) {
    const auto r = run(cmd + " --help");
    EXPECT_EQ(r.code, 0) << cmd;
    for (const auto& f : flags) EXPECT_NE(r.out.find(f), std::string::npos) << cmd << " " << f;
  }
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, GalleryMaterialize) {
  const auto j = json::parse(run("gallery materialize --gallery jordan:2").out);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(j["entries"][1], json::array({1.0, 0.0}));
  EXPECT_NE(run("gallery list").out.find("halfdisk"), std::string::npos);
}
