#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct CliRun {
  int status;
  std::string out;
};

CliRun cli(const std::string& args) {
  std::string cmd = std::string(SESHADRI_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), f)) out.append(buf.data(), n);
  int st = pclose(f);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST(Cli, EpsilonMaxBound) {
  CliRun r = cli("epsilon --ring sqrt --e 2 --bundle 2,1");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["kind"], "MaxBound");
  EXPECT_EQ(j["epsilon"]["sqrt"], "4");
  EXPECT_TRUE(j["witnesses"].empty());
}

TEST(Cli, EpsilonSubmaximal) {
  CliRun r = cli("epsilon --ring sqrt --e 2 --t 0 --approx");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["epsilon"], "4/3");
  EXPECT_EQ(j["kind"], "Submaximal");
  EXPECT_NEAR(j["epsilon_approx"].get<double>(), 4.0 / 3, 1e-12);
  bool found = false;
  for (const auto& c : j["curve_class_options"]) found |= c["class"] == "4,0" && c["multiplicity"] == "6";
  EXPECT_TRUE(found);
}

TEST(Cli, ErrorsExitTwo) {
  EXPECT_EQ(cli("epsilon --ring sqrt --e 4 --t 0").status, 2);
  EXPECT_EQ(cli("epsilon --ring sqrt --e 2 --t 1").status, 2);
  EXPECT_EQ(cli("epsilon --ring half --e 7 --t 0").status, 2);
  EXPECT_EQ(cli("nonsense").status, 2);
  EXPECT_EQ(cli("").status, 2);
}

TEST(Cli, Classify) {
  CliRun r = cli("classify --e 33");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(j["no_bad_prime"].get<bool>());
  EXPECT_TRUE(j["agree"].get<bool>());
  EXPECT_EQ(j["repr_A_8B"]["A"], 5);
}

TEST(Cli, Fundamental) {
  CliRun r = cli("fundamental --ring half --e 5 --kmin -1 --kmax 1");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["principal_polarizations"].size(), 3u);
  EXPECT_EQ(j["principal_polarizations"][1]["class"], "1,0");
}

TEST(Cli, CheckEn) {
  CliRun r = cli("check-en --n 2");
  ASSERT_EQ(r.status, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["e"], 33);
  EXPECT_EQ(j["common_point"], "2/7");
  EXPECT_EQ(j["witness"]["lambda1"], "1/4");
  EXPECT_EQ(j["witness"]["lambda2"], "1/3");
}

TEST(Cli, PlotFormats) {
  CliRun js = cli("plot --ring half --e 5 --qmax 10 --format json");
  ASSERT_EQ(js.status, 0);
  EXPECT_TRUE(json::accept(js.out));
  CliRun csv = cli("plot --ring half --e 5 --qmax 10 --format csv");
  ASSERT_EQ(csv.status, 0);
  std::istringstream in(csv.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("#", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line, "lo_a,lo_b,hi_a,hi_b,c0,c1,lambda,certified");
  EXPECT_EQ(cli("plot --ring half --e 5 --qmax 10 --range 1..0").status, 2);
}

TEST(Cli, ScanJsonLines) {
  CliRun r = cli("scan --ring half --e-max 40 --qmax 50");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    json j = json::parse(line);
    EXPECT_TRUE(j["witness"].is_object()) << line;
    ++n;
  }
  EXPECT_EQ(n, 2);  // 17 and 33
  EXPECT_EQ(cli("scan --ring sqrt --e-max 40").status, 2);
}
