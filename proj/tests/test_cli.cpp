#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using orbitgrowth::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("orbitgrowth_cli_" + name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, KExact) {
  const auto r = run({"k-exact", "--set", "3,7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "269/576\n");
  EXPECT_EQ(run({"k-exact", "--orders", "3"}).out, "17/24\n");
}

TEST(Cli, Order) { EXPECT_EQ(run({"order", "--prime", "233"}).out, "29\n"); }

TEST(Cli, SeriesExactEmptySet) {
  const auto spec = write_temp("empty.json", R"({"kind":"explicit_finite","primes":[]})");
  const auto r = run({"series", "--spec", spec.string(), "--n-max", "4", "--mode", "exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n4,19/16,exact,,\n"), std::string::npos) << r.out;
}

TEST(Cli, SeriesThenFitRoundTrip) {
  const auto spec = write_temp("mult3.json", R"({"kind":"multiples_of","ells":[3]})");
  const auto csv = std::filesystem::temp_directory_path() / "orbitgrowth_cli_mult3.csv";
  ASSERT_EQ(run({"series", "--spec", spec.string(), "--n-max", "1000000", "--mode", "dominant", "--out", csv.string()}).code,
            0);
  const auto r = run({"fit", "--in", csv.string(), "--model", "klog"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"model\": \"klog\""), std::string::npos);
}

TEST(Cli, DominantModeNeedsClosedSet) {
  const auto spec = write_temp("co3.json", R"({"kind":"complement_multiples_of","ell":3})");
  EXPECT_EQ(run({"series", "--spec", spec.string(), "--n-max", "100", "--mode", "dominant"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"order"}).code, 2);
  EXPECT_EQ(run({"order", "--prime", "233", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"order", "--prime", "15"}).code, 2);
  EXPECT_EQ(run({"series", "--spec", "/nonexistent.json", "--n-max", "4", "--mode", "exact"}).code, 2);
  EXPECT_EQ(run({"series-transcendental", "--ell", "3", "--terms", "0"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CacheMissExitCode) {
  const auto spec = write_temp("induced.json", R"({"kind":"multiples_of","ells":[3]})");
  setenv("ORBITGROWTH_SEED", "/dev/null", 1);
  const auto r = run({"series", "--spec", spec.string(), "--n-max", "4", "--mode", "exact"});
  unsetenv("ORBITGROWTH_SEED");
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, BudgetExitCode) {
  setenv("ORBITGROWTH_SEED", "/dev/null", 1);
  const auto r = run({"factor", "--exponent", "1061", "--budget", "0.0001"});
  unsetenv("ORBITGROWTH_SEED");
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_NE(r.err.find("cofactor"), std::string::npos);
}

TEST(Cli, FactorPersistsToCacheFile) {
  const auto cache = std::filesystem::temp_directory_path() / "orbitgrowth_cli_cache.jsonl";
  std::filesystem::remove(cache);
  setenv("ORBITGROWTH_SEED", "/dev/null", 1);
  setenv("ORBITGROWTH_CACHE", cache.c_str(), 1);
  const auto r = run({"factor", "--exponent", "29"});
  unsetenv("ORBITGROWTH_CACHE");
  unsetenv("ORBITGROWTH_SEED");
  EXPECT_EQ(r.out, "{\"m\":29,\"factors\":[[233,1],[1103,1],[2089,1]]}\n");
  std::ifstream in(cache);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("{\"m\":29,"), std::string::npos);
}

TEST(Cli, InvariantExitCodeForCorruptCache) {
  const auto cache = write_temp("corrupt.jsonl", "{\"m\":29,\"factors\":[[233,1],[1103,1]]}\n");
  setenv("ORBITGROWTH_CACHE", cache.c_str(), 1);
  const auto r = run({"factor", "--exponent", "29"});
  unsetenv("ORBITGROWTH_CACHE");
  EXPECT_EQ(r.code, 5) << r.err;
  EXPECT_NE(r.err.find("mersenne-factors"), std::string::npos);
  EXPECT_NE(r.err.find(":1:"), std::string::npos);
}

TEST(Cli, ByteIdenticalOutputs) {
  const std::vector<std::string> args{"construct", "rn", "--n-max", "12", "--mode", "perturbed", "--perturbation",
                                      "random", "--seed", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
  const auto spec = write_temp("comp.json", R"({"kind":"composite_numbers"})");
  const std::vector<std::string> series{"--threads", "3", "series", "--spec", spec.string(), "--n-max", "100000",
                                        "--mode", "dominant"};
  const auto a = run(series);
  auto single = series;
  single[1] = "1";
  EXPECT_EQ(a.out, run(single).out);
}

TEST(Cli, GreedyAndTranscendental) {
  const auto g = run({"greedy", "--target", "0.75", "--eps", "0.1"});
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(g.out, "L = {5}\nk_L = 129/160 = 0.80625\n");
  const auto t = run({"series-transcendental", "--ell", "3", "--terms", "3"});
  EXPECT_EQ(t.out.substr(0, t.out.find('\n')), "5551/7992");
}

TEST(Cli, ReproduceReportsAndExitCodes) {
  const auto ok = run({"reproduce", "--theorem", "transcendental"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("[PASS] 9 ", 0), 0u) << ok.out;
  EXPECT_EQ(run({"reproduce", "--theorem", "bogus"}).code, 2);
}

TEST(Cli, SetDensity) {
  const auto spec = write_temp("m3.json", R"({"kind":"induced","order_set":{"kind":"multiples_of","ells":[3]}})");
  const auto r = run({"set-density", "--spec", spec.string(), "--limit", "100000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"closed_under_nat_multiplication\": true"), std::string::npos);
}
