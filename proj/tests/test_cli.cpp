#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support/helpers.hpp"

using namespace qapdist;
using testing_support::frac;

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qapdist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qapdist_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SpikeMeanIsZero) {
  const auto g = run({"gen", "--kind", "spike", "--n", "8", "-o", path("inst.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto m = run({"mean", path("inst.json")});
  EXPECT_EQ(m.code, 0);
  EXPECT_EQ(m.out, "0\n");
  const auto j = run({"mean", path("inst.json"), "--format", "json"});
  EXPECT_EQ(Json::parse(j.out)["mean"], "0");
}

TEST_F(Cli, SpikeConeIsSymmetricR2e) {
  ASSERT_EQ(run({"gen", "--kind", "spike", "--n", "8", "-o", path("inst.json")}).code, 0);
  const auto c = run({"cone", path("inst.json"), "--format", "json"});
  ASSERT_EQ(c.code, 0) << c.err;
  const Json j = Json::parse(c.out);
  EXPECT_EQ(j["kind"], "symmetric");
  EXPECT_EQ(j["verdict"], "member");
  EXPECT_EQ(j["regime"], "symmetric");
  EXPECT_EQ(j["ray_weights"]["r2e"], "1");
  EXPECT_EQ(j["ray_weights"]["r1"], "0");
  const auto t = run({"cone", path("inst.json")});
  EXPECT_NE(t.out.find("verdict: member"), std::string::npos);
  EXPECT_NE(t.out.find("r2e=1"), std::string::npos);
}

TEST_F(Cli, VerifyRingTheoremOnTsp) {
  const auto v = run({"verify", "--theorem", "2.1", "--n", "7", "--kind", "sym-cycle", "--seed", "5"});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("seed: 5"), std::string::npos);
  EXPECT_NE(v.out.find("result: pass"), std::string::npos);
  EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
  const auto j = run({"verify", "--theorem", "2.1", "--n", "7", "--kind", "sym-cycle", "--seed", "5",
                      "--format", "json"});
  ASSERT_EQ(j.code, 0);
  const Json parsed = Json::parse(j.out);
  EXPECT_TRUE(parsed["pass"].get<bool>());
  EXPECT_EQ(parsed["seed"], 5);
  EXPECT_EQ(parsed["profile"]["rings"].size(), 8u);
}

TEST_F(Cli, VerifyTailTheorems) {
  for (const auto& [thm, kind] : std::vector<std::pair<std::string, std::string>>{
           {"2.3", "sym-cycle"}, {"3.1", "dir-cycle"}, {"5.1", "random"}}) {
    const auto v = run({"verify", "--theorem", thm, "--n", "8", "--kind", kind, "--format", "json"});
    ASSERT_EQ(v.code, 0) << thm << v.err;
    const Json j = Json::parse(v.out);
    EXPECT_EQ(j["theorem"], thm);
    EXPECT_TRUE(j["pass"].get<bool>());
  }
  const auto wrong = run({"verify", "--theorem", "2.3", "--n", "8", "--kind", "random"});
  EXPECT_EQ(wrong.code, 2);
  EXPECT_NE(wrong.err.find("error"), std::string::npos);
  EXPECT_EQ(run({"verify", "--theorem", "5.1", "--n", "8", "--kind", "random", "--k", "4"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "5.1", "--n", "9", "--kind", "random"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "4.4", "--n", "8", "--kind", "random"}).code, 2);
  EXPECT_EQ(run({"verify", "--theorem", "5.1", "--n", "8", "--kind", "random", "--gamma", "3/2"}).code, 2);
}

TEST_F(Cli, DeterministicBytes) {
  const std::vector<std::string> gen = {"gen", "--kind", "random", "--n", "6", "--seed", "42", "--den", "3"};
  EXPECT_EQ(run(gen).out, run(gen).out);
  const auto other = run({"gen", "--kind", "random", "--n", "6", "--seed", "43", "--den", "3"});
  EXPECT_NE(run(gen).out, other.out);
  ASSERT_EQ(run({"gen", "--kind", "random", "--n", "6", "--seed", "42", "-o", path("a.json")}).code, 0);
  const std::vector<std::string> sample = {"sample", path("a.json"), "--draws", "100", "--seed", "7",
                                           "--target", "0", "--format", "json"};
  const auto s1 = run(sample), s2 = run(sample);
  EXPECT_EQ(s1.out, s2.out);
  EXPECT_EQ(Json::parse(s1.out)["seed"], 7);
  const std::vector<std::string> tail = {"tail", path("a.json"), "--threshold", "1", "--samples", "500",
                                         "--seed", "3"};
  EXPECT_EQ(run(tail).out, run(tail).out);
  EXPECT_NE(run(tail).out.find("seed: 3"), std::string::npos);
}

TEST_F(Cli, JobCountDoesNotChangeOutput) {
  ASSERT_EQ(run({"gen", "--kind", "random", "--n", "7", "--seed", "8", "-o", path("a.json")}).code, 0);
  for (const std::string cmd : {"rings", "project"}) {
    std::vector<std::string> base{cmd, path("a.json"), "--format", "json"};
    if (cmd == "rings") base.insert(base.end(), {"--center", "opt"});
    if (cmd == "project") base.insert(base.end(), {"--method", "exact"});
    auto four = base;
    four.insert(four.end(), {"--jobs", "4"});
    EXPECT_EQ(run(base).out, run(four).out) << cmd;
  }
}

TEST_F(Cli, GenRoundTrip) {
  for (const std::string kind : {"random", "random-bullseye", "sym-cycle", "generalized-random"}) {
    const auto g = run({"gen", "--kind", kind, "--n", "5", "--seed", "11", "--den", "4", "-o", path("g.json")});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_NE(g.out.find("seed: 11"), std::string::npos);
    const auto inst = read_instance_file<Rational>(path("g.json"));
    std::ostringstream again;
    again << instance_to_json(inst).dump(1);
    Json original = Json::parse(slurp(path("g.json")));
    original.erase("seed");
    EXPECT_EQ(Json::parse(again.str()), original) << kind;
  }
}

TEST_F(Cli, EvalAndProject) {
  ASSERT_EQ(run({"gen", "--kind", "spike", "--n", "6", "-o", path("s.json")}).code, 0);
  EXPECT_EQ(run({"eval", path("s.json")}).out, "f = 1\nf0 = 1\n");
  const auto inst = read_instance_file<Rational>(path("s.json"));
  for (const std::string perm : {"1,3,2,4,5,6", "3,1,2,4,5,6", "6,5,4,3,2,1"}) {
    const auto e = run({"eval", path("s.json"), "--perm", perm, "--format", "json"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(Json::parse(e.out)["value"], to_string(evaluate(inst, parse_permutation(perm)))) << perm;
  }
  EXPECT_EQ(run({"eval", path("s.json"), "--perm", "1,2,3"}).code, 2);
  EXPECT_EQ(run({"eval", path("s.json"), "--perm", "1,1,2,3,4,5"}).code, 2);

  const auto kb = Json::parse(run({"project", path("s.json"), "--format", "json"}).out);
  const auto ex = Json::parse(run({"project", path("s.json"), "--method", "exact", "--format", "json"}).out);
  EXPECT_EQ(kb["mode"], "span");
  EXPECT_EQ(ex["mode"], "exact");
  EXPECT_EQ(ex["span"]["residual_sq"], "0");
  EXPECT_EQ(ex["span"]["coeffs"], kb["coeffs"]);
}

TEST_F(Cli, RingsCsvAndSpikeSignChange) {
  ASSERT_EQ(run({"gen", "--kind", "spike", "--n", "12", "-o", path("s.json")}).code, 0);
  const auto r = run({"rings", path("s.json"), "--ring-mode", "projected", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,ring_size,average,threshold,pass");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 13u);
  const auto average = [&](int k) {
    std::stringstream ss(rows[static_cast<std::size_t>(k)]);
    std::string cell;
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    return std::stod(cell);
  };
  EXPECT_GT(average(0), 0);
  EXPECT_LT(average(4), 0);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  EXPECT_EQ(run({"rings", path("s.json")}).code, 2);  // exact mode caps n at 8
}

TEST_F(Cli, BullseyeProfileHasOneRowPerRing) {
  ASSERT_EQ(run({"gen", "--kind", "sym-cycle", "--n", "7", "--seed", "2", "-o", path("t.json")}).code, 0);
  const auto r = run({"rings", path("t.json"), "--center", "opt", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 8);
  EXPECT_EQ(r.out.find("false"), std::string::npos);
}

TEST_F(Cli, HistogramCountsSumToDraws) {
  ASSERT_EQ(run({"gen", "--kind", "random", "--n", "7", "--seed", "4", "-o", path("a.json")}).code, 0);
  const auto h = run({"sample", path("a.json"), "--draws", "321", "--histogram", "9", "--format", "csv",
                      "--seed", "12"});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_EQ(h.err, "seed: 12\n");
  std::istringstream in(h.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "bin,low,high,count");
  long total = 0;
  int bins = 0;
  while (std::getline(in, line)) {
    total += std::stol(line.substr(line.rfind(',') + 1));
    ++bins;
  }
  EXPECT_EQ(bins, 9);
  EXPECT_EQ(total, 321);
  const auto j = Json::parse(
      run({"sample", path("a.json"), "--draws", "321", "--histogram", "9", "--format", "json", "--seed", "12"}).out);
  long jt = 0;
  for (const auto& c : j["histogram"]["counts"]) jt += c.get<long>();
  EXPECT_EQ(jt, 321);
}

TEST_F(Cli, TailExactAndFloatMode) {
  ASSERT_EQ(run({"gen", "--kind", "spike", "--n", "7", "-o", path("s.json")}).code, 0);
  const auto t = Json::parse(run({"tail", path("s.json"), "--threshold", "1/2", "--format", "json"}).out);
  EXPECT_TRUE(t["exact"].get<bool>());
  EXPECT_EQ(t["total"], 5040);
  const auto f = Json::parse(
      run({"tail", path("s.json"), "--threshold", "0.5", "--format", "json", "--mode", "float"}).out);
  EXPECT_EQ(f["hits"], t["hits"]);
  const auto m = Json::parse(run({"mean", path("s.json"), "--mode", "float", "--format", "json"}).out);
  EXPECT_NEAR(m["mean"].get<double>(), 0.0, 1e-12);
}

TEST_F(Cli, ConeFromCoefficients) {
  const auto rays = extreme_rays<Rational>(ConeKind(ConeType::General, 9));
  const auto& r5 = rays["r5o"].coeffs;
  std::string list;
  for (std::size_t i = 0; i < 4; ++i) list += (i ? "," : "") + r5.c[i].get_str();
  const auto c = Json::parse(run({"cone", "--coeffs", list, "--n", "9", "--cone", "general", "--format", "json"}).out);
  EXPECT_EQ(c["verdict"], "member");
  EXPECT_EQ(c["ray_weights"]["r5o"], "1");
  EXPECT_EQ(run({"cone", "--coeffs", list, "--n", "9"}).code, 2);  // auto needs an instance
  EXPECT_EQ(run({"cone", "--coeffs", "1,2,3", "--n", "9", "--cone", "general"}).code, 2);
  EXPECT_EQ(run({"cone", "--coeffs", list, "--n", "9", "--cone", "pure"}).code, 2);
}

TEST_F(Cli, InvalidInputsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gen", "--kind", "spike", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"gen", "--kind", "teapot", "--n", "6"}).code, 2);
  EXPECT_EQ(run({"gen", "--kind", "random", "--n", "6", "--format", "csv"}).code, 2);
  EXPECT_EQ(run({"mean", path("missing.json")}).code, 2);
  {
    std::ofstream bad(path("bad.json"));
    bad << "{\"n\": 3, \"form\": \"matrix_pair\", \"A\": [[1,2],[3,4]]";
  }
  EXPECT_EQ(run({"mean", path("bad.json")}).code, 2);
  {
    std::ofstream bad(path("short.json"));
    bad << R"({"n": 2, "form": "matrix_pair", "A": [[1,2],[3,4]], "B": [[1,2]]})";
  }
  EXPECT_EQ(run({"mean", path("short.json")}).code, 2);
  {
    std::ofstream bad(path("nokey.json"));
    bad << R"({"form": "matrix_pair"})";
  }
  EXPECT_EQ(run({"mean", path("nokey.json")}).code, 2);
  EXPECT_EQ(run({"sample", path("nokey.json"), "--draws", "0"}).code, 2);
  EXPECT_EQ(run({"tail", path("x.json")}).code, 2);
  EXPECT_EQ(run({"gen", "--kind", "spike", "--n", "6", "--mode", "decimal"}).code, 2);
}
