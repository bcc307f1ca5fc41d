#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "panel_csv.hpp"
#include "result_document.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/garch.hpp"

namespace fs = std::filesystem;
using simcorr::cli::run;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Invocation call(std::vector<std::string> args) {
  args.insert(args.begin(), "simcorr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("simcorr_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& contents) const {
    const auto p = dir_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

std::string to_csv(const simcorr::Sample& s) {
  std::string text;
  char buf[32];
  for (std::size_t t = 0; t < s.rows(); ++t) {
    for (std::size_t i = 0; i < s.cols(); ++i) {
      auto res = std::to_chars(buf, buf + sizeof buf, s(t, i));
      text.append(buf, res.ptr);
      text.push_back(i + 1 == s.cols() ? '\n' : ',');
    }
  }
  return text;
}

}  // namespace

TEST(PanelCsv, HeaderDetectionAndCleanup) {
  const auto p = simcorr::cli::parse_panel("\xEF\xBB\xBF" "a, b\r\n1,2\r\n\r\n 3 ,4\r\n");
  EXPECT_EQ(p.names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(p.sample.rows(), 2u);
  EXPECT_EQ(p.sample(1, 0), 3.0);
  const auto q = simcorr::cli::parse_panel("1;2;3\n4;5;6\n", {.delimiter = ';'});
  EXPECT_EQ(q.names, (std::vector<std::string>{"x1", "x2", "x3"}));
  EXPECT_EQ(q.sample.cols(), 3u);
}

TEST(PanelCsv, ErrorsCarryPosition) {
  try {
    simcorr::cli::parse_panel("x,y\n1,2\n3,abc\n");
    FAIL();
  } catch (const simcorr::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(simcorr::cli::parse_panel("1,2\n3\n"), simcorr::DataError);
  EXPECT_THROW(simcorr::cli::parse_panel("a,b\n"), simcorr::DataError);
  EXPECT_THROW(simcorr::cli::parse_panel("1\n2\n"), simcorr::DataError);
}

TEST(ResultDocument, SerializationIsStable) {
  simcorr::cli::ResultDocument doc;
  doc.command = "x";
  doc.inputs_digest = simcorr::cli::sha256_hex("abc");
  EXPECT_EQ(doc.inputs_digest, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  doc.estimates["third"] = 1.0 / 3.0;
  doc.estimates["whole"] = 2.0;
  doc.estimates["nan"] = std::nan("");
  const std::string text = simcorr::cli::dump(doc.to_json());
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(text.find("\"whole\": 2.0"), std::string::npos);
  EXPECT_NE(text.find("\"nan\": null"), std::string::npos);
  EXPECT_LT(text.find("\"command\""), text.find("\"inputs-digest\""));
  EXPECT_LT(text.find("\"diagnostics\""), text.find("\"tool-version\""));
}

TEST_F(CliTest, EstimateExample) {
  const auto r = call({"estimate", write("p.csv", "1,2\n2,1\n")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_NEAR(j["estimates"]["gamma_hat"].get<double>(), 1.098612, 5e-7);
  EXPECT_EQ(j["command"], "estimate");
  EXPECT_EQ(j["inputs-digest"].get<std::string>().size(), 64u);
}

TEST_F(CliTest, EstimateBenchmarksOnComonotoneData) {
  const auto r = call({"estimate", "--benchmarks", write("p.csv", "1,2\n2,3\n3,5\n-1,-0.5\n")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto b = r.json()["estimates"]["benchmarks"];
  EXPECT_EQ(b["kendall"].get<double>(), 1.0);
  EXPECT_EQ(b["kendall-greiner"].get<double>(), 1.0);
}

TEST_F(CliTest, MalformedCellIsADataError) {
  const auto r = call({"estimate", write("p.csv", "x,y\n1,2\n3,abc\n")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 3, column 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, DegenerateRowIsADataError) {
  const auto r = call({"estimate", write("p.csv", "1,2\n4,4\n")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("row"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"estimate"}).code, 2);
  const auto file = write("p.csv", "1,2\n2,1\n3,1\n");
  EXPECT_EQ(call({"ci", file, "--level", "0"}).code, 2);
  EXPECT_EQ(call({"ci", file, "--level", "1.5"}).code, 2);
  EXPECT_EQ(call({"ci", file, "--target", "tau"}).code, 2);
  EXPECT_EQ(call({"simulate", "--family", "laplace", "--seed", "1"}).code, 2);
  EXPECT_EQ(call({"simulate", "--reps", "10"}).code, 2);
  EXPECT_EQ(call({"estimate", path("missing.csv")}).code, 3);
}

TEST_F(CliTest, CiOutput) {
  const auto file = write("p.csv", "1,2\n2,1.5\n-1,-0.2\n0.3,0.1\n-2,1\n");
  const auto r = call({"ci", file, "--level", "0.9", "--law", "exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto iv = r.json()["intervals"];
  const double lo = iv["correlation-scale"][0];
  const double hi = iv["correlation-scale"][1];
  EXPECT_LT(lo, hi);
  EXPECT_GE(lo, -1.0);
  EXPECT_LE(hi, 1.0);
  EXPECT_EQ(iv["law"], "exact");
  EXPECT_FALSE(iv["conservative"].get<bool>());
  EXPECT_TRUE(r.json()["estimates"].contains("zero-correlation-test"));

  const auto xi = call({"ci", file, "--target", "xi"});
  ASSERT_EQ(xi.code, 0) << xi.err;
  EXPECT_TRUE(xi.json()["intervals"]["conservative"].get<bool>());
}

TEST_F(CliTest, QuantileTableValues) {
  const auto r = call({"quantiles", "--T-list", "1,20", "--p-list", "0.95,0.99,0.9995", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1,1.6183,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("20,1.6430,2.3492"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("N(0,1),1.6449,2.3263,3.2905"), std::string::npos) << r.out;
  EXPECT_EQ(call({"quantiles", "--T-list", "0"}).code, 2);
  EXPECT_EQ(call({"quantiles", "--p-list", "1.2"}).code, 2);
}

TEST_F(CliTest, SimulateIsByteIdentical) {
  const std::vector<std::string> args{"simulate", "--family", "cauchy", "--rho", "0.5", "--T", "8", "--reps",
                                      "2000", "--seed", "42", "--estimators", "similarity,quadrant"};
  auto a = args;
  a.insert(a.end(), {"--histogram", path("a.csv")});
  auto b = args;
  b.insert(b.end(), {"--histogram", path("b.csv")});
  const auto ra = call(a);
  const auto rb = call(b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0);
  const auto strip = [](std::string s, const std::string& from) {
    const auto pos = s.find(from);
    return pos == std::string::npos ? s : s.replace(pos, from.size(), "");
  };
  EXPECT_EQ(strip(ra.out, path("a.csv")), strip(rb.out, path("b.csv")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_FALSE(slurp(path("a.csv")).empty());
  const auto j = ra.json();
  EXPECT_EQ(j["seed"], 42);
  EXPECT_TRUE(j["estimates"]["similarity"]["mean-within-band"].get<bool>());
}

TEST_F(CliTest, GarchOnSimulatedPanel) {
  simcorr::ModelSpec spec;
  spec.egarch = {{-0.05, 0.95, 0.10, 0.5}, {-0.05, 0.95, 0.10, 0.5}};
  spec.mu = {0.0, 0.0};
  spec.correlation = {0.02, 0.90, 0.05};
  simcorr::SeededRng rng(17);
  const auto sim = simcorr::simulate_model(spec, 2000, rng);
  const auto file = write("g.csv", "a,b\n" + to_csv(sim.returns));
  const auto r = call({"garch", file, "--emit-paths", path("paths.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["diagnostics"]["status"], "ok");
  EXPECT_EQ(j["estimates"]["assets"].size(), 2u);

  std::istringstream csv(slurp(path("paths.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,h_a,h_b,phi,rho");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    const double rho = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_GT(rho, -1.0);
    EXPECT_LT(rho, 1.0);
    ++rows;
  }
  EXPECT_EQ(rows, 2000u);
}

TEST_F(CliTest, GarchBivariateModeNeedsTwoColumns) {
  std::string text;
  for (int t = 0; t < 150; ++t) text += std::to_string(t % 7 - 3.1) + "," + std::to_string(t % 5 + 0.3) + ",1.7\n";
  const auto r = call({"garch", write("three.csv", text), "--mode", "bivariate"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("two columns"), std::string::npos) << r.err;
}
