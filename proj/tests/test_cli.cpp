#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "io.hpp"
#include "test_support.hpp"

using namespace sparsepr;
using namespace sparsepr::testing;
using sparsepr::io::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result run_cli(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "sparsepr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("sparsepr_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Io, SignalRoundTripExact) {
  const SpikeSignal<Rational> f(2, {{{Q(1, 2), Q(3)}, Q(-7, 3)}, {{Q(0), Q(0)}, Q(2)}});
  const auto j = io::signal_to_json(f);
  EXPECT_EQ(j["scalar"], "exact");
  EXPECT_EQ(j["spikes"][0]["coef"], "-7/3");
  EXPECT_EQ(j["spikes"][0]["pos"][0], "1/2");
  const auto g = io::signal_from_json<Rational>(j);
  ASSERT_EQ(g.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(g[i].position, f[i].position);
    EXPECT_EQ(g[i].coefficient, f[i].coefficient);
  }
}

TEST(Io, AcfRoundTripFloatAndInference) {
  const auto acf = compute_acf(make_signal_1d(std::vector<double>{0.0, 1.5}, {1.0, 2.0}));
  const auto j = io::acf_to_json(acf);
  EXPECT_EQ(io::infer_mode(j), io::ScalarMode::Float);
  const auto back = io::acf_from_json<double>(j);
  EXPECT_TRUE(acf_equal(acf, back));

  const json bare = json::parse(R"({"dim":1,"deltas":[{"lag":[0],"coef":2},{"lag":[3],"coef":1},{"lag":[-3],"coef":1}]})");
  EXPECT_EQ(io::infer_mode(bare), io::ScalarMode::Exact);
  EXPECT_EQ(io::acf_from_json<Rational>(bare).size(), 3u);
}

TEST(Io, MalformedDocuments) {
  EXPECT_THROW(io::signal_from_json<Rational>(json::parse(R"({"spikes":[]})")), Error);
  EXPECT_THROW(io::signal_from_json<Rational>(json::parse(R"({"dim":1,"spikes":[{"pos":[0.5],"coef":1}]})")), Error);
  EXPECT_THROW(io::scalar_from_json<Rational>(json("1/0")), Error);
  EXPECT_THROW(io::grid_from_json(json::parse(R"({"dims":[4],"values":[1,2]})")), Error);
  try {
    io::acf_from_json<Rational>(json::parse(R"({"dim":1,"deltas":"x"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Io, VerdictShape) {
  const auto v = UniquenessVerdict<Rational>::not_covered("collisions");
  const auto j = io::verdict_to_json(v);
  EXPECT_EQ(j["verdict"], "not_covered");
  EXPECT_EQ(j["reason"], "collisions");
  EXPECT_TRUE(j["signals"].empty());
  EXPECT_FALSE(io::verdict_to_json(UniquenessVerdict<Rational>::unique(make_support_1d(Qs({0})))).contains("reason"));
}

TEST(Cli, BekirPairIsAmbiguous) {
  const auto g = run_cli({"gen", "--dim", "1", "--n", "6", "--bekir", "1,6"});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto a = run_cli({"acf"}, g.out);
  ASSERT_EQ(a.code, 0) << a.err;
  const auto s = run_cli({"solve1d"}, a.out);
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.doc()["verdict"], "ambiguous");
  EXPECT_EQ(s.doc()["signals"].size(), 2u);
}

TEST(Cli, GenAcfRecoverRoundTrip) {
  const auto g = run_cli({"gen", "--dim", "2", "--n", "4", "--collision-free", "--seed", "7"});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto a = run_cli({"acf"}, g.out);
  const auto r = run_cli({"recover", "--seed", "7"}, a.out);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["verdict"], "unique");
  const auto recovered = io::signal_from_json<Rational>(r.doc()["signals"][0]);
  EXPECT_TRUE(same_class(recovered, io::signal_from_json<Rational>(g.doc())));
}

TEST(Cli, CollidingSupportNotCovered) {
  const auto a = run_cli({"acf"}, io::signal_to_json(make_support_1d(Qs({0, 1, 2, 4}))).dump());
  const auto s = run_cli({"solve1d"}, a.out);
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.doc()["verdict"], "not_covered");
  EXPECT_EQ(s.doc()["reason"], "collisions");
}

TEST(Cli, BareDifferenceList) {
  const auto s = run_cli({"solve1d"}, "[1,3,4,9,10,11,12,13,16,17,2,6,7,8,5]");
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.doc()["verdict"], "ambiguous");
  const auto u = run_cli({"solve1d"}, "[1,2,3]");
  EXPECT_EQ(u.doc()["verdict"], "unique");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"acf"}, "{\"dim\": 1,").code, 2);
  EXPECT_EQ(run_cli({"acf"}, R"({"dim": 1, "spikes": [{"pos": [0], "coef": "x"}]})").code, 2);
  EXPECT_EQ(run_cli({"nope"}).code, 2);
  // Duplicate position: valid JSON, invalid signal.
  EXPECT_EQ(run_cli({"acf"}, R"({"dim":1,"spikes":[{"pos":[0],"coef":1},{"pos":[0],"coef":2}]})").code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, Deterministic) {
  const auto a = run_cli({"gen", "--dim", "3", "--n", "5", "--collision-free", "--seed", "11"});
  const auto b = run_cli({"gen", "--dim", "3", "--n", "5", "--collision-free", "--seed", "11"});
  EXPECT_EQ(a.out, b.out);
  const auto acf = run_cli({"acf"}, a.out).out;
  EXPECT_EQ(run_cli({"recover", "--seed", "3"}, acf).out, run_cli({"recover", "--seed", "3"}, acf).out);
}

TEST(Cli, FloatModeAndPretty) {
  const auto g = run_cli({"--mode", "float", "gen", "--dim", "2", "--n", "3", "--collision-free", "--seed", "2"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(g.doc()["scalar"], "float");
  const auto a = run_cli({"acf", "--pretty"}, g.out);
  EXPECT_NE(a.out.find("\n  "), std::string::npos);
  const auto r = run_cli({"recover", "--eps", "1e-8"}, a.out);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["verdict"], "unique");
}

TEST(Cli, EnvironmentTolerance) {
  ::setenv("SPARSEPR_EPS", "abc", 1);
  EXPECT_EQ(run_cli({"solve1d"}, "[1,2,3]").code, 2);
  ::setenv("SPARSEPR_EPS", "1e-6", 1);
  EXPECT_EQ(run_cli({"solve1d"}, "[1.0000001, 2, 3]").doc()["verdict"], "unique");
  ::unsetenv("SPARSEPR_EPS");
}

TEST(Cli, ClassifyReports) {
  const SpikeSignal<Rational> diag(2, {{Qs({0, 0}), Q(1)}, {Qs({1, 1}), Q(2)}, {Qs({3, 3}), Q(3)}});
  const auto acf = run_cli({"acf"}, io::signal_to_json(diag).dump()).out;
  const auto c = run_cli({"classify"}, acf);
  ASSERT_EQ(c.code, 0) << c.err;
  const auto doc = c.doc();
  EXPECT_EQ(doc["verdict"], "unique");
  EXPECT_FALSE(doc["visibility"]["all_visible"].get<bool>());
  EXPECT_FALSE(doc["collisions"]["has_collisions"].get<bool>());
  EXPECT_EQ(doc["collisions"]["implied_n"], 3);
}

TEST(Cli, Coeffs) {
  const auto f = make_signal_1d(Qs({0, 1, 3}), Qs({1, 2, 3}));
  const auto support = write_temp("support.json", "[0, 1, 3]");
  const auto acf = write_temp("acf.json", io::acf_to_json(compute_acf(f)).dump());
  const auto r = run_cli({"coeffs", support, acf});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["coefficients"], json({"1/1", "2/1", "3/1"}));
}

TEST(Cli, IngestSubcommands) {
  const auto grid = power_spectrum(make_signal_1d(std::vector<double>{0, 1, 4}, {1, 1, 1}), {16});
  const auto m = run_cli({"ingest", "magnitude"}, io::grid_to_json(grid).dump());
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(m.doc()["deltas"].size(), 7u);

  const auto psd = write_temp("psd.json", io::grid_to_json(MagnitudeGrid{{16}, std::vector<double>(16, 1.0)}).dump());
  const auto stack = write_temp("stack.json", json({{"frames", {io::grid_to_json(grid)}}}).dump());
  const auto s = run_cli({"ingest", "speckle", stack, psd, "--floor", "1e-6"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.doc()["deltas"].size(), 7u);

  const auto c = run_cli({"ingest", "channel", "--tau", "1e-6"}, "[[1, 0, 0, 1, 0, 0, 0, 0]]");
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.doc()["deltas"].size(), 3u);
  EXPECT_EQ(run_cli({"ingest", "channel"}, "[]").code, 1);
}

TEST(Cli, OracleSweep) {
  const auto r = run_cli({"oracle", "sweep", "--n", "4", "--bound", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.doc()["pass"].get<bool>());
  EXPECT_GT(r.doc()["instances"].get<int>(), 0);
}
