#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

using dynroute::cli::parse_grid;
using dynroute::cli::run_cli;
using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kReference{"--n", "10", "--s0", "10", "--s1", "0", "--l", "1", "--h", "19",
                                         "--gamma-l", "0.1", "--gamma-h", "0.5", "--delta", "0.5"};

std::vector<std::string> with_reference(std::vector<std::string> head) {
  head.insert(head.end(), kReference.begin(), kReference.end());
  return head;
}

TEST(ParseGrid, RangeIsInclusive) {
  const auto g = parse_grid("0.1:0.5:0.1");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.back(), 0.5);
}

TEST(ParseGrid, CommaList) { EXPECT_EQ(parse_grid("0.2, 0.4,0.9"), (std::vector<double>{0.2, 0.4, 0.9})); }

TEST(ParseGrid, RejectsBadInput) {
  EXPECT_THROW(parse_grid(""), std::invalid_argument);
  EXPECT_THROW(parse_grid("0.5,0.4"), std::invalid_argument);
  EXPECT_THROW(parse_grid("0:1:0"), std::invalid_argument);
  EXPECT_THROW(parse_grid("0:1"), std::invalid_argument);
  EXPECT_THROW(parse_grid("a,b"), std::invalid_argument);
}

TEST(ParamsJson, UnknownKeyAndWrongTypeAreErrors) {
  EXPECT_THROW(dynroute::cli::params_from_json(R"({"n": 3, "foo": 1})"), std::runtime_error);
  EXPECT_THROW(dynroute::cli::params_from_json(R"({"n": "3"})"), std::runtime_error);
  EXPECT_THROW(dynroute::cli::params_from_json("{"), std::runtime_error);
  const auto p = dynroute::cli::params_from_json(R"({"n": 7, "h": 3.5})");
  EXPECT_EQ(p.n, 7);
  EXPECT_DOUBLE_EQ(p.h, 3.5);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"infinite", "--n", "ten"}).code, 2);
  EXPECT_EQ(run({"two-stage", "--beta-grid", "0.9,0.1"}).code, 2);
  EXPECT_EQ(run({"infinite", "--params", "/nonexistent/params.json"}).code, 2);
  EXPECT_EQ(run({"infinite", "--n", "0"}).code, 2);
}

TEST(Cli, TwoStageExampleRows) {
  const auto r = run({"two-stage", "--n", "40", "--s0", "10", "--s1", "1", "--l", "0.9", "--h", "150",
                      "--beta-grid", "0.53,0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["thresholds"]["beta_p"].get<double>(), 0.504541, 1e-6);
  EXPECT_NEAR(j["thresholds"]["beta_f"].get<double>(), 0.569833, 1e-6);
  EXPECT_TRUE(j["thresholds"]["beta_so_discrepancy"].get<bool>());
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["region"], "C");
  EXPECT_LT(j["rows"][0]["v_partial"].get<double>(), j["rows"][0]["v_full"].get<double>());
}

TEST(Cli, TwoStageCsvHeader) {
  const auto r = run({"two-stage", "--n", "40", "--s0", "10", "--s1", "1", "--l", "0.9", "--h", "150",
                      "--beta", "0.6", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "beta,region,v_full,v_private,v_partial,v_so,pi1,pi2_l,pi2_h");
}

TEST(Cli, TwoStageAllGatedExitsOne) {
  // The low state is no better than the safe road, so every prior is gated.
  const auto r = run({"two-stage", "--n", "5", "--s0", "1", "--s1", "0", "--l", "2", "--h", "9", "--beta-grid",
                      "0.1,0.5"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, InfiniteReferenceSet) {
  const auto r = run(with_reference({"infinite"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["pi_star"]["c"], 2);
  EXPECT_EQ(j["pi_star"]["d"], 3);
  EXPECT_TRUE(j["pi_tilde_star"].is_null());
  EXPECT_EQ(j["ic_report"]["verdict"], "pass");
  EXPECT_TRUE(j["search_winner"]["is_pi_star"].get<bool>());
  EXPECT_DOUBLE_EQ(j["v_full_info"].get<double>(), 200.0);
}

TEST(Cli, InfiniteGateFailureExitsOne) {
  const auto r = run({"infinite", "--n", "10", "--s0", "10", "--s1", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, SweepCsv) {
  const auto r = run(with_reference({"sweep", "--format", "csv", "--delta-grid", "0.1:0.9:0.1"}));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "delta,feasible,x_ll,v_star,v_so,ratio");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST(Cli, SimulateMatchesAnalytic) {
  const auto r = run(with_reference({"simulate", "--trials", "2000", "--seed", "3"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["within_3se"].get<bool>());
  EXPECT_EQ(j["social"]["trials"], 2000);
}

TEST(Cli, SimulateIsDeterministicForSeed) {
  const auto a = run(with_reference({"simulate", "--trials", "200", "--seed", "9"}));
  const auto b = run(with_reference({"simulate", "--trials", "200", "--seed", "9"}));
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OracleInfiniteMatches) {
  const auto r = run(with_reference({"oracle"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["match"].get<bool>());
}

TEST(Cli, OracleTwoStageMatches) {
  const auto r = run({"oracle", "--model", "two-stage", "--n", "3", "--s0", "10", "--s1", "1", "--l", "0.9",
                      "--h", "200", "--beta-grid", "0.2,0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["all_match"].get<bool>());
}

}  // namespace
