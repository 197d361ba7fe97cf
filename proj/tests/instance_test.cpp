#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "rxc/instance.hpp"
#include "rxc/stats.hpp"

namespace {

using rxc::errc;
using rxc::FormulaInstance;
using rxc::ModelParams;

template <class Fn>
errc error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const rxc::error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an rxc::error";
  return errc::config_invalid;
}

void expect_regular(const FormulaInstance& f) {
  const auto& p = f.params();
  ASSERT_EQ(f.num_clauses(), p.m());
  std::vector<int> occ(static_cast<std::size_t>(p.n) + 1, 0);
  for (const auto& c : f.clauses()) {
    ASSERT_EQ(static_cast<int>(c.size()), p.k);
    for (auto v : c) ++occ[static_cast<std::size_t>(v)];
  }
  for (std::int64_t v = 1; v <= p.n; ++v) ASSERT_EQ(occ[static_cast<std::size_t>(v)], p.d) << "variable " << v;
}

TEST(ModelParams, RejectsInvalidCombinations) {
  EXPECT_EQ(error_code_of([] { ModelParams::checked(4, 2, 2); }), errc::invalid_params);
  EXPECT_EQ(error_code_of([] { ModelParams::checked(10, 3, 2); }), errc::invalid_params);
  EXPECT_EQ(error_code_of([] { ModelParams::checked(3, 3, 0); }), errc::invalid_params);
  EXPECT_EQ(error_code_of([] { ModelParams::checked(2, 3, 3); }), errc::invalid_params);
  const auto p = ModelParams::checked(9, 3, 2);
  EXPECT_EQ(p.m(), 6);
  EXPECT_EQ(p.copies(), 18);
  EXPECT_EQ(p.copies(), p.k * p.m());
}

TEST(Generate, DegreeOneTripleIsTheSingleClause) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto f = rxc::generate(ModelParams::checked(3, 3, 1), seed);
    EXPECT_EQ(f.canonical().clauses(), (std::vector<rxc::Clause>{{1, 2, 3}}));
  }
}

TEST(Generate, SameSeedSameInstance) {
  const auto p = ModelParams::checked(9, 3, 2);
  EXPECT_EQ(rxc::generate(p, 12345), rxc::generate(p, 12345));
  int differing = 0;
  for (std::uint64_t s = 0; s < 20; ++s) differing += rxc::generate(p, s) != rxc::generate(p, s + 100);
  EXPECT_GT(differing, 10);
}

TEST(Generate, EveryInstanceIsRegular) {
  for (auto [n, k, d] : std::vector<std::tuple<int, int, int>>{{9, 3, 2}, {12, 4, 3}, {30, 3, 5}, {25, 5, 2}, {600, 3, 2}})
    for (std::uint64_t seed = 0; seed < 200; ++seed) expect_regular(rxc::generate(ModelParams::checked(n, k, d), seed));
}

TEST(Generate, ConcurrentCallsMatchSerial) {
  const auto p = ModelParams::checked(60, 3, 2);
  std::vector<std::string> serial(64), parallel(64);
  for (std::size_t s = 0; s < serial.size(); ++s) serial[s] = rxc::to_string(rxc::generate(p, s));
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t s = static_cast<std::size_t>(t); s < parallel.size(); s += 8)
        parallel[s] = rxc::to_string(rxc::generate(p, s));
    });
  for (auto& th : pool) th.join();
  EXPECT_EQ(serial, parallel);
}

// Frequencies of canonical forms over 10^6 draws against exact probabilities
// from enumerating all (km)! matchings.
void check_matching_distribution(const ModelParams& p) {
  const auto exact = rxc::oracle::matching_distribution(p);
  std::map<std::string, std::uint64_t> observed;
  constexpr std::uint64_t draws = 1'000'000;
  for (std::uint64_t s = 0; s < draws; ++s) ++observed[rxc::oracle::distribution_key(rxc::generate(p, rxc::stream_seed(5, 0, s)))];
  std::vector<std::uint64_t> obs;
  std::vector<double> probs;
  for (const auto& [key, prob] : exact) {
    obs.push_back(observed[key]);
    probs.push_back(prob);
  }
  std::uint64_t covered = 0;
  for (auto o : obs) covered += o;
  ASSERT_EQ(covered, draws) << "generator produced a form with zero exact probability";
  const auto chi = rxc::stats::chi_square_gof(obs, probs);
  EXPECT_GT(chi.p_value, 0.01) << "chi2=" << chi.statistic << " df=" << chi.df;
}

TEST(Generate, MatchesExactMatchingDistributionK3D3) { check_matching_distribution(ModelParams::checked(3, 3, 3)); }
TEST(Generate, MatchesExactMatchingDistributionK5D2) { check_matching_distribution(ModelParams::checked(5, 5, 2)); }
TEST(Generate, MatchesExactMatchingDistributionK3D2) { check_matching_distribution(ModelParams::checked(3, 3, 2)); }

TEST(Generate, MeanDoubleEdgeCountMatchesExactExpectation) {
  const auto p = ModelParams::checked(9, 3, 2);
  constexpr int trials = 100'000;
  std::vector<double> xs(trials);
  for (int t = 0; t < trials; ++t)
    xs[static_cast<std::size_t>(t)] = static_cast<double>(rxc::oracle::double_edge_count(rxc::generate(p, rxc::stream_seed(11, 0, t))));
  const auto s = rxc::stats::summarize(xs);
  EXPECT_NEAR(s.mean, 18.0 / 17.0, 3 * s.stderr_mean);
}

TEST(InstanceFormat, SingleClauseText) {
  const auto f = rxc::generate(ModelParams::checked(3, 3, 1), 0);
  EXPECT_EQ(rxc::to_string(f), "p xc 3 1 3 1\n1 2 3\n");
}

TEST(InstanceFormat, RoundTripIsCanonicalAndIdempotent) {
  for (auto [n, k, d] : std::vector<std::tuple<int, int, int>>{{9, 3, 2}, {12, 4, 3}, {15, 3, 4}, {60, 5, 2}}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto f = rxc::generate(ModelParams::checked(n, k, d), seed);
      const auto text = rxc::to_string(f);
      const auto back = rxc::read_instance(text);
      EXPECT_EQ(back, f.canonical());
      EXPECT_EQ(rxc::to_string(back), text);
    }
  }
}

TEST(InstanceFormat, CommentsAreSkipped) {
  const auto f = rxc::read_instance("c generated by hand\np xc 3 1 3 1\nc mid-body\n3 1 2\n");
  EXPECT_EQ(f.canonical().clauses(), (std::vector<rxc::Clause>{{1, 2, 3}}));
}

TEST(InstanceFormat, ShortClauseLineIsParseErrorWithLineNumber) {
  try {
    rxc::read_instance("p xc 3 1 3 1\n1 2\n");
    FAIL();
  } catch (const rxc::parse_error& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.code(), errc::parse_error);
  }
}

TEST(InstanceFormat, MalformedInputs) {
  EXPECT_EQ(error_code_of([] { rxc::read_instance(""); }), errc::parse_error);
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p cnf 3 1 3 1\n1 2 3\n"); }), errc::parse_error);
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3\n1 2 3\n"); }), errc::parse_error);
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3 1\r\n1 2 3\r\n"); }), errc::parse_error);
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3 1\n1 2 x\n"); }), errc::parse_error);
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3 1\n1 2 3\n1 2 3\n"); }), errc::parse_error);
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3 1\n1  2 3\n"); }), errc::parse_error);
}

TEST(InstanceFormat, HeaderBodyDisagreementIsInvariantViolation) {
  // m inconsistent with d*n/k
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 2 3 1\n1 2 3\n1 2 3\n"); }), errc::invariant_violation);
  // too few clause lines
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 3 3 3\n1 2 3\n1 2 3\n"); }), errc::invariant_violation);
  // degree mismatch
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3 1\n1 1 2\n"); }), errc::invariant_violation);
  // index out of range
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 3 1 3 1\n1 2 4\n"); }), errc::invariant_violation);
  // k not dividing n
  EXPECT_EQ(error_code_of([] { rxc::read_instance("p xc 4 2 3 1\n1 2 3\n4 4 4\n"); }), errc::invariant_violation);
}

TEST(FormulaInstance, ConstructorEnforcesInvariants) {
  const auto p = ModelParams::checked(3, 3, 1);
  EXPECT_NO_THROW(FormulaInstance(p, {{3, 2, 1}}));
  EXPECT_EQ(error_code_of([&] { FormulaInstance(p, {{1, 2}}); }), errc::invariant_violation);
  EXPECT_EQ(error_code_of([&] { FormulaInstance(p, {{1, 2, 2}}); }), errc::invariant_violation);
  EXPECT_EQ(error_code_of([&] { FormulaInstance(p, {{1, 2, 3}, {1, 2, 3}}); }), errc::invariant_violation);
}

TEST(Assignment, RejectsDuplicates) {
  EXPECT_EQ(error_code_of([] { rxc::Assignment({1, 1}); }), errc::invariant_violation);
  EXPECT_EQ(rxc::Assignment({3, 1}).true_set, (std::vector<rxc::Var>{1, 3}));
}

}  // namespace
