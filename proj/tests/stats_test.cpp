#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rxc/rng.hpp"
#include "rxc/stats.hpp"

namespace {

namespace st = rxc::stats;

TEST(Summary, MeanVarianceStderr) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = st::summarize(xs);
  EXPECT_EQ(s.count, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.stderr_mean, std::sqrt(5.0 / 12.0));
  EXPECT_EQ(st::summarize(std::vector<double>{7}).variance, 0.0);
}

TEST(Summary, CovarianceAndCorrelation) {
  const std::vector<double> xs{1, 2, 3, 4}, ys{2, 4, 6, 8}, zs{4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(st::covariance(xs, ys), 10.0 / 3.0);
  EXPECT_NEAR(st::correlation(xs, ys), 1.0, 1e-15);
  EXPECT_NEAR(st::correlation(xs, zs), -1.0, 1e-15);
}

TEST(Proportion, Values) {
  const auto p = st::proportion(30, 40);
  EXPECT_DOUBLE_EQ(p.p_hat, 0.75);
  EXPECT_DOUBLE_EQ(p.stderr_p, std::sqrt(0.75 * 0.25 / 40));
  EXPECT_EQ(st::proportion(0, 0).p_hat, 0.0);
}

TEST(ChiSquare, SurvivalFunction) {
  EXPECT_NEAR(st::chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(st::chi_square_sf(2.0, 2), std::exp(-1.0), 1e-12);
  EXPECT_EQ(st::chi_square_sf(0.0, 3), 1.0);
}

TEST(ChiSquare, GoodnessOfFitOnFairDie) {
  rxc::Xoshiro256 rng(17);
  std::vector<std::uint64_t> obs(6, 0);
  for (int i = 0; i < 60'000; ++i) ++obs[rxc::uniform_below(rng, 6)];
  const auto chi = st::chi_square_gof(obs, std::vector<double>(6, 1.0 / 6));
  EXPECT_EQ(chi.df, 5);
  EXPECT_GT(chi.p_value, 0.001);
  const auto biased = st::chi_square_gof(std::vector<std::uint64_t>{100, 0}, std::vector<double>{0.5, 0.5});
  EXPECT_LT(biased.p_value, 1e-10);
}

TEST(ChiSquare, PoissonAcceptsPoissonAndRejectsShift) {
  std::mt19937_64 gen(5);
  std::poisson_distribution<std::uint64_t> pois(2.0);
  std::vector<std::uint64_t> samples(20'000);
  for (auto& s : samples) s = pois(gen);
  EXPECT_GT(st::chi_square_poisson(samples, 2.0).p_value, 0.001);
  EXPECT_LT(st::chi_square_poisson(samples, 2.3).p_value, 1e-6);
}

}  // namespace
