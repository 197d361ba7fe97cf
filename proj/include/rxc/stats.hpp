#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace rxc::stats {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double stderr_mean = 0.0;
};

/// Two-pass mean and variance; summation order is the span order, so
/// results are reproducible bit for bit.
inline Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / static_cast<double>(xs.size() - 1);
    s.stderr_mean = std::sqrt(s.variance / static_cast<double>(xs.size()));
  }
  return s;
}

inline double covariance(std::span<const double> xs, std::span<const double> ys) {
  const auto n = xs.size();
  if (n < 2 || ys.size() != n) return 0.0;
  const double mx = summarize(xs).mean, my = summarize(ys).mean;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (xs[i] - mx) * (ys[i] - my);
  return acc / static_cast<double>(n - 1);
}

inline double correlation(std::span<const double> xs, std::span<const double> ys) {
  const double vx = summarize(xs).variance, vy = summarize(ys).variance;
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return covariance(xs, ys) / std::sqrt(vx * vy);
}

/// Binomial proportion and its standard error.
struct Proportion {
  double p_hat = 0.0;
  double stderr_p = 0.0;
};

inline Proportion proportion(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {};
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

/// Upper tail Pr[chi2_df >= x].
inline double chi_square_sf(double x, int df) {
  if (df <= 0) return 1.0;
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

struct ChiSquare {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Goodness of fit against explicit cell probabilities (no fitted
/// parameters, so df = cells - 1).
inline ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  ChiSquare r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    const double diff = static_cast<double>(observed[i]) - expected;
    r.statistic += diff * diff / expected;
  }
  r.df = static_cast<int>(observed.size()) - 1;
  r.p_value = chi_square_sf(r.statistic, r.df);
  return r;
}

/// Chi-square of integer samples against Poisson(mean). Cells are
/// {0}, {1}, ..., {K-1}, {>= K}, with K as large as possible while every
/// cell keeps an expected count of at least `min_expected`.
inline ChiSquare chi_square_poisson(std::span<const std::uint64_t> samples, double mean, double min_expected = 5.0) {
  const auto n = static_cast<double>(samples.size());
  std::vector<double> probs;
  double pmf = std::exp(-mean);
  double tail = 1.0;
  for (std::uint64_t x = 0;; ++x) {
    // Close the tail here if taking one more singleton cell would leave it
    // too small.
    const double next_tail = tail - pmf;
    if (pmf * n < min_expected || next_tail * n < min_expected) break;
    probs.push_back(pmf);
    tail = next_tail;
    pmf *= mean / static_cast<double>(x + 1);
  }
  probs.push_back(tail);
  const std::size_t tail_cell = probs.size() - 1;
  std::vector<std::uint64_t> observed(probs.size(), 0);
  for (auto s : samples) ++observed[std::min<std::size_t>(static_cast<std::size_t>(s), tail_cell)];
  return chi_square_gof(observed, probs);
}

}  // namespace rxc::stats
