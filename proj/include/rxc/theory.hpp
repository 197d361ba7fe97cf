#pragma once

// Closed-form and exact-combinatorial quantities for random regular exact
// cover: the threshold, first and second moment rate functions, their
// Laplace asymptotics, and the short-cycle statistics used by small
// subgraph conditioning.
//
// Rates are per variable, in nats. Exact quantities use big rationals for
// km <= kExactRegimeLimit and extended-precision log-gamma above it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rxc/error.hpp"
#include "rxc/instance.hpp"
#include "rxc/numeric.hpp"

namespace rxc::theory {

/// Shannon entropy in nats, with h(0) = h(1) = 0.
inline double entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw error(errc::domain_error, "entropy argument outside [0,1]");
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return -xlogx(alpha) - xlogx(1.0 - alpha);
}

inline void require_k(int k) {
  if (k < 3) throw error(errc::domain_error, "k must be at least 3, got " + std::to_string(k));
}

/// Satisfiability threshold d*_k = ln k / ((k-1)(-ln(1-1/k))) + 1.
inline double dstar(int k) {
  require_k(k);
  const double kd = k;
  return std::log(kd) / ((kd - 1.0) * -std::log1p(-1.0 / kd)) + 1.0;
}

/// First-moment rate, entropy form: (d/k) ln k - (d-1) h(1/k).
inline double phi1_entropy_form(int k, double d) {
  return d / k * std::log(static_cast<double>(k)) - (d - 1.0) * entropy(1.0 / k);
}

/// First-moment rate: (ln k + (d-1)(k-1) ln(1-1/k)) / k. Real d is
/// accepted so the threshold can be found as a root.
inline double phi1(int k, double d) {
  require_k(k);
  const double kd = k;
  return (std::log(kd) + (d - 1.0) * (kd - 1.0) * std::log1p(-1.0 / kd)) / kd;
}

/// Second-moment rate at overlap parameter w, where |T - T'| = wn/k.
inline double phi2(double w, int k, double d) {
  require_k(k);
  if (!(w >= 0.0 && w <= 1.0)) throw error(errc::domain_error, "phi2 argument outside [0,1]");
  const double kd = k;
  return phi1(k, d) + w * d / kd * std::log(kd - 1.0) + entropy(w) / kd -
         (d - 1.0) * (1.0 - 1.0 / kd) * entropy(w / (kd - 1.0));
}

/// d phi2 / dw on the open interval.
inline double phi2_derivative(double w, int k, double d) {
  const double kd = k;
  return (d * std::log(kd - 1.0) + std::log((1.0 - w) / w) - (d - 1.0) * std::log((kd - 1.0 - w) / w)) / kd;
}

/// Central second difference of phi2.
inline double phi2_second_difference(double w, int k, double d, double step = 1e-5) {
  return (phi2(w + step, k, d) - 2.0 * phi2(w, k, d) + phi2(w - step, k, d)) / (step * step);
}

/// Polynomial prefactor of the pair moment, d sqrt(k / (w(1-w))).
inline double f_prefactor(double w, int k, double d) {
  if (!(w > 0.0 && w < 1.0)) throw error(errc::domain_error, "f_prefactor needs 0 < w < 1");
  return d * std::sqrt(k / (w * (1.0 - w)));
}

struct Phi2Maximum {
  double wmax = 0.0;
  double value = 0.0;
};

/// Global maximizer of phi2 on [0,1]: a 10^4-cell grid locates the
/// bracket, then bisection on the sign of phi2' refines it. Near the peak
/// double-precision values of phi2 do not resolve |dw| below ~1e-8, so the
/// refinement works on the derivative.
inline Phi2Maximum maximize_phi2(int k, double d) {
  require_k(k);
  constexpr int cells = 10'000;
  int best = 0;
  double best_value = phi2(0.0, k, d);
  for (int i = 1; i <= cells; ++i) {
    const double v = phi2(static_cast<double>(i) / cells, k, d);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  Phi2Maximum result{static_cast<double>(best) / cells, best_value};
  if (best == 0 || best == cells) return result;

  double lo = static_cast<double>(best - 1) / cells;
  double hi = static_cast<double>(best + 1) / cells;
  if (lo <= 0.0) lo = 1e-300;
  if (hi >= 1.0) hi = std::nextafter(1.0, 0.0);
  if (phi2_derivative(lo, k, d) > 0.0 && phi2_derivative(hi, k, d) < 0.0) {
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (phi2_derivative(mid, k, d) > 0.0) lo = mid;
      else hi = mid;
    }
    result.wmax = 0.5 * (lo + hi);
    result.value = phi2(result.wmax, k, d);
  }
  if (d < dstar(k) && std::abs(result.wmax - (1.0 - 1.0 / k)) > 1e-10)
    throw error(errc::invariant_violation, "phi2 maximizer is not 1 - 1/k below the threshold");
  return result;
}

/// phi2''(1-1/k) = -k(k-d)/(k-1)^2.
inline double phi2_curvature(int k, double d) {
  require_k(k);
  const double kd = k;
  return -kd * (kd - d) / ((kd - 1.0) * (kd - 1.0));
}

/// The root w0 = (d-2)(k-1)/(dk-d-k) of phi2''; none when the
/// denominator vanishes.
inline std::optional<double> inflection(int k, double d) {
  const double kd = k;
  const double denom = d * kd - d - kd;
  if (denom == 0.0) return std::nullopt;
  return (d - 2.0) * (kd - 1.0) / denom;
}

/// C = sqrt((k-1)/(k-d)), the limit of E[Z^2]/E[Z]^2.
inline double laplace_ratio(int k, double d) {
  require_k(k);
  if (d >= k) throw error(errc::domain_error, "laplace_ratio needs d < k");
  return std::sqrt((k - 1.0) / (k - d));
}

/// Second-moment lower bound Pr[Z > 0] >= 1/C.
inline double positive_probability_bound(int k, double d) { return 1.0 / laplace_ratio(k, d); }

// ---------------------------------------------------------------------------
// Exact finite-n moments.

inline constexpr std::int64_t kExactRegimeLimit = 2000;

enum class Regime { automatic, exact, log_space };

/// A nonnegative moment, exact when computed in the rational regime and
/// always carrying its natural log (-inf for zero).
struct MomentValue {
  std::optional<Rational> exact;
  long double log_value = 0.0L;

  double approx() const { return static_cast<double>(std::exp(log_value)); }
};

namespace detail {

inline bool use_exact(const ModelParams& p, Regime regime) {
  if (regime == Regime::automatic) return p.copies() <= kExactRegimeLimit;
  return regime == Regime::exact;
}

inline MomentValue from_exact(Rational q) {
  MomentValue v;
  v.log_value = q > 0 ? log_of(q) : -INFINITY;
  v.exact = std::move(q);
  return v;
}

inline MomentValue from_log(long double log_value) {
  MomentValue v;
  v.log_value = log_value;
  return v;
}

inline Rational first_moment_rational(const ModelParams& p) {
  const auto m = p.m();
  return Rational(power(p.k, m) * binomial(p.n, p.true_count()), binomial(p.copies(), m));
}

inline long double first_moment_log(const ModelParams& p) {
  const auto m = p.m();
  return static_cast<long double>(m) * std::log(static_cast<long double>(p.k)) +
         log_binomial(p.n, p.true_count()) - log_binomial(p.copies(), m);
}

// log of E[Z2_w] / E[Z] at j = wn/k.
inline long double pair_factor_log(const ModelParams& p, std::int64_t j) {
  const auto t = p.true_count();
  return static_cast<long double>(p.d * j) * std::log(static_cast<long double>(p.k - 1)) +
         log_binomial(t, j) + log_binomial(p.n - t, j) - log_binomial((p.k - 1) * p.m(), p.d * j);
}

inline void check_overlap(const ModelParams& p, std::int64_t j) {
  if (j < 0 || j > p.true_count())
    throw error(errc::non_integral_overlap, "overlap |T - T'| must lie in 0..n/k");
}

}  // namespace detail

/// E[Z] = k^m C(n, n/k) / C(km, m).
inline MomentValue exact_first_moment(const ModelParams& params, Regime regime = Regime::automatic) {
  params.validate();
  if (detail::use_exact(params, regime)) return detail::from_exact(detail::first_moment_rational(params));
  return detail::from_log(detail::first_moment_log(params));
}

struct PairMomentPoint {
  Rational w;
  MomentValue value;
};

/// E[Z2_w] for ordered pairs with |T - T'| = |T' - T| = j = wn/k:
/// E[Z] (k-1)^{wm} C(n/k, j) C((1-1/k)n, j) / C((k-1)m, wm).
inline PairMomentPoint exact_pair_moment_at(const ModelParams& params, std::int64_t j,
                                            Regime regime = Regime::automatic) {
  params.validate();
  detail::check_overlap(params, j);
  PairMomentPoint point;
  point.w = Rational(j * params.k, params.n);
  if (detail::use_exact(params, regime)) {
    const auto t = params.true_count();
    Rational factor(power(params.k - 1, params.d * j) * binomial(t, j) * binomial(params.n - t, j),
                    binomial((params.k - 1) * params.m(), params.d * j));
    point.value = detail::from_exact(detail::first_moment_rational(params) * factor);
  } else {
    point.value = detail::from_log(detail::first_moment_log(params) + detail::pair_factor_log(params, j));
  }
  return point;
}

/// Same as `exact_pair_moment_at` with w given directly; wn/k must be an
/// integer in 0..n/k.
inline PairMomentPoint exact_pair_moment(const ModelParams& params, const Rational& w,
                                         Regime regime = Regime::automatic) {
  params.validate();
  const Rational scaled = w * params.n / params.k;
  if (boost::multiprecision::denominator(scaled) != 1)
    throw error(errc::non_integral_overlap, "w*n/k is not an integer");
  const BigInt j = boost::multiprecision::numerator(scaled);
  if (j < 0 || j > params.true_count()) throw error(errc::non_integral_overlap, "w outside [0,1]");
  return exact_pair_moment_at(params, static_cast<std::int64_t>(j), regime);
}

/// E[Z^2] = sum over admissible overlaps of E[Z2_w]. The binomials are
/// advanced incrementally in j, independently of `exact_pair_moment_at`.
inline MomentValue exact_second_moment(const ModelParams& params, Regime regime = Regime::automatic) {
  params.validate();
  const auto t = params.true_count();
  if (detail::use_exact(params, regime)) {
    const auto free = params.n - t;
    const auto slots = (params.k - 1) * params.m();
    const BigInt step = power(params.k - 1, params.d);
    BigInt c_true = 1, c_false = 1, c_slots = 1, weight = 1;
    // sum_j (k-1)^{dj} C(t,j) C(free,j) / C(slots,dj)
    Rational sum = 0;
    for (std::int64_t j = 0; j <= t; ++j) {
      if (j > 0) {
        c_true = c_true * (t - j + 1) / j;
        c_false = c_false * (free - j + 1) / j;
        for (std::int64_t s = params.d * (j - 1); s < params.d * j; ++s) c_slots = c_slots * (slots - s) / (s + 1);
        weight *= step;
      }
      sum += Rational(weight * c_true * c_false, c_slots);
    }
    return detail::from_exact(detail::first_moment_rational(params) * sum);
  }
  long double total = -INFINITY;
  for (std::int64_t j = 0; j <= t; ++j) total = log_add(total, detail::pair_factor_log(params, j));
  return detail::from_log(detail::first_moment_log(params) + total);
}

// ---------------------------------------------------------------------------
// Short cycles.

/// lambda_i = ((k-1)(d-1))^i / (2i), the limiting mean number of 2i-cycles.
inline double lambda_i(int k, double d, int i) {
  if (i < 1) throw error(errc::domain_error, "cycle index must be at least 1");
  return std::pow((k - 1.0) * (d - 1.0), i) / (2.0 * i);
}

/// Exact finite-n E[X_i] = (m)_i (n)_i (k(k-1)d(d-1))^i / (2i (km)_{2i}).
inline Rational exact_cycle_expectation(const ModelParams& params, int i) {
  params.validate();
  if (i < 1) throw error(errc::domain_error, "cycle index must be at least 1");
  if (2 * static_cast<std::int64_t>(i) > params.copies())
    throw error(errc::cycle_too_long, "2i exceeds km");
  const BigInt wiring = power(static_cast<std::int64_t>(params.k) * (params.k - 1) * params.d * (params.d - 1), i);
  const BigInt num = falling_factorial(BigInt(params.m()), i) * falling_factorial(BigInt(params.n), i) * wiring;
  const BigInt den = 2 * i * falling_factorial(BigInt(params.copies()), 2 * i);
  return Rational(num, den);
}

inline constexpr int kMaxNecklaceLength = 64;

/// N_{i,0..floor(i/2)}: labeled cyclic arrangements of i positions with t
/// marked, no two marked positions adjacent.
struct NecklaceTable {
  int i = 0;
  std::vector<std::uint64_t> counts;

  /// g(z) = sum_t N_{i,t} z^t, evaluated exactly.
  Rational evaluate(const Rational& z) const {
    Rational acc = 0;
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) acc = acc * z + Rational(*it);
    return acc;
  }
};

/// Coefficients of tr(A^i) for A = [[1, 1], [z, 0]], which has the same
/// characteristic polynomial as [[0, sqrt z], [sqrt z, 1]] and so the same
/// trace of every power, but keeps every entry an integer polynomial in z.
inline NecklaceTable necklace(int i) {
  if (i < 1 || i > kMaxNecklaceLength) throw error(errc::domain_error, "necklace length must be in 1..64");
  using Poly = std::vector<std::uint64_t>;
  auto add = [](const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t x = 0; x < a.size(); ++x) r[x] += a[x];
    for (std::size_t x = 0; x < b.size(); ++x) r[x] += b[x];
    return r;
  };
  auto shift = [](const Poly& a) {
    Poly r(a.size() + 1, 0);
    std::copy(a.begin(), a.end(), r.begin() + 1);
    return r;
  };
  // Row vector times A: [p, q] A = [p + z q, p].
  Poly a11{1}, a12{0}, a21{0}, a22{1};
  for (int step = 0; step < i; ++step) {
    Poly n11 = add(a11, shift(a12)), n12 = a11;
    Poly n21 = add(a21, shift(a22)), n22 = a21;
    a11 = std::move(n11);
    a12 = std::move(n12);
    a21 = std::move(n21);
    a22 = std::move(n22);
  }
  Poly trace = add(a11, a22);
  trace.resize(static_cast<std::size_t>(i / 2) + 1, 0);
  return NecklaceTable{i, std::move(trace)};
}

inline void require_delta_k(int k) {
  if (k <= 2) throw error(errc::domain_error, "delta_i needs k >= 3");
}

/// delta_i = ((k-2)/(k-1))^i g((k-1)/(k-2)^2) - 1, via the necklace table.
inline Rational delta_i_generating(int k, int i) {
  require_delta_k(k);
  const Rational z(k - 1, (k - 2) * (k - 2));
  const Rational base(k - 2, k - 1);
  Rational scale = 1;
  for (int s = 0; s < i; ++s) scale *= base;
  return scale * necklace(i).evaluate(z) - 1;
}

/// delta_i = (-1/(k-1))^i.
inline Rational delta_i_closed(int k, int i) {
  require_delta_k(k);
  if (i < 1) throw error(errc::domain_error, "cycle index must be at least 1");
  const Rational base(-1, k - 1);
  Rational result = 1;
  for (int s = 0; s < i; ++s) result *= base;
  return result;
}

inline double delta_i(int k, int i) { return static_cast<double>(delta_i_closed(k, i)); }

/// mu_i = lambda_i (1 + delta_i), the cycle mean tilted by a satisfying
/// assignment.
inline double mu_i(int k, double d, int i) { return lambda_i(k, d, i) * (1.0 + delta_i(k, i)); }

inline void require_convergent(int k, double d) {
  require_k(k);
  if (d >= k) throw error(errc::divergent_series, "sum of lambda_i delta_i^2 diverges for d >= k");
}

/// sum_{i<=terms} lambda_i delta_i^2.
inline double partial_sum_lambda_delta_sq(int k, double d, int terms) {
  require_convergent(k, d);
  double sum = 0.0;
  if (d == 1.0) return sum;
  const long double log_base = std::log((k - 1.0L) * (d - 1.0L));
  for (int i = 1; i <= terms; ++i) {
    const long double log_lambda = i * log_base - std::log(2.0L * i);
    sum += static_cast<double>(std::exp(log_lambda + 2 * log_of(abs(delta_i_closed(k, i)))));
  }
  return sum;
}

/// Number of terms after which the geometric tail of the series is below
/// `tolerance`. Terms are r^i / (2i) with r = (d-1)/(k-1).
inline int terms_for_tolerance(int k, double d, double tolerance) {
  require_convergent(k, d);
  const double r = (d - 1.0) / (k - 1.0);
  if (r <= 0.0) return 1;
  int terms = 1;
  while (std::pow(r, terms + 1) / (2.0 * (terms + 1) * (1.0 - r)) >= tolerance) ++terms;
  return terms;
}

/// Closed form (1/2) ln((k-1)/(k-d)).
inline double sum_lambda_delta_sq(int k, double d) {
  require_convergent(k, d);
  return 0.5 * std::log((k - 1.0) / (k - d));
}

// ---------------------------------------------------------------------------

struct TheoryReport {
  int k = 0;
  int d = 0;
  double dstar = 0.0;
  double phi1 = 0.0;
  std::optional<double> C;
  double wmax = 0.0;
  double phi2_curv = 0.0;
  std::optional<double> w0;
  std::vector<double> lambda;
  std::vector<double> delta;
  std::vector<double> mu;
};

inline TheoryReport make_report(int k, int d, int max_i = 8) {
  require_k(k);
  if (d < 1) throw error(errc::domain_error, "d must be at least 1");
  if (max_i < 1 || max_i > kMaxNecklaceLength) throw error(errc::domain_error, "max-i must be in 1..64");
  TheoryReport r;
  r.k = k;
  r.d = d;
  r.dstar = dstar(k);
  r.phi1 = phi1(k, d);
  if (d < k) r.C = laplace_ratio(k, d);
  r.wmax = maximize_phi2(k, d).wmax;
  r.phi2_curv = phi2_curvature(k, d);
  r.w0 = inflection(k, d);
  for (int i = 1; i <= max_i; ++i) {
    r.lambda.push_back(lambda_i(k, d, i));
    r.delta.push_back(delta_i(k, i));
    r.mu.push_back(mu_i(k, d, i));
  }
  return r;
}

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

/// Ordered (key, value) pairs of a report, shared by both output formats.
inline std::vector<std::pair<std::string, std::string>> report_fields(const TheoryReport& r) {
  using detail::format_real;
  std::vector<std::pair<std::string, std::string>> fields{
      {"k", std::to_string(r.k)},
      {"d", std::to_string(r.d)},
      {"dstar", format_real(r.dstar)},
      {"phi1", format_real(r.phi1)},
      {"C", r.C ? format_real(*r.C) : "none"},
      {"wmax", format_real(r.wmax)},
      {"phi2_curv", format_real(r.phi2_curv)},
      {"w0", r.w0 ? format_real(*r.w0) : "none"},
  };
  auto list = [&](const char* name, const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      fields.emplace_back(std::string(name) + "[" + std::to_string(i + 1) + "]", format_real(xs[i]));
  };
  list("lambda", r.lambda);
  list("delta", r.delta);
  list("mu", r.mu);
  return fields;
}

inline void write_report_kv(const TheoryReport& r, std::ostream& out) {
  std::string text;
  for (const auto& [key, value] : report_fields(r)) text += key + '=' + value + '\n';
  out << text;
}

inline void write_report_csv(const TheoryReport& r, std::ostream& out) {
  std::string text = "key,value\n";
  for (const auto& [key, value] : report_fields(r)) text += key + ',' + value + '\n';
  out << text;
}

}  // namespace rxc::theory
