#pragma once

// Monte Carlo harness: satisfiability curves, moment estimates, overlap
// histograms and cycle-count Poisson tests. Trial t of grid cell c draws its
// instance from stream_seed(masterSeed, c, t) and results are reduced in
// (cell, trial) order, so output does not depend on the worker count.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "rxc/cycles.hpp"
#include "rxc/error.hpp"
#include "rxc/instance.hpp"
#include "rxc/rng.hpp"
#include "rxc/solver.hpp"
#include "rxc/stats.hpp"
#include "rxc/theory.hpp"

namespace rxc::experiments {

enum class Kind { psat, moments, cycles, overlap };

inline const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::psat: return "psat";
    case Kind::moments: return "moments";
    case Kind::cycles: return "cycles";
    case Kind::overlap: return "overlap";
  }
  return "?";
}

inline Kind parse_kind(const std::string& name) {
  for (Kind k : {Kind::psat, Kind::moments, Kind::cycles, Kind::overlap})
    if (name == to_string(k)) return k;
  throw error(errc::config_invalid, "unknown experiment kind '" + name + "'");
}

inline constexpr std::int64_t kCountingMaxVars = 60;

struct ExperimentConfig {
  Kind kind = Kind::psat;
  std::vector<int> ks{3};
  std::vector<int> ds{2};
  std::vector<std::int64_t> ns{60};
  std::int64_t trials = 100;
  std::uint64_t master_seed = 0;
  std::uint64_t node_budget = kDefaultNodeBudget;
  unsigned workers = 1;  // 0 selects the available hardware parallelism
  int max_i = 3;         // cycles only
  std::int64_t counting_max_n = kCountingMaxVars;

  /// Grid cells in k-major, then d, then n order; the position of a cell
  /// in this list is its RNG cell index.
  std::vector<ModelParams> cells() const {
    std::vector<ModelParams> out;
    for (int k : ks)
      for (int d : ds)
        for (auto n : ns) out.push_back(ModelParams{n, k, d});
    return out;
  }

  void validate() const {
    if (trials < 1) throw error(errc::config_invalid, "trials must be positive");
    if (node_budget < 1) throw error(errc::config_invalid, "node budget must be positive");
    if (ks.empty() || ds.empty() || ns.empty()) throw error(errc::config_invalid, "empty parameter grid");
    for (const auto& p : cells()) {
      try {
        p.validate();
      } catch (const error& e) {
        throw error(errc::config_invalid, "cell (k=" + std::to_string(p.k) + ", d=" + std::to_string(p.d) +
                                              ", n=" + std::to_string(p.n) + "): " + e.what());
      }
      if ((kind == Kind::moments || kind == Kind::overlap) && p.n > counting_max_n)
        throw error(errc::config_invalid, "counting experiments need n <= " + std::to_string(counting_max_n));
      if (kind == Kind::overlap && p.n > 64) throw error(errc::config_invalid, "overlap experiments need n <= 64");
    }
    if (kind == Kind::cycles && (max_i < 1 || max_i > kDefaultCycleBound))
      throw error(errc::config_invalid, "max-i must be in 1.." + std::to_string(kDefaultCycleBound));
  }
};

struct PsatRow {
  ModelParams params;
  std::int64_t trials = 0;
  std::int64_t sat = 0;
  std::int64_t unsat = 0;
  std::int64_t undecided = 0;
  double p_hat = 0.0;  // over decided trials
  double stderr_p = 0.0;
};

struct MomentRow {
  ModelParams params;
  std::int64_t trials = 0;
  double mean_z = 0.0, se_z = 0.0;
  double mean_z2 = 0.0, se_z2 = 0.0;
  double exact_ez = 0.0, exact_ez2 = 0.0;
};

struct CycleRow {
  ModelParams params;
  int i = 0;
  std::int64_t trials = 0;
  double mean = 0.0;
  double var = 0.0;
  double exact_e = 0.0;
  stats::ChiSquare chi2;
};

struct CycleCovariance {
  ModelParams params;
  int i = 0, j = 0;
  double covariance = 0.0;
  double stderr_cov = 0.0;  // sqrt(var_i var_j / trials), the null-hypothesis scale
  double correlation = 0.0;
};

struct OverlapRow {
  ModelParams params;
  std::int64_t j = 0;  // |T - T'|
  std::int64_t w_num = 0, w_den = 1;
  std::int64_t trials = 0;
  double mean = 0.0;
  double se = 0.0;
  double exact = 0.0;
};

struct OverlapPeak {
  ModelParams params;
  std::int64_t j = 0;
  double w = 0.0;
  double mean_z2 = 0.0;  // sum of bucket means
};

struct ExperimentResult {
  Kind kind = Kind::psat;
  std::uint64_t master_seed = 0;
  std::vector<PsatRow> psat;
  std::vector<MomentRow> moments;
  std::vector<CycleRow> cycles;
  std::vector<CycleCovariance> covariances;
  std::vector<OverlapRow> overlap;
  std::vector<OverlapPeak> overlap_peaks;
};

/// Runs fn(0..count-1) on `workers` threads and returns outputs by index.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<T> out(count);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n_threads = std::min<std::size_t>(workers, count);
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace detail {

inline FormulaInstance trial_instance(const ExperimentConfig& cfg, const ModelParams& p, std::size_t cell,
                                      std::int64_t trial) {
  return generate(p, stream_seed(cfg.master_seed, cell, static_cast<std::uint64_t>(trial)));
}

enum class Outcome : std::uint8_t { unsat, sat, undecided };

}  // namespace detail

inline ExperimentResult psat_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result{Kind::psat, cfg.master_seed, {}, {}, {}, {}, {}, {}};
  const auto cells = cfg.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& p = cells[c];
    const auto outcomes = parallel_map<detail::Outcome>(
        static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
          const auto f = detail::trial_instance(cfg, p, c, static_cast<std::int64_t>(t));
          try {
            return solve(f, SolveOptions{SolveMode::decide, cfg.node_budget}).satisfiable ? detail::Outcome::sat
                                                                                           : detail::Outcome::unsat;
          } catch (const error& e) {
            if (e.code() != errc::resource_limit) throw;
            return detail::Outcome::undecided;
          }
        });
    PsatRow row;
    row.params = p;
    row.trials = cfg.trials;
    for (auto o : outcomes) {
      if (o == detail::Outcome::sat) ++row.sat;
      else if (o == detail::Outcome::unsat) ++row.unsat;
      else ++row.undecided;
    }
    const auto prop = stats::proportion(static_cast<std::uint64_t>(row.sat),
                                        static_cast<std::uint64_t>(row.sat + row.unsat));
    row.p_hat = prop.p_hat;
    row.stderr_p = prop.stderr_p;
    result.psat.push_back(row);
  }
  return result;
}

inline ExperimentResult moment_estimate(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result{Kind::moments, cfg.master_seed, {}, {}, {}, {}, {}, {}};
  const auto cells = cfg.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& p = cells[c];
    const auto z = parallel_map<double>(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
      const auto f = detail::trial_instance(cfg, p, c, static_cast<std::int64_t>(t));
      return static_cast<double>(solve(f, SolveOptions{SolveMode::count, cfg.node_budget}).count);
    });
    std::vector<double> z2(z.size());
    std::transform(z.begin(), z.end(), z2.begin(), [](double x) { return x * x; });
    const auto sz = stats::summarize(z), sz2 = stats::summarize(z2);
    MomentRow row;
    row.params = p;
    row.trials = cfg.trials;
    row.mean_z = sz.mean;
    row.se_z = sz.stderr_mean;
    row.mean_z2 = sz2.mean;
    row.se_z2 = sz2.stderr_mean;
    row.exact_ez = theory::exact_first_moment(p).approx();
    row.exact_ez2 = theory::exact_second_moment(p).approx();
    result.moments.push_back(row);
  }
  return result;
}

inline ExperimentResult overlap_histogram(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result{Kind::overlap, cfg.master_seed, {}, {}, {}, {}, {}, {}};
  const auto cells = cfg.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& p = cells[c];
    const auto buckets = static_cast<std::size_t>(p.true_count()) + 1;
    // Per trial: number of ordered solution pairs (T, T') at each |T - T'|.
    const auto per_trial = parallel_map<std::vector<double>>(
        static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
          const auto f = detail::trial_instance(cfg, p, c, static_cast<std::int64_t>(t));
          const auto r = solve(f, SolveOptions{SolveMode::enumerate, cfg.node_budget});
          std::vector<std::uint64_t> masks;
          masks.reserve(r.solutions->size());
          for (const auto& a : *r.solutions) {
            std::uint64_t mask = 0;
            for (Var v : a.true_set) mask |= std::uint64_t{1} << (v - 1);
            masks.push_back(mask);
          }
          std::vector<double> hist(buckets, 0.0);
          for (auto a : masks)
            for (auto b : masks) hist[static_cast<std::size_t>(std::popcount(a & ~b))] += 1.0;
          return hist;
        });
    OverlapPeak peak{p, 0, 0.0, 0.0};
    double peak_mean = -1.0;
    for (std::size_t j = 0; j < buckets; ++j) {
      std::vector<double> column(per_trial.size());
      for (std::size_t t = 0; t < per_trial.size(); ++t) column[t] = per_trial[t][j];
      const auto s = stats::summarize(column);
      OverlapRow row;
      row.params = p;
      row.j = static_cast<std::int64_t>(j);
      const auto g = std::gcd(row.j * p.k, p.n);
      row.w_num = row.j * p.k / g;
      row.w_den = p.n / g;
      row.trials = cfg.trials;
      row.mean = s.mean;
      row.se = s.stderr_mean;
      row.exact = theory::exact_pair_moment_at(p, row.j).value.approx();
      peak.mean_z2 += s.mean;
      if (s.mean > peak_mean) {
        peak_mean = s.mean;
        peak.j = row.j;
        peak.w = static_cast<double>(row.w_num) / static_cast<double>(row.w_den);
      }
      result.overlap.push_back(row);
    }
    result.overlap_peaks.push_back(peak);
  }
  return result;
}

inline ExperimentResult cycle_poisson_test(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result{Kind::cycles, cfg.master_seed, {}, {}, {}, {}, {}, {}};
  const auto cells = cfg.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& p = cells[c];
    const auto per_trial = parallel_map<std::vector<std::uint64_t>>(
        static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
          return census(detail::trial_instance(cfg, p, c, static_cast<std::int64_t>(t)), cfg.max_i).counts;
        });
    std::vector<std::vector<double>> columns(static_cast<std::size_t>(cfg.max_i));
    for (int i = 1; i <= cfg.max_i; ++i) {
      std::vector<std::uint64_t> samples(per_trial.size());
      auto& column = columns[static_cast<std::size_t>(i - 1)];
      column.resize(per_trial.size());
      for (std::size_t t = 0; t < per_trial.size(); ++t) {
        samples[t] = per_trial[t][static_cast<std::size_t>(i - 1)];
        column[t] = static_cast<double>(samples[t]);
      }
      const auto s = stats::summarize(column);
      CycleRow row;
      row.params = p;
      row.i = i;
      row.trials = cfg.trials;
      row.mean = s.mean;
      row.var = s.variance;
      row.exact_e = 2 * static_cast<std::int64_t>(i) <= p.copies()
                        ? static_cast<double>(theory::exact_cycle_expectation(p, i))
                        : 0.0;
      if (row.exact_e > 0.0) row.chi2 = stats::chi_square_poisson(samples, row.exact_e);
      result.cycles.push_back(row);
    }
    for (int i = 1; i <= cfg.max_i; ++i) {
      for (int j = i + 1; j <= cfg.max_i; ++j) {
        const auto& xi = columns[static_cast<std::size_t>(i - 1)];
        const auto& xj = columns[static_cast<std::size_t>(j - 1)];
        CycleCovariance cov;
        cov.params = p;
        cov.i = i;
        cov.j = j;
        cov.covariance = stats::covariance(xi, xj);
        cov.correlation = stats::correlation(xi, xj);
        cov.stderr_cov = std::sqrt(stats::summarize(xi).variance * stats::summarize(xj).variance /
                                   static_cast<double>(cfg.trials));
        result.covariances.push_back(cov);
      }
    }
  }
  return result;
}

inline ExperimentResult run(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::psat: return psat_curve(cfg);
    case Kind::moments: return moment_estimate(cfg);
    case Kind::cycles: return cycle_poisson_test(cfg);
    case Kind::overlap: return overlap_histogram(cfg);
  }
  throw error(errc::config_invalid, "unknown experiment kind");
}

namespace detail {

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string cell_prefix(const ModelParams& p) {
  return std::to_string(p.k) + ',' + std::to_string(p.d) + ',' + std::to_string(p.n) + ',';
}

}  // namespace detail

/// Fixed per-kind CSV schema, LF line endings, header row first.
inline void write_csv(const ExperimentResult& r, std::ostream& out) {
  using detail::cell_prefix;
  using detail::num;
  std::string text;
  switch (r.kind) {
    case Kind::psat:
      text = "k,d,n,trials,sat,unsat,undecided,p_hat,stderr,master_seed\n";
      for (const auto& row : r.psat)
        text += cell_prefix(row.params) + std::to_string(row.trials) + ',' + std::to_string(row.sat) + ',' +
                std::to_string(row.unsat) + ',' + std::to_string(row.undecided) + ',' + num(row.p_hat) + ',' +
                num(row.stderr_p) + ',' + std::to_string(r.master_seed) + '\n';
      break;
    case Kind::moments:
      text = "k,d,n,trials,meanZ,seZ,meanZ2,seZ2,exactEZ,exactEZ2\n";
      for (const auto& row : r.moments)
        text += cell_prefix(row.params) + std::to_string(row.trials) + ',' + num(row.mean_z) + ',' +
                num(row.se_z) + ',' + num(row.mean_z2) + ',' + num(row.se_z2) + ',' + num(row.exact_ez) + ',' +
                num(row.exact_ez2) + '\n';
      break;
    case Kind::cycles:
      text = "k,d,n,i,trials,mean,var,exactE,chi2,df\n";
      for (const auto& row : r.cycles)
        text += cell_prefix(row.params) + std::to_string(row.i) + ',' + std::to_string(row.trials) + ',' +
                num(row.mean) + ',' + num(row.var) + ',' + num(row.exact_e) + ',' + num(row.chi2.statistic) +
                ',' + std::to_string(row.chi2.df) + '\n';
      break;
    case Kind::overlap:
      text = "k,d,n,w_num,w_den,mean,se,exact\n";
      for (const auto& row : r.overlap)
        text += cell_prefix(row.params) + std::to_string(row.w_num) + ',' + std::to_string(row.w_den) + ',' +
                num(row.mean) + ',' + num(row.se) + ',' + num(row.exact) + '\n';
      break;
  }
  out << text;
}

}  // namespace rxc::experiments
