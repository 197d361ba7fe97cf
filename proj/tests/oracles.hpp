#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rxc/instance.hpp"

namespace rxc::oracle {

/// Counts closed alternating walks v0 c1 v1 ... ci v0 that visit i distinct
/// variables and i distinct clauses over 2i distinct edges, then divides by
/// the 2i (start variable, direction) choices of each cycle.
inline std::uint64_t naive_cycle_count(const FormulaInstance& f, int i) {
  const auto k = static_cast<std::size_t>(f.params().k);
  struct Edge {
    std::size_t var, clause;
  };
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < f.clauses().size(); ++c)
    for (std::size_t p = 0; p < k; ++p) edges.push_back({static_cast<std::size_t>(f.clauses()[c][p]), c});

  std::uint64_t walks = 0;
  std::vector<std::size_t> used_edges, used_vars, used_clauses;
  auto contains = [](const std::vector<std::size_t>& xs, std::size_t x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
  };
  // at_var: current variable, about to leave it through a new edge.
  auto step = [&](auto&& self, std::size_t v0, std::size_t at_var, int clauses_so_far) -> void {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].var != at_var || contains(used_edges, e) || contains(used_clauses, edges[e].clause)) continue;
      const auto c = edges[e].clause;
      used_edges.push_back(e);
      used_clauses.push_back(c);
      for (std::size_t g = 0; g < edges.size(); ++g) {
        if (edges[g].clause != c || contains(used_edges, g)) continue;
        const auto u = edges[g].var;
        if (clauses_so_far + 1 == i) {
          if (u == v0) ++walks;
          continue;
        }
        if (u == v0 || contains(used_vars, u)) continue;
        used_edges.push_back(g);
        used_vars.push_back(u);
        self(self, v0, u, clauses_so_far + 1);
        used_vars.pop_back();
        used_edges.pop_back();
      }
      used_clauses.pop_back();
      used_edges.pop_back();
    }
  };
  for (std::int64_t v = 1; v <= f.num_vars(); ++v) step(step, static_cast<std::size_t>(v), static_cast<std::size_t>(v), 0);
  return walks / (2 * static_cast<std::uint64_t>(i));
}

/// N_{i,t} by listing all 2^i binary cyclic strings with no two cyclically
/// adjacent ones.
inline std::vector<std::uint64_t> enumerate_necklace(int i) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(i / 2) + 1, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << i); ++mask) {
    bool ok = true;
    for (int b = 0; b < i && ok; ++b)
      if ((mask >> b & 1) && (mask >> ((b + 1) % i) & 1)) ok = false;
    if (ok) ++counts[static_cast<std::size_t>(__builtin_popcountll(mask))];
  }
  return counts;
}

/// Non-adjacent t-subsets of an i-cycle: (i/(i-t)) C(i-t, t), t >= 1.
inline std::uint64_t necklace_closed_form(int i, int t) {
  std::uint64_t c = 1;
  for (int s = 1; s <= t; ++s) c = c * static_cast<std::uint64_t>(i - t - s + 1) / static_cast<std::uint64_t>(s);
  return c * static_cast<std::uint64_t>(i) / static_cast<std::uint64_t>(i - t);
}

/// phi1 written from its entropy form and solved for d by bisection.
inline double threshold_by_bisection(int k) {
  auto h = [](double a) { return -a * std::log(a) - (1 - a) * std::log(1 - a); };
  auto rate = [&](double d) { return d / k * std::log(static_cast<double>(k)) - (d - 1) * h(1.0 / k); };
  double lo = 1.0, hi = static_cast<double>(k);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exact distribution of the canonical instance text under a uniform
/// matching, by enumerating all (km)! bijections of copies to slots.
inline std::map<std::string, double> matching_distribution(const ModelParams& p) {
  const auto copies = static_cast<std::size_t>(p.copies());
  std::vector<std::size_t> perm(copies);
  std::iota(perm.begin(), perm.end(), 0);
  std::map<std::string, std::uint64_t> tally;
  std::uint64_t total = 0;
  do {
    std::vector<Clause> clauses(static_cast<std::size_t>(p.m()), Clause(static_cast<std::size_t>(p.k)));
    for (std::size_t copy = 0; copy < copies; ++copy)
      clauses[perm[copy] / static_cast<std::size_t>(p.k)][perm[copy] % static_cast<std::size_t>(p.k)] =
          static_cast<Var>(copy / static_cast<std::size_t>(p.d) + 1);
    for (auto& c : clauses) std::sort(c.begin(), c.end());
    std::sort(clauses.begin(), clauses.end());
    std::string key;
    for (const auto& c : clauses) {
      for (auto v : c) key += std::to_string(v) + ' ';
      key += '|';
    }
    ++tally[key];
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::map<std::string, double> probs;
  for (const auto& [key, count] : tally) probs[key] = static_cast<double>(count) / static_cast<double>(total);
  return probs;
}

/// Same key as `matching_distribution` for a given instance.
inline std::string distribution_key(const FormulaInstance& f) {
  auto canon = f.canonical();
  std::string key;
  for (const auto& c : canon.clauses()) {
    for (auto v : c) key += std::to_string(v) + ' ';
    key += '|';
  }
  return key;
}

/// X_1 straight from clause multiplicities: sum of C(mu, 2).
inline std::uint64_t double_edge_count(const FormulaInstance& f) {
  std::uint64_t total = 0;
  for (const auto& c : f.clauses()) {
    std::map<Var, std::uint64_t> mult;
    for (auto v : c) ++mult[v];
    for (const auto& [v, mu] : mult) total += mu * (mu - 1) / 2;
  }
  return total;
}

}  // namespace rxc::oracle
