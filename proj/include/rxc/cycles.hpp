#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rxc/error.hpp"
#include "rxc/instance.hpp"

namespace rxc {

inline constexpr int kDefaultCycleBound = 8;

/// X_1..X_maxI, where X_i counts cycles through i distinct variables and i
/// distinct clauses. Parallel edges are distinct edges, so a variable
/// occurring mu times in a clause contributes C(mu, 2) to X_1.
struct CycleCensus {
  int max_i = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(int i) const { return counts.at(static_cast<std::size_t>(i - 1)); }
  friend bool operator==(const CycleCensus&, const CycleCensus&) = default;
};

namespace detail {

struct Incidence {
  std::int32_t edge;
  std::int32_t other;
};

/// Rooted DFS counting each cycle once: the root is the cycle's smallest
/// variable and the walk direction is the one whose first edge has the
/// smaller slot id than the closing edge.
class CycleCounter {
 public:
  CycleCounter(const FormulaInstance& f, int max_i)
      : max_i_(max_i),
        var_edges_(static_cast<std::size_t>(f.num_vars()) + 1),
        clause_edges_(static_cast<std::size_t>(f.num_clauses())),
        var_seen_(static_cast<std::size_t>(f.num_vars()) + 1, 0),
        clause_seen_(static_cast<std::size_t>(f.num_clauses()), 0),
        counts_(static_cast<std::size_t>(max_i), 0) {
    const auto k = static_cast<std::int32_t>(f.params().k);
    for (std::size_t c = 0; c < f.clauses().size(); ++c) {
      for (std::size_t p = 0; p < f.clauses()[c].size(); ++p) {
        const auto edge = static_cast<std::int32_t>(c) * k + static_cast<std::int32_t>(p);
        const Var v = f.clauses()[c][p];
        var_edges_[static_cast<std::size_t>(v)].push_back({edge, static_cast<std::int32_t>(c)});
        clause_edges_[c].push_back({edge, v});
      }
    }
  }

  std::vector<std::uint64_t> run() {
    for (std::size_t r = 1; r < var_edges_.size(); ++r) {
      root_ = static_cast<Var>(r);
      var_seen_[r] = 1;
      for (const auto& first : var_edges_[r]) {
        first_edge_ = first.edge;
        clause_seen_[static_cast<std::size_t>(first.other)] = 1;
        extend(first.other, first.edge, 1);
        clause_seen_[static_cast<std::size_t>(first.other)] = 0;
      }
      var_seen_[r] = 0;
    }
    return std::move(counts_);
  }

 private:
  void extend(std::int32_t clause, std::int32_t in_edge, int clauses_used) {
    for (const auto& out : clause_edges_[static_cast<std::size_t>(clause)]) {
      if (out.edge == in_edge) continue;
      if (out.other == root_) {
        if (first_edge_ < out.edge) ++counts_[static_cast<std::size_t>(clauses_used - 1)];
        continue;
      }
      const auto v = static_cast<std::size_t>(out.other);
      if (out.other < root_ || var_seen_[v] || clauses_used == max_i_) continue;
      var_seen_[v] = 1;
      for (const auto& next : var_edges_[v]) {
        const auto c = static_cast<std::size_t>(next.other);
        if (clause_seen_[c]) continue;
        clause_seen_[c] = 1;
        extend(next.other, next.edge, clauses_used + 1);
        clause_seen_[c] = 0;
      }
      var_seen_[v] = 0;
    }
  }

  int max_i_;
  std::vector<std::vector<Incidence>> var_edges_;
  std::vector<std::vector<Incidence>> clause_edges_;
  std::vector<char> var_seen_;
  std::vector<char> clause_seen_;
  std::vector<std::uint64_t> counts_;
  Var root_ = 0;
  std::int32_t first_edge_ = 0;
};

}  // namespace detail

inline CycleCensus census(const FormulaInstance& f, int max_i, int bound = kDefaultCycleBound) {
  if (max_i < 1 || max_i > bound)
    throw error(errc::bound_exceeded,
                "max-i must be in 1.." + std::to_string(bound) + ", got " + std::to_string(max_i));
  return CycleCensus{max_i, detail::CycleCounter(f, max_i).run()};
}

inline void write_census_kv(const CycleCensus& c, std::ostream& out) {
  std::string text;
  for (int i = 1; i <= c.max_i; ++i) text += "X[" + std::to_string(i) + "]=" + std::to_string(c.at(i)) + '\n';
  out << text;
}

inline void write_census_csv(const CycleCensus& c, std::ostream& out) {
  std::string text = "i,count\n";
  for (int i = 1; i <= c.max_i; ++i) text += std::to_string(i) + ',' + std::to_string(c.at(i)) + '\n';
  out << text;
}

}  // namespace rxc
