#pragma once

// Exact decision, counting and enumeration of exact covers, plus a
// brute-force oracle over all 2^n subsets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rxc/error.hpp"
#include "rxc/instance.hpp"
#include "rxc/numeric.hpp"

namespace rxc {

/// True iff every clause has exactly one true occurrence, counting
/// multiplicity.
inline bool satisfies(const FormulaInstance& f, const Assignment& a) {
  std::vector<char> is_true(static_cast<std::size_t>(f.num_vars()) + 1, 0);
  for (Var v : a.true_set) {
    if (v < 1 || v > f.num_vars()) throw error(errc::invariant_violation, "assignment index out of range");
    is_true[static_cast<std::size_t>(v)] = 1;
  }
  for (const auto& clause : f.clauses()) {
    int hits = 0;
    for (Var v : clause) hits += is_true[static_cast<std::size_t>(v)];
    if (hits != 1) return false;
  }
  return true;
}

enum class SolveMode { decide, count, enumerate };

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000'000;

struct SolveOptions {
  SolveMode mode = SolveMode::count;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

struct SolveResult {
  bool satisfiable = false;
  /// Exact Z in count/enumerate mode. In decide mode a satisfiable result
  /// reports 1 and sets `count_is_lower_bound`.
  BigInt count = 0;
  bool count_is_lower_bound = false;
  std::optional<std::vector<Assignment>> solutions;
  std::uint64_t nodes = 0;
};

/// Algorithm X with dancing links. Columns are clauses, rows are variables
/// that survive preprocessing; a row covers the d distinct clauses its
/// variable occurs in. Decide and count recurse on connected components of
/// the remaining matrix and multiply; enumerate runs the plain search.
/// One solve per object: after a resource_limit throw the links are left
/// mid-search.
class ExactCoverSolver {
 public:
  explicit ExactCoverSolver(const FormulaInstance& f) {
    const auto m = static_cast<std::size_t>(f.num_clauses());
    const auto n = static_cast<std::size_t>(f.num_vars());

    // A variable repeated inside one clause would put two true occurrences
    // there, so it is false in every solution.
    std::vector<char> forced_false(n + 1, 0);
    std::vector<std::vector<std::int32_t>> var_clauses(n + 1);
    for (std::size_t j = 0; j < m; ++j) {
      const auto& clause = f.clauses()[j];
      for (std::size_t a = 0; a < clause.size(); ++a) {
        for (std::size_t b = a + 1; b < clause.size(); ++b)
          if (clause[a] == clause[b]) forced_false[static_cast<std::size_t>(clause[a])] = 1;
        var_clauses[static_cast<std::size_t>(clause[a])].push_back(static_cast<std::int32_t>(j));
      }
    }

    const std::size_t headers = m + 1;
    degree_ = static_cast<std::size_t>(f.params().d);
    reserve(headers + n * degree_);
    for (std::size_t c = 0; c < headers; ++c) {
      left_.push_back(static_cast<std::int32_t>(c == 0 ? m : c - 1));
      right_.push_back(static_cast<std::int32_t>(c == m ? 0 : c + 1));
      up_.push_back(static_cast<std::int32_t>(c));
      down_.push_back(static_cast<std::int32_t>(c));
      column_.push_back(static_cast<std::int32_t>(c));
      row_.push_back(0);
    }
    size_.assign(headers, 0);
    active_.assign(headers, 1);

    for (std::size_t v = 1; v <= n; ++v) {
      if (forced_false[v]) continue;
      const auto first = static_cast<std::int32_t>(left_.size());
      const auto& cols = var_clauses[v];
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto node = static_cast<std::int32_t>(left_.size());
        const auto col = cols[i] + 1;
        left_.push_back(i == 0 ? first + static_cast<std::int32_t>(cols.size()) - 1 : node - 1);
        right_.push_back(i + 1 == cols.size() ? first : node + 1);
        up_.push_back(up_[static_cast<std::size_t>(col)]);
        down_.push_back(col);
        down_[static_cast<std::size_t>(up_[static_cast<std::size_t>(col)])] = node;
        up_[static_cast<std::size_t>(col)] = node;
        column_.push_back(col);
        row_.push_back(static_cast<Var>(v));
        ++size_[static_cast<std::size_t>(col)];
      }
    }
  }

  SolveResult solve(const SolveOptions& options) {
    mode_ = options.mode;
    budget_ = options.node_budget;
    nodes_ = 0;
    found_ = 0;
    partial_.clear();
    solutions_.clear();

    SolveResult result;
    if (mode_ == SolveMode::enumerate) {
      search();
      result.satisfiable = found_ > 0;
      result.count = found_;
      result.solutions = std::move(solutions_);
    } else {
      std::vector<std::int32_t> all;
      for (auto c = right_[0]; c != 0; c = right_[static_cast<std::size_t>(c)]) all.push_back(c);
      if (mode_ == SolveMode::decide) {
        result.satisfiable = decide_all(all);
        result.count = result.satisfiable ? 1 : 0;
        result.count_is_lower_bound = result.satisfiable;
      } else {
        result.count = count_all(all);
        result.satisfiable = result.count > 0;
      }
    }
    result.nodes = nodes_;
    return result;
  }

 private:
  using Columns = std::vector<std::int32_t>;

  void reserve(std::size_t nodes) {
    for (auto* v : {&left_, &right_, &up_, &down_, &column_}) v->reserve(nodes);
    row_.reserve(nodes);
  }

  std::size_t at(std::int32_t i) const { return static_cast<std::size_t>(i); }

  void cover(std::int32_t c) {
    active_[at(c)] = 0;
    right_[at(left_[at(c)])] = right_[at(c)];
    left_[at(right_[at(c)])] = left_[at(c)];
    for (auto i = down_[at(c)]; i != c; i = down_[at(i)]) {
      for (auto j = right_[at(i)]; j != i; j = right_[at(j)]) {
        up_[at(down_[at(j)])] = up_[at(j)];
        down_[at(up_[at(j)])] = down_[at(j)];
        --size_[at(column_[at(j)])];
      }
    }
  }

  void uncover(std::int32_t c) {
    for (auto i = up_[at(c)]; i != c; i = up_[at(i)]) {
      for (auto j = left_[at(i)]; j != i; j = left_[at(j)]) {
        ++size_[at(column_[at(j)])];
        up_[at(down_[at(j)])] = j;
        down_[at(up_[at(j)])] = j;
      }
    }
    right_[at(left_[at(c)])] = c;
    left_[at(right_[at(c)])] = c;
    active_[at(c)] = 1;
  }

  void select_row(std::int32_t r) {
    for (auto j = right_[at(r)]; j != r; j = right_[at(j)]) cover(column_[at(j)]);
  }

  void unselect_row(std::int32_t r) {
    for (auto j = left_[at(r)]; j != r; j = left_[at(j)]) uncover(column_[at(j)]);
  }

  void tick() {
    if (++nodes_ > budget_)
      throw error(errc::resource_limit, "node budget of " + std::to_string(budget_) + " exceeded");
  }

  // Plain Algorithm X over the whole matrix; used for enumeration.
  void search() {
    tick();
    if (right_[0] == 0) {
      ++found_;
      solutions_.emplace_back(partial_);
      return;
    }
    std::int32_t best = right_[0];
    for (auto c = right_[0]; c != 0; c = right_[at(c)]) {
      if (size_[at(c)] < size_[at(best)]) best = c;
      if (size_[at(best)] <= 1) break;
    }
    if (size_[at(best)] == 0) return;

    cover(best);
    for (auto r = down_[at(best)]; r != best; r = down_[at(r)]) {
      partial_.push_back(row_[at(r)]);
      select_row(r);
      search();
      unselect_row(r);
      partial_.pop_back();
    }
    uncover(best);
  }

  // Splits the still-active members of `cols` into connected components,
  // two columns being connected when some remaining row covers both.
  std::vector<Columns> components(const Columns& cols) {
    if (stamp_.size() < active_.size()) stamp_.assign(active_.size(), 0);
    ++generation_;
    std::vector<Columns> out;
    for (auto seed : cols) {
      if (!active_[at(seed)] || stamp_[at(seed)] == generation_) continue;
      Columns comp{seed};
      stamp_[at(seed)] = generation_;
      for (std::size_t head = 0; head < comp.size(); ++head) {
        const auto c = comp[head];
        for (auto i = down_[at(c)]; i != c; i = down_[at(i)]) {
          for (auto j = right_[at(i)]; j != i; j = right_[at(j)]) {
            const auto other = column_[at(j)];
            if (stamp_[at(other)] != generation_) {
              stamp_[at(other)] = generation_;
              comp.push_back(other);
            }
          }
        }
      }
      out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end(), [](const Columns& a, const Columns& b) { return a.size() < b.size(); });
    return out;
  }

  // Every remaining row covers exactly d columns, so a component of c
  // columns needs c/d rows.
  bool divisible(const Columns& comp) const { return comp.size() % degree_ == 0; }

  std::int32_t branch_column(const Columns& comp) const {
    std::int32_t best = comp.front();
    for (auto c : comp) {
      if (size_[at(c)] < size_[at(best)]) best = c;
      if (size_[at(best)] <= 1) break;
    }
    return best;
  }

  bool decide_all(const Columns& cols) {
    for (const auto& comp : components(cols)) {
      if (!decide_component(comp)) return false;
    }
    return true;
  }

  bool decide_component(const Columns& comp) {
    tick();
    if (!divisible(comp)) return false;
    const auto best = branch_column(comp);
    if (size_[at(best)] == 0) return false;
    bool ok = false;
    cover(best);
    for (auto r = down_[at(best)]; r != best && !ok; r = down_[at(r)]) {
      select_row(r);
      ok = decide_all(comp);
      unselect_row(r);
    }
    uncover(best);
    return ok;
  }

  BigInt count_all(const Columns& cols) {
    BigInt total = 1;
    for (const auto& comp : components(cols)) {
      total *= count_component(comp);
      if (total == 0) break;
    }
    return total;
  }

  BigInt count_component(const Columns& comp) {
    tick();
    if (!divisible(comp)) return 0;
    const auto best = branch_column(comp);
    if (size_[at(best)] == 0) return 0;
    BigInt total = 0;
    cover(best);
    for (auto r = down_[at(best)]; r != best; r = down_[at(r)]) {
      select_row(r);
      total += count_all(comp);
      unselect_row(r);
    }
    uncover(best);
    return total;
  }

  std::vector<std::int32_t> left_, right_, up_, down_, column_, size_;
  std::vector<Var> row_;
  std::vector<char> active_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t generation_ = 0;
  std::size_t degree_ = 1;

  SolveMode mode_ = SolveMode::count;
  std::uint64_t budget_ = kDefaultNodeBudget;
  std::uint64_t nodes_ = 0;
  std::uint64_t found_ = 0;
  std::vector<Var> partial_;
  std::vector<Assignment> solutions_;
};

/// Throws errc::resource_limit when the node budget runs out; the outcome
/// is then unknown, not unsatisfiable.
inline SolveResult solve(const FormulaInstance& f, const SolveOptions& options = {}) {
  ExactCoverSolver solver(f);
  return solver.solve(options);
}

inline SolveResult solve(const FormulaInstance& f, SolveMode mode) {
  return solve(f, SolveOptions{mode, kDefaultNodeBudget});
}

inline constexpr std::int64_t kBruteForceMaxVars = 24;

/// Calls `visit(mask)` for every satisfying subset, where bit v-1 of `mask`
/// is set iff variable v is true. Returns the number visited.
template <class Visitor>
std::uint64_t brute_force_enumerate(const FormulaInstance& f, Visitor&& visit) {
  if (f.num_vars() > kBruteForceMaxVars)
    throw error(errc::instance_too_large, "brute force is limited to n <= 24");

  // Each clause as (mask of its distinct members, weighted members). For a
  // clause whose members are distinct the test is popcount(T & mask) == 1.
  struct ClauseTest {
    std::uint32_t mask = 0;
    bool repeated = false;
    std::vector<std::pair<std::uint32_t, int>> weighted;
  };
  std::vector<ClauseTest> tests;
  tests.reserve(f.clauses().size());
  for (const auto& clause : f.clauses()) {
    ClauseTest t;
    for (Var v : clause) {
      const std::uint32_t bit = 1u << (v - 1);
      if (t.mask & bit) t.repeated = true;
      t.mask |= bit;
    }
    if (t.repeated) {
      for (Var v : clause) {
        const std::uint32_t bit = 1u << (v - 1);
        auto it = std::find_if(t.weighted.begin(), t.weighted.end(), [&](auto& p) { return p.first == bit; });
        if (it == t.weighted.end()) t.weighted.emplace_back(bit, 1);
        else ++it->second;
      }
    }
    tests.push_back(std::move(t));
  }

  std::uint64_t found = 0;
  const std::uint64_t limit = std::uint64_t{1} << f.num_vars();
  for (std::uint64_t subset = 0; subset < limit; ++subset) {
    const auto mask = static_cast<std::uint32_t>(subset);
    bool ok = true;
    for (const auto& t : tests) {
      if (!t.repeated) {
        if (std::popcount(mask & t.mask) != 1) { ok = false; break; }
      } else {
        int hits = 0;
        for (auto [bit, weight] : t.weighted)
          if (mask & bit) hits += weight;
        if (hits != 1) { ok = false; break; }
      }
    }
    if (ok) {
      ++found;
      visit(mask);
    }
  }
  return found;
}

inline BigInt brute_force_count(const FormulaInstance& f) {
  return BigInt(brute_force_enumerate(f, [](std::uint32_t) {}));
}

/// `<satisfiable:0|1> <count>` followed by one `s <indices>` line per
/// enumerated solution.
inline void write_result(const SolveResult& r, std::ostream& out) {
  std::string text = (r.satisfiable ? "1 " : "0 ") + r.count.str() + '\n';
  if (r.solutions) {
    for (const auto& a : *r.solutions) {
      text += 's';
      for (Var v : a.true_set) text += ' ' + std::to_string(v);
      text += '\n';
    }
  }
  out << text;
}

}  // namespace rxc
