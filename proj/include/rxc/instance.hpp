#pragma once

// Formula data model for k-uniform d-regular exact cover (positive 1-in-k SAT)
// and the configuration-model generator.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rxc/error.hpp"
#include "rxc/rng.hpp"

namespace rxc {

using Var = std::int32_t;  // 1-based variable index

/// (n, k, d) with m = dn/k derived. Construct through `checked` on any path
/// that has not already validated its inputs.
struct ModelParams {
  std::int64_t n = 0;
  int k = 0;
  int d = 0;

  std::int64_t m() const noexcept { return static_cast<std::int64_t>(d) * n / k; }
  std::int64_t copies() const noexcept { return static_cast<std::int64_t>(d) * n; }
  std::int64_t true_count() const noexcept { return n / k; }

  void validate() const {
    if (k < 3) throw error(errc::invalid_params, "k must be at least 3, got " + std::to_string(k));
    if (d < 1) throw error(errc::invalid_params, "d must be at least 1, got " + std::to_string(d));
    if (n < k) throw error(errc::invalid_params, "n must be at least k");
    if (n % k != 0) throw error(errc::invalid_params, "k must divide n");
    if (copies() % k != 0) throw error(errc::invalid_params, "k must divide d*n");
    if (copies() > std::int64_t{1} << 30) throw error(errc::invalid_params, "d*n too large");
  }

  static ModelParams checked(std::int64_t n, int k, int d) {
    ModelParams p{n, k, d};
    p.validate();
    return p;
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

using Clause = std::vector<Var>;

/// Bipartite multigraph of n degree-d variables and m degree-k clauses.
/// Each clause is a multiset of k variable indices; a repeated index is a
/// parallel edge. Storage order of clauses and of slots inside a clause is
/// the generation order and has no semantic meaning.
class FormulaInstance {
 public:
  FormulaInstance(ModelParams params, std::vector<Clause> clauses)
      : params_(params), clauses_(std::move(clauses)) {
    params_.validate();
    check_invariants();
  }

  const ModelParams& params() const noexcept { return params_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  std::int64_t num_vars() const noexcept { return params_.n; }
  std::int64_t num_clauses() const noexcept { return static_cast<std::int64_t>(clauses_.size()); }

  /// Indices sorted within each clause, clauses sorted lexicographically.
  FormulaInstance canonical() const {
    auto sorted = clauses_;
    for (auto& c : sorted) std::sort(c.begin(), c.end());
    std::sort(sorted.begin(), sorted.end());
    return FormulaInstance(params_, std::move(sorted), trusted{});
  }

  friend bool operator==(const FormulaInstance&, const FormulaInstance&) = default;

 private:
  struct trusted {};
  FormulaInstance(ModelParams params, std::vector<Clause> clauses, trusted)
      : params_(params), clauses_(std::move(clauses)) {}

  void check_invariants() const {
    if (num_clauses() != params_.m())
      throw error(errc::invariant_violation, "expected " + std::to_string(params_.m()) +
                                                 " clauses, got " + std::to_string(num_clauses()));
    std::vector<int> occurrences(static_cast<std::size_t>(params_.n) + 1, 0);
    for (std::size_t j = 0; j < clauses_.size(); ++j) {
      const auto& c = clauses_[j];
      if (static_cast<int>(c.size()) != params_.k)
        throw error(errc::invariant_violation,
                    "clause " + std::to_string(j + 1) + " has " + std::to_string(c.size()) +
                        " members, expected " + std::to_string(params_.k));
      for (Var v : c) {
        if (v < 1 || v > params_.n)
          throw error(errc::invariant_violation, "variable index " + std::to_string(v) +
                                                     " outside 1.." + std::to_string(params_.n));
        ++occurrences[static_cast<std::size_t>(v)];
      }
    }
    for (std::int64_t v = 1; v <= params_.n; ++v)
      if (occurrences[static_cast<std::size_t>(v)] != params_.d)
        throw error(errc::invariant_violation,
                    "variable " + std::to_string(v) + " occurs " +
                        std::to_string(occurrences[static_cast<std::size_t>(v)]) + " times, expected " +
                        std::to_string(params_.d));
  }

  ModelParams params_;
  std::vector<Clause> clauses_;
};

/// A set T of true variables. Kept sorted and duplicate-free.
struct Assignment {
  std::vector<Var> true_set;

  Assignment() = default;
  explicit Assignment(std::vector<Var> vars) : true_set(std::move(vars)) {
    std::sort(true_set.begin(), true_set.end());
    if (std::adjacent_find(true_set.begin(), true_set.end()) != true_set.end())
      throw error(errc::invariant_violation, "assignment contains a duplicate index");
  }

  std::size_t size() const noexcept { return true_set.size(); }
  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Uniformly random configuration-model instance. Variable v owns copy
/// positions d(v-1)..dv-1; a Fisher-Yates shuffle of the km clause slots
/// decides which slot each copy is wired to. Pure in (params, seed).
inline FormulaInstance generate(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  const auto copies = static_cast<std::size_t>(params.copies());
  std::vector<std::int32_t> slots(copies);
  std::iota(slots.begin(), slots.end(), 0);
  Xoshiro256 engine(seed);
  fisher_yates(std::span<std::int32_t>(slots), engine);

  std::vector<Clause> clauses(static_cast<std::size_t>(params.m()), Clause(static_cast<std::size_t>(params.k)));
  for (std::size_t copy = 0; copy < copies; ++copy) {
    const auto slot = static_cast<std::size_t>(slots[copy]);
    clauses[slot / static_cast<std::size_t>(params.k)][slot % static_cast<std::size_t>(params.k)] =
        static_cast<Var>(copy / static_cast<std::size_t>(params.d) + 1);
  }
  return FormulaInstance(params, std::move(clauses));
}

/// Writes the canonical form: `p xc n m k d` then one sorted clause per line.
inline void write_instance(const FormulaInstance& f, std::ostream& out) {
  const auto canon = f.canonical();
  const auto& p = f.params();
  std::string text = "p xc " + std::to_string(p.n) + ' ' + std::to_string(p.m()) + ' ' +
                     std::to_string(p.k) + ' ' + std::to_string(p.d) + '\n';
  for (const auto& clause : canon.clauses()) {
    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (i) text += ' ';
      text += std::to_string(clause[i]);
    }
    text += '\n';
  }
  out << text;
}

inline std::string to_string(const FormulaInstance& f) {
  std::ostringstream out;
  write_instance(f, out);
  return out.str();
}

namespace detail {

inline std::vector<std::int64_t> parse_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::int64_t> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] != ' ') throw parse_error(line_no, "unexpected character");
    ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') ++pos;
    if (pos == start) throw parse_error(line_no, "expected a decimal integer");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + pos, value);
    if (ec != std::errc{} || ptr != line.data() + pos) throw parse_error(line_no, "integer out of range");
    fields.push_back(value);
  }
  return fields;
}

}  // namespace detail

/// Parses the instance format. Clause order is taken from the file;
/// compare `canonical()` forms for semantic equality.
inline FormulaInstance read_instance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  ModelParams params;
  std::int64_t declared_m = 0;
  std::vector<Clause> clauses;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw parse_error(line_no, "CR line ending");
    if (line == "c" || line.starts_with("c ")) continue;
    if (!have_header) {
      if (!line.starts_with("p xc")) throw parse_error(line_no, "expected header 'p xc <n> <m> <k> <d>'");
      const auto fields = detail::parse_fields(std::string_view(line).substr(4), line_no);
      if (fields.size() != 4) throw parse_error(line_no, "header needs exactly four integers");
      if (fields[2] > 1'000'000 || fields[3] > 1'000'000) throw parse_error(line_no, "k or d out of range");
      params = ModelParams{fields[0], static_cast<int>(fields[2]), static_cast<int>(fields[3])};
      try {
        params.validate();
      } catch (const error& e) {
        throw error(errc::invariant_violation, "line " + std::to_string(line_no) + ": " + e.what());
      }
      declared_m = fields[1];
      if (declared_m != params.m())
        throw error(errc::invariant_violation,
                    "line " + std::to_string(line_no) + ": declared m disagrees with d*n/k");
      clauses.reserve(static_cast<std::size_t>(declared_m));
      have_header = true;
      continue;
    }
    if (static_cast<std::int64_t>(clauses.size()) == declared_m)
      throw parse_error(line_no, "more clause lines than declared");
    if (line.empty()) throw parse_error(line_no, "empty clause line");
    const auto fields = detail::parse_fields(" " + line, line_no);
    if (static_cast<std::int64_t>(fields.size()) != params.k)
      throw parse_error(line_no, "clause has " + std::to_string(fields.size()) + " indices, expected " +
                                     std::to_string(params.k));
    Clause clause;
    clause.reserve(fields.size());
    for (auto v : fields) {
      if (v < 1 || v > params.n)
        throw error(errc::invariant_violation,
                    "line " + std::to_string(line_no) + ": variable index out of range");
      clause.push_back(static_cast<Var>(v));
    }
    clauses.push_back(std::move(clause));
  }
  if (!have_header) throw parse_error(line_no + 1, "missing header");
  return FormulaInstance(params, std::move(clauses));
}

inline FormulaInstance read_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_instance(in);
}

}  // namespace rxc
