#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qbf {

using Var = uint32_t;      // 1-based variable id
using ClauseId = int32_t;  // 1-based index into the matrix

// A literal in DIMACS convention: positive code for the variable itself,
// negative code for its negation. Code 0 is reserved.
class Lit {
 public:
  Lit() = default;
  explicit Lit(int32_t dimacs) : code_(dimacs) {}

  static Lit positive(Var v) { return Lit(static_cast<int32_t>(v)); }
  static Lit negative(Var v) { return Lit(-static_cast<int32_t>(v)); }

  Var var() const { return static_cast<Var>(std::abs(code_)); }
  bool is_positive() const { return code_ > 0; }
  Lit negated() const { return Lit(-code_); }
  int32_t to_dimacs() const { return code_; }

  bool operator==(const Lit&) const = default;
  // canonical order: by variable, negative phase first
  bool operator<(const Lit& o) const {
    if (var() != o.var()) return var() < o.var();
    return code_ < o.code_;
  }

 private:
  int32_t code_ = 0;
};

inline Lit operator-(Lit l) { return l.negated(); }

// Sorted, duplicate-free literal vector.
std::vector<Lit> normalize_clause(std::vector<Lit> lits);
bool clause_contains(std::span<const Lit> clause, Lit l);
bool clause_tautological(std::span<const Lit> clause);
std::string clause_to_string(std::span<const Lit> clause);

using Assignment = std::map<Var, bool>;

bool satisfies(const Assignment& a, Lit l);
bool falsifies(const Assignment& a, Lit l);
bool satisfies_clause(const Assignment& a, std::span<const Lit> clause);
std::string assignment_to_string(const Assignment& a);

enum class Quant : uint8_t { Exists, Forall };
inline Quant opposite(Quant q) {
  return q == Quant::Exists ? Quant::Forall : Quant::Exists;
}

struct QuantBlock {
  Quant kind;
  int level = 0;  // 1-based, consecutive
  std::vector<Var> vars;

  bool operator==(const QuantBlock&) const = default;
};

enum class LitRange { Eq, Lt, Gt };

// Prenex CNF: a normalized quantifier prefix plus an indexed clause matrix.
// Invariants: blocks alternate in kind and carry levels 1..n, every clause
// variable is bound in exactly one block, clause ids are dense 1..m.
class Pcnf {
 public:
  Pcnf() = default;

  // Normalizes the given prefix: merges consecutive blocks of the same kind,
  // binds variables that occur free in the matrix in an outermost existential
  // block, drops empty blocks and re-densifies levels. Throws
  // std::invalid_argument on duplicate bindings.
  static Pcnf create(std::vector<QuantBlock> blocks,
                     std::vector<std::vector<Lit>> clauses);

  int num_levels() const { return static_cast<int>(blocks_.size()); }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  Var max_var() const { return max_var_; }

  const QuantBlock& block(int level) const;  // 1-based
  Quant level_kind(int level) const { return block(level).kind; }
  const std::vector<QuantBlock>& blocks() const { return blocks_; }

  const std::vector<Lit>& clause(ClauseId i) const;  // 1-based
  const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }

  // Level of a variable, 0 if unbound.
  int level_of(Var v) const;
  bool is_bound(Var v) const { return level_of(v) != 0; }

  // lit(i,k) and its range generalizations. Levels 0 and n+1 are empty
  // sentinels for the Eq range. Throws std::out_of_range on bad i or k.
  std::vector<Lit> literals_at(ClauseId i, int k, LitRange range) const;
  std::vector<Lit> literals_leq(ClauseId i, int k) const;
  std::vector<Lit> literals_geq(ClauseId i, int k) const;

  // Maximum quantification level over the literals of clause i (0 for the
  // empty clause).
  int clause_max_level(ClauseId i) const;

  // Instantiation by a (partial) assignment: satisfied clauses are removed,
  // falsified literals deleted, assigned variables dropped from the prefix,
  // levels re-densified. A clause emptied by deletion stays as the empty
  // clause.
  Pcnf instantiate(const Assignment& a) const;

  bool operator==(const Pcnf&) const = default;

 private:
  std::vector<QuantBlock> blocks_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<int32_t> var_level_;  // indexed by var, 0 = unbound
  Var max_var_ = 0;
};

}  // namespace qbf
