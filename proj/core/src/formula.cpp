#include "qbf/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qbf {

std::vector<Lit> normalize_clause(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  return lits;
}

bool clause_contains(std::span<const Lit> clause, Lit l) {
  return std::find(clause.begin(), clause.end(), l) != clause.end();
}

bool clause_tautological(std::span<const Lit> clause) {
  for (const Lit& l : clause)
    if (l.is_positive() && clause_contains(clause, l.negated())) return true;
  return false;
}

std::string clause_to_string(std::span<const Lit> clause) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < clause.size(); ++i) {
    if (i) out << " ";
    out << clause[i].to_dimacs();
  }
  out << ")";
  return out.str();
}

bool satisfies(const Assignment& a, Lit l) {
  auto it = a.find(l.var());
  return it != a.end() && it->second == l.is_positive();
}

bool falsifies(const Assignment& a, Lit l) {
  auto it = a.find(l.var());
  return it != a.end() && it->second != l.is_positive();
}

bool satisfies_clause(const Assignment& a, std::span<const Lit> clause) {
  for (const Lit& l : clause)
    if (satisfies(a, l)) return true;
  return false;
}

std::string assignment_to_string(const Assignment& a) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [v, b] : a) {
    if (!first) out << ",";
    first = false;
    out << v << "->" << (b ? 1 : 0);
  }
  out << "}";
  return out.str();
}

Pcnf Pcnf::create(std::vector<QuantBlock> blocks,
                  std::vector<std::vector<Lit>> clauses) {
  Pcnf p;
  for (auto& c : clauses) p.clauses_.push_back(normalize_clause(std::move(c)));

  Var max_var = 0;
  for (const auto& b : blocks)
    for (Var v : b.vars) max_var = std::max(max_var, v);
  for (const auto& c : p.clauses_)
    for (const Lit& l : c) max_var = std::max(max_var, l.var());

  std::vector<int32_t> bound(max_var + 1, 0);
  for (const auto& b : blocks)
    for (Var v : b.vars) {
      if (v == 0) throw std::invalid_argument("variable 0 in prefix");
      if (bound[v]) throw std::invalid_argument("duplicate binding of variable " +
                                                std::to_string(v));
      bound[v] = 1;
    }

  // Free matrix variables go into an outermost existential block.
  std::vector<Var> free_vars;
  for (const auto& c : p.clauses_)
    for (const Lit& l : c)
      if (!bound[l.var()]) {
        bound[l.var()] = 1;
        free_vars.push_back(l.var());
      }
  if (!free_vars.empty()) {
    std::sort(free_vars.begin(), free_vars.end());
    if (!blocks.empty() && blocks.front().kind == Quant::Exists) {
      auto& vs = blocks.front().vars;
      vs.insert(vs.end(), free_vars.begin(), free_vars.end());
    } else {
      blocks.insert(blocks.begin(), QuantBlock{Quant::Exists, 0, free_vars});
    }
  }

  // Merge consecutive blocks of the same kind, drop empty ones.
  for (auto& b : blocks) {
    if (b.vars.empty()) continue;
    if (!p.blocks_.empty() && p.blocks_.back().kind == b.kind) {
      auto& vs = p.blocks_.back().vars;
      vs.insert(vs.end(), b.vars.begin(), b.vars.end());
    } else {
      p.blocks_.push_back(QuantBlock{b.kind, 0, b.vars});
    }
  }
  p.max_var_ = max_var;
  p.var_level_.assign(max_var + 1, 0);
  for (size_t k = 0; k < p.blocks_.size(); ++k) {
    auto& b = p.blocks_[k];
    b.level = static_cast<int>(k) + 1;
    std::sort(b.vars.begin(), b.vars.end());
    for (Var v : b.vars) p.var_level_[v] = b.level;
  }
  return p;
}

const QuantBlock& Pcnf::block(int level) const {
  if (level < 1 || level > num_levels())
    throw std::out_of_range("block level out of range");
  return blocks_[static_cast<size_t>(level) - 1];
}

const std::vector<Lit>& Pcnf::clause(ClauseId i) const {
  if (i < 1 || i > num_clauses())
    throw std::out_of_range("clause id out of range");
  return clauses_[static_cast<size_t>(i) - 1];
}

int Pcnf::level_of(Var v) const {
  if (v == 0 || v > max_var_) return 0;
  return var_level_[v];
}

std::vector<Lit> Pcnf::literals_at(ClauseId i, int k, LitRange range) const {
  if (k < 0 || k > num_levels() + 1)
    throw std::out_of_range("quantifier level out of range");
  const auto& c = clause(i);
  std::vector<Lit> out;
  for (const Lit& l : c) {
    int lv = level_of(l.var());
    bool keep = false;
    switch (range) {
      case LitRange::Eq: keep = lv == k; break;
      case LitRange::Lt: keep = lv < k; break;
      case LitRange::Gt: keep = lv > k; break;
    }
    if (keep) out.push_back(l);
  }
  return out;
}

std::vector<Lit> Pcnf::literals_leq(ClauseId i, int k) const {
  return literals_at(i, k + 1, LitRange::Lt);
}

std::vector<Lit> Pcnf::literals_geq(ClauseId i, int k) const {
  return literals_at(i, k - 1, LitRange::Gt);
}

int Pcnf::clause_max_level(ClauseId i) const {
  int z = 0;
  for (const Lit& l : clause(i)) z = std::max(z, level_of(l.var()));
  return z;
}

Pcnf Pcnf::instantiate(const Assignment& a) const {
  for (const auto& [v, b] : a) {
    (void)b;
    if (!is_bound(v))
      throw std::invalid_argument("assignment to unbound variable " +
                                  std::to_string(v));
  }
  std::vector<std::vector<Lit>> new_clauses;
  for (const auto& c : clauses_) {
    if (satisfies_clause(a, c)) continue;
    std::vector<Lit> reduced;
    for (const Lit& l : c)
      if (!falsifies(a, l)) reduced.push_back(l);
    new_clauses.push_back(std::move(reduced));
  }
  std::vector<QuantBlock> new_blocks;
  for (const auto& b : blocks_) {
    QuantBlock nb{b.kind, 0, {}};
    for (Var v : b.vars)
      if (!a.contains(v)) nb.vars.push_back(v);
    new_blocks.push_back(std::move(nb));
  }
  return create(std::move(new_blocks), std::move(new_clauses));
}

}  // namespace qbf
