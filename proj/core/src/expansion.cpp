#include "qbf/expansion.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qbf {

std::string AnnotatedVar::to_string() const {
  std::ostringstream out;
  out << "v" << base;
  if (!annotation.empty()) {
    out << "^{";
    bool first = true;
    for (const auto& [v, b] : annotation) {
      if (!first) out << ",";
      first = false;
      out << v << "=" << (b ? 1 : 0);
    }
    out << "}";
  }
  return out.str();
}

size_t ExpansionTree::edge_count() const {
  std::set<std::vector<Assignment>> prefixes;
  for (const auto& path : paths)
    for (size_t d = 1; d <= path.size(); ++d)
      prefixes.insert({path.begin(), path.begin() + static_cast<long>(d)});
  return prefixes.size();
}

std::vector<const QuantBlock*> universal_blocks_from(const Pcnf& p,
                                                     int from_level) {
  std::vector<const QuantBlock*> out;
  for (int k = std::max(from_level, 1); k <= p.num_levels(); ++k)
    if (p.level_kind(k) == Quant::Forall) out.push_back(&p.block(k));
  return out;
}

std::optional<AnnotatedClause> expand_path(const Pcnf& p, int from_level,
                                           std::span<const Assignment> path,
                                           std::span<const Lit> clause) {
  auto ublocks = universal_blocks_from(p, from_level);
  if (path.size() != ublocks.size())
    throw std::invalid_argument("expansion path arity mismatch");
  // level of each universal block -> depth
  std::map<int, size_t> depth_of;
  for (size_t d = 0; d < ublocks.size(); ++d) {
    depth_of[ublocks[d]->level] = d;
    for (Var v : ublocks[d]->vars)
      if (!path[d].contains(v))
        throw std::invalid_argument("path assignment not total over block");
  }

  AnnotatedClause out;
  for (const Lit& l : clause) {
    int lv = p.level_of(l.var());
    if (lv < from_level)
      throw std::invalid_argument("clause literal bound before the fragment");
    if (p.level_kind(lv) == Quant::Forall) {
      const Assignment& a = path[depth_of.at(lv)];
      if (satisfies(a, l)) return std::nullopt;
      continue;  // falsified universal literal dropped
    }
    // annotation: union of path assignments of universal blocks before lv
    AnnotatedVar av;
    av.base = l.var();
    for (size_t d = 0; d < ublocks.size() && ublocks[d]->level < lv; ++d)
      av.annotation.insert(path[d].begin(), path[d].end());
    out.push_back(AnnotatedLit{std::move(av), l.is_positive()});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExpansionCnf expand_tree(const Pcnf& p, int from_level,
                         const ExpansionTree& tree,
                         std::span<const ClauseId> ids) {
  ExpansionCnf cnf;
  std::set<AnnotatedClause> dedup;
  for (const auto& path : tree.paths) {
    for (ClauseId i : ids) {
      auto proj = p.literals_geq(i, from_level);
      auto expanded = expand_path(p, from_level, path, proj);
      if (!expanded) continue;
      if (dedup.insert(*expanded).second) cnf.clauses.push_back(*expanded);
    }
  }
  return cnf;
}

ExpansionTree full_expansion_tree(const Pcnf& p, int from_level) {
  auto ublocks = universal_blocks_from(p, from_level);
  double leaves = 1.0;
  for (const auto* b : ublocks)
    leaves *= static_cast<double>(1ull << std::min<size_t>(b->vars.size(), 62));
  if (leaves > static_cast<double>(1u << 20))
    throw std::invalid_argument("full expansion exceeds 2^20 leaves");

  std::vector<std::vector<Assignment>> block_choices;
  for (const auto* b : ublocks) {
    std::vector<Assignment> choices;
    size_t n = b->vars.size();
    for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
      Assignment a;
      for (size_t j = 0; j < n; ++j) a[b->vars[j]] = (bits >> j) & 1;
      choices.push_back(std::move(a));
    }
    block_choices.push_back(std::move(choices));
  }

  ExpansionTree tree;
  std::vector<Assignment> path;
  std::vector<size_t> idx(block_choices.size(), 0);
  if (block_choices.empty()) {
    tree.paths.push_back({});
    return tree;
  }
  // odometer over block choices, outer block slowest
  while (true) {
    path.clear();
    for (size_t d = 0; d < idx.size(); ++d)
      path.push_back(block_choices[d][idx[d]]);
    tree.paths.push_back(path);
    size_t d = idx.size();
    while (d > 0) {
      --d;
      if (++idx[d] < block_choices[d].size()) break;
      idx[d] = 0;
      if (d == 0) return tree;
    }
  }
}

DenseExpansion to_dense(const ExpansionCnf& cnf) {
  DenseExpansion out;
  std::map<AnnotatedVar, Var> index;
  for (const auto& clause : cnf.clauses) {
    std::vector<Lit> dense;
    for (const auto& al : clause) {
      auto [it, inserted] =
          index.try_emplace(al.var, static_cast<Var>(out.vars.size() + 1));
      if (inserted) out.vars.push_back(al.var);
      dense.push_back(al.positive ? Lit::positive(it->second)
                                  : Lit::negative(it->second));
    }
    out.clauses.push_back(normalize_clause(std::move(dense)));
  }
  return out;
}

}  // namespace qbf
