#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbf/formula.hpp"

namespace qbf {

// Existential variable renamed by the universal assignment of its
// dependencies within the expanded subformula. Variables bound before the
// first universal block carry the empty annotation.
struct AnnotatedVar {
  Var base = 0;
  Assignment annotation;

  auto operator<=>(const AnnotatedVar&) const = default;
  std::string to_string() const;  // v<base>^{var=bit,...}
};

struct AnnotatedLit {
  AnnotatedVar var;
  bool positive = true;

  auto operator<=>(const AnnotatedLit&) const = default;
};

using AnnotatedClause = std::vector<AnnotatedLit>;  // canonical sorted

// A ∀-expansion tree for the subformula starting at some level, given as its
// set of root-to-leaf paths. Each path carries one total assignment per
// universal block, outermost first; paths are pairwise distinct.
struct ExpansionTree {
  std::vector<std::vector<Assignment>> paths;

  bool operator==(const ExpansionTree&) const = default;
  // edges of the label-tree induced by the paths
  size_t edge_count() const;
};

// Universal blocks of the fragment at levels >= from_level, outermost first.
std::vector<const QuantBlock*> universal_blocks_from(const Pcnf& p,
                                                     int from_level);

// expand(P, C): instantiates the universal literals of the clause along the
// path and renames existential variables by their dependency annotation.
// Returns nullopt when a universal literal is satisfied by the path. The
// clause must contain only literals bound at levels >= from_level.
std::optional<AnnotatedClause> expand_path(const Pcnf& p, int from_level,
                                           std::span<const Assignment> path,
                                           std::span<const Lit> clause);

// expand(T, Phi) over the clause projections lit(i, >= from_level):
// conjunction over all paths, duplicates removed, satisfied results omitted.
struct ExpansionCnf {
  std::vector<AnnotatedClause> clauses;
};

ExpansionCnf expand_tree(const Pcnf& p, int from_level,
                         const ExpansionTree& tree,
                         std::span<const ClauseId> ids);

// Tree enumerating every total assignment of every universal block at
// levels >= from_level. Refuses more than 2^20 leaves.
ExpansionTree full_expansion_tree(const Pcnf& p, int from_level);

// Dense renaming so the SAT core sees plain integers. Ids are assigned in
// order of first appearance in the clause list.
struct DenseExpansion {
  std::vector<std::vector<Lit>> clauses;
  std::vector<AnnotatedVar> vars;  // dense var v <-> vars[v-1]
};

DenseExpansion to_dense(const ExpansionCnf& cnf);

}  // namespace qbf
