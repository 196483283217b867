#pragma once

#include <span>
#include <string>
#include <vector>

#include "qbf/formula.hpp"

namespace qbf {

// A propositional resolution refutation as a DAG. Nodes are stored in
// topological order: leaves reference an input clause by position, inner
// nodes resolve two earlier nodes on a pivot variable with the positive
// pivot in `left`.
struct ResolutionProof {
  struct Node {
    std::vector<Lit> clause;  // canonical; may be empty when deserialized
    int left = -1;
    int right = -1;
    Var pivot = 0;
    int input = -1;  // leaf: index into the input clause list

    bool is_leaf() const { return input >= 0; }
  };

  std::vector<Node> nodes;
  int root = -1;
  // Deserialized proofs carry only the step structure; clauses are
  // re-derived against the inputs during checking.
  bool has_clauses = true;

  int inner_count() const;  // non-leaf, non-root nodes
  size_t num_steps() const;
};

struct ResolutionCheck {
  bool ok = true;
  int node = -1;
  std::string what;

  static ResolutionCheck pass() { return {}; }
  static ResolutionCheck fail(int node, std::string what) {
    return {false, node, std::move(what)};
  }
};

// Resolvent of left and right on pivot; both polarities removed.
std::vector<Lit> resolve_clauses(std::span<const Lit> left,
                                 std::span<const Lit> right, Var pivot);

// Validates leaf membership, pivot complementarity, the resolution equation
// and that the root derives the empty clause.
ResolutionCheck check_resolution_proof(
    const ResolutionProof& proof,
    std::span<const std::vector<Lit>> inputs);

}  // namespace qbf
