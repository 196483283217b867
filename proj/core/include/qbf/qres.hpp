#pragma once

#include <string>
#include <vector>

#include "qbf/calculus.hpp"
#include "qbf/formula.hpp"

namespace qbf {

// Q-resolution proof: a DAG of clauses built from matrix axioms by
// resolution on existential pivots and universal reduction.
struct QResProof {
  struct Step {
    enum class Kind { Axiom, Resolve, Reduce };
    Kind kind = Kind::Axiom;
    std::vector<Lit> clause;
    int left = -1;
    int right = -1;            // Resolve only
    Var pivot = 0;             // Resolve only
    ClauseId clause_id = 0;    // Axiom only
    std::vector<Lit> removed;  // Reduce only
  };

  std::vector<Step> steps;
  int root = -1;
};

// Theorem-2 style translation: every node P^k becomes the clause of its
// outer-projected literals and every (res) hyper-edge unfolds into plain
// resolution steps. Requires a proof that checks ok and contains no
// strengthen or expansion applications.
QResProof export_qres(const Pcnf& p, const RedResProof& proof);

struct QResCheck {
  bool ok = true;
  bool level_ordered = false;
  int step = -1;
  std::string what;
};

QResCheck check_qres(const Pcnf& p, const QResProof& proof);

}  // namespace qbf
