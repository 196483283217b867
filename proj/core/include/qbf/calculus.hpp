#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbf/expansion.hpp"
#include "qbf/formula.hpp"
#include "qbf/resolution.hpp"

namespace qbf {

// A set of matrix clause indices associated with a quantifier level, plus
// fresh literals introduced by strengthening (treated as bound at that
// level). Canonical: sorted ids and literals.
struct ProofObject {
  std::vector<ClauseId> clauses;
  int level = 0;
  std::vector<Lit> fresh;

  bool operator==(const ProofObject&) const = default;
};

ProofObject make_object(std::vector<ClauseId> clauses, int level,
                        std::vector<Lit> fresh = {});

// lit(P^k): level-k literals of the member clauses plus the fresh literals.
std::vector<Lit> object_literals(const Pcnf& p, const ProofObject& obj);

enum class Rule { Init, Res, ForallRed, Strengthen, ExpRes };
std::string rule_name(Rule r);

struct RuleApp {
  Rule rule;
  std::vector<int> premises;     // node ids
  std::vector<int> conclusions;  // node ids; Strengthen: [main, sides...]

  ClauseId init_clause = 0;           // Init
  ResolutionProof pi;                 // Res, ExpRes
  ClauseId pivot_clause = 0;          // Strengthen
  std::vector<ClauseId> group;        // Strengthen
  Var fresh_var = 0;                  // Strengthen
  ExpansionTree tree;                 // ExpRes
  std::vector<ClauseId> exp_clauses;  // ExpRes
};

// Rule applications over proof objects forming a DAG. Apps are listed in
// derivation order: premises of an app are conclusions of earlier apps, and
// every node is the conclusion of exactly one app.
struct RedResProof {
  std::vector<ProofObject> nodes;
  std::vector<RuleApp> apps;
  int root = -1;
};

// Node count plus inner nodes of the embedded resolution proofs; expansion
// applications additionally count their tree edges.
size_t proof_size(const RedResProof& proof);

struct ProofCheck {
  bool ok = true;
  std::string condition;  // stable tag, e.g. "forallred-tautology"
  int app = -1;
  int node = -1;
  std::string detail;

  static ProofCheck pass() { return {}; }
};

ProofCheck check_proof(const Pcnf& p, const RedResProof& proof);

// Side-condition violation raised by the apply_* constructors; carries the
// same condition tags the checker reports.
class RuleViolation : public std::runtime_error {
 public:
  RuleViolation(std::string condition, const std::string& detail)
      : std::runtime_error(condition + ": " + detail),
        condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

ProofObject apply_init(const Pcnf& p, ClauseId i, int level);
ProofObject apply_res(const Pcnf& p, std::span<const ProofObject> premises,
                      const ResolutionProof& pi);
ProofObject apply_forall_red(const Pcnf& p, const ProofObject& premise);

struct StrengthenResult {
  ProofObject main;                 // ({a} u P)^k
  std::vector<ProofObject> sides;   // {~a, j}^k per group member
};

// `used_fresh` holds fresh variables already consumed elsewhere in the
// proof; freshness is enforced globally.
StrengthenResult apply_strengthen(const Pcnf& p, const ProofObject& premise,
                                  ClauseId pivot,
                                  std::span<const ClauseId> group, Var fresh,
                                  std::span<const Var> used_fresh = {});

ProofObject apply_exp_res(const Pcnf& p, const ExpansionTree& tree,
                          std::span<const ClauseId> ids,
                          const ResolutionProof& pi, int level);

// Expansion-formula inputs for rule (forall-exp-res) at `level`: the
// canonical dense clause list pi has to refute.
DenseExpansion exp_res_inputs(const Pcnf& p, const ExpansionTree& tree,
                              std::span<const ClauseId> ids, int level);

// Incremental proof assembly. Nodes created through the builder satisfy the
// rule side conditions by construction; finalize() drops everything not
// reachable from the root.
class ProofBuilder {
 public:
  explicit ProofBuilder(const Pcnf& p);

  int init_node(ClauseId i, int level);  // cached per (i, level)
  int res(std::vector<int> premises, ResolutionProof pi);
  int forall_red(int premise);
  struct StrengthenNodes {
    int main;
    std::vector<int> sides;
    Var fresh;
  };
  StrengthenNodes strengthen(int premise, ClauseId pivot,
                             std::vector<ClauseId> group);
  int exp_res(ExpansionTree tree, std::vector<ClauseId> ids,
              ResolutionProof pi, int level);

  const ProofObject& node(int id) const { return proof_.nodes[size_t(id)]; }
  RedResProof finalize(int root) const;

 private:
  int add_node(ProofObject obj);

  const Pcnf* pcnf_;
  RedResProof proof_;
  std::vector<std::pair<std::pair<ClauseId, int>, int>> init_cache_;
  std::vector<Var> used_fresh_;
  Var next_fresh_;
};

}  // namespace qbf
