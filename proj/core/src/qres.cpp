#include "qbf/qres.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace qbf {

namespace {

std::vector<Lit> outer_clause(const Pcnf& p, const ProofObject& obj) {
  std::vector<Lit> lits;
  for (ClauseId i : obj.clauses) {
    auto leq = p.literals_leq(i, obj.level);
    lits.insert(lits.end(), leq.begin(), leq.end());
  }
  return normalize_clause(std::move(lits));
}

}  // namespace

QResProof export_qres(const Pcnf& p, const RedResProof& proof) {
  for (const auto& app : proof.apps)
    if (app.rule == Rule::Strengthen || app.rule == Rule::ExpRes)
      throw std::invalid_argument(
          "unsupported rule present: " + rule_name(app.rule) +
          " has no Q-resolution image");
  ProofCheck pc = check_proof(p, proof);
  if (!pc.ok)
    throw std::invalid_argument("proof does not check: " + pc.condition);

  QResProof out;
  std::vector<int> step_of(proof.nodes.size(), -1);

  auto push = [&](QResProof::Step step) {
    out.steps.push_back(std::move(step));
    return static_cast<int>(out.steps.size()) - 1;
  };

  for (const auto& app : proof.apps) {
    switch (app.rule) {
      case Rule::Init: {
        QResProof::Step s;
        s.kind = QResProof::Step::Kind::Axiom;
        s.clause_id = app.init_clause;
        s.clause = normalize_clause(p.clause(app.init_clause));
        step_of[static_cast<size_t>(app.conclusions[0])] = push(std::move(s));
        break;
      }
      case Rule::Res: {
        // Unfold the embedded propositional proof; every premise object maps
        // to its already-exported step.
        std::vector<int> pi_step(app.pi.nodes.size(), -1);
        for (size_t ni = 0; ni < app.pi.nodes.size(); ++ni) {
          const auto& node = app.pi.nodes[ni];
          if (node.is_leaf()) {
            pi_step[ni] =
                step_of[static_cast<size_t>(app.premises[size_t(node.input)])];
          } else {
            int ls = pi_step[static_cast<size_t>(node.left)];
            int rs = pi_step[static_cast<size_t>(node.right)];
            QResProof::Step s;
            s.kind = QResProof::Step::Kind::Resolve;
            s.left = ls;
            s.right = rs;
            s.pivot = node.pivot;
            assert(clause_contains(out.steps[size_t(ls)].clause,
                                   Lit::positive(node.pivot)) &&
                   clause_contains(out.steps[size_t(rs)].clause,
                                   Lit::negative(node.pivot)) &&
                   "premise not covered by the embedded refutation");
            s.clause = resolve_clauses(out.steps[size_t(ls)].clause,
                                       out.steps[size_t(rs)].clause,
                                       node.pivot);
            pi_step[ni] = push(std::move(s));
          }
        }
        step_of[static_cast<size_t>(app.conclusions[0])] =
            pi_step[static_cast<size_t>(app.pi.root)];
        break;
      }
      case Rule::ForallRed: {
        int prem_step = step_of[static_cast<size_t>(app.premises[0])];
        const ProofObject& prem =
            proof.nodes[static_cast<size_t>(app.premises[0])];
        std::vector<Lit> removed;
        std::vector<Lit> remaining;
        for (const Lit& l : out.steps[size_t(prem_step)].clause) {
          if (p.level_of(l.var()) == prem.level)
            removed.push_back(l);
          else
            remaining.push_back(l);
        }
        if (removed.empty()) {
          step_of[static_cast<size_t>(app.conclusions[0])] = prem_step;
        } else {
          QResProof::Step s;
          s.kind = QResProof::Step::Kind::Reduce;
          s.left = prem_step;
          s.removed = std::move(removed);
          s.clause = std::move(remaining);
          step_of[static_cast<size_t>(app.conclusions[0])] = push(std::move(s));
        }
        break;
      }
      default:
        break;  // unreachable, rejected above
    }
  }
  out.root = step_of[static_cast<size_t>(proof.root)];
  return out;
}

QResCheck check_qres(const Pcnf& p, const QResProof& proof) {
  QResCheck out;
  auto fail = [&](int step, std::string what) {
    out.ok = false;
    out.step = step;
    out.what = std::move(what);
    return out;
  };
  if (proof.steps.empty() || proof.root < 0 ||
      proof.root >= static_cast<int>(proof.steps.size()))
    return fail(-1, "qres-root: missing root");

  // min pivot level over resolutions in each step's subtree (inclusive),
  // used for the level-ordering flag
  std::vector<int> min_pivot(proof.steps.size(), INT32_MAX);
  bool level_ordered = true;

  for (size_t si = 0; si < proof.steps.size(); ++si) {
    const auto& s = proof.steps[si];
    int idx = static_cast<int>(si);
    switch (s.kind) {
      case QResProof::Step::Kind::Axiom: {
        if (s.clause_id < 1 || s.clause_id > p.num_clauses())
          return fail(idx, "qres-axiom: clause id out of range");
        if (normalize_clause(p.clause(s.clause_id)) != s.clause)
          return fail(idx, "qres-axiom: clause is not the matrix clause");
        break;
      }
      case QResProof::Step::Kind::Resolve: {
        if (s.left < 0 || s.left >= idx || s.right < 0 || s.right >= idx)
          return fail(idx, "qres-step: operand not an earlier step");
        if (s.pivot == 0 || !p.is_bound(s.pivot) ||
            p.level_kind(p.level_of(s.pivot)) != Quant::Exists)
          return fail(idx, "qres-universal-pivot: pivot is not existential");
        const auto& lc = proof.steps[size_t(s.left)].clause;
        const auto& rc = proof.steps[size_t(s.right)].clause;
        if (!clause_contains(lc, Lit::positive(s.pivot)) ||
            !clause_contains(rc, Lit::negative(s.pivot)))
          return fail(idx, "qres-pivot-missing: operands lack complementary pair");
        auto resolvent = resolve_clauses(lc, rc, s.pivot);
        if (resolvent != s.clause)
          return fail(idx, "qres-resolvent-mismatch");
        if (clause_tautological(s.clause))
          return fail(idx, "qres-tautology: resolution produced a tautology");
        int pl = p.level_of(s.pivot);
        if (std::min(min_pivot[size_t(s.left)], min_pivot[size_t(s.right)]) <
            pl)
          level_ordered = false;
        min_pivot[si] = std::min(
            {pl, min_pivot[size_t(s.left)], min_pivot[size_t(s.right)]});
        break;
      }
      case QResProof::Step::Kind::Reduce: {
        if (s.left < 0 || s.left >= idx)
          return fail(idx, "qres-step: operand not an earlier step");
        if (s.removed.empty())
          return fail(idx, "qres-reduction-empty");
        const auto& lc = proof.steps[size_t(s.left)].clause;
        std::vector<Lit> remaining = lc;
        for (const Lit& u : s.removed) {
          if (!clause_contains(lc, u))
            return fail(idx, "qres-reduction: removed literal not in premise");
          if (!p.is_bound(u.var()) ||
              p.level_kind(p.level_of(u.var())) != Quant::Forall)
            return fail(idx, "qres-reduction: removed literal not universal");
          std::erase(remaining, u);
        }
        for (const Lit& u : s.removed)
          for (const Lit& l : lc)
            if (p.level_kind(p.level_of(l.var())) == Quant::Exists &&
                p.level_of(l.var()) > p.level_of(u.var()))
              return fail(idx,
                          "qres-reduction-blocked: deeper existential literal "
                          "depends on the reduced universal");
        if (remaining != s.clause)
          return fail(idx, "qres-reduction: conclusion mismatch");
        min_pivot[si] = min_pivot[size_t(s.left)];
        break;
      }
    }
  }
  if (!proof.steps[static_cast<size_t>(proof.root)].clause.empty())
    return fail(proof.root, "qres-root: root clause is not empty");
  out.level_ordered = level_ordered;
  return out;
}

}  // namespace qbf
