#include "qbf/satcore.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

namespace qbf {

namespace {

// Internal literal encoding: 2*var + sign, sign 1 = negated; vars 0-based.
inline int ivar(int lit) { return lit >> 1; }
inline bool isign(int lit) { return lit & 1; }
inline int ineg(int lit) { return lit ^ 1; }

inline int to_internal(Lit l) {
  return ((static_cast<int>(l.var()) - 1) << 1) | (l.is_positive() ? 0 : 1);
}
inline Lit to_external(int lit) {
  Var v = static_cast<Var>(ivar(lit) + 1);
  return isign(lit) ? Lit::negative(v) : Lit::positive(v);
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

struct SatSolver::Impl {
  struct ClauseRec {
    std::vector<int> lits;
    bool learnt = false;
  };
  // Resolution chain for a learned clause: start from `base`, then resolve
  // with each step's clause on the step's pivot variable.
  struct Chain {
    int base = -1;
    std::vector<std::pair<int, int>> steps;  // (clause index, internal var)
  };

  SatConfig cfg;

  std::vector<ClauseRec> clauses;
  std::vector<std::unique_ptr<Chain>> chains;  // parallel to clauses
  std::vector<int> input_ordinal;              // parallel; -1 for learnt
  int num_inputs = 0;
  std::optional<Chain> final_chain;  // derivation of the empty clause
  int empty_input = -1;              // ordinal of an empty input clause

  std::vector<int8_t> assigns;  // per var: 0 undef, 1 true, -1 false
  std::vector<int> reason;      // per var: clause index or -1
  std::vector<int> level;       // per var
  std::vector<int> trail_pos;   // per var
  std::vector<int> trail;       // internal lits in assignment order
  std::vector<int> trail_lim;
  size_t qhead = 0;
  std::vector<std::vector<int>> watches;  // per internal lit
  std::vector<double> activity;
  double var_inc = 1.0;
  std::vector<char> phase;
  std::priority_queue<std::pair<double, int>> order;  // (activity, -var)
  std::vector<char> seen;
  std::vector<char> seen_zero;
  bool ok = true;
  std::vector<Lit> failed;
  uint64_t conflicts_total = 0;

  int nvars() const { return static_cast<int>(assigns.size()); }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  int8_t value(int lit) const {
    int8_t a = assigns[static_cast<size_t>(ivar(lit))];
    return isign(lit) ? static_cast<int8_t>(-a) : a;
  }

  int add_var() {
    int v = nvars();
    assigns.push_back(0);
    reason.push_back(-1);
    level.push_back(0);
    trail_pos.push_back(-1);
    watches.emplace_back();
    watches.emplace_back();
    double act = 0.0;
    if (cfg.seed != 0) {
      act = 1e-9 * static_cast<double>(
                       splitmix64(cfg.seed * 0x9e37u + static_cast<uint64_t>(v)) &
                       0xffffffull);
    }
    activity.push_back(act);
    phase.push_back(0);
    seen.push_back(0);
    seen_zero.push_back(0);
    order.push({act, -v});
    return v;
  }

  void bump(int v) {
    activity[static_cast<size_t>(v)] += var_inc;
    if (activity[static_cast<size_t>(v)] > 1e100) rescale();
    if (assigns[static_cast<size_t>(v)] == 0)
      order.push({activity[static_cast<size_t>(v)], -v});
  }

  void rescale() {
    for (auto& a : activity) a *= 1e-100;
    var_inc *= 1e-100;
    order = {};
    for (int v = 0; v < nvars(); ++v)
      if (assigns[static_cast<size_t>(v)] == 0)
        order.push({activity[static_cast<size_t>(v)], -v});
  }

  void enqueue(int lit, int from) {
    int v = ivar(lit);
    assigns[static_cast<size_t>(v)] = isign(lit) ? -1 : 1;
    reason[static_cast<size_t>(v)] = from;
    level[static_cast<size_t>(v)] = decision_level();
    trail_pos[static_cast<size_t>(v)] = static_cast<int>(trail.size());
    phase[static_cast<size_t>(v)] = isign(lit) ? 0 : 1;
    trail.push_back(lit);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    int bound = trail_lim[static_cast<size_t>(lvl)];
    for (int i = static_cast<int>(trail.size()) - 1; i >= bound; --i) {
      int v = ivar(trail[static_cast<size_t>(i)]);
      assigns[static_cast<size_t>(v)] = 0;
      reason[static_cast<size_t>(v)] = -1;
      order.push({activity[static_cast<size_t>(v)], -v});
    }
    trail.resize(static_cast<size_t>(bound));
    trail_lim.resize(static_cast<size_t>(lvl));
    qhead = trail.size();
  }

  int propagate() {
    while (qhead < trail.size()) {
      int p = trail[qhead++];
      int fl = ineg(p);
      auto& ws = watches[static_cast<size_t>(fl)];
      size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        auto& c = clauses[static_cast<size_t>(ci)].lits;
        if (c[0] == fl) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != -1) {
            std::swap(c[1], c[k]);
            watches[static_cast<size_t>(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == -1) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead = trail.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return -1;
  }

  // Resolves away false level-0 literals so the recorded chain derives a
  // clause free of them. Deepest trail positions first; reasons may pull in
  // further level-0 literals.
  void eliminate_level0(std::vector<int>& zero_vars, Chain& chain) {
    auto cmp = [&](int a, int b) {
      return trail_pos[static_cast<size_t>(a)] < trail_pos[static_cast<size_t>(b)];
    };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> pending(cmp);
    for (int v : zero_vars) pending.push(v);
    while (!pending.empty()) {
      int v = pending.top();
      pending.pop();
      int r = reason[static_cast<size_t>(v)];
      assert(r >= 0);
      chain.steps.emplace_back(r, v);
      for (int q : clauses[static_cast<size_t>(r)].lits) {
        int qv = ivar(q);
        if (qv == v) continue;
        assert(level[static_cast<size_t>(qv)] == 0);
        if (!seen_zero[static_cast<size_t>(qv)]) {
          seen_zero[static_cast<size_t>(qv)] = 1;
          zero_vars.push_back(qv);
          pending.push(qv);
        }
      }
    }
  }

  struct Analysis {
    std::vector<int> learnt;  // [0] = asserting literal
    int backtrack = 0;
    Chain chain;
  };

  Analysis analyze(int confl) {
    Analysis out;
    out.chain.base = confl;
    out.learnt.push_back(-1);
    std::vector<int> zero_vars;
    int pathC = 0;
    int p = -1;
    int index = static_cast<int>(trail.size());

    while (true) {
      const auto& c = clauses[static_cast<size_t>(confl)].lits;
      if (p != -1) out.chain.steps.emplace_back(confl, ivar(p));
      for (int q : c) {
        if (q == p) continue;
        int v = ivar(q);
        if (seen[static_cast<size_t>(v)]) continue;
        if (level[static_cast<size_t>(v)] > 0) {
          seen[static_cast<size_t>(v)] = 1;
          bump(v);
          if (level[static_cast<size_t>(v)] >= decision_level())
            ++pathC;
          else
            out.learnt.push_back(q);
        } else if (cfg.proof_logging && !seen_zero[static_cast<size_t>(v)]) {
          seen_zero[static_cast<size_t>(v)] = 1;
          zero_vars.push_back(v);
        }
      }
      while (!seen[static_cast<size_t>(ivar(trail[static_cast<size_t>(index - 1)]))])
        --index;
      --index;
      p = trail[static_cast<size_t>(index)];
      seen[static_cast<size_t>(ivar(p))] = 0;
      --pathC;
      if (pathC == 0) break;
      confl = reason[static_cast<size_t>(ivar(p))];
      assert(confl >= 0);
    }
    out.learnt[0] = ineg(p);

    for (size_t k = 1; k < out.learnt.size(); ++k)
      seen[static_cast<size_t>(ivar(out.learnt[k]))] = 0;

    if (cfg.proof_logging) {
      eliminate_level0(zero_vars, out.chain);
      for (int v : zero_vars) seen_zero[static_cast<size_t>(v)] = 0;
    }

    if (out.learnt.size() > 1) {
      // second watch on the deepest remaining literal
      size_t max_i = 1;
      for (size_t k = 2; k < out.learnt.size(); ++k)
        if (level[static_cast<size_t>(ivar(out.learnt[k]))] >
            level[static_cast<size_t>(ivar(out.learnt[max_i]))])
          max_i = k;
      std::swap(out.learnt[1], out.learnt[max_i]);
      out.backtrack = level[static_cast<size_t>(ivar(out.learnt[1]))];
    } else {
      out.backtrack = 0;
    }
    return out;
  }

  // Derivation of the empty clause from a conflict whose literals all sit at
  // level 0.
  Chain final_from(int confl) {
    Chain chain;
    chain.base = confl;
    std::vector<int> zero_vars;
    for (int q : clauses[static_cast<size_t>(confl)].lits) {
      int v = ivar(q);
      assert(level[static_cast<size_t>(v)] == 0);
      if (!seen_zero[static_cast<size_t>(v)]) {
        seen_zero[static_cast<size_t>(v)] = 1;
        zero_vars.push_back(v);
      }
    }
    eliminate_level0(zero_vars, chain);
    for (int v : zero_vars) seen_zero[static_cast<size_t>(v)] = 0;
    return chain;
  }

  int attach_clause(std::vector<int> lits, bool learnt) {
    int ci = static_cast<int>(clauses.size());
    clauses.push_back(ClauseRec{std::move(lits), learnt});
    chains.emplace_back(nullptr);
    input_ordinal.push_back(-1);
    auto& c = clauses.back().lits;
    if (c.size() >= 2) {
      watches[static_cast<size_t>(c[0])].push_back(ci);
      watches[static_cast<size_t>(c[1])].push_back(ci);
    }
    return ci;
  }

  void add_input_clause(std::span<const Lit> ext) {
    int ordinal = num_inputs++;
    if (!ok) return;
    cancel_until(0);
    std::vector<int> lits;
    lits.reserve(ext.size());
    for (Lit l : ext) lits.push_back(to_internal(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t k = 0; k + 1 < lits.size(); ++k)
      if (lits[k + 1] == ineg(lits[k])) return;  // tautology: never useful

    if (lits.empty()) {
      ok = false;
      empty_input = ordinal;
      return;
    }
    // watch non-false literals first
    std::stable_partition(lits.begin(), lits.end(),
                          [&](int l) { return value(l) != -1; });
    int ci = attach_clause(std::move(lits), false);
    input_ordinal[static_cast<size_t>(ci)] = ordinal;
    const auto& c = clauses[static_cast<size_t>(ci)].lits;
    if (value(c[0]) == -1) {
      // every literal false at level 0
      ok = false;
      if (cfg.proof_logging) final_chain = final_from(ci);
      return;
    }
    if ((c.size() == 1 || value(c[1]) == -1) && value(c[0]) == 0) {
      enqueue(c[0], ci);
      int confl = propagate();
      if (confl >= 0) {
        ok = false;
        if (cfg.proof_logging) final_chain = final_from(confl);
      }
    } else if (c.size() == 1 && value(c[0]) == 1) {
      // already satisfied unit
    }
  }

  Result search(std::span<const Lit> assumptions, int64_t budget) {
    int64_t conflicts_here = 0;
    int64_t restart_limit = 100;
    int64_t restart_at = conflicts_here + restart_limit;
    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts_total;
        ++conflicts_here;
        if (decision_level() == 0) {
          if (cfg.proof_logging) final_chain = final_from(confl);
          ok = false;
          failed.clear();
          return Result::Unsatisfiable;
        }
        Analysis a = analyze(confl);
        var_inc /= 0.95;
        cancel_until(std::max(a.backtrack,
                              0));
        int ci = attach_clause(a.learnt, true);
        if (cfg.proof_logging)
          chains[static_cast<size_t>(ci)] =
              std::make_unique<Chain>(std::move(a.chain));
        if (a.learnt.size() == 1) cancel_until(0);
        enqueue(clauses[static_cast<size_t>(ci)].lits[0], ci);
        if (budget >= 0 && conflicts_here >= budget) return Result::Limit;
        continue;
      }
      if (conflicts_here >= restart_at && decision_level() > 0) {
        restart_limit = restart_limit * 3 / 2;
        restart_at = conflicts_here + restart_limit;
        cancel_until(0);
        continue;
      }
      // enqueue pending assumptions, one decision level each
      bool conflict_with_assumption = false;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        int p = to_internal(assumptions[static_cast<size_t>(decision_level())]);
        if (value(p) == 1) {
          trail_lim.push_back(static_cast<int>(trail.size()));
        } else if (value(p) == -1) {
          analyze_final(p);
          return Result::Unsatisfiable;
        } else {
          trail_lim.push_back(static_cast<int>(trail.size()));
          enqueue(p, -1);
          conflict_with_assumption = true;  // propagate before deciding
          break;
        }
      }
      if (conflict_with_assumption) continue;
      // decide
      int next = -1;
      while (!order.empty()) {
        auto [act, nv] = order.top();
        int v = -nv;
        order.pop();
        if (assigns[static_cast<size_t>(v)] == 0 &&
            act == activity[static_cast<size_t>(v)]) {
          next = v;
          break;
        }
      }
      if (next == -1) {
        for (int v = 0; v < nvars(); ++v)
          if (assigns[static_cast<size_t>(v)] == 0) {
            next = v;
            break;
          }
      }
      if (next == -1) return Result::Satisfiable;
      trail_lim.push_back(static_cast<int>(trail.size()));
      enqueue((next << 1) | (phase[static_cast<size_t>(next)] ? 0 : 1), -1);
    }
  }

  // Failed-assumption core: p is the assumption whose complement is implied.
  void analyze_final(int p) {
    failed.clear();
    failed.push_back(to_external(p));
    if (decision_level() == 0) return;
    seen[static_cast<size_t>(ivar(p))] = 1;
    for (int i = static_cast<int>(trail.size()) - 1;
         i >= trail_lim[0]; --i) {
      int q = trail[static_cast<size_t>(i)];
      int v = ivar(q);
      if (!seen[static_cast<size_t>(v)]) continue;
      int r = reason[static_cast<size_t>(v)];
      if (r == -1) {
        failed.push_back(to_external(q));
      } else {
        for (int l : clauses[static_cast<size_t>(r)].lits) {
          int lv = ivar(l);
          if (lv != v && level[static_cast<size_t>(lv)] > 0)
            seen[static_cast<size_t>(lv)] = 1;
        }
      }
      seen[static_cast<size_t>(v)] = 0;
    }
    seen[static_cast<size_t>(ivar(p))] = 0;
    std::sort(failed.begin(), failed.end());
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  }

  ResolutionProof build_proof() const {
    ResolutionProof proof;
    if (empty_input >= 0) {
      proof.nodes.push_back(
          ResolutionProof::Node{{}, -1, -1, 0, empty_input});
      proof.root = 0;
      return proof;
    }
    if (!final_chain) throw std::logic_error("no refutation recorded");

    std::vector<int> node_of(clauses.size(), -1);
    auto leaf_of = [&](int ci) {
      if (node_of[static_cast<size_t>(ci)] != -1)
        return node_of[static_cast<size_t>(ci)];
      std::vector<Lit> ext;
      for (int l : clauses[static_cast<size_t>(ci)].lits)
        ext.push_back(to_external(l));
      ext = normalize_clause(std::move(ext));
      proof.nodes.push_back(ResolutionProof::Node{
          std::move(ext), -1, -1, 0, input_ordinal[static_cast<size_t>(ci)]});
      node_of[static_cast<size_t>(ci)] = static_cast<int>(proof.nodes.size()) - 1;
      return node_of[static_cast<size_t>(ci)];
    };
    auto replay = [&](const Chain& chain) {
      int cur = node_of[static_cast<size_t>(chain.base)];
      assert(cur >= 0);
      for (auto [ci2, pv] : chain.steps) {
        int other = node_of[static_cast<size_t>(ci2)];
        assert(other >= 0);
        Var pivot = static_cast<Var>(pv + 1);
        const auto& cc = proof.nodes[static_cast<size_t>(cur)].clause;
        int left = cur, right = other;
        if (!clause_contains(cc, Lit::positive(pivot))) std::swap(left, right);
        std::vector<Lit> res = resolve_clauses(
            proof.nodes[static_cast<size_t>(left)].clause,
            proof.nodes[static_cast<size_t>(right)].clause, pivot);
        proof.nodes.push_back(
            ResolutionProof::Node{std::move(res), left, right, pivot, -1});
        cur = static_cast<int>(proof.nodes.size()) - 1;
      }
      return cur;
    };

    for (size_t ci = 0; ci < clauses.size(); ++ci) {
      if (!clauses[ci].learnt) {
        leaf_of(static_cast<int>(ci));
      } else {
        const Chain& chain = *chains[ci];
        node_of[ci] = replay(chain);
      }
    }
    proof.root = replay(*final_chain);
    assert(proof.nodes[static_cast<size_t>(proof.root)].clause.empty());

    // keep only nodes reachable from the root
    std::vector<char> mark(proof.nodes.size(), 0);
    std::vector<int> stack{proof.root};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      if (mark[static_cast<size_t>(n)]) continue;
      mark[static_cast<size_t>(n)] = 1;
      const auto& node = proof.nodes[static_cast<size_t>(n)];
      if (!node.is_leaf()) {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
    ResolutionProof pruned;
    std::vector<int> remap(proof.nodes.size(), -1);
    for (size_t i = 0; i < proof.nodes.size(); ++i) {
      if (!mark[i]) continue;
      ResolutionProof::Node n = proof.nodes[i];
      if (!n.is_leaf()) {
        n.left = remap[static_cast<size_t>(n.left)];
        n.right = remap[static_cast<size_t>(n.right)];
      }
      remap[i] = static_cast<int>(pruned.nodes.size());
      pruned.nodes.push_back(std::move(n));
    }
    pruned.root = remap[static_cast<size_t>(proof.root)];
    return pruned;
  }

  // scratch for build_proof (leaf_of mutates)
  mutable ResolutionProof proof;
};

SatSolver::SatSolver(SatConfig cfg) : impl_(std::make_unique<Impl>()) {
  impl_->cfg = cfg;
}
SatSolver::~SatSolver() = default;
SatSolver::SatSolver(SatSolver&&) noexcept = default;
SatSolver& SatSolver::operator=(SatSolver&&) noexcept = default;

Var SatSolver::new_var() {
  return static_cast<Var>(impl_->add_var() + 1);
}

void SatSolver::ensure_vars(Var max_var) {
  while (impl_->nvars() < static_cast<int>(max_var)) impl_->add_var();
}

int SatSolver::num_vars() const { return impl_->nvars(); }

void SatSolver::add_clause(std::span<const Lit> lits) {
  for (Lit l : lits) ensure_vars(l.var());
  impl_->add_input_clause(lits);
}

void SatSolver::add_clause(std::initializer_list<Lit> lits) {
  add_clause(std::span<const Lit>(lits.begin(), lits.size()));
}

SatSolver::Result SatSolver::solve(std::span<const Lit> assumptions,
                                   int64_t conflict_budget) {
  impl_->cancel_until(0);
  impl_->failed.clear();
  if (!impl_->ok) return Result::Unsatisfiable;
  for (Lit l : assumptions) ensure_vars(l.var());
  Result r = impl_->search(assumptions, conflict_budget);
  if (r != Result::Satisfiable) impl_->cancel_until(0);
  return r;
}

bool SatSolver::model_value(Var v) const {
  if (static_cast<int>(v) > impl_->nvars()) return false;
  return impl_->assigns[static_cast<size_t>(v - 1)] == 1;
}

bool SatSolver::model_satisfies(Lit l) const {
  return model_value(l.var()) == l.is_positive();
}

const std::vector<Lit>& SatSolver::failed_assumptions() const {
  return impl_->failed;
}

uint64_t SatSolver::total_conflicts() const { return impl_->conflicts_total; }

ResolutionProof SatSolver::extract_proof() const {
  impl_->proof = ResolutionProof{};
  return impl_->build_proof();
}

SatOutcome sat_solve(const std::vector<std::vector<Lit>>& clauses,
                     const std::vector<Lit>& assumptions) {
  SatSolver solver;
  Var max_var = 0;
  for (const auto& c : clauses)
    for (Lit l : c) max_var = std::max(max_var, l.var());
  for (Lit l : assumptions) max_var = std::max(max_var, l.var());
  solver.ensure_vars(max_var);
  for (const auto& c : clauses) solver.add_clause(c);
  SatOutcome out;
  auto r = solver.solve(assumptions);
  out.satisfiable = (r == SatSolver::Result::Satisfiable);
  if (out.satisfiable) {
    for (Var v = 1; v <= max_var; ++v) out.model[v] = solver.model_value(v);
  } else {
    out.core = solver.failed_assumptions();
  }
  return out;
}

ResolutionProof extract_resolution_proof(
    const std::vector<std::vector<Lit>>& clauses) {
  // degenerate case: an input clause is already empty
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (normalize_clause(clauses[i]).empty()) {
      ResolutionProof proof;
      proof.nodes.push_back(
          ResolutionProof::Node{{}, -1, -1, 0, static_cast<int>(i)});
      proof.root = 0;
      return proof;
    }
  }
  SatSolver solver(SatConfig{0, true});
  for (const auto& c : clauses) solver.add_clause(c);
  if (solver.solve() != SatSolver::Result::Unsatisfiable)
    throw SatisfiableError();
  return solver.extract_proof();
}

}  // namespace qbf
