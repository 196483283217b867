#include "qbf/solver.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

#include "qbf/satcore.hpp"

namespace qbf {

namespace {

bool subset_of(const std::vector<ClauseId>& a, const std::vector<ClauseId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<ClauseId> sorted_ids(std::vector<ClauseId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::string refinement_name(Refinement r) {
  switch (r) {
    case Refinement::Plain: return "plain";
    case Refinement::Strengthen: return "strengthen";
    case Refinement::Expansion: return "expansion";
    case Refinement::Both: return "both";
  }
  return "?";
}

std::optional<Refinement> parse_refinement(const std::string& name) {
  if (name == "plain") return Refinement::Plain;
  if (name == "strengthen") return Refinement::Strengthen;
  if (name == "expansion") return Refinement::Expansion;
  if (name == "both") return Refinement::Both;
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> SolveStats::report() const {
  std::vector<std::pair<std::string, std::string>> kv;
  for (size_t k = 1; k < sat_calls.size(); ++k)
    kv.emplace_back("sat_calls[" + std::to_string(k) + "]",
                    std::to_string(sat_calls[k]));
  kv.emplace_back("refinements.clausal", std::to_string(refinements_clausal));
  kv.emplace_back("refinements.strengthen",
                  std::to_string(refinements_strengthen));
  kv.emplace_back("refinements.expansion",
                  std::to_string(refinements_expansion));
  kv.emplace_back("refinements.total", std::to_string(total_refinements()));
  kv.emplace_back("strengthen_max_group",
                  std::to_string(strengthen_max_group));
  kv.emplace_back("strengthen_nonsingleton_groups",
                  std::to_string(strengthen_nonsingleton_groups));
  kv.emplace_back("expansion_clauses_added",
                  std::to_string(expansion_clauses_added));
  kv.emplace_back("proof_size", std::to_string(proof_size));
  return kv;
}

std::vector<std::vector<ClauseId>> strengthen_groups(const Pcnf& p,
                                                     int level) {
  int m = p.num_clauses();
  std::vector<std::vector<Lit>> inner(static_cast<size_t>(m));
  for (ClauseId i = 1; i <= m; ++i)
    inner[static_cast<size_t>(i - 1)] = p.literals_at(i, level, LitRange::Gt);
  std::vector<std::vector<ClauseId>> groups(static_cast<size_t>(m));
  for (ClauseId i = 1; i <= m; ++i) {
    const auto& ii = inner[static_cast<size_t>(i - 1)];
    for (ClauseId j = 1; j <= m; ++j) {
      const auto& ij = inner[static_cast<size_t>(j - 1)];
      bool sub = true;
      for (const Lit& l : ij)
        if (!clause_contains(ii, l)) {
          sub = false;
          break;
        }
      if (sub) groups[static_cast<size_t>(i - 1)].push_back(j);
    }
  }
  return groups;
}

struct CegarSolver::Level {
  int level = 0;
  Quant kind = Quant::Exists;
  SatSolver sat;
  bool built = false;
  std::vector<Var> bsel, asel, rsel;  // per clause, index i-1; 0 = absent
  std::map<Var, ClauseId> sel_to_clause;

  struct Derived {
    std::vector<ClauseId> clauses;
    int node;
  };
  std::vector<Derived> pool;
  std::set<std::vector<ClauseId>> seen_cores;

  bool groups_ready = false;
  std::vector<std::vector<ClauseId>> groups;
  struct StrengthenEvent {
    std::vector<ClauseId> core;
    int full_node;  // ({a_1..a_c})^k with empty clause set
    std::vector<std::pair<ClauseId, int>> side_nodes;
  };
  std::vector<StrengthenEvent> sevents;

  bool exp_applicable = false;
  std::vector<Assignment> exp_paths;
  std::map<Assignment, std::map<Var, Var>> exp_renames;
};

CegarSolver::CegarSolver(const Pcnf& p, SolverConfig config)
    : pcnf_(&p), config_(config) {
  stats_.sat_calls.assign(static_cast<size_t>(p.num_levels()) + 1, 0);
  levels_.resize(static_cast<size_t>(p.num_levels()) + 1);
  if (config_.proof_logging) builder_.emplace(p);
  if (config_.time_limit_ms >= 0) {
    has_deadline_ = true;
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::milliseconds(config_.time_limit_ms);
  }
}

CegarSolver::~CegarSolver() = default;

CegarSolver::Level& CegarSolver::level(int k) {
  auto& slot = levels_[static_cast<size_t>(k)];
  if (!slot) {
    slot = std::make_unique<Level>();
    slot->level = k;
    slot->kind = pcnf_->level_kind(k);
    build_abstraction(*slot);
  }
  return *slot;
}

void CegarSolver::build_abstraction(Level& l) {
  const Pcnf& p = *pcnf_;
  int m = p.num_clauses();
  l.sat = SatSolver(SatConfig{config_.seed, false});
  l.sat.ensure_vars(p.max_var());
  l.bsel.assign(static_cast<size_t>(m), 0);
  l.asel.assign(static_cast<size_t>(m), 0);
  l.rsel.assign(static_cast<size_t>(m), 0);

  if (l.kind == Quant::Exists) {
    for (ClauseId i = 1; i <= m; ++i) {
      auto lits = p.literals_at(i, l.level, LitRange::Eq);
      bool inner = !p.literals_at(i, l.level, LitRange::Gt).empty();
      Var b = l.sat.new_var();
      l.bsel[static_cast<size_t>(i - 1)] = b;
      l.sel_to_clause[b] = i;
      std::vector<Lit> clause{Lit::positive(b)};
      clause.insert(clause.end(), lits.begin(), lits.end());
      if (inner) {
        Var a = l.sat.new_var();
        l.asel[static_cast<size_t>(i - 1)] = a;
        clause.push_back(Lit::positive(a));
      }
      l.sat.add_clause(clause);
    }
    // expansion applies when the next block is the innermost universal one
    if (l.level < p.num_levels() &&
        p.level_kind(l.level + 1) == Quant::Forall) {
      bool innermost = true;
      for (int k2 = l.level + 2; k2 <= p.num_levels(); ++k2)
        if (p.level_kind(k2) == Quant::Forall) innermost = false;
      l.exp_applicable = innermost;
    }
  } else {
    for (ClauseId i = 1; i <= m; ++i) {
      Var r = l.sat.new_var();
      l.rsel[static_cast<size_t>(i - 1)] = r;
      for (const Lit& lit : p.literals_at(i, l.level, LitRange::Eq))
        l.sat.add_clause({Lit::negative(r), lit.negated()});
    }
  }
  l.built = true;
}

void CegarSolver::ensure_defer_selector(Level& l, ClauseId i) {
  if (l.asel[static_cast<size_t>(i - 1)] != 0) return;
  Var a = l.sat.new_var();
  l.asel[static_cast<size_t>(i - 1)] = a;
  std::vector<Lit> clause{Lit::positive(a),
                          Lit::positive(l.bsel[static_cast<size_t>(i - 1)])};
  auto lits = pcnf_->literals_at(i, l.level, LitRange::Eq);
  clause.insert(clause.end(), lits.begin(), lits.end());
  l.sat.add_clause(clause);
}

void CegarSolver::check_limits() {
  if (has_deadline_ && std::chrono::steady_clock::now() > deadline_)
    throw LimitReached{};
  if (config_.conflict_limit >= 0 &&
      conflicts_used_ >= static_cast<uint64_t>(config_.conflict_limit))
    throw LimitReached{};
}

int64_t CegarSolver::per_call_budget() const {
  if (config_.conflict_limit < 0) return -1;
  return config_.conflict_limit - static_cast<int64_t>(conflicts_used_);
}

void CegarSolver::note_conflicts(uint64_t before, uint64_t after) {
  conflicts_used_ += after - before;
}

void CegarSolver::refine_clausal(Level& l, const std::vector<ClauseId>& core) {
  std::vector<Lit> clause;
  for (ClauseId i : core) {
    ensure_defer_selector(l, i);
    clause.push_back(Lit::negative(l.asel[static_cast<size_t>(i - 1)]));
  }
  l.sat.add_clause(clause);
  ++stats_.refinements_clausal;
}

void CegarSolver::refine_strengthen(Level& l,
                                    const std::vector<ClauseId>& core,
                                    int premise_node) {
  if (!l.groups_ready) {
    l.groups = strengthen_groups(*pcnf_, l.level);
    l.groups_ready = true;
  }
  std::vector<Lit> learned;
  for (ClauseId i : core) {
    const auto& group = l.groups[static_cast<size_t>(i - 1)];
    stats_.strengthen_max_group =
        std::max<uint64_t>(stats_.strengthen_max_group, group.size());
    if (group.size() > 1) ++stats_.strengthen_nonsingleton_groups;
    Var s = l.sat.new_var();
    for (ClauseId j : group) {
      ensure_defer_selector(l, j);
      l.sat.add_clause({Lit::negative(s),
                        Lit::negative(l.asel[static_cast<size_t>(j - 1)])});
    }
    learned.push_back(Lit::positive(s));
  }
  l.sat.add_clause(learned);
  ++stats_.refinements_strengthen;

  if (builder_ && premise_node >= 0) {
    Level::StrengthenEvent ev;
    ev.core = core;
    int cur = premise_node;
    for (ClauseId i : core) {
      auto nodes = builder_->strengthen(cur, i,
                                        l.groups[static_cast<size_t>(i - 1)]);
      const auto& group = l.groups[static_cast<size_t>(i - 1)];
      for (size_t gi = 0; gi < group.size(); ++gi)
        ev.side_nodes.emplace_back(group[gi], nodes.sides[gi]);
      cur = nodes.main;
    }
    ev.full_node = cur;
    l.sevents.push_back(std::move(ev));
  }
}

void CegarSolver::refine_expansion(Level& l, const Assignment& move) {
  const Pcnf& p = *pcnf_;
  auto& renames = l.exp_renames[move];
  for (ClauseId i = 1; i <= p.num_clauses(); ++i) {
    auto next = p.literals_at(i, l.level + 1, LitRange::Eq);
    if (satisfies_clause(move, next)) continue;
    std::vector<Lit> copy{
        Lit::positive(l.bsel[static_cast<size_t>(i - 1)])};
    auto here = p.literals_at(i, l.level, LitRange::Eq);
    copy.insert(copy.end(), here.begin(), here.end());
    for (const Lit& lit : p.literals_at(i, l.level + 1, LitRange::Gt)) {
      auto [it, inserted] = renames.try_emplace(lit.var(), 0);
      if (inserted) it->second = l.sat.new_var();
      copy.push_back(lit.is_positive() ? Lit::positive(it->second)
                                       : Lit::negative(it->second));
    }
    l.sat.add_clause(copy);
    ++stats_.expansion_clauses_added;
  }
  l.exp_paths.push_back(move);
  ++stats_.refinements_expansion;
}

std::pair<std::vector<ClauseId>, int> CegarSolver::assemble_exists(
    Level& l, const std::vector<ClauseId>& failed) {
  const Pcnf& p = *pcnf_;
  int k = l.level;

  // Expansion route first: an expansion refinement participating in the
  // final conflict has no (res) image, but the full expansion of the played
  // tree over the failed obligations is refutable whenever the query is.
  bool expansion_on = config_.refinement == Refinement::Expansion ||
                      config_.refinement == Refinement::Both;
  if (expansion_on && l.exp_applicable && !l.exp_paths.empty()) {
    ExpansionTree tree;
    for (const auto& a : l.exp_paths) tree.paths.push_back({a});
    DenseExpansion dense = exp_res_inputs(p, tree, failed, k);
    try {
      ResolutionProof pi = extract_resolution_proof(dense.clauses);
      int node = builder_->exp_res(std::move(tree), failed, std::move(pi), k);
      return {failed, node};
    } catch (const SatisfiableError&) {
      // fall back to the clausal premises
    }
  }

  std::vector<int> premises;
  for (const auto& d : l.pool)
    if (subset_of(d.clauses, failed)) premises.push_back(d.node);
  for (ClauseId i : failed)
    if (p.literals_at(i, k, LitRange::Gt).empty())
      premises.push_back(builder_->init_node(i, k));

  auto inputs_of = [&](const std::vector<int>& nodes) {
    std::vector<std::vector<Lit>> inputs;
    for (int n : nodes) inputs.push_back(object_literals(p, builder_->node(n)));
    return inputs;
  };

  ResolutionProof pi;
  bool have_pi = false;
  try {
    pi = extract_resolution_proof(inputs_of(premises));
    have_pi = true;
  } catch (const SatisfiableError&) {
  }
  if (!have_pi) {
    // strengthening products participate in the conflict
    for (const auto& ev : l.sevents) {
      premises.push_back(ev.full_node);
      for (const auto& [j, node] : ev.side_nodes)
        if (std::binary_search(failed.begin(), failed.end(), j))
          premises.push_back(node);
    }
    pi = extract_resolution_proof(inputs_of(premises));  // solver bug if it throws
  }

  // prune premises to the leaves the refutation uses
  std::vector<char> used(premises.size(), 0);
  for (const auto& node : pi.nodes)
    if (node.is_leaf()) used[static_cast<size_t>(node.input)] = 1;
  std::vector<int> remap(premises.size(), -1);
  std::vector<int> pruned;
  for (size_t i = 0; i < premises.size(); ++i)
    if (used[i]) {
      remap[i] = static_cast<int>(pruned.size());
      pruned.push_back(premises[i]);
    }
  for (auto& node : pi.nodes)
    if (node.is_leaf()) node.input = remap[static_cast<size_t>(node.input)];

  int node = builder_->res(pruned, std::move(pi));
  return {builder_->node(node).clauses, node};
}

CegarSolver::ExistsOutcome CegarSolver::do_exists(
    int k, const std::vector<ClauseId>& obligations) {
  Level& l = level(k);
  const Pcnf& p = *pcnf_;
  const auto& block_vars = p.block(k).vars;

  while (true) {
    check_limits();
    std::vector<Lit> assumptions;
    for (ClauseId i : obligations)
      assumptions.push_back(
          Lit::negative(l.bsel[static_cast<size_t>(i - 1)]));
    uint64_t before = l.sat.total_conflicts();
    auto res = l.sat.solve(assumptions, per_call_budget());
    note_conflicts(before, l.sat.total_conflicts());
    ++stats_.sat_calls[static_cast<size_t>(k)];
    if (res == SatSolver::Result::Limit) throw LimitReached{};

    if (res == SatSolver::Result::Unsatisfiable) {
      std::vector<ClauseId> failed;
      for (const Lit& fl : l.sat.failed_assumptions())
        failed.push_back(l.sel_to_clause.at(fl.var()));
      failed = sorted_ids(std::move(failed));
      if (!builder_) return {false, failed, -1};
      auto [core, node] = assemble_exists(l, failed);
      return {false, core, node};
    }

    Assignment alpha;
    for (Var v : block_vars) alpha[v] = l.sat.model_value(v);
    std::vector<ClauseId> inner_obl;
    for (ClauseId i : obligations)
      if (!satisfies_clause(alpha, p.literals_at(i, k, LitRange::Eq)))
        inner_obl.push_back(i);
    if (inner_obl.empty()) return {true, obligations, -1};
    assert(k < p.num_levels() && "innermost candidate discharges everything");

    ForallOutcome inner = do_forall(k + 1, inner_obl);
    if (inner.sat) return {true, obligations, -1};

    bool fresh = l.seen_cores.insert(inner.core).second;
    if (!fresh)
      throw std::logic_error("refinement failed to block a repeated core");
    if (builder_) l.pool.push_back({inner.core, inner.node});

    if (config_.refinement == Refinement::Strengthen ||
        config_.refinement == Refinement::Both)
      refine_strengthen(l, inner.core, inner.node);
    else
      refine_clausal(l, inner.core);
    if ((config_.refinement == Refinement::Expansion ||
         config_.refinement == Refinement::Both) &&
        l.exp_applicable && !l.exp_renames.contains(inner.move))
      refine_expansion(l, inner.move);
  }
}

CegarSolver::ForallOutcome CegarSolver::do_forall(
    int k, const std::vector<ClauseId>& obligations) {
  Level& l = level(k);
  const Pcnf& p = *pcnf_;
  const auto& block_vars = p.block(k).vars;

  // obligation clause scoped to this call via an activation literal
  Var act = l.sat.new_var();
  std::vector<Lit> obligation_clause{Lit::negative(act)};
  for (ClauseId i : obligations)
    obligation_clause.push_back(
        Lit::positive(l.rsel[static_cast<size_t>(i - 1)]));
  l.sat.add_clause(obligation_clause);
  std::vector<Lit> assumption{Lit::positive(act)};
  auto retire = [&]() { l.sat.add_clause({Lit::negative(act)}); };

  while (true) {
    check_limits();
    uint64_t before = l.sat.total_conflicts();
    auto res = l.sat.solve(assumption, per_call_budget());
    note_conflicts(before, l.sat.total_conflicts());
    ++stats_.sat_calls[static_cast<size_t>(k)];
    if (res == SatSolver::Result::Limit) throw LimitReached{};

    if (res == SatSolver::Result::Unsatisfiable) {
      // no universal move keeps any obligation unsatisfied
      retire();
      return {true, obligations, -1, {}};
    }

    Assignment alpha;
    for (Var v : block_vars) alpha[v] = l.sat.model_value(v);
    std::vector<ClauseId> inner_obl;
    for (ClauseId i : obligations)
      if (!satisfies_clause(alpha, p.literals_at(i, k, LitRange::Eq)))
        inner_obl.push_back(i);
    assert(!inner_obl.empty() && "kept obligation must exist under the move");

    if (k == p.num_levels()) {
      // innermost universal block: a kept obligation is fully falsified
      ClauseId i0 = inner_obl.front();
      int node = -1;
      if (builder_)
        node = builder_->forall_red(builder_->init_node(i0, k));
      retire();
      return {false, {i0}, node, alpha};
    }

    ExistsOutcome inner = do_exists(k + 1, inner_obl);
    if (!inner.sat) {
      int node = -1;
      if (builder_) node = builder_->forall_red(inner.node);
      retire();
      return {false, inner.core, node, alpha};
    }
    // the move failed: some kept obligation must come from the ones the
    // move satisfied at this level
    std::vector<Lit> learned{Lit::negative(act)};
    for (ClauseId i : obligations)
      if (!std::binary_search(inner_obl.begin(), inner_obl.end(), i))
        learned.push_back(Lit::positive(l.rsel[static_cast<size_t>(i - 1)]));
    l.sat.add_clause(learned);
  }
}

SolveResult CegarSolver::run() {
  SolveResult result;
  const Pcnf& p = *pcnf_;

  for (ClauseId i = 1; i <= p.num_clauses(); ++i) {
    if (p.clause(i).empty()) {
      result.status = SolveStatus::False;
      if (builder_) {
        int root = builder_->init_node(i, 0);
        result.proof = builder_->finalize(root);
        stats_.proof_size = proof_size(*result.proof);
      }
      result.stats = stats_;
      return result;
    }
  }
  if (p.num_clauses() == 0 || p.num_levels() == 0) {
    result.status = SolveStatus::True;
    result.stats = stats_;
    return result;
  }

  std::vector<ClauseId> all;
  for (ClauseId i = 1; i <= p.num_clauses(); ++i) all.push_back(i);

  try {
    bool verdict;
    int root = -1;
    if (p.level_kind(1) == Quant::Exists) {
      ExistsOutcome o = do_exists(1, all);
      verdict = o.sat;
      root = o.node;
    } else {
      ForallOutcome o = do_forall(1, all);
      verdict = o.sat;
      root = o.node;
    }
    if (verdict) {
      result.status = SolveStatus::True;
    } else {
      result.status = SolveStatus::False;
      if (builder_) {
        result.proof = builder_->finalize(root);
        stats_.proof_size = proof_size(*result.proof);
      }
    }
  } catch (const LimitReached&) {
    result.status = SolveStatus::Limit;
  }
  result.stats = stats_;
  return result;
}

CegarSolver::Subgame CegarSolver::solve_exists(
    int level_, std::vector<ClauseId> obligations) {
  if (pcnf_->level_kind(level_) != Quant::Exists)
    throw std::invalid_argument("level is not existential");
  ExistsOutcome o = do_exists(level_, sorted_ids(std::move(obligations)));
  return Subgame{o.sat, o.sat ? o.core : o.core, {}};
}

CegarSolver::Subgame CegarSolver::solve_forall(
    int level_, std::vector<ClauseId> obligations) {
  if (pcnf_->level_kind(level_) != Quant::Forall)
    throw std::invalid_argument("level is not universal");
  ForallOutcome o = do_forall(level_, sorted_ids(std::move(obligations)));
  Subgame s{o.sat, o.core, {}};
  if (!o.sat) s.moves.push_back(o.move);
  return s;
}

SolveResult solve(const Pcnf& p, const SolverConfig& config) {
  return CegarSolver(p, config).run();
}

}  // namespace qbf
