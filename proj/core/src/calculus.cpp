#include "qbf/calculus.hpp"

#include <algorithm>
#include <set>

namespace qbf {

namespace {

std::vector<ClauseId> sorted_unique(std::vector<ClauseId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

struct Violation {
  std::string condition;
  std::string detail;
};

using MaybeViolation = std::optional<Violation>;

MaybeViolation validate_init(const Pcnf& p, ClauseId i, int level) {
  if (i < 1 || i > p.num_clauses())
    return Violation{"init-clause-range", "clause id " + std::to_string(i)};
  if (level < 0 || level > p.num_levels())
    return Violation{"init-level-range", "level " + std::to_string(level)};
  auto inner = p.literals_at(i, level, LitRange::Gt);
  if (!inner.empty())
    return Violation{"init-inner-literals",
                     "clause " + std::to_string(i) + " has literals beyond level " +
                         std::to_string(level) + ": " + clause_to_string(inner)};
  return std::nullopt;
}

MaybeViolation validate_res(const Pcnf& p,
                            std::span<const ProofObject> premises,
                            const ResolutionProof& pi) {
  if (premises.empty()) return Violation{"res-no-premises", ""};
  int k = premises.front().level;
  for (const auto& prem : premises)
    if (prem.level != k)
      return Violation{"res-level-mismatch",
                       "premise levels " + std::to_string(k) + " vs " +
                           std::to_string(prem.level)};
  if (k < 1 || k > p.num_levels())
    return Violation{"res-level-range", "level " + std::to_string(k)};
  if (p.level_kind(k) != Quant::Exists)
    return Violation{"res-not-existential", "level " + std::to_string(k)};
  std::vector<std::vector<Lit>> inputs;
  for (const auto& prem : premises) inputs.push_back(object_literals(p, prem));
  auto rc = check_resolution_proof(pi, inputs);
  if (!rc.ok) {
    std::string tag = "res-pi-step";
    if (rc.what.find("leaf") != std::string::npos) tag = "res-pi-leaf";
    if (rc.what.find("pivot") != std::string::npos) tag = "res-pi-pivot";
    if (rc.what.find("root") != std::string::npos) tag = "res-pi-root";
    return Violation{tag, "node " + std::to_string(rc.node) + ": " + rc.what};
  }
  return std::nullopt;
}

ProofObject res_conclusion(std::span<const ProofObject> premises) {
  std::vector<ClauseId> ids;
  for (const auto& prem : premises)
    ids.insert(ids.end(), prem.clauses.begin(), prem.clauses.end());
  return make_object(sorted_unique(std::move(ids)),
                     premises.front().level - 1);
}

MaybeViolation validate_forall_red(const Pcnf& p, const ProofObject& premise) {
  int k = premise.level;
  if (k < 1 || k > p.num_levels())
    return Violation{"forallred-level-range", "level " + std::to_string(k)};
  if (p.level_kind(k) != Quant::Forall)
    return Violation{"forallred-not-universal", "level " + std::to_string(k)};
  if (!premise.fresh.empty())
    return Violation{"forallred-fresh-premise",
                     "premise carries fresh literals"};
  auto lits = object_literals(p, premise);
  for (const Lit& l : lits)
    if (l.is_positive() && clause_contains(lits, l.negated()))
      return Violation{"forallred-tautology",
                       "complementary pair on variable " +
                           std::to_string(l.var())};
  return std::nullopt;
}

MaybeViolation validate_strengthen(const Pcnf& p, const ProofObject& premise,
                                   ClauseId pivot,
                                   std::span<const ClauseId> group, Var fresh,
                                   std::span<const Var> used_fresh) {
  int k = premise.level;
  if (k < 1 || k > p.num_levels())
    return Violation{"strengthen-level-range", "level " + std::to_string(k)};
  if (p.level_kind(k) != Quant::Exists)
    return Violation{"strengthen-not-existential", "level " + std::to_string(k)};
  if (!std::binary_search(premise.clauses.begin(), premise.clauses.end(),
                          pivot))
    return Violation{"strengthen-pivot-missing",
                     "clause " + std::to_string(pivot) + " not in premise"};
  if (fresh == 0 || p.is_bound(fresh))
    return Violation{"strengthen-fresh-formula",
                     "variable " + std::to_string(fresh) +
                         " is bound in the formula"};
  if (std::find(used_fresh.begin(), used_fresh.end(), fresh) !=
      used_fresh.end())
    return Violation{"strengthen-fresh-conflict",
                     "variable " + std::to_string(fresh) +
                         " already introduced elsewhere"};
  if (group.empty()) return Violation{"strengthen-empty-group", ""};
  auto pivot_inner = p.literals_at(pivot, k, LitRange::Gt);
  for (ClauseId j : group) {
    if (j < 1 || j > p.num_clauses())
      return Violation{"strengthen-group-range", "clause " + std::to_string(j)};
    for (const Lit& l : p.literals_at(j, k, LitRange::Gt))
      if (!clause_contains(pivot_inner, l))
        return Violation{
            "strengthen-subset",
            "clause " + std::to_string(j) + " literal " +
                std::to_string(l.to_dimacs()) + " not inner-subsumed by clause " +
                std::to_string(pivot)};
  }
  return std::nullopt;
}

StrengthenResult strengthen_conclusions(const ProofObject& premise,
                                        ClauseId pivot,
                                        std::span<const ClauseId> group,
                                        Var fresh) {
  StrengthenResult out;
  std::vector<ClauseId> rest;
  for (ClauseId i : premise.clauses)
    if (i != pivot) rest.push_back(i);
  std::vector<Lit> fr = premise.fresh;
  fr.push_back(Lit::positive(fresh));
  out.main = make_object(std::move(rest), premise.level, std::move(fr));
  for (ClauseId j : group)
    out.sides.push_back(
        make_object({j}, premise.level, {Lit::negative(fresh)}));
  return out;
}

MaybeViolation validate_exp_res(const Pcnf& p, const ExpansionTree& tree,
                                std::span<const ClauseId> ids,
                                const ResolutionProof& pi, int level) {
  if (level < 1 || level > p.num_levels())
    return Violation{"expres-level-range", "level " + std::to_string(level)};
  if (p.level_kind(level) != Quant::Exists)
    return Violation{"expres-not-existential", "level " + std::to_string(level)};
  if (ids.empty()) return Violation{"expres-empty-clause-set", ""};
  for (ClauseId i : ids)
    if (i < 1 || i > p.num_clauses())
      return Violation{"expres-clause-range", "clause " + std::to_string(i)};
  auto ublocks = universal_blocks_from(p, level);
  if (tree.paths.empty())
    return Violation{"expres-tree-depth", "tree has no path"};
  std::set<std::vector<Assignment>> distinct;
  for (const auto& path : tree.paths) {
    if (path.size() != ublocks.size())
      return Violation{"expres-tree-depth",
                       "path has " + std::to_string(path.size()) +
                           " edges, fragment has " +
                           std::to_string(ublocks.size()) +
                           " universal blocks"};
    for (size_t d = 0; d < path.size(); ++d) {
      if (path[d].size() != ublocks[d]->vars.size())
        return Violation{"expres-tree-label",
                         "edge assignment not total over block"};
      for (Var v : ublocks[d]->vars)
        if (!path[d].contains(v))
          return Violation{"expres-tree-label",
                           "edge assignment misses variable " +
                               std::to_string(v)};
    }
    if (!distinct.insert(path).second)
      return Violation{"expres-tree-dup", "duplicate path label"};
  }
  DenseExpansion dense = exp_res_inputs(p, tree, ids, level);
  auto rc = check_resolution_proof(pi, dense.clauses);
  if (!rc.ok) {
    std::string tag = "expres-pi-step";
    if (rc.what.find("leaf") != std::string::npos) tag = "expres-pi-leaf";
    if (rc.what.find("pivot") != std::string::npos) tag = "expres-pi-pivot";
    if (rc.what.find("root") != std::string::npos) tag = "expres-pi-root";
    return Violation{tag, "node " + std::to_string(rc.node) + ": " + rc.what};
  }
  return std::nullopt;
}

}  // namespace

ProofObject make_object(std::vector<ClauseId> clauses, int level,
                        std::vector<Lit> fresh) {
  ProofObject obj;
  obj.clauses = sorted_unique(std::move(clauses));
  obj.level = level;
  obj.fresh = normalize_clause(std::move(fresh));
  return obj;
}

std::vector<Lit> object_literals(const Pcnf& p, const ProofObject& obj) {
  std::vector<Lit> lits = obj.fresh;
  for (ClauseId i : obj.clauses) {
    auto at = p.literals_at(i, obj.level, LitRange::Eq);
    lits.insert(lits.end(), at.begin(), at.end());
  }
  return normalize_clause(std::move(lits));
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Init: return "init";
    case Rule::Res: return "res";
    case Rule::ForallRed: return "forall_red";
    case Rule::Strengthen: return "strengthen";
    case Rule::ExpRes: return "exp_res";
  }
  return "?";
}

size_t proof_size(const RedResProof& proof) {
  size_t size = proof.nodes.size();
  for (const auto& app : proof.apps) {
    if (app.rule == Rule::Res || app.rule == Rule::ExpRes)
      size += static_cast<size_t>(app.pi.inner_count());
    if (app.rule == Rule::ExpRes) size += app.tree.edge_count();
  }
  return size;
}

DenseExpansion exp_res_inputs(const Pcnf& p, const ExpansionTree& tree,
                              std::span<const ClauseId> ids, int level) {
  return to_dense(expand_tree(p, level, tree, ids));
}

ProofObject apply_init(const Pcnf& p, ClauseId i, int level) {
  if (auto v = validate_init(p, i, level))
    throw RuleViolation(v->condition, v->detail);
  return make_object({i}, level);
}

ProofObject apply_res(const Pcnf& p, std::span<const ProofObject> premises,
                      const ResolutionProof& pi) {
  if (auto v = validate_res(p, premises, pi))
    throw RuleViolation(v->condition, v->detail);
  return res_conclusion(premises);
}

ProofObject apply_forall_red(const Pcnf& p, const ProofObject& premise) {
  if (auto v = validate_forall_red(p, premise))
    throw RuleViolation(v->condition, v->detail);
  return make_object(premise.clauses, premise.level - 1);
}

StrengthenResult apply_strengthen(const Pcnf& p, const ProofObject& premise,
                                  ClauseId pivot,
                                  std::span<const ClauseId> group, Var fresh,
                                  std::span<const Var> used_fresh) {
  if (auto v = validate_strengthen(p, premise, pivot, group, fresh, used_fresh))
    throw RuleViolation(v->condition, v->detail);
  return strengthen_conclusions(premise, pivot, group, fresh);
}

ProofObject apply_exp_res(const Pcnf& p, const ExpansionTree& tree,
                          std::span<const ClauseId> ids,
                          const ResolutionProof& pi, int level) {
  if (auto v = validate_exp_res(p, tree, ids, pi, level))
    throw RuleViolation(v->condition, v->detail);
  return make_object({ids.begin(), ids.end()}, level - 1);
}

ProofCheck check_proof(const Pcnf& p, const RedResProof& proof) {
  auto fail = [](std::string condition, int app, int node,
                 std::string detail) {
    return ProofCheck{false, std::move(condition), app, node,
                      std::move(detail)};
  };

  int n = static_cast<int>(proof.nodes.size());
  std::vector<char> defined(proof.nodes.size(), 0);

  // fresh variables must be globally unique across strengthen applications
  std::vector<Var> fresh_seen;
  for (size_t a = 0; a < proof.apps.size(); ++a) {
    const RuleApp& app = proof.apps[a];
    int ai = static_cast<int>(a);

    for (int prem : app.premises) {
      if (prem < 0 || prem >= n)
        return fail("premise-range", ai, prem, "premise id out of range");
      if (!defined[static_cast<size_t>(prem)])
        return fail("premise-undefined", ai, prem,
                    "premise not derived by an earlier application");
    }
    for (int concl : app.conclusions) {
      if (concl < 0 || concl >= n)
        return fail("conclusion-range", ai, concl, "conclusion id out of range");
      if (defined[static_cast<size_t>(concl)])
        return fail("conclusion-redefined", ai, concl,
                    "node is the conclusion of two applications");
    }

    auto node_at = [&](int id) -> const ProofObject& {
      return proof.nodes[static_cast<size_t>(id)];
    };

    switch (app.rule) {
      case Rule::Init: {
        if (app.premises.size() != 0 || app.conclusions.size() != 1)
          return fail("init-arity", ai, -1, "");
        const ProofObject& c = node_at(app.conclusions[0]);
        if (auto v = validate_init(p, app.init_clause, c.level))
          return fail(v->condition, ai, app.conclusions[0], v->detail);
        if (c != make_object({app.init_clause}, c.level))
          return fail("init-conclusion-mismatch", ai, app.conclusions[0], "");
        break;
      }
      case Rule::Res: {
        if (app.premises.empty() || app.conclusions.size() != 1)
          return fail("res-no-premises", ai, -1, "");
        std::vector<ProofObject> premises;
        for (int prem : app.premises) premises.push_back(node_at(prem));
        if (auto v = validate_res(p, premises, app.pi))
          return fail(v->condition, ai, app.conclusions[0], v->detail);
        const ProofObject& c = node_at(app.conclusions[0]);
        if (!c.fresh.empty())
          return fail("res-conclusion-fresh", ai, app.conclusions[0],
                      "conclusion carries fresh literals");
        if (c != res_conclusion(premises))
          return fail("res-conclusion-mismatch", ai, app.conclusions[0],
                      "conclusion is not the premise union at level k-1");
        break;
      }
      case Rule::ForallRed: {
        if (app.premises.size() != 1 || app.conclusions.size() != 1)
          return fail("forallred-arity", ai, -1, "");
        const ProofObject& prem = node_at(app.premises[0]);
        if (auto v = validate_forall_red(p, prem))
          return fail(v->condition, ai, app.premises[0], v->detail);
        const ProofObject& c = node_at(app.conclusions[0]);
        if (c != make_object(prem.clauses, prem.level - 1))
          return fail("forallred-conclusion-mismatch", ai, app.conclusions[0],
                      "");
        break;
      }
      case Rule::Strengthen: {
        if (app.premises.size() != 1 ||
            app.conclusions.size() != app.group.size() + 1)
          return fail("strengthen-arity", ai, -1, "");
        const ProofObject& prem = node_at(app.premises[0]);
        if (auto v = validate_strengthen(p, prem, app.pivot_clause, app.group,
                                         app.fresh_var, fresh_seen))
          return fail(v->condition, ai, app.premises[0], v->detail);
        fresh_seen.push_back(app.fresh_var);
        StrengthenResult expect = strengthen_conclusions(
            prem, app.pivot_clause, app.group, app.fresh_var);
        if (node_at(app.conclusions[0]) != expect.main)
          return fail("strengthen-conclusion-mismatch", ai, app.conclusions[0],
                      "main conclusion");
        for (size_t s = 0; s < expect.sides.size(); ++s)
          if (node_at(app.conclusions[s + 1]) != expect.sides[s])
            return fail("strengthen-conclusion-mismatch", ai,
                        app.conclusions[s + 1], "side conclusion");
        break;
      }
      case Rule::ExpRes: {
        if (!app.premises.empty() || app.conclusions.size() != 1)
          return fail("expres-arity", ai, -1, "");
        const ProofObject& c = node_at(app.conclusions[0]);
        int level = c.level + 1;
        if (auto v = validate_exp_res(p, app.tree, app.exp_clauses, app.pi,
                                      level))
          return fail(v->condition, ai, app.conclusions[0], v->detail);
        if (c != make_object({app.exp_clauses.begin(), app.exp_clauses.end()},
                             level - 1))
          return fail("expres-conclusion-mismatch", ai, app.conclusions[0], "");
        break;
      }
    }
    for (int concl : app.conclusions) defined[static_cast<size_t>(concl)] = 1;
  }

  for (int id = 0; id < n; ++id)
    if (!defined[static_cast<size_t>(id)])
      return fail("node-undefined", -1, id,
                  "node is not the conclusion of any application");
  if (proof.root < 0 || proof.root >= n)
    return fail("root-range", -1, proof.root, "");
  if (proof.nodes[static_cast<size_t>(proof.root)].level != 0)
    return fail("root-level", -1, proof.root,
                "refutation root must be at level 0");
  return ProofCheck::pass();
}

ProofBuilder::ProofBuilder(const Pcnf& p)
    : pcnf_(&p), next_fresh_(p.max_var() + 1) {}

int ProofBuilder::add_node(ProofObject obj) {
  proof_.nodes.push_back(std::move(obj));
  return static_cast<int>(proof_.nodes.size()) - 1;
}

int ProofBuilder::init_node(ClauseId i, int level) {
  for (const auto& [key, id] : init_cache_)
    if (key.first == i && key.second == level) return id;
  ProofObject obj = apply_init(*pcnf_, i, level);
  int id = add_node(std::move(obj));
  RuleApp app;
  app.rule = Rule::Init;
  app.init_clause = i;
  app.conclusions = {id};
  proof_.apps.push_back(std::move(app));
  init_cache_.push_back({{i, level}, id});
  return id;
}

int ProofBuilder::res(std::vector<int> premises, ResolutionProof pi) {
  std::vector<ProofObject> objs;
  for (int prem : premises) objs.push_back(proof_.nodes[size_t(prem)]);
  ProofObject concl = apply_res(*pcnf_, objs, pi);
  int id = add_node(std::move(concl));
  RuleApp app;
  app.rule = Rule::Res;
  app.premises = std::move(premises);
  app.conclusions = {id};
  app.pi = std::move(pi);
  proof_.apps.push_back(std::move(app));
  return id;
}

int ProofBuilder::forall_red(int premise) {
  ProofObject concl = apply_forall_red(*pcnf_, proof_.nodes[size_t(premise)]);
  int id = add_node(std::move(concl));
  RuleApp app;
  app.rule = Rule::ForallRed;
  app.premises = {premise};
  app.conclusions = {id};
  proof_.apps.push_back(std::move(app));
  return id;
}

ProofBuilder::StrengthenNodes ProofBuilder::strengthen(
    int premise, ClauseId pivot, std::vector<ClauseId> group) {
  Var fresh = next_fresh_++;
  StrengthenResult r = apply_strengthen(*pcnf_, proof_.nodes[size_t(premise)],
                                        pivot, group, fresh, used_fresh_);
  used_fresh_.push_back(fresh);
  StrengthenNodes out;
  out.fresh = fresh;
  out.main = add_node(std::move(r.main));
  RuleApp app;
  app.rule = Rule::Strengthen;
  app.premises = {premise};
  app.conclusions = {out.main};
  app.pivot_clause = pivot;
  app.group = std::move(group);
  app.fresh_var = fresh;
  for (auto& side : r.sides) {
    int id = add_node(std::move(side));
    out.sides.push_back(id);
    app.conclusions.push_back(id);
  }
  proof_.apps.push_back(std::move(app));
  return out;
}

int ProofBuilder::exp_res(ExpansionTree tree, std::vector<ClauseId> ids,
                          ResolutionProof pi, int level) {
  ProofObject concl = apply_exp_res(*pcnf_, tree, ids, pi, level);
  int id = add_node(std::move(concl));
  RuleApp app;
  app.rule = Rule::ExpRes;
  app.conclusions = {id};
  app.tree = std::move(tree);
  app.exp_clauses = std::move(ids);
  app.pi = std::move(pi);
  proof_.apps.push_back(std::move(app));
  return id;
}

RedResProof ProofBuilder::finalize(int root) const {
  // keep the applications reachable from the root
  std::vector<int> producer(proof_.nodes.size(), -1);
  for (size_t a = 0; a < proof_.apps.size(); ++a)
    for (int concl : proof_.apps[a].conclusions)
      producer[static_cast<size_t>(concl)] = static_cast<int>(a);

  std::vector<char> keep_app(proof_.apps.size(), 0);
  std::vector<char> seen_node(proof_.nodes.size(), 0);
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (seen_node[static_cast<size_t>(id)]) continue;
    seen_node[static_cast<size_t>(id)] = 1;
    int a = producer[static_cast<size_t>(id)];
    if (a < 0 || keep_app[static_cast<size_t>(a)]) continue;
    keep_app[static_cast<size_t>(a)] = 1;
    for (int prem : proof_.apps[static_cast<size_t>(a)].premises)
      stack.push_back(prem);
    for (int concl : proof_.apps[static_cast<size_t>(a)].conclusions)
      stack.push_back(concl);
  }

  RedResProof out;
  std::vector<int> remap(proof_.nodes.size(), -1);
  for (size_t a = 0; a < proof_.apps.size(); ++a) {
    if (!keep_app[a]) continue;
    RuleApp app = proof_.apps[a];
    for (int concl : app.conclusions) {
      remap[static_cast<size_t>(concl)] = static_cast<int>(out.nodes.size());
      out.nodes.push_back(proof_.nodes[static_cast<size_t>(concl)]);
    }
    for (int& prem : app.premises) prem = remap[static_cast<size_t>(prem)];
    for (int& concl : app.conclusions) concl = remap[static_cast<size_t>(concl)];
    out.apps.push_back(std::move(app));
  }
  out.root = remap[static_cast<size_t>(root)];
  return out;
}

}  // namespace qbf
