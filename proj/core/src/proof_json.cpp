#include "qbf/proof_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qbf/qdimacs.hpp"

namespace qbf {

using nlohmann::json;

std::string formula_hash(const Pcnf& p) {
  std::string text = emit_qdimacs(p);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json pi_to_json(const ResolutionProof& pi) {
  json nodes = json::array();
  for (const auto& n : pi.nodes) {
    if (n.is_leaf())
      nodes.push_back(json{{"in", n.input}});
    else
      nodes.push_back(json{{"res", {n.left, n.right, n.pivot}}});
  }
  return json{{"nodes", nodes}, {"root", pi.root}};
}

ResolutionProof pi_from_json(const json& j) {
  ResolutionProof pi;
  pi.has_clauses = false;
  for (const auto& n : j.at("nodes")) {
    ResolutionProof::Node node;
    if (n.contains("in")) {
      node.input = n.at("in").get<int>();
    } else {
      const auto& s = n.at("res");
      node.left = s.at(0).get<int>();
      node.right = s.at(1).get<int>();
      node.pivot = s.at(2).get<Var>();
    }
    pi.nodes.push_back(std::move(node));
  }
  pi.root = j.at("root").get<int>();
  return pi;
}

json tree_to_json(const ExpansionTree& tree) {
  json paths = json::array();
  for (const auto& path : tree.paths) {
    json edges = json::array();
    for (const auto& a : path) {
      json pairs = json::array();
      for (const auto& [v, b] : a) pairs.push_back(json::array({v, b ? 1 : 0}));
      edges.push_back(pairs);
    }
    paths.push_back(edges);
  }
  return paths;
}

ExpansionTree tree_from_json(const json& j) {
  ExpansionTree tree;
  for (const auto& edges : j) {
    std::vector<Assignment> path;
    for (const auto& pairs : edges) {
      Assignment a;
      for (const auto& pr : pairs)
        a[pr.at(0).get<Var>()] = pr.at(1).get<int>() != 0;
      path.push_back(std::move(a));
    }
    tree.paths.push_back(std::move(path));
  }
  return tree;
}

}  // namespace

void save_proof(const RedResProof& proof, const Pcnf& formula,
                std::ostream& out) {
  json doc;
  doc["format"] = "redres-proof";
  doc["version"] = 1;
  doc["formula_hash"] = formula_hash(formula);

  json nodes = json::array();
  for (const auto& n : proof.nodes) {
    json fresh = json::array();
    for (const Lit& l : n.fresh) fresh.push_back(l.to_dimacs());
    nodes.push_back(
        json{{"level", n.level}, {"clauses", n.clauses}, {"fresh", fresh}});
  }
  doc["nodes"] = nodes;

  json apps = json::array();
  for (const auto& app : proof.apps) {
    json a;
    a["rule"] = rule_name(app.rule);
    a["conclusions"] = app.conclusions;
    if (!app.premises.empty()) a["premises"] = app.premises;
    switch (app.rule) {
      case Rule::Init:
        a["clause"] = app.init_clause;
        break;
      case Rule::Res:
        a["pi"] = pi_to_json(app.pi);
        break;
      case Rule::ForallRed:
        break;
      case Rule::Strengthen:
        a["pivot_clause"] = app.pivot_clause;
        a["group"] = app.group;
        a["fresh_var"] = app.fresh_var;
        break;
      case Rule::ExpRes: {
        a["tree"] = tree_to_json(app.tree);
        a["clauses"] = app.exp_clauses;
        a["pi"] = pi_to_json(app.pi);
        json annot = json::array();
        const int level =
            proof.nodes[static_cast<size_t>(app.conclusions[0])].level + 1;
        DenseExpansion dense =
            exp_res_inputs(formula, app.tree, app.exp_clauses, level);
        for (const auto& av : dense.vars) annot.push_back(av.to_string());
        a["annotations"] = annot;
        break;
      }
    }
    apps.push_back(std::move(a));
  }
  doc["apps"] = apps;
  doc["root"] = proof.root;
  out << doc.dump(1) << "\n";
}

void save_proof_file(const RedResProof& proof, const Pcnf& formula,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write proof: " + path);
  save_proof(proof, formula, out);
}

LoadedProof load_proof(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed proof document: ") +
                             e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "redres-proof")
      throw std::runtime_error("not a redres proof document");
    LoadedProof out;
    out.formula_hash = doc.at("formula_hash").get<std::string>();
    for (const auto& n : doc.at("nodes")) {
      ProofObject obj;
      obj.level = n.at("level").get<int>();
      obj.clauses = n.at("clauses").get<std::vector<ClauseId>>();
      for (const auto& l : n.at("fresh"))
        obj.fresh.push_back(Lit(l.get<int32_t>()));
      out.proof.nodes.push_back(
          make_object(obj.clauses, obj.level, obj.fresh));
    }
    for (const auto& a : doc.at("apps")) {
      RuleApp app;
      std::string rule = a.at("rule").get<std::string>();
      app.conclusions = a.at("conclusions").get<std::vector<int>>();
      if (a.contains("premises"))
        app.premises = a.at("premises").get<std::vector<int>>();
      if (rule == "init") {
        app.rule = Rule::Init;
        app.init_clause = a.at("clause").get<ClauseId>();
      } else if (rule == "res") {
        app.rule = Rule::Res;
        app.pi = pi_from_json(a.at("pi"));
      } else if (rule == "forall_red") {
        app.rule = Rule::ForallRed;
      } else if (rule == "strengthen") {
        app.rule = Rule::Strengthen;
        app.pivot_clause = a.at("pivot_clause").get<ClauseId>();
        app.group = a.at("group").get<std::vector<ClauseId>>();
        app.fresh_var = a.at("fresh_var").get<Var>();
      } else if (rule == "exp_res") {
        app.rule = Rule::ExpRes;
        app.tree = tree_from_json(a.at("tree"));
        app.exp_clauses = a.at("clauses").get<std::vector<ClauseId>>();
        app.pi = pi_from_json(a.at("pi"));
      } else {
        throw std::runtime_error("unknown rule tag: " + rule);
      }
      out.proof.apps.push_back(std::move(app));
    }
    out.proof.root = doc.at("root").get<int>();
    return out;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed proof document: ") +
                             e.what());
  }
}

LoadedProof load_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read proof: " + path);
  return load_proof(in);
}

}  // namespace qbf
