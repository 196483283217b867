#include "qbf/resolution.hpp"

#include <algorithm>

namespace qbf {

int ResolutionProof::inner_count() const {
  int count = 0;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].is_leaf() && static_cast<int>(i) != root) ++count;
  return count;
}

size_t ResolutionProof::num_steps() const {
  size_t count = 0;
  for (const auto& n : nodes)
    if (!n.is_leaf()) ++count;
  return count;
}

std::vector<Lit> resolve_clauses(std::span<const Lit> left,
                                 std::span<const Lit> right, Var pivot) {
  std::vector<Lit> out;
  out.reserve(left.size() + right.size());
  for (const Lit& l : left)
    if (l.var() != pivot) out.push_back(l);
  for (const Lit& l : right)
    if (l.var() != pivot) out.push_back(l);
  return normalize_clause(std::move(out));
}

ResolutionCheck check_resolution_proof(
    const ResolutionProof& proof, std::span<const std::vector<Lit>> inputs) {
  if (proof.nodes.empty()) return ResolutionCheck::fail(-1, "empty proof");
  if (proof.root < 0 || proof.root >= static_cast<int>(proof.nodes.size()))
    return ResolutionCheck::fail(-1, "root out of range");

  // Work on re-derived clauses; verify against stored ones when present.
  std::vector<std::vector<Lit>> derived(proof.nodes.size());
  for (size_t i = 0; i < proof.nodes.size(); ++i) {
    const auto& n = proof.nodes[i];
    int idx = static_cast<int>(i);
    if (n.is_leaf()) {
      if (n.input >= static_cast<int>(inputs.size()))
        return ResolutionCheck::fail(idx, "foreign leaf: input index out of range");
      derived[i] = normalize_clause(inputs[static_cast<size_t>(n.input)]);
    } else {
      if (n.left < 0 || n.left >= idx || n.right < 0 || n.right >= idx)
        return ResolutionCheck::fail(idx, "step operand not an earlier node");
      if (n.pivot == 0)
        return ResolutionCheck::fail(idx, "step without pivot");
      const auto& lc = derived[static_cast<size_t>(n.left)];
      const auto& rc = derived[static_cast<size_t>(n.right)];
      if (!clause_contains(lc, Lit::positive(n.pivot)) ||
          !clause_contains(rc, Lit::negative(n.pivot)))
        return ResolutionCheck::fail(idx,
                                     "operands lack complementary pivot pair");
      derived[i] = resolve_clauses(lc, rc, n.pivot);
    }
    if (proof.has_clauses && normalize_clause(n.clause) != derived[i])
      return ResolutionCheck::fail(idx, "stored clause differs from resolvent");
  }
  if (!derived[static_cast<size_t>(proof.root)].empty())
    return ResolutionCheck::fail(proof.root, "root clause is not empty");
  return ResolutionCheck::pass();
}

}  // namespace qbf
