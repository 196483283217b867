#pragma once

#include <iosfwd>
#include <string>

#include "qbf/calculus.hpp"
#include "qbf/formula.hpp"

namespace qbf {

// FNV-1a over the canonical QDIMACS rendering; embedded in proof documents
// so the checker can reject a mismatched formula/proof pair early.
std::string formula_hash(const Pcnf& p);

void save_proof(const RedResProof& proof, const Pcnf& formula,
                std::ostream& out);
void save_proof_file(const RedResProof& proof, const Pcnf& formula,
                     const std::string& path);

struct LoadedProof {
  RedResProof proof;
  std::string formula_hash;
};

// Parses a proof document. Throws std::runtime_error on malformed input;
// rule validity is left to check_proof.
LoadedProof load_proof(std::istream& in);
LoadedProof load_proof_file(const std::string& path);

}  // namespace qbf
