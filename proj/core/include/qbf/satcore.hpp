#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qbf/formula.hpp"
#include "qbf/resolution.hpp"

namespace qbf {

struct SatConfig {
  uint64_t seed = 0;
  bool proof_logging = false;
};

// Incremental CDCL solver: two-watched-literal propagation, first-UIP
// learning, assumption literals with failed-assumption cores. With proof
// logging enabled, learned clauses record their resolution chains so a
// refutation DAG can be reconstructed after an assumption-free UNSAT.
class SatSolver {
 public:
  explicit SatSolver(SatConfig cfg = {});
  ~SatSolver();
  SatSolver(SatSolver&&) noexcept;
  SatSolver& operator=(SatSolver&&) noexcept;

  Var new_var();
  void ensure_vars(Var max_var);
  int num_vars() const;

  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits);

  enum class Result { Satisfiable, Unsatisfiable, Limit };

  Result solve(std::span<const Lit> assumptions = {},
               int64_t conflict_budget = -1);

  bool model_value(Var v) const;
  bool model_satisfies(Lit l) const;

  // Failed assumption subset after an Unsatisfiable result with assumptions.
  const std::vector<Lit>& failed_assumptions() const;

  uint64_t total_conflicts() const;

  // Refutation of the added clauses; valid after an assumption-free
  // Unsatisfiable result with proof logging on. Leaf inputs index the
  // add_clause call order.
  ResolutionProof extract_proof() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Verdict plus model or failed-assumption core (spec-level convenience
// around SatSolver).
struct SatOutcome {
  bool satisfiable = false;
  Assignment model;        // total over mentioned variables when satisfiable
  std::vector<Lit> core;   // subset of the assumptions when unsatisfiable
};

SatOutcome sat_solve(const std::vector<std::vector<Lit>>& clauses,
                     const std::vector<Lit>& assumptions = {});

// Thrown by extract_resolution_proof when the clause set is satisfiable.
class SatisfiableError : public std::runtime_error {
 public:
  SatisfiableError() : std::runtime_error("clause set is satisfiable") {}
};

// Refutes the clause set in a fresh proof-logging instance and returns the
// reconstructed resolution DAG (leaves index the given clause list).
ResolutionProof extract_resolution_proof(
    const std::vector<std::vector<Lit>>& clauses);

}  // namespace qbf
