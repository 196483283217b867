#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbf/calculus.hpp"
#include "qbf/formula.hpp"

namespace qbf {

enum class Refinement { Plain, Strengthen, Expansion, Both };

std::string refinement_name(Refinement r);
std::optional<Refinement> parse_refinement(const std::string& name);

struct SolverConfig {
  Refinement refinement = Refinement::Both;
  bool proof_logging = false;
  uint64_t seed = 0;
  int64_t conflict_limit = -1;  // total CDCL conflicts, -1 = unlimited
  int64_t time_limit_ms = -1;
};

struct SolveStats {
  std::vector<uint64_t> sat_calls;  // per level, index 0 unused
  uint64_t refinements_clausal = 0;
  uint64_t refinements_strengthen = 0;
  uint64_t refinements_expansion = 0;
  uint64_t strengthen_max_group = 0;
  uint64_t strengthen_nonsingleton_groups = 0;
  uint64_t expansion_clauses_added = 0;
  size_t proof_size = 0;

  uint64_t total_refinements() const {
    return refinements_clausal + refinements_strengthen +
           refinements_expansion;
  }
  std::vector<std::pair<std::string, std::string>> report() const;
};

enum class SolveStatus { True, False, Limit };

struct SolveResult {
  SolveStatus status = SolveStatus::Limit;
  SolveStats stats;
  std::optional<RedResProof> proof;  // on False with proof logging
};

// group(i) = { j | lit(j,>level) subset of lit(i,>level) }, indexed i-1.
std::vector<std::vector<ClauseId>> strengthen_groups(const Pcnf& p, int level);

// CEGAR loop over the quantifier blocks with per-level incremental SAT
// abstractions. Obligation sets are the clause indices not yet satisfied by
// outer assignments; on UNSAT the inner core is the derived proof object.
class CegarSolver {
 public:
  explicit CegarSolver(const Pcnf& p, SolverConfig config = {});
  ~CegarSolver();

  SolveResult run();

  // Subgame entry points, exposed for tests: `set` is the witness on SAT and
  // the core on UNSAT; universal UNSAT also reports the winning move.
  struct Subgame {
    bool sat = false;
    std::vector<ClauseId> set;
    std::vector<Assignment> moves;
  };
  Subgame solve_exists(int level, std::vector<ClauseId> obligations);
  Subgame solve_forall(int level, std::vector<ClauseId> obligations);

  const SolveStats& stats() const { return stats_; }

 private:
  struct Level;
  struct LimitReached {};
  struct ExistsOutcome {
    bool sat;
    std::vector<ClauseId> core;  // on UNSAT; subset of the obligations
    int node = -1;               // proof object at level k-1
  };
  struct ForallOutcome {
    bool sat;
    std::vector<ClauseId> core;
    int node = -1;
    Assignment move;  // winning universal assignment on UNSAT
  };

  Level& level(int k);
  void build_abstraction(Level& l);
  void ensure_defer_selector(Level& l, ClauseId i);
  void check_limits();
  int64_t per_call_budget() const;
  void note_conflicts(uint64_t before, uint64_t after);

  ExistsOutcome do_exists(int k, const std::vector<ClauseId>& obligations);
  ForallOutcome do_forall(int k, const std::vector<ClauseId>& obligations);

  void refine_clausal(Level& l, const std::vector<ClauseId>& core);
  void refine_strengthen(Level& l, const std::vector<ClauseId>& core,
                         int premise_node);
  void refine_expansion(Level& l, const Assignment& move);

  std::pair<std::vector<ClauseId>, int> assemble_exists(
      Level& l, const std::vector<ClauseId>& failed);

  const Pcnf* pcnf_;
  SolverConfig config_;
  SolveStats stats_;
  std::vector<std::unique_ptr<Level>> levels_;
  std::optional<ProofBuilder> builder_;
  uint64_t conflicts_used_ = 0;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_ = false;
};

SolveResult solve(const Pcnf& p, const SolverConfig& config = {});

}  // namespace qbf
