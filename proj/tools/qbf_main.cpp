#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbf/families.hpp"
#include "qbf/oracle.hpp"
#include "qbf/proof_json.hpp"
#include "qbf/qdimacs.hpp"
#include "qbf/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTrue = 10;
constexpr int kExitFalse = 20;

qbf::Pcnf read_formula(const std::string& path) {
  if (path.empty() || path == "-") return qbf::parse_qdimacs(std::cin);
  return qbf::parse_qdimacs_file(path);
}

struct SolveArgs {
  std::string input;
  std::string refinement = "both";
  std::string proof_path;
  bool stats = false;
  uint64_t seed = 0;
  int64_t conflict_limit = -1;
  double time_limit_s = -1.0;
};

int run_solve(const SolveArgs& args) {
  qbf::Pcnf formula = read_formula(args.input);
  qbf::SolverConfig config;
  auto mode = qbf::parse_refinement(args.refinement);
  if (!mode) throw std::runtime_error("unknown refinement mode");
  config.refinement = *mode;
  config.seed = args.seed;
  config.conflict_limit = args.conflict_limit;
  if (args.time_limit_s >= 0)
    config.time_limit_ms = static_cast<int64_t>(args.time_limit_s * 1000.0);
  config.proof_logging = !args.proof_path.empty();

  qbf::SolveResult result = qbf::solve(formula, config);
  if (result.status == qbf::SolveStatus::Limit) {
    std::cerr << "resource limit exhausted\n";
    return kExitError;
  }
  bool verdict = result.status == qbf::SolveStatus::True;
  std::cout << "s cnf " << (verdict ? "TRUE" : "FALSE") << "\n";
  if (args.stats)
    for (const auto& [key, value] : result.stats.report())
      std::cout << key << " " << value << "\n";
  if (!verdict && result.proof)
    qbf::save_proof_file(*result.proof, formula, args.proof_path);
  return verdict ? kExitTrue : kExitFalse;
}

int run_check(const std::string& proof_path, const std::string& formula_path) {
  qbf::Pcnf formula = read_formula(formula_path);
  qbf::LoadedProof loaded = qbf::load_proof_file(proof_path);
  if (loaded.formula_hash != qbf::formula_hash(formula)) {
    std::cerr << "formula hash mismatch: proof was produced for a different "
                 "formula\n";
    return kExitError;
  }
  qbf::ProofCheck check = qbf::check_proof(formula, loaded.proof);
  if (!check.ok) {
    std::cerr << "violation: app " << check.app << " node " << check.node
              << " condition " << check.condition;
    if (!check.detail.empty()) std::cerr << " (" << check.detail << ")";
    std::cerr << "\n";
    return kExitError;
  }
  std::cout << "proof ok (size " << qbf::proof_size(loaded.proof) << ")\n";
  return kExitOk;
}

struct GenArgs {
  std::string family;
  int n = 2;
  std::string output;
  uint64_t seed = 1;
  int blocks = 3;
  int vars_per_block = 3;
  int clauses = 12;
  int width = 3;
};

int run_gen(const GenArgs& args) {
  qbf::Pcnf formula;
  if (args.family == "crn") formula = qbf::gen_crn(args.n);
  else if (args.family == "crn_prime") formula = qbf::gen_crn_prime(args.n);
  else if (args.family == "dag") formula = qbf::gen_dag(args.n);
  else if (args.family == "qparity") formula = qbf::gen_qparity(args.n);
  else if (args.family == "composite") formula = qbf::gen_composite(args.n);
  else if (args.family == "example1") formula = qbf::gen_example(1);
  else if (args.family == "example2") formula = qbf::gen_example(2);
  else if (args.family == "random")
    formula = qbf::gen_random(args.seed, args.blocks, args.vars_per_block,
                              args.clauses, args.width);
  else throw std::runtime_error("unknown family: " + args.family);

  if (args.output.empty() || args.output == "-") {
    qbf::emit_qdimacs(formula, std::cout);
  } else {
    std::ofstream out(args.output);
    if (!out) throw std::runtime_error("cannot write: " + args.output);
    qbf::emit_qdimacs(formula, out);
  }
  return kExitOk;
}

int run_oracle(const std::string& input) {
  qbf::Pcnf formula = read_formula(input);
  bool verdict = qbf::oracle_eval(formula);
  std::cout << (verdict ? "TRUE" : "FALSE") << "\n";
  return verdict ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QBF solver with certificate extraction for false formulas"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "decide a QDIMACS formula");
  solve->add_option("input", solve_args.input, "QDIMACS file ('-' = stdin)");
  solve->add_option("--refinement", solve_args.refinement,
                    "plain|strengthen|expansion|both")
      ->check(CLI::IsMember({"plain", "strengthen", "expansion", "both"}));
  solve->add_option("--proof", solve_args.proof_path,
                    "write a proof document on FALSE");
  solve->add_flag("--stats", solve_args.stats, "print solver statistics");
  solve->add_option("--seed", solve_args.seed, "decision tie-break seed");
  solve->add_option("--conflicts", solve_args.conflict_limit,
                    "total conflict budget");
  solve->add_option("--time-limit", solve_args.time_limit_s,
                    "wall-clock budget in seconds");

  std::string check_proof_path, check_formula_path;
  auto* check = app.add_subcommand("check", "check a proof document");
  check->add_option("proof", check_proof_path, "proof file")->required();
  check->add_option("formula", check_formula_path, "QDIMACS file")->required();

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a benchmark family instance");
  gen->add_option("family", gen_args.family,
                  "crn|crn_prime|dag|qparity|composite|example1|example2|random")
      ->required();
  gen->add_option("--n", gen_args.n, "size parameter");
  gen->add_option("-o,--output", gen_args.output, "output file (default stdout)");
  gen->add_option("--seed", gen_args.seed, "random family seed");
  gen->add_option("--blocks", gen_args.blocks, "random family block count");
  gen->add_option("--vars-per-block", gen_args.vars_per_block,
                  "random family block width");
  gen->add_option("--clauses", gen_args.clauses, "random family clause count");
  gen->add_option("--width", gen_args.width, "random family clause width");

  std::string oracle_input;
  auto* oracle = app.add_subcommand("oracle", "brute-force truth value");
  oracle->add_option("input", oracle_input, "QDIMACS file ('-' = stdin)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (check->parsed()) return run_check(check_proof_path, check_formula_path);
    if (gen->parsed()) return run_gen(gen_args);
    if (oracle->parsed()) return run_oracle(oracle_input);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
