#include "qbf/oracle.hpp"

#include <stdexcept>
#include <vector>

namespace qbf {

namespace {

// Variable-by-variable recursion in prefix order with incremental clause
// status and early termination: a subtree is decided as soon as the matrix
// is fully satisfied or some clause is fully falsified.
class Evaluator {
 public:
  explicit Evaluator(const Pcnf& p) : pcnf_(p) {
    for (const auto& b : p.blocks())
      for (Var v : b.vars) vars_.push_back({v, b.kind});
    size_t m = static_cast<size_t>(p.num_clauses());
    true_count_.assign(m, 0);
    false_count_.assign(m, 0);
    size_.resize(m);
    occ_.resize(p.max_var() + 1);
    for (ClauseId i = 1; i <= p.num_clauses(); ++i) {
      const auto& c = p.clause(i);
      size_[static_cast<size_t>(i - 1)] = static_cast<int>(c.size());
      if (c.empty()) falsified_++;
      for (const Lit& l : c) occ_[l.var()].push_back(
          l.is_positive() ? static_cast<int>(i) : -static_cast<int>(i));
    }
  }

  bool run() { return eval(0); }

 private:
  struct VarEntry {
    Var v;
    Quant kind;
  };

  void assign(Var v, bool value) {
    for (int occ : occ_[v]) {
      size_t ci = static_cast<size_t>(std::abs(occ)) - 1;
      bool lit_true = (occ > 0) == value;
      if (lit_true) {
        if (true_count_[ci]++ == 0) ++satisfied_;
      } else {
        if (++false_count_[ci] == size_[ci] && true_count_[ci] == 0)
          ++falsified_;
      }
    }
  }

  void unassign(Var v, bool value) {
    for (int occ : occ_[v]) {
      size_t ci = static_cast<size_t>(std::abs(occ)) - 1;
      bool lit_true = (occ > 0) == value;
      if (lit_true) {
        if (--true_count_[ci] == 0) --satisfied_;
      } else {
        if (false_count_[ci]-- == size_[ci] && true_count_[ci] == 0)
          --falsified_;
      }
    }
  }

  bool eval(size_t idx) {
    if (falsified_ > 0) return false;
    if (satisfied_ == pcnf_.num_clauses()) return true;
    if (idx == vars_.size()) return falsified_ == 0 && satisfied_ == pcnf_.num_clauses();
    const VarEntry& e = vars_[idx];
    bool exists = e.kind == Quant::Exists;
    for (bool value : {false, true}) {
      assign(e.v, value);
      bool sub = eval(idx + 1);
      unassign(e.v, value);
      if (exists && sub) return true;
      if (!exists && !sub) return false;
    }
    return !exists;
  }

  const Pcnf& pcnf_;
  std::vector<VarEntry> vars_;
  std::vector<std::vector<int>> occ_;  // var -> signed clause ids
  std::vector<int> true_count_, false_count_, size_;
  int satisfied_ = 0;
  int falsified_ = 0;
};

}  // namespace

bool oracle_eval(const Pcnf& p) {
  size_t bound = 0;
  for (const auto& b : p.blocks()) bound += b.vars.size();
  if (bound > 25)
    throw std::invalid_argument("oracle guard: more than 25 bound variables");
  if (p.num_clauses() == 0) return true;
  return Evaluator(p).run();
}

}  // namespace qbf
