#pragma once

#include "qbf/formula.hpp"

namespace qbf {

// Brute-force QBF truth value by game-tree recursion over the prefix:
// existential blocks are disjunctions over their assignments, universal
// blocks conjunctions. Refuses formulas with more than 25 bound variables.
bool oracle_eval(const Pcnf& p);

}  // namespace qbf
