#pragma once

#include <cstdint>
#include <string>

#include "qbf/calculus.hpp"
#include "qbf/formula.hpp"

namespace qbf {

// Crafted false-formula families used by the benchmark and test suites.
// Clause id layout per family is fixed so fixture proofs can reference
// stable ids; see the individual generators.

// prefix E x_11..x_nn A z E a_1..a_n b_1..b_n; clauses: the two long
// clauses first, then row-major C_ij, C_~ij pairs. 2 + 2n^2 clauses.
Pcnf gen_crn(int n);

// CR_n with the single z replaced by one z_ij per cell; gen_crn_prime(1)
// coincides with gen_crn(1).
Pcnf gen_crn_prime(int n);

// E e_1 A u_1 E c_1 c_2 ... E e_n A u_n E c_2n-1 c_2n; the 4n two-literal
// clauses first, the long clause (V ~c_i) last, so gen_dag(1) equals the
// first example fixture.
Pcnf gen_dag(int n);

// E x_1..x_n A z E t_2..t_n with the xor chain and the two tail clauses.
Pcnf gen_qparity(int n);

// DAG_n and QParity_n coupled through A a E b; clause order: DAG clauses,
// coupling clause, xor chain, tails.
Pcnf gen_composite(int n);

// The two worked examples (which = 1 or 2) with the original clause
// numbering.
Pcnf gen_example(int which);

// Deterministic random closed PCNF: `blocks` alternating blocks of
// `vars_per_block` variables, `clauses` clauses of up to `width` distinct
// literals, no empty clauses.
Pcnf gen_random(uint64_t seed, int blocks, int vars_per_block, int clauses,
                int width);

// Constructive polynomial refutation of CR_n using the strengthening rule:
// per-column resolution/reduction objects, a strengthening cascade over the
// first barred row, and one final resolution.
RedResProof gen_crn_strengthened_proof(int n);

}  // namespace qbf
