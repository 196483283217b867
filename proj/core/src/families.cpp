#include "qbf/families.hpp"

#include <random>
#include <stdexcept>

#include "qbf/satcore.hpp"

namespace qbf {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

void push_xor(std::vector<std::vector<Lit>>& cls, Var o1, Var o2, Var o) {
  // o <-> o1 xor o2
  cls.push_back({Lit::negative(o1), Lit::negative(o2), Lit::negative(o)});
  cls.push_back({Lit::positive(o1), Lit::positive(o2), Lit::negative(o)});
  cls.push_back({Lit::negative(o1), Lit::positive(o2), Lit::positive(o)});
  cls.push_back({Lit::positive(o1), Lit::negative(o2), Lit::positive(o)});
}

}  // namespace

Pcnf gen_crn(int n) {
  require(n >= 1, "crn requires n >= 1");
  auto x = [&](int i, int j) { return static_cast<Var>((i - 1) * n + j); };
  Var z = static_cast<Var>(n * n + 1);
  auto a = [&](int i) { return static_cast<Var>(n * n + 1 + i); };
  auto b = [&](int j) { return static_cast<Var>(n * n + 1 + n + j); };

  std::vector<QuantBlock> blocks(3);
  blocks[0] = {Quant::Exists, 0, {}};
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) blocks[0].vars.push_back(x(i, j));
  blocks[1] = {Quant::Forall, 0, {z}};
  blocks[2] = {Quant::Exists, 0, {}};
  for (int i = 1; i <= n; ++i) blocks[2].vars.push_back(a(i));
  for (int j = 1; j <= n; ++j) blocks[2].vars.push_back(b(j));

  std::vector<std::vector<Lit>> cls;
  std::vector<Lit> long_a, long_b;
  for (int i = 1; i <= n; ++i) long_a.push_back(Lit::negative(a(i)));
  for (int j = 1; j <= n; ++j) long_b.push_back(Lit::negative(b(j)));
  cls.push_back(long_a);
  cls.push_back(long_b);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      cls.push_back({Lit::positive(x(i, j)), Lit::positive(z),
                     Lit::positive(a(i))});
      cls.push_back({Lit::negative(x(i, j)), Lit::negative(z),
                     Lit::positive(b(j))});
    }
  return Pcnf::create(std::move(blocks), std::move(cls));
}

Pcnf gen_crn_prime(int n) {
  require(n >= 1, "crn_prime requires n >= 1");
  auto x = [&](int i, int j) { return static_cast<Var>((i - 1) * n + j); };
  auto z = [&](int i, int j) {
    return static_cast<Var>(n * n + (i - 1) * n + j);
  };
  auto a = [&](int i) { return static_cast<Var>(2 * n * n + i); };
  auto b = [&](int j) { return static_cast<Var>(2 * n * n + n + j); };

  std::vector<QuantBlock> blocks(3);
  blocks[0] = {Quant::Exists, 0, {}};
  blocks[1] = {Quant::Forall, 0, {}};
  blocks[2] = {Quant::Exists, 0, {}};
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      blocks[0].vars.push_back(x(i, j));
      blocks[1].vars.push_back(z(i, j));
    }
  for (int i = 1; i <= n; ++i) blocks[2].vars.push_back(a(i));
  for (int j = 1; j <= n; ++j) blocks[2].vars.push_back(b(j));

  std::vector<std::vector<Lit>> cls;
  std::vector<Lit> long_a, long_b;
  for (int i = 1; i <= n; ++i) long_a.push_back(Lit::negative(a(i)));
  for (int j = 1; j <= n; ++j) long_b.push_back(Lit::negative(b(j)));
  cls.push_back(long_a);
  cls.push_back(long_b);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      cls.push_back({Lit::positive(x(i, j)), Lit::positive(z(i, j)),
                     Lit::positive(a(i))});
      cls.push_back({Lit::negative(x(i, j)), Lit::negative(z(i, j)),
                     Lit::positive(b(j))});
    }
  return Pcnf::create(std::move(blocks), std::move(cls));
}

Pcnf gen_dag(int n) {
  require(n >= 1, "dag requires n >= 1");
  auto e = [&](int i) { return static_cast<Var>(4 * (i - 1) + 1); };
  auto u = [&](int i) { return static_cast<Var>(4 * (i - 1) + 2); };
  auto c = [&](int k) {  // k in 1..2n
    int i = (k + 1) / 2;
    return static_cast<Var>(4 * (i - 1) + 2 + (k - 2 * (i - 1)));
  };

  std::vector<QuantBlock> blocks;
  for (int i = 1; i <= n; ++i) {
    blocks.push_back({Quant::Exists, 0, {e(i)}});
    blocks.push_back({Quant::Forall, 0, {u(i)}});
    blocks.push_back({Quant::Exists, 0, {c(2 * i - 1), c(2 * i)}});
  }
  std::vector<std::vector<Lit>> cls;
  for (int i = 1; i <= n; ++i) {
    cls.push_back({Lit::negative(e(i)), Lit::positive(c(2 * i - 1))});
    cls.push_back({Lit::negative(u(i)), Lit::positive(c(2 * i - 1))});
    cls.push_back({Lit::positive(e(i)), Lit::positive(c(2 * i))});
    cls.push_back({Lit::positive(u(i)), Lit::positive(c(2 * i))});
  }
  std::vector<Lit> long_c;
  for (int k = 1; k <= 2 * n; ++k) long_c.push_back(Lit::negative(c(k)));
  cls.push_back(long_c);
  return Pcnf::create(std::move(blocks), std::move(cls));
}

Pcnf gen_qparity(int n) {
  require(n >= 2, "qparity requires n >= 2");
  auto x = [&](int i) { return static_cast<Var>(i); };
  Var z = static_cast<Var>(n + 1);
  auto t = [&](int i) { return static_cast<Var>(n + i); };  // t_2 = n+2

  std::vector<QuantBlock> blocks(3);
  blocks[0] = {Quant::Exists, 0, {}};
  for (int i = 1; i <= n; ++i) blocks[0].vars.push_back(x(i));
  blocks[1] = {Quant::Forall, 0, {z}};
  blocks[2] = {Quant::Exists, 0, {}};
  for (int i = 2; i <= n; ++i) blocks[2].vars.push_back(t(i));

  std::vector<std::vector<Lit>> cls;
  push_xor(cls, x(1), x(2), t(2));
  for (int i = 3; i <= n; ++i) push_xor(cls, t(i - 1), x(i), t(i));
  cls.push_back({Lit::positive(z), Lit::positive(t(n))});
  cls.push_back({Lit::negative(z), Lit::negative(t(n))});
  return Pcnf::create(std::move(blocks), std::move(cls));
}

Pcnf gen_composite(int n) {
  require(n >= 2, "composite requires n >= 2");
  auto e = [&](int i) { return static_cast<Var>(4 * (i - 1) + 1); };
  auto u = [&](int i) { return static_cast<Var>(4 * (i - 1) + 2); };
  auto c = [&](int k) {
    int i = (k + 1) / 2;
    return static_cast<Var>(4 * (i - 1) + 2 + (k - 2 * (i - 1)));
  };
  Var a = static_cast<Var>(4 * n + 1);
  Var b = static_cast<Var>(4 * n + 2);
  auto x = [&](int i) { return static_cast<Var>(4 * n + 2 + i); };
  Var z = static_cast<Var>(5 * n + 3);
  auto t = [&](int i) { return static_cast<Var>(5 * n + 2 + i); };  // t_2=5n+4

  std::vector<QuantBlock> blocks;
  for (int i = 1; i <= n; ++i) {
    blocks.push_back({Quant::Exists, 0, {e(i)}});
    blocks.push_back({Quant::Forall, 0, {u(i)}});
    blocks.push_back({Quant::Exists, 0, {c(2 * i - 1), c(2 * i)}});
  }
  blocks.push_back({Quant::Forall, 0, {a}});
  QuantBlock bx{Quant::Exists, 0, {b}};
  for (int i = 1; i <= n; ++i) bx.vars.push_back(x(i));
  blocks.push_back(bx);
  blocks.push_back({Quant::Forall, 0, {z}});
  QuantBlock tb{Quant::Exists, 0, {}};
  for (int i = 2; i <= n; ++i) tb.vars.push_back(t(i));
  blocks.push_back(tb);

  std::vector<std::vector<Lit>> cls;
  for (int i = 1; i <= n; ++i) {
    cls.push_back({Lit::negative(e(i)), Lit::positive(c(2 * i - 1))});
    cls.push_back({Lit::negative(u(i)), Lit::positive(c(2 * i - 1))});
    cls.push_back({Lit::positive(e(i)), Lit::positive(c(2 * i))});
    cls.push_back({Lit::positive(u(i)), Lit::positive(c(2 * i))});
  }
  std::vector<Lit> coupling{Lit::negative(a), Lit::negative(b)};
  for (int k = 1; k <= 2 * n; ++k) coupling.push_back(Lit::negative(c(k)));
  cls.push_back(coupling);
  push_xor(cls, x(1), x(2), t(2));
  for (int i = 3; i <= n; ++i) push_xor(cls, t(i - 1), x(i), t(i));
  cls.push_back({Lit::positive(z), Lit::positive(t(n)), Lit::positive(b)});
  cls.push_back({Lit::negative(z), Lit::negative(t(n))});
  return Pcnf::create(std::move(blocks), std::move(cls));
}

Pcnf gen_example(int which) {
  if (which == 1) return gen_dag(1);
  require(which == 2, "example index must be 1 or 2");
  // E e1 A u1 E c1 c2 A a E b x A z E t
  Var e1 = 1, u1 = 2, c1 = 3, c2 = 4, a = 5, b = 6, x = 7, z = 8, t = 9;
  std::vector<QuantBlock> blocks{
      {Quant::Exists, 0, {e1}}, {Quant::Forall, 0, {u1}},
      {Quant::Exists, 0, {c1, c2}}, {Quant::Forall, 0, {a}},
      {Quant::Exists, 0, {b, x}}, {Quant::Forall, 0, {z}},
      {Quant::Exists, 0, {t}}};
  std::vector<std::vector<Lit>> cls{
      {Lit::negative(e1), Lit::positive(c1)},
      {Lit::negative(u1), Lit::positive(c1)},
      {Lit::positive(e1), Lit::positive(c2)},
      {Lit::positive(u1), Lit::positive(c2)},
      {Lit::negative(c1), Lit::negative(c2), Lit::negative(b),
       Lit::negative(a)},
      {Lit::positive(z), Lit::positive(t), Lit::positive(b)},
      {Lit::negative(z), Lit::negative(t)},
      {Lit::positive(x), Lit::negative(t)},
      {Lit::negative(x), Lit::positive(t)}};
  return Pcnf::create(std::move(blocks), std::move(cls));
}

Pcnf gen_random(uint64_t seed, int blocks, int vars_per_block, int clauses,
                int width) {
  require(blocks >= 1 && vars_per_block >= 1 && clauses >= 0 && width >= 1,
          "bad random-generator parameters");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  int total_vars = blocks * vars_per_block;

  std::vector<QuantBlock> prefix;
  Quant kind = (rng() & 1) ? Quant::Exists : Quant::Forall;
  Var v = 1;
  for (int bi = 0; bi < blocks; ++bi) {
    QuantBlock blk{kind, 0, {}};
    for (int j = 0; j < vars_per_block; ++j) blk.vars.push_back(v++);
    prefix.push_back(std::move(blk));
    kind = opposite(kind);
  }

  std::vector<std::vector<Lit>> cls;
  for (int ci = 0; ci < clauses; ++ci) {
    int w = width <= 2 ? width
                       : 2 + static_cast<int>(rng() % static_cast<uint64_t>(
                                                  width - 1));
    w = std::min(w, total_vars);
    std::vector<Var> pick;
    while (static_cast<int>(pick.size()) < w) {
      Var cand = static_cast<Var>(1 + rng() % static_cast<uint64_t>(total_vars));
      if (std::find(pick.begin(), pick.end(), cand) == pick.end())
        pick.push_back(cand);
    }
    std::vector<Lit> clause;
    for (Var pv : pick)
      clause.push_back((rng() & 1) ? Lit::positive(pv) : Lit::negative(pv));
    cls.push_back(std::move(clause));
  }
  return Pcnf::create(std::move(prefix), std::move(cls));
}

RedResProof gen_crn_strengthened_proof(int n) {
  require(n >= 1, "strengthened proof requires n >= 1");
  Pcnf p = gen_crn(n);
  ProofBuilder builder(p);
  const ClauseId long_a = 1, long_b = 2;
  auto cid = [&](int i, int j, bool barred) {
    return static_cast<ClauseId>(2 + 2 * ((i - 1) * n + (j - 1)) +
                                 (barred ? 2 : 1));
  };
  auto res_over = [&](std::vector<int> premises) {
    std::vector<std::vector<Lit>> inputs;
    for (int prem : premises)
      inputs.push_back(object_literals(p, builder.node(prem)));
    return builder.res(std::move(premises), extract_resolution_proof(inputs));
  };

  // per-column objects under z -> 0: resolve the a-long clause against the
  // column's a_i units, then reduce z away
  std::vector<int> columns;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> premises{builder.init_node(long_a, 3)};
    for (int i = 1; i <= n; ++i)
      premises.push_back(builder.init_node(cid(i, k, false), 3));
    columns.push_back(builder.forall_red(res_over(std::move(premises))));
  }
  // barred first row under z -> 1
  std::vector<int> row{builder.init_node(long_b, 3)};
  for (int j = 1; j <= n; ++j)
    row.push_back(builder.init_node(cid(1, j, true), 3));
  int cascade = builder.forall_red(res_over(std::move(row)));

  // strengthening cascade: column by column, sides cover the whole column
  std::vector<int> sides;
  for (int k = 1; k <= n; ++k) {
    std::vector<ClauseId> group;
    for (int i = 1; i <= n; ++i) group.push_back(cid(i, k, true));
    auto s = builder.strengthen(cascade, cid(1, k, true), std::move(group));
    sides.insert(sides.end(), s.sides.begin(), s.sides.end());
    cascade = s.main;
  }

  std::vector<int> final_premises{cascade};
  final_premises.insert(final_premises.end(), columns.begin(), columns.end());
  final_premises.insert(final_premises.end(), sides.begin(), sides.end());
  int root = res_over(std::move(final_premises));
  return builder.finalize(root);
}

}  // namespace qbf
