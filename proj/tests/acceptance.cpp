#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "pak/coleman.hpp"
#include "pak/cube.hpp"
#include "pak/curvature.hpp"
#include "pak/green.hpp"
#include "pak/ledger.hpp"
#include "support.hpp"

using namespace pak;
using namespace pak::testing;

namespace {

struct Tally {
  long checks = 0, failed = 0;
  void operator()(bool ok) {
    ++checks;
    if (!ok) ++failed;
  }
  std::string str() const { return std::to_string(checks - failed) + "/" + std::to_string(checks) + " checks"; }
};

bool eq(const Elem& a, const Elem& b) { return assert_equal(a, b, kTol); }
bool eq(const Qp& a, const Qp& b) { return assert_equal(a, b, kTol); }

A1Element rand_a1(std::mt19937_64& rng, const Field& K, int w) {
  std::vector<Elem> c;
  for (int i = 0; i < w; ++i) c.push_back(rand_elem(rng, K, 0, 1));
  Laurent f(K, rand_int(rng, -4, 0), c);
  Elem a = rand_int(rng, 0, 3) == 0 ? Elem(K) : rand_elem(rng, K, 0, 1);
  return {f, a};
}

void c1_double_index(Tally& t) {
  std::mt19937_64 rng(101);
  std::vector<Field> fields = {qp_field(ctx(2)), qp_field(ctx(3)), qp_field(ctx(5)), qp_field(ctx(7)),
                               unramified_field(ctx(3), 2), make_extension(qp_field(ctx(5)), {-5, 0, 1})};
  for (int i = 0; i < 1000; ++i) {
    const Field& K = fields[i % fields.size()];
    A1Element F = rand_a1(rng, K, 24), G = rand_a1(rng, K, 24), H = rand_a1(rng, K, 24);
    Elem s = rand_elem(rng, K, 0, 1);
    t(eq(double_index(F, G), -double_index(G, F)));
    t(eq(double_index(F.scale(s) + H, G), double_index(F, G) * s + double_index(H, G)));
    if (i % 5 == 0) {
      F.a = Elem(K);
      LogForm dG = differentiate(G.as_logpoly());
      t(eq(double_index(F, G), residue(LogForm{F.as_logpoly() * dG.body})));
    }
  }
}

void c2_base_index(Tally& t) {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 50; ++i) {
    long p = std::vector<long>{3, 5, 7}[i % 3];
    Ctx c = ctx(p);
    LogBranch b{Qp(c, rand_int(rng, -3, 3))};
    mpq_class a = 0;
    while (a == 0) a = rand_q(rng, -60, 60, 9);
    GlobalIndex g = global_double_index(MeromorphicForm::dlog(RationalFn::t()),
                                        MeromorphicForm::dlog(RationalFn::poly({-a, 1})), b);
    Elem A(g.split.L, a);
    int seen = 0;
    for (auto& li : g.local) {
      if (li.x.inf)
        t(li.value.is_zero());
      else if (li.x.a.is_zero())
        t(eq(li.value, -padic_log(-A, g.branch)));
      else
        t(eq(li.value, padic_log(A, g.branch)));
      ++seen;
    }
    t(seen == 3);
    t(eq(g.total_qp, Qp(c)));
  }
}

// forms over Q whose denominators have degree <= 6 and split in degree <= 4
MeromorphicForm rand_form(std::mt19937_64& rng) {
  RationalFn T = RationalFn::t();
  auto lin = [](long a) { return RationalFn::poly({mpq_class(-a), 1}); };
  std::vector<RationalFn> menu = {T, lin(1), lin(-2), lin(3), lin(4), T * T - RationalFn::constant(2),
                                  T * T - RationalFn::constant(5)};
  RationalFn den = RationalFn::constant(1);
  int deg = 0;
  bool used[7] = {};
  int nf = static_cast<int>(rand_int(rng, 1, 4));
  for (int i = 0; i < nf; ++i) {
    size_t k = static_cast<size_t>(rand_int(rng, 0, menu.size() - 1));
    int e = static_cast<int>(rand_int(rng, 1, 2));
    int dk = (k >= 5 ? 2 : 1) * e;
    if (used[k] || deg + dk > 6) continue;
    used[k] = true;
    deg += dk;
    den = den * menu[k].pow(e);
  }
  QPoly num;
  int dn = static_cast<int>(rand_int(rng, 0, 4));
  for (int i = 0; i <= dn; ++i) num.push_back(rand_q(rng, -5, 5, 4));
  if (qdeg(num) < 0) num = {1};
  return {RationalFn(num, {1}) / den};
}

void c3_global_vanishing(Tally& t) {
  std::mt19937_64 rng(103);
  int max_split = 0;
  for (int i = 0; i < 200; ++i) {
    Ctx c = ctx(std::vector<long>{3, 5, 7}[i % 3]);
    LogBranch b{Qp(c, rand_int(rng, -3, 3))};
    GlobalIndex g = global_double_index(rand_form(rng), rand_form(rng), b);
    max_split = std::max(max_split, g.split.L->degree());
    t(eq(g.total_qp, Qp(c)));
  }
  t(max_split <= 4);
}

void c4_pullback(Tally& t) {
  std::mt19937_64 rng(104);
  std::vector<Field> fields = {qp_field(ctx(5)), qp_field(ctx(3)), qp_field(ctx(7)), unramified_field(ctx(5), 2)};
  for (int i = 0; i < 100; ++i) {
    const Field& E = fields[i % fields.size()];
    int n = 1 + i % 3;
    std::vector<Elem> ac{rand_unit(rng, E)};
    for (int k = 1; k < 48; ++k) ac.push_back(rand_elem(rng, E, 0, 1));
    Laurent al(E, n, ac);
    LogBranch be{Qp(E->ctx, rand_int(rng, -3, 3))};
    A1Element F = rand_a1(rng, E, 16), G = rand_a1(rng, E, 16);
    t(eq(double_index(substitute(F, al, be), substitute(G, al, be)), double_index(F, G).scale(mpq_class(n))));
  }
}

using BP = std::vector<QPoly>;

BP bp_mul(const BP& a, const BP& b) {
  BP r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = qadd(r[i + j], qmul(a[i], b[j]));
  return r;
}

BP bp_add(const BP& a, const BP& b) {
  BP r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = qadd(i < a.size() ? a[i] : QPoly{}, i < b.size() ? b[i] : QPoly{});
  return r;
}

void c5_family_derivative(Tally& t) {
  std::mt19937_64 rng(105);
  int done = 0;
  while (done < 50) {
    // sum of c_i dlog(t - a_i - b_i s) with constant residues
    int k = static_cast<int>(rand_int(rng, 1, 4));
    std::vector<BP> lin;
    std::vector<mpq_class> cs, at0;
    mpq_class s0 = rand_q(rng, -5, 5, 3);
    for (int i = 0; i < k; ++i) {
      mpq_class a = rand_q(rng, -9, 9, 4), b = rand_q(rng, -4, 4, 2);
      lin.push_back(BP{QPoly{-a, 1}, QPoly{-b}});
      cs.push_back(rand_q(rng, 1, 6, 3) * (rand_int(rng, 0, 1) ? 1 : -1));
      at0.push_back(a + b * s0);
    }
    bool distinct = true;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) distinct = distinct && at0[i] != at0[j];
    if (!distinct) continue;
    BP den{QPoly{1}}, num{QPoly{}};
    for (int i = 0; i < k; ++i) {
      den = bp_mul(den, lin[i]);
      BP term{QPoly{cs[i]}};
      for (int j = 0; j < k; ++j)
        if (j != i) term = bp_mul(term, lin[j]);
      num = bp_add(num, term);
    }
    FormFamily fam{BiPoly{num}, BiPoly{den}};
    t(is_third_kind(fam.at(s0)));
    MeromorphicForm d = family_derivative(fam, s0);
    t(is_second_kind(d));
    t(residue_divisor(d, ctx(std::vector<long>{3, 5, 7}[done % 3])).empty());
    ++done;
  }
}

void c6_curvature(Tally& t) {
  for (int g = 1; g <= 5; ++g) {
    auto X = DeRhamSpace<RationalKit>::standard(g);
    auto m = mu(X);
    auto P = phi(X);
    auto scaled = m.coords;
    for (auto& row : scaled)
      for (auto& x : row) x *= 2 - 2 * g;
    t(diagonal_pullback(X, P).coords == scaled);
    t(section_pullback(X, P).coords == m.coords);
    auto cl = diagonal_class(X);
    auto cp = cup_of_htensor(X, P);
    t(cp.top1 == cl.top1 && cp.top2 == cl.top2 && cp.mixed == cl.mixed);
    for (auto& b : kunneth_basis(X)) t(trace_pairing(X, cp, b) == trace_diagonal(X, b));
  }
}

void c7_green_formula(Tally& t) {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 20; ++i) {
    Field K = qp_field(ctx(std::vector<long>{3, 5, 7}[i % 3]));
    int g = 1 + i % 3;
    SyntheticGreen S = synthetic_green(rng, g, K);
    Elem G = green_from_formula(TableOracle(S.table), g, S.a, S.b, S.P, S.Q, S.div_w1, S.div_w2);
    t(eq(G, S.table.get(S.P, S.Q)));
  }
}

void c8_determinants(Tally& t) {
  Ctx c = ctx(5);
  LogBranch b = iwasawa_branch(c);
  Field Kp = make_extension(qp_field(c), std::vector<long>{-2, 0, 1});
  Elem r2(Kp, Kp->generator);
  Qp log2 = padic_log(Qp(c, 2), b);
  t(eq(det_K_log(Kp, {Elem(Kp, 1), r2}, Elem(Kp), b), log2 * Qp(c, mpq_class(3, 2))));
  std::mt19937_64 rng(108);
  struct Ext {
    long p;
    std::vector<long> poly;
  };
  for (const Ext& e : {Ext{5, {-2, 0, 1}}, Ext{3, {1, 0, 1}}, Ext{7, {-3, 0, 1}}}) {
    Ctx ce = ctx(e.p);
    Field L = make_extension(qp_field(ce), e.poly);
    int n = 0;
    while (n < 20) {
      std::vector<Elem> beta{rand_nonzero(rng, L, -1, 2), rand_nonzero(rng, L, -1, 2)};
      Qp r;
      try {
        r = trace_dual_check(L, beta, iwasawa_branch(ce));
      } catch (const SingularMatrix&) {
        continue;
      }
      t(eq(r, Qp(ce)));
      ++n;
    }
  }
}

void c9_ledger(Tally& t) {
  std::mt19937_64 rng(109);
  for (long p : {3L, 5L, 7L}) {
    Ctx c = ctx(p);
    IdeleCharacter l = standard_character(c, iwasawa_branch(c));
    std::vector<mpq_class> gens{-1, mpq_class(-98, 45), mpq_class(1, p)};
    for (long q = 2; q < 50; ++q)
      if (is_prime(q)) gens.push_back(q);
    t(validate_character(l, gens, kTol).ok);
  }
  for (int i = 0; i < 20; ++i) {
    Ctx c = ctx(std::vector<long>{3, 5, 7}[i % 3]);
    IdeleCharacter l = standard_character(c, iwasawa_branch(c));
    PrincipalCase pc = synthetic_principal(rng, l);
    PrincipalReport r = principal_check(pc.D, pc.f_div, pc.values, pc.curve, l, kTol);
    t(r.ok && eq(r.ledger, Qp(c)) && eq(r.character, Qp(c)));
  }
  auto smooth = [&](long p) {
    mpq_class f = rand_int(rng, 0, 1) ? 1 : -1;
    for (long q : {2L, 3L, 5L, 7L, 11L}) {
      long e = rand_int(rng, -2, 2);
      mpq_class qq(q);
      for (long k = 0; k < std::labs(e); ++k) f = e < 0 ? mpq_class(f / qq) : mpq_class(f * qq);
    }
    (void)p;
    return f;
  };
  for (int i = 0; i < 20; ++i) {
    long p = std::vector<long>{3, 5, 7}[i % 3];
    Ctx c = ctx(p);
    Field K = qp_field(c);
    IdeleCharacter l = standard_character(c, iwasawa_branch(c));
    MetrizedOFLine N{smooth(p), smooth(p), {{"p", random_element(rng, K, 0, 2)}}};
    t(eq(deg_metrized_line(N.rebased(smooth(p)), l), deg_metrized_line(N, l)));
  }
}

void c10_riemann_roch(Tally& t) {
  Ctx c = ctx(5);
  Field K = qp_field(c);
  Elem log2 = padic_log(Elem(K, 2), iwasawa_branch(c));
  std::uint64_t seed = 1;
  for (const Elem& cc : {Elem(K, 1), Elem(K, -1), log2, -log2})
    for (long d = -5; d <= 5; ++d)
      for (int g = 1; g <= 5; ++g) {
        DeltaReport r = rr_rescale_invariance(K, cc, d, g, seed++);
        t(eq(r.residual, Qp(c)) && eq(r.lhs, -cc.to_qp() * Qp(c, mpq_class(d * (d + 1 - 2 * g), 2))));
      }
  std::mt19937_64 rng(110);
  int perturbed = 0;
  for (int i = 0; i < 20; ++i) {
    Ctx cp = ctx(std::vector<long>{3, 5, 7}[i % 3]);
    Field Kp = qp_field(cp);
    IdeleCharacter l = standard_character(cp, iwasawa_branch(cp));
    LedgerState s = synthetic_ledger(rng, 1 + i % 4, l);
    t(eq(rr_delta_check(s).residual, Qp(cp)));
    t(eq(adjunction_check(s.adjunction(), s.curve, l).residual, Qp(cp)));
    // and a shift of d(E) moves the Riemann-Roch residual by minus half of it
    LedgerState shifted = s;
    Qp shift = random_element(rng, Kp, 0, 2).to_qp();
    shifted.dE += shift;
    t(eq(rr_delta_check(shifted).residual, -shift * Qp(cp, mpq_class(1, 2))));
    // a Green perturbation delta between points of multiplicities 2 and 3 moves the residual by -12 delta
    if (s.E.generic.terms().size() < 2) continue;
    ++perturbed;
    AdjunctionInput in = s.adjunction();
    in.E.generic = DivisorFormal{{"E1", 2}, {"E2", 3}};
    Qp before = adjunction_check(in, s.curve, l).residual;
    Elem delta = random_element(rng, Kp, -1, 2);
    CurveData moved = s.curve;
    if (!moved.tables["p"].has("E1", "E2")) moved.tables["p"].set("E1", "E2", Elem(Kp));
    moved.tables["p"].assign("E1", "E2", moved.tables["p"].get("E1", "E2") + delta);
    t(eq(adjunction_check(in, moved, l).residual - before, -delta.to_qp() * Qp(cp, 12)));
  }
  t(perturbed >= 5);
}

void c11_cube(Tally& t) {
  std::mt19937_64 rng(111);
  for (int r = 1; r <= 3; ++r)
    for (int n = 1; n <= 5; ++n) {
      auto s = integer_samples(rng, r, n, 8);
      for (int d = 0; d < n; ++d)
        for (auto& e : Polynomial::exponents(r, d)) {
          auto f = rational_function(Polynomial::monomial(e));
          bool zero = true;
          for (auto& x : s) zero = zero && dd_n(f, x.x, x.h) == 0;
          t(zero);
        }
      auto f = rational_function(Polynomial::random(rng, r, 6));
      t(recursion_check(f, s) == 0);
      for (int i = 0; i < n; ++i) t(restriction_vanishing(f, s, i) == 0);
    }
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<void(Tally&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> cs = {
      {1, "double index: antisymmetric, bilinear, Res F dG on M", 5, c1_double_index},
      {2, "local indices of dlog t, dlog(t - a) and their sum", 5, c2_base_index},
      {3, "global double index vanishes on P^1 (200 pairs)", 60, c3_global_vanishing},
      {4, "pullback by order n scales the index by n", 10, c4_pullback},
      {5, "parameter derivative of third kind families is second kind", 10, c5_family_derivative},
      {6, "curvature identities, g = 1..5", 1, c6_curvature},
      {7, "Green formula reproduces table values", 5, c7_green_formula},
      {8, "determinant logs and trace duality", 10, c8_determinants},
      {9, "character, principal divisors, metrized line degrees", 10, c9_ledger},
      {10, "Riemann-Roch normalisation, deltas and adjunction response", 10, c10_riemann_roch},
      {11, "difference operators D^n", 5, c11_cube},
  };
  int passed = 0;
  for (auto& c : cs) {
    Tally t;
    std::string err;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(t);
    } catch (const std::exception& e) {
      err = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = err.empty() && t.failed == 0 && t.checks > 0 && secs < c.limit;
    passed += ok;
    std::printf("%s  %2d  %-62s %s  %.2fs (limit %.0fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, t.str().c_str(),
                secs, c.limit, err.empty() ? "" : "  error: ", err.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, cs.size());
  return passed == static_cast<int>(cs.size()) ? 0 : 1;
}
