#include <doctest.h>

#include "support.hpp"

using namespace pak;
using namespace pak::testing;

namespace {

Elem generator(const Field& K) { return Elem(K, K->generator); }

}  // namespace

TEST_CASE("capped relative arithmetic in Q_p") {
  Ctx c = ctx(5);
  Qp a(c, 25), b(c, 3);
  CHECK(a.val() == 2);
  CHECK(a.rel() == kPrec);
  Qp s = a + b;
  CHECK(s.val() == 0);
  CHECK(assert_equal(s * Qp(c, 1), Qp(c, 28), kTol));
  Qp q = Qp(c, mpq_class(1, 5));
  CHECK(q.val() == -1);
  CHECK(assert_equal(q * Qp(c, 5), Qp(c, 1), kTol));
  Qp z = Qp(c, 1) - Qp(c, 1);
  CHECK(z.is_zero());
  CHECK_FALSE(z.is_exact_zero());
  CHECK(z.abs_prec() == kPrec);
  CHECK_THROWS_AS(z.inverse(), PrecisionExhausted);
  CHECK_THROWS_AS(Qp(c).inverse(), ZeroArgument);
}

TEST_CASE("make_extension classifies quadratic polynomials over Q_5") {
  Field Q5 = qp_field(ctx(5));
  Field K1 = make_extension(Q5, {-2, 0, 1});
  CHECK(K1->e == 1);
  CHECK(K1->f == 2);
  Elem r = generator(K1);
  CHECK(assert_equal(r * r, Elem(K1, 2), kTol));

  Field K2 = make_extension(Q5, {-5, 0, 1});
  CHECK(K2->e == 2);
  CHECK(K2->f == 1);
  CHECK(Elem::pi(K2).valuation() == Rat(1, 2));
  Elem s = generator(K2);
  CHECK(assert_equal(s * s, Elem(K2, 5), kTol));

  CHECK_THROWS_AS(make_extension(Q5, {-1, 0, 1}), ReduciblePolynomial);
}

TEST_CASE("make_extension on cubic and mixed cases") {
  Field Q3 = qp_field(ctx(3));
  // x^3 - 3 is Eisenstein
  Field K = make_extension(Q3, {-3, 0, 0, 1});
  CHECK(K->e == 3);
  Elem r = generator(K);
  CHECK(assert_equal(r.pow(3), Elem(K, 3), kTol));
  // x^2 + 1 over Q_3 is unramified
  Field L = make_extension(Q3, {1, 0, 1});
  CHECK(L->f == 2);
  // 2 has order 4 in F_5^*, so a fourth root needs F_625
  Field Q5 = qp_field(ctx(5));
  Field U4 = make_extension(Q5, {-2, 0, 0, 0, 1});
  CHECK(U4->f == 4);
  CHECK_THROWS_AS(make_extension(Q5, {-4, 0, 0, 0, 1}), ReduciblePolynomial);
  // x^2 - 10 over Q_5 ramified with a unit factor
  Field M = make_extension(Q5, {-10, 0, 1});
  CHECK(M->e == 2);
  Elem t = generator(M);
  CHECK(assert_equal(t * t, Elem(M, 10), kTol));
}

TEST_CASE("logarithm fixtures") {
  Ctx c = ctx(5);
  Field Q5 = qp_field(c);
  LogBranch b0 = iwasawa_branch(c);
  CHECK(padic_log(Elem(Q5, 1), b0).is_zero());
  CHECK(padic_log(Elem(Q5, -1), b0).is_zero());
  Qp lam(c, mpq_class(7, 3));
  LogBranch b1{lam};
  CHECK(assert_equal(padic_log(Qp(c, 5), b1), lam, kTol));
  CHECK(padic_log(Qp(c, 5), b0).is_zero());
  // series value of log(1+5) from exact rationals
  mpq_class s = 0;
  mpq_class pw = 1;
  for (int k = 1; k <= 60; ++k) {
    pw *= 5;
    mpq_class term = pw / k;
    s += (k % 2 ? term : -term);
  }
  CHECK(assert_equal(padic_log(Qp(c, 6), b0), Qp(c, s), kTol));
  CHECK_THROWS_AS(padic_log(Elem(Q5), b0), ZeroArgument);
}

TEST_CASE("logarithm with a nonzero branch in a ramified field") {
  Ctx c = ctx(5);
  Field Q5 = qp_field(c);
  Field K = make_extension(Q5, {-5, 0, 1});
  Qp lam(c, 11);
  LogBranch b{lam};
  Elem r = generator(K);
  // 2 log(sqrt 5) = log 5 = lambda
  CHECK(assert_equal(padic_log(r, b).scale(Qp(c, 2)), Elem(K, lam), kTol));
}

TEST_CASE("trace and norm fixtures") {
  Ctx c = ctx(5);
  Field Q5 = qp_field(c);
  Field K = make_extension(Q5, {-2, 0, 1});
  Elem r = generator(K);
  const FieldHom& inc = *K->from_base;
  CHECK(trace(r, inc).is_zero());
  CHECK(assert_equal(norm(r, inc), Elem(Q5, -2), kTol));
  CHECK(assert_equal(trace(Elem(K, 3), inc), Elem(Q5, 6), kTol));
  CHECK(assert_equal(trace_qp(Elem(K, 3)), Qp(c, 6), kTol));
  CHECK(assert_equal(norm_qp(r), Qp(c, -2), kTol));
  CHECK_THROWS_AS(trace(Elem(Q5, 1), inc), FieldMismatch);
}

TEST_CASE("embeddings fixtures") {
  Ctx c = ctx(5);
  Field Q5 = qp_field(c);
  Field K = make_extension(Q5, {-2, 0, 1});
  auto em = embeddings_over(K, *K->from_base);
  REQUIRE(em.size() == 2);
  Elem r = generator(K);
  Elem a = apply(em[0], r), b = apply(em[1], r);
  CHECK(assert_equal(a + b, Elem(K), kTol));
  CHECK((assert_equal(a, r, kTol) || assert_equal(b, r, kTol)));
  auto id = embeddings(Q5, Q5);
  CHECK(id.size() == 1);
  CHECK_THROWS_AS(embeddings(K, Q5), NoSplitting);
}

TEST_CASE("assert_equal fixtures") {
  Ctx c = ctx(5);
  Field Q5 = qp_field(c);
  Qp one(c, 1);
  Qp big = one + Qp(c, 1).shift(30);
  CHECK(assert_equal(big, one, 20));
  CHECK_FALSE(assert_equal(one + Qp(c, 125), one, 20));
  LogBranch b = iwasawa_branch(c);
  Qp l4 = padic_log(Qp(c, 4), b), l2 = padic_log(Qp(c, 2), b);
  CHECK(assert_equal(l4, l2 + l2, 20));
}

TEST_CASE("log is additive on random pairs") {
  std::mt19937_64 rng(101);
  std::vector<Field> fields;
  for (long p : {2L, 3L, 5L, 7L}) {
    Field Q = qp_field(ctx(p));
    fields.push_back(Q);
    fields.push_back(unramified_field(ctx(p), 2));
  }
  fields.push_back(make_extension(qp_field(ctx(5)), {-5, 0, 1}));
  fields.push_back(make_extension(qp_field(ctx(3)), {-3, 0, 0, 1}));
  fields.push_back(make_extension(qp_field(ctx(2)), {-2, 0, 1}));
  int total = 0;
  for (int i = 0; i < 1000; ++i) {
    const Field& K = fields[i % fields.size()];
    LogBranch b{Qp(K->ctx, rand_int(rng, -5, 5))};
    Elem x = rand_nonzero(rng, K, -2, 3), y = rand_nonzero(rng, K, -2, 3);
    Elem lhs = padic_log(x * y, b);
    Elem rhs = padic_log(x, b) + padic_log(y, b);
    bool ok = assert_equal(lhs, rhs, kTol);
    if (!ok) MESSAGE(K->label << " x=" << x.str() << " y=" << y.str() << " lhs=" << lhs.str() << " rhs=" << rhs.str());
    CHECK(ok);
    CHECK(((x * y).val_pi() == x.val_pi() + y.val_pi()));
    ++total;
  }
  CHECK(total == 1000);
}

TEST_CASE("embeddings count and roots of the defining polynomial") {
  std::vector<std::pair<long, std::vector<long>>> cases = {
      {5, {-2, 0, 1}}, {5, {-5, 0, 1}}, {3, {-3, 0, 0, 1}}, {7, {-3, 0, 1}}, {3, {1, 0, 1}}};
  for (auto& [p, poly] : cases) {
    Field Qp_ = qp_field(ctx(p));
    Field K = make_extension(Qp_, poly);
    KPoly P = kpoly_from_ints(Qp_, poly);
    Splitting S = splitting_field(P);
    auto em = embeddings_over(K, S.from_base);
    CHECK(static_cast<int>(em.size()) == K->degree());
    KPoly PL = kpoly_from_ints(S.L, poly);
    for (auto& s : em) {
      Elem img = apply(s, Elem(K, K->generator));
      CHECK(assert_equal(kpoly_eval(PL, img), Elem(S.L), kPrec - 2));
    }
  }
}

TEST_CASE("Teichmuller lifts") {
  std::mt19937_64 rng(7);
  for (long p : {3L, 5L, 7L}) {
    for (int f : {1, 2}) {
      Field K = unramified_field(ctx(p), f);
      LogBranch b = iwasawa_branch(K->ctx);
      for (int i = 0; i < 5; ++i) {
        Elem w = teichmuller(rand_unit(rng, K));
        CHECK(assert_equal(w.pow(static_cast<std::int64_t>(K->residue.q()) - 1), Elem(K, 1), kTol));
        CHECK(assert_equal(padic_log(w, b), Elem(K), kTol));
      }
    }
  }
}

TEST_CASE("trace and norm agree with embeddings and towers") {
  std::mt19937_64 rng(11);
  Field Q5 = qp_field(ctx(5));
  Field K = make_extension(Q5, {-2, 0, 1});
  Field L = make_extension(K, kpoly_from_ints(K, {-5, 0, 1}));
  CHECK(L->degree() == 4);
  const FieldHom& KL = *L->from_base;
  const FieldHom& QK = *K->from_base;
  FieldHom QL = compose(QK, KL);
  for (int i = 0; i < 10; ++i) {
    Elem x = rand_nonzero(rng, L, 0, 2);
    Elem t = trace(x, KL);
    CHECK(assert_equal(trace_qp(t), trace_qp(x), kTol));
    CHECK(assert_equal(trace(t, QK), trace(x, QL), kTol));
    Elem n = norm(x, KL);
    CHECK(assert_equal(norm_qp(n), norm_qp(x), kTol - 4));
  }
  Elem y = rand_unit(rng, K);
  auto em = embeddings_over(K, QK);
  Elem s(K), pr(K, 1);
  for (auto& h : em) {
    s += apply(h, y);
    pr *= apply(h, y);
  }
  CHECK(assert_equal(s, apply(QK, trace(y, QK)), kTol));
  CHECK(assert_equal(pr, apply(QK, norm(y, QK)), kTol));
}
