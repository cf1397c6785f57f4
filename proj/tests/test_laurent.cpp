#include <doctest.h>

#include "pak/json_io.hpp"
#include "support.hpp"

using namespace pak;
using namespace pak::testing;

namespace {

constexpr int kW = 24;

Laurent mono(const Field& K, long c, std::int64_t k, int w = kW) { return Laurent::monomial(Elem(K, c), k, w); }

bool same(const Laurent& a, const Laurent& b) {
  std::int64_t lo = std::min(a.low(), b.low());
  std::int64_t hi = std::min(a.high(), b.high());
  for (std::int64_t k = lo; k < hi; ++k)
    if (!assert_equal(a[k], b[k], kTol)) return false;
  return true;
}

bool same(const LogPoly& a, const LogPoly& b) {
  LogPoly x = a, y = b;
  x.normalize();
  y.normalize();
  if (x.terms.size() != y.terms.size()) return false;
  for (size_t m = 0; m < x.terms.size(); ++m)
    if (!same(x.terms[m], y.terms[m])) return false;
  return true;
}

Laurent rand_laurent(std::mt19937_64& rng, const Field& K, std::int64_t low, int w) {
  std::vector<Elem> c;
  for (int i = 0; i < w; ++i) c.push_back(rand_elem(rng, K, 0, 1));
  return Laurent(K, low, c);
}

A1Element rand_a1(std::mt19937_64& rng, const Field& K, int w = kW) {
  Laurent f = rand_laurent(rng, K, rand_int(rng, -4, 0), w);
  Elem a = rand_int(rng, 0, 3) == 0 ? Elem(K) : rand_elem(rng, K, 0, 1);
  return {f, a};
}

// expansion of log(t - a) at t = 0 in the variable z = t
A1Element log_t_minus_a_at_0(const Field& K, const Elem& a, const LogBranch& b, int w = kW) {
  std::vector<Elem> c(w, Elem(K));
  c[0] = padic_log(-a, b);
  Elem ainv = a.inverse(), pw = ainv;
  for (int k = 1; k < w; ++k) {
    c[k] = -pw.scale(mpq_class(1, k));
    pw = pw * ainv;
  }
  return {Laurent(K, 0, c), Elem(K)};
}

// log(t) expanded at t = a in the variable z = t - a
A1Element log_t_at_a(const Field& K, const Elem& a, const LogBranch& b, int w = kW) {
  std::vector<Elem> c(w, Elem(K));
  c[0] = padic_log(a, b);
  Elem ainv = a.inverse(), pw = ainv;
  for (int k = 1; k < w; ++k) {
    c[k] = pw.scale(mpq_class(k % 2 ? 1 : -1, k));
    pw = pw * ainv;
  }
  return {Laurent(K, 0, c), Elem(K)};
}

A1Element L(const Field& K, int w = kW) { return {Laurent::zero(K, w), Elem(K, 1)}; }

}  // namespace

TEST_CASE("differentiation fixtures") {
  Field K = qp_field(ctx(5));
  LogForm d = differentiate(log_z(K, kW));
  CHECK(same(d.body, LogPoly{{mono(K, 1, -1)}}));
  LogForm d2 = differentiate(LogPoly{{mono(K, 1, 2)}});
  CHECK(same(d2.body, LogPoly{{mono(K, 2, 1)}}));
  LogPoly half_l2 = (log_z(K, kW) * log_z(K, kW)).scale(Elem(K, mpq_class(1, 2)));
  LogForm d3 = differentiate(half_l2);
  REQUIRE(d3.body.degree() == 1);
  CHECK(same(d3.body.terms[1], mono(K, 1, -1)));
  CHECK(d3.body.terms[0].is_zero());
}

TEST_CASE("integration fixtures") {
  Field K = qp_field(ctx(5));
  CHECK(same(integrate(LogForm{LogPoly{{mono(K, 1, -1)}}}), log_z(K, kW)));
  LogForm ldz{LogPoly{{Laurent::zero(K, kW), mono(K, 1, -1)}}};
  LogPoly r = integrate(ldz);
  REQUIRE(r.degree() == 2);
  CHECK(same(r.terms[2], Laurent::monomial(Elem(K, mpq_class(1, 2)), 0, kW)));
  CHECK(r.terms[1].is_zero());
  CHECK(r.terms[0].is_zero());
  LogPoly z2 = integrate(LogForm{LogPoly{{mono(K, 1, 1)}}});
  CHECK(same(z2, LogPoly{{Laurent::monomial(Elem(K, mpq_class(1, 2)), 2, kW)}}));
}

TEST_CASE("residue fixtures") {
  Field K = qp_field(ctx(5));
  CHECK(assert_equal(residue(LogForm{LogPoly{{mono(K, 1, -1)}}}), Elem(K, 1), kTol));
  CHECK(assert_equal(res_dF(L(K)), Elem(K, 1), kTol));
  A1Element F{mono(K, 1, -3), Elem(K, 7)};
  CHECK(assert_equal(res_dF(F), Elem(K, 7), kTol));
  CHECK(assert_equal(residue(differentiate(F.as_logpoly())), Elem(K, 7), kTol));
  LogForm ldz{LogPoly{{Laurent::zero(K, kW), mono(K, 1, -1)}}};
  CHECK_THROWS_AS(residue(ldz), LogTermPresent);
}

TEST_CASE("local indices of log t against log(t - a)") {
  for (long p : {3L, 5L, 7L}) {
    Ctx c = ctx(p);
    Field K = qp_field(c);
    for (long lam : {0L, 2L}) {
      LogBranch b{Qp(c, lam)};
      for (long av : {2L, p, 2 * p + 1}) {
        Elem a(K, av);
        int w = 40;
        Elem at0 = double_index(L(K, w), log_t_minus_a_at_0(K, a, b, w));
        CHECK(assert_equal(at0, -padic_log(-a, b), kTol));
        Elem ata = double_index(log_t_at_a(K, a, b, w), L(K, w));
        CHECK(assert_equal(ata, padic_log(a, b), kTol));
        // at infinity the index vanishes, so the three local indices sum to 0
        CHECK(assert_equal(at0 + ata, Elem(K), kTol));
      }
    }
  }
}

TEST_CASE("double index is antisymmetric and bilinear") {
  std::mt19937_64 rng(2024);
  std::vector<Field> fields = {qp_field(ctx(5)), qp_field(ctx(2)), unramified_field(ctx(3), 2),
                               make_extension(qp_field(ctx(5)), {-5, 0, 1})};
  for (int i = 0; i < 1000; ++i) {
    const Field& K = fields[i % fields.size()];
    A1Element F = rand_a1(rng, K, 16), G = rand_a1(rng, K, 16);
    CHECK(assert_equal(double_index(F, G), -double_index(G, F), kTol));
    CHECK(double_index(F, F).is_zero());
  }
  for (int i = 0; i < 100; ++i) {
    const Field& K = fields[i % fields.size()];
    A1Element F = rand_a1(rng, K), G = rand_a1(rng, K), H = rand_a1(rng, K);
    Elem s = rand_elem(rng, K, 0, 1), t = rand_elem(rng, K, 0, 1);
    Elem lhs = double_index(F.scale(s) + G.scale(t), H);
    Elem rhs = double_index(F, H) * s + double_index(G, H) * t;
    CHECK(assert_equal(lhs, rhs, kTol));
  }
}

TEST_CASE("double index equals Res F dG when F has no log term") {
  std::mt19937_64 rng(99);
  Field K = qp_field(ctx(7));
  for (int i = 0; i < 50; ++i) {
    A1Element F = rand_a1(rng, K), G = rand_a1(rng, K);
    F.a = Elem(K);
    LogForm dG = differentiate(G.as_logpoly());
    LogForm prod{F.as_logpoly() * dG.body};
    CHECK(assert_equal(double_index(F, G), residue(prod), kTol));
  }
}

TEST_CASE("integrate and differentiate are inverse") {
  std::mt19937_64 rng(5);
  Field K = qp_field(ctx(5));
  for (int i = 0; i < 30; ++i) {
    int M = static_cast<int>(rand_int(rng, 0, 2));
    LogPoly body;
    for (int m = 0; m <= M; ++m) body.terms.push_back(rand_laurent(rng, K, rand_int(rng, -3, 0), 16));
    body.normalize();
    LogForm w{body};
    CHECK(same(differentiate(integrate(w)).body, body));
    LogPoly F;
    for (int m = 0; m <= M; ++m) F.terms.push_back(rand_laurent(rng, K, rand_int(rng, -3, 0), 16));
    F.normalize();
    LogPoly back = integrate(differentiate(F));
    // equal up to the constant z^0 L^0
    Laurent c0 = Laurent::monomial(F.terms[0][0], 0, 16);
    CHECK(same(back + LogPoly{{c0}}, F));
  }
}

TEST_CASE("substitution fixtures") {
  Ctx c = ctx(5);
  Field K = qp_field(c);
  LogBranch b{Qp(c, 3)};
  Laurent w2 = mono(K, 1, 2);
  A1Element r = substitute(L(K), w2, b);
  CHECK(assert_equal(r.a, Elem(K, 2), kTol));
  CHECK(r.f.is_zero());
  A1Element z{mono(K, 1, 1), Elem(K)};
  A1Element r2 = substitute(z, w2, b);
  CHECK(same(r2.f, w2));
  CHECK(r2.a.is_zero());
  CHECK_THROWS_AS(substitute(z, mono(K, 1, 0), b), BadSubstitution);
}

TEST_CASE("pullback scales the double index by the order") {
  std::mt19937_64 rng(77);
  Ctx c = ctx(5);
  Field K = qp_field(c);
  LogBranch b{Qp(c, 4)};
  // alpha = 3 w^3 + w^4
  Laurent alpha = Laurent::from_terms(K, {{3, Elem(K, 3)}, {4, Elem(K, 1)}}, 60);
  for (int i = 0; i < 4; ++i) {
    A1Element F = rand_a1(rng, K, 14), G = rand_a1(rng, K, 14);
    Elem lhs = double_index(substitute(F, alpha, b), substitute(G, alpha, b));
    CHECK(assert_equal(lhs, double_index(F, G).scale(mpq_class(3)), kTol));
  }
  std::vector<Field> fields = {K, unramified_field(c, 2), qp_field(ctx(3))};
  for (int i = 0; i < 12; ++i) {
    const Field& E = fields[i % fields.size()];
    int n = static_cast<int>(rand_int(rng, 1, 3));
    std::vector<Elem> ac;
    ac.push_back(rand_unit(rng, E));
    for (int k = 1; k < 48; ++k) ac.push_back(rand_elem(rng, E, 0, 1));
    Laurent al(E, n, ac);
    LogBranch be{Qp(E->ctx, rand_int(rng, -3, 3))};
    A1Element F = rand_a1(rng, E, 16), G = rand_a1(rng, E, 16);
    Elem lhs = double_index(substitute(F, al, be), substitute(G, al, be));
    CHECK(assert_equal(lhs, double_index(F, G).scale(mpq_class(n)), kTol));
  }
}

TEST_CASE("window errors") {
  Field K = qp_field(ctx(5));
  A1Element F{Laurent(K, -10, std::vector<Elem>(12, Elem(K, 1))), Elem(K)};
  A1Element G{Laurent(K, -10, std::vector<Elem>(12, Elem(K, 1))), Elem(K)};
  CHECK_THROWS_AS(double_index(F, G), WindowUnderflow);
  CHECK_THROWS_AS(Laurent::zero(K, 3)[5], WindowUnderflow);
}

TEST_CASE("json round trips") {
  std::mt19937_64 rng(3);
  std::vector<Field> fields = {qp_field(ctx(5)), qp_field(ctx(2)), make_extension(qp_field(ctx(5)), {-2, 0, 1}),
                               make_extension(qp_field(ctx(3)), {-3, 0, 0, 1})};
  for (auto& K : fields) {
    for (int i = 0; i < 20; ++i) {
      Elem x = rand_nonzero(rng, K, -3, 3);
      Elem y = elem_from_json(to_json(x), K);
      CHECK(assert_equal(x, y, kPrec));
      CHECK(y.abs_prec_pi() == x.abs_prec_pi());
    }
    json fj = field_to_json(K);
    Field K2 = field_from_json(fj, kPrec);
    CHECK(K2->degree() == K->degree());
    CHECK(K2->e == K->e);
  }
  Ctx c = ctx(5);
  json j5 = to_json(Qp(c, 5));
  CHECK(j5["val"] == "1/1");
  CHECK(j5["digits"][0] == 1);
  CHECK(assert_equal(qp_from_json(j5, c), Qp(c, 5), kTol));
  Field K = fields[0];
  LogPoly F = log_z(K, 8) * log_z(K, 8) + LogPoly{{rand_laurent(rng, K, -2, 8)}};
  json jf = to_json(F);
  CHECK(jf["L_deg"] == 2);
  CHECK(same(logpoly_from_json(jf, K), F));
}
