#include "pak/coleman.hpp"

#include <algorithm>
#include <sstream>

namespace pak {

namespace {

KPoly to_kpoly(const QPoly& P, const Field& L) {
  KPoly r;
  for (auto& c : P) r.push_back(Elem(L, c));
  return r;
}

QPoly poly_integral(const QPoly& q) {
  QPoly r(q.size() + 1, 0);
  for (size_t i = 0; i < q.size(); ++i) r[i + 1] = q[i] / mpq_class(static_cast<long>(i + 1));
  qp_trim(r);
  return r;
}

struct Hermite {
  RationalFn exact;
  QPoly C, D;
};

// N/D = (exact)' + C/D with D squarefree and deg C < deg D
Hermite hermite(const RationalFn& body) {
  Hermite h;
  auto [q, r] = qdivmod(body.num, body.den);
  h.exact = RationalFn::poly(poly_integral(q));
  QPoly num = r, den = body.den;
  while (true) {
    std::vector<QPoly> sq = qsquarefree(den);
    int k = static_cast<int>(sq.size());
    if (k <= 1) break;
    const QPoly& V = sq[k - 1];
    int m = k;
    QPoly U = qdivmod(den, qpow(V, m)).first;
    QPoly W = qscale(qmul(U, qderiv(V)), mpq_class(-(m - 1)));
    QPoly s, t;
    QPoly g = qxgcd(qdivmod(W, V).second, V, s, t);
    if (qdeg(g) != 0) throw std::logic_error("Hermite step: factor not coprime");
    QPoly B = qdivmod(qmul(num, s), V).second;
    auto [Q, rem] = qdivmod(qsub(num, qmul(B, W)), V);
    if (!rem.empty()) throw std::logic_error("Hermite step: inexact division");
    h.exact = h.exact + RationalFn(B, qpow(V, m - 1));
    num = qsub(Q, qmul(U, qderiv(B)));
    den = qmul(U, qpow(V, m - 1));
  }
  auto [q2, r2] = qdivmod(num, den);
  if (!q2.empty()) h.exact = h.exact + RationalFn::poly(poly_integral(q2));
  RationalFn rest(r2, den);
  h.C = rest.num;
  h.D = rest.den;
  if (h.C.empty()) h.D = {1};
  return h;
}

Laurent poly_laurent(const Field& L, const KPoly& P, std::int64_t low, int W) {
  std::vector<Elem> c(std::max<size_t>(W, P.size()), Elem(L));
  for (size_t i = 0; i < P.size(); ++i) c[i] = P[i];
  return Laurent(L, low, std::move(c));
}

// r(x + w) or r(1/u)
Laurent rat_expand(const RationalFn& r, const PointP1& x, const Field& L, int W) {
  if (r.is_zero()) return Laurent::zero(L, W);
  int Wi = W + 2 * qdeg(r.den) + 2;
  KPoly A = to_kpoly(r.num, L), B = to_kpoly(r.den, L);
  if (x.inf) {
    std::reverse(A.begin(), A.end());
    std::reverse(B.begin(), B.end());
    Laurent la = poly_laurent(L, A, qdeg(r.den) - qdeg(r.num), Wi);
    Laurent lb = poly_laurent(L, B, 0, Wi);
    return la * lb.inverse();
  }
  KPoly As = kpoly_shift(A, x.a), Bs = kpoly_shift(B, x.a);
  // x is either a root of den or not; leading coefficients that vanish to
  // precision are roots of the exact polynomial
  for (auto& c : Bs) {
    if (!c.is_zero()) break;
    c = Elem(L);
  }
  Laurent la = poly_laurent(L, As, 0, Wi);
  Laurent lb = poly_laurent(L, Bs, 0, Wi);
  return la * lb.inverse();
}

// log(1 + z/d) with d invertible, up to z^W
Laurent log1p_series(const Field& L, const Elem& d, int W) {
  std::vector<Elem> c(W, Elem(L));
  Elem dinv = d.inverse(), pw = dinv;
  for (int k = 1; k < W; ++k) {
    c[k] = pw.scale(mpq_class(k % 2 ? 1 : -1, k));
    pw = pw * dinv;
  }
  return Laurent(L, 0, std::move(c));
}

bool same_point(const Elem& x, const Elem& a) { return (x - a).is_zero(); }

}  // namespace

MeromorphicForm MeromorphicForm::mobius(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                                        const mpq_class& d) const {
  mpq_class det = a * d - b * c;
  RationalFn jac(QPoly{det}, qpow(QPoly{d, c}, 2));
  return {body.mobius(a, b, c, d) * jac};
}

Splitting splitting_of(const QPoly& P, const Ctx& ctx) {
  Field Q = qp_field(ctx);
  if (qdeg(P) <= 0) return Splitting{Q, identity_hom(Q), {}};
  return splitting_field(to_kpoly(qmonic(P), Q));
}

PartialFractions partial_fractions(const MeromorphicForm& w, const Ctx& ctx) {
  Hermite h = hermite(w.body);
  return partial_fractions(w, splitting_of(h.D, ctx));
}

PartialFractions partial_fractions(const MeromorphicForm& w, const Splitting& S) {
  Hermite h = hermite(w.body);
  PartialFractions pf{h.exact, h.C, h.D, S, {}};
  if (qdeg(h.D) <= 0) return pf;
  const Field& L = S.L;
  KPoly D = to_kpoly(h.D, L), C = to_kpoly(h.C, L), Dp = kpoly_derivative(D);
  for (auto& a : S.roots) {
    if (!kpoly_eval(D, a).is_zero()) continue;
    pf.poles.push_back({a, kpoly_eval(C, a) / kpoly_eval(Dp, a)});
  }
  if (static_cast<int>(pf.poles.size()) != qdeg(h.D))
    throw PrecisionExhausted("could not separate the poles at this precision");
  return pf;
}

std::string ColemanPrimitive::str() const {
  std::ostringstream os;
  os << rat.str();
  for (auto& p : logs) os << " + (" << p.c.str() << ")*log(t - " << p.a.str() << ")";
  if (!c_const.is_exact_zero()) os << " + " << c_const.str();
  return os.str();
}

ColemanPrimitive primitive(const MeromorphicForm& w, const LogBranch& b) {
  Hermite h = hermite(w.body);
  Ctx ctx = b.lambda.ctx();
  if (!ctx) throw std::invalid_argument("branch without a prime context");
  return primitive(w, b, splitting_of(h.D, ctx));
}

ColemanPrimitive primitive(const MeromorphicForm& w, const LogBranch& b, const Splitting& S) {
  PartialFractions pf = partial_fractions(w, S);
  ColemanPrimitive F{S.L, b, pf.exact, pf.poles, Elem(S.L)};
  return F;
}

ColemanPrimitive mobius(const ColemanPrimitive& F, const mpq_class& a, const mpq_class& b, const mpq_class& c,
                        const mpq_class& d) {
  const Field& L = F.L;
  ColemanPrimitive G{L, F.branch, F.rat.mobius(a, b, c, d), {}, F.c_const};
  Elem A(L, a), B(L, b), Cc(L, c), Dd(L, d);
  for (auto& p : F.logs) {
    // log(M(t) - x) = log((a - x c) t + (b - x d)) - log(c t + d)
    Elem lead = A - p.a * Cc, cst = B - p.a * Dd;
    if (lead.is_zero()) {
      G.c_const += p.c * padic_log(cst, F.branch);
    } else {
      G.c_const += p.c * padic_log(lead, F.branch);
      G.logs.push_back({-cst / lead, p.c});
    }
    if (c == 0) {
      G.c_const -= p.c * padic_log(Dd, F.branch);
    } else {
      G.c_const -= p.c * padic_log(Cc, F.branch);
      G.logs.push_back({Elem(L, mpq_class(-d / c)), -p.c});
    }
  }
  return G;
}

PointP1 mobius_inverse_point(const PointP1& x, const Field& L, const mpq_class& a, const mpq_class& b,
                             const mpq_class& c, const mpq_class& d) {
  if (x.inf) return c == 0 ? PointP1::infinity() : PointP1::finite(Elem(L, mpq_class(-d / c)));
  Elem den = Elem(L, a) - x.a.scale(c);
  if (den.is_zero()) return PointP1::infinity();
  return PointP1::finite((x.a.scale(d) - Elem(L, b)) / den);
}

A1Element expand_at(const ColemanPrimitive& F, const PointP1& x, int window) {
  const Field& L = F.L;
  Laurent f = rat_expand(F.rat, x, L, window);
  Elem a(L);
  Laurent logs = Laurent::zero(L, window);
  Elem cst = F.c_const;
  for (auto& p : F.logs) {
    if (x.inf) {
      // log(t - a) = -log u + log(1 - a u)
      a -= p.c;
      if (p.a.is_zero()) continue;
      logs += log1p_series(L, -p.a.inverse(), window).scale(p.c);
    } else if (same_point(x.a, p.a)) {
      a += p.c;
    } else {
      Elem dlt = x.a - p.a;
      cst += p.c * padic_log(dlt, F.branch);
      logs += log1p_series(L, dlt, window).scale(p.c);
    }
  }
  f += logs;
  if (!cst.is_exact_zero()) f += Laurent::monomial(cst, 0, window);
  return {f, a};
}

Laurent expand_form_at(const MeromorphicForm& w, const PointP1& x, const Field& L, int window) {
  Laurent r = rat_expand(w.body, x, L, window);
  if (!x.inf) return r;
  // dt = -du / u^2
  return r.shift(-2).scale(mpq_class(-1));
}

int expansion_window(const ColemanPrimitive& F, const ColemanPrimitive& G) {
  int w = 16;
  for (const RationalFn* r : {&F.rat, &G.rat}) w += std::max(qdeg(r->num), 0) + std::max(qdeg(r->den), 0);
  return w;
}

GlobalIndex global_double_index(const ColemanPrimitive& F, const ColemanPrimitive& G, const Splitting& S) {
  if (F.L != S.L || G.L != S.L) throw FieldMismatch("primitives over different fields");
  int W = expansion_window(F, G);
  GlobalIndex gi{S, F.branch, {}, Elem(S.L), Qp()};
  std::vector<PointP1> pts;
  for (auto& r : S.roots) pts.push_back(PointP1::finite(r));
  pts.push_back(PointP1::infinity());
  for (auto& x : pts) {
    Elem v = double_index(expand_at(F, x, W), expand_at(G, x, W));
    gi.local.push_back({x, v});
    gi.total += v;
  }
  if (!gi.total.in_base_qp()) throw PrecisionExhausted("global index not certified in Q_p");
  gi.total_qp = gi.total.to_qp();
  return gi;
}

GlobalIndex global_double_index(const MeromorphicForm& w, const MeromorphicForm& e, const LogBranch& b) {
  Ctx ctx = b.lambda.ctx();
  if (!ctx) throw std::invalid_argument("branch without a prime context");
  Ctx work = PrimeContext::get(ctx->p(), ctx->cap() + kGuardDigits);
  LogBranch wb{b.lambda.with_context(work).as_exact()};
  QPoly P = qsquarefree_part(qmul(w.body.den, e.body.den));
  Splitting S = splitting_of(P, work);
  GlobalIndex gi = global_double_index(primitive(w, wb, S), primitive(e, wb, S), S);
  gi.total_qp = gi.total_qp.with_context(ctx);
  return gi;
}

std::vector<ResidueEntry> residue_divisor(const MeromorphicForm& w, const Ctx& ctx) {
  PartialFractions pf = partial_fractions(w, ctx);
  const Field& L = pf.split.L;
  std::vector<ResidueEntry> out;
  Elem sum(L);
  for (auto& p : pf.poles) {
    if (p.c.is_zero()) continue;
    out.push_back({PointP1::finite(p.a), p.c});
    sum += p.c;
  }
  if (!sum.is_zero()) out.push_back({PointP1::infinity(), -sum});
  return out;
}

bool is_second_kind(const MeromorphicForm& w) { return hermite(w.body).C.empty(); }

bool is_third_kind(const MeromorphicForm& w) {
  if (w.body.is_zero()) return true;
  if (qdeg(w.body.num) >= qdeg(w.body.den)) return false;
  std::vector<QPoly> sq = qsquarefree(w.body.den);
  return sq.size() <= 1;
}

QPoly BiPoly::at(const mpq_class& s) const {
  QPoly r;
  mpq_class pw = 1;
  for (auto& t : terms) {
    r = qadd(r, qscale(t, pw));
    pw *= s;
  }
  return r;
}

BiPoly BiPoly::ds() const {
  BiPoly r;
  for (size_t j = 1; j < terms.size(); ++j) r.terms.push_back(qscale(terms[j], mpq_class(static_cast<long>(j))));
  return r;
}

MeromorphicForm FormFamily::at(const mpq_class& s) const { return {RationalFn(num.at(s), den.at(s))}; }

MeromorphicForm family_derivative(const FormFamily& fam, const mpq_class& s0) {
  MeromorphicForm w0 = fam.at(s0);
  if (!is_third_kind(w0)) throw NotThirdKindFamily("member of the family is not of the third kind");
  QPoly N = fam.num.at(s0), D = fam.den.at(s0);
  QPoly Ns = fam.num.ds().at(s0), Ds = fam.den.ds().at(s0);
  MeromorphicForm dw{RationalFn(qsub(qmul(Ns, D), qmul(N, Ds)), qmul(D, D))};
  if (!is_second_kind(dw)) throw NotThirdKindFamily("residues vary with the parameter");
  return dw;
}

}  // namespace pak
