#include "pak/roots.hpp"

#include <numeric>

namespace pak {

namespace {

constexpr std::int64_t kNoLower = -(Qp::kInf);

void trim(KPoly& P) {
  while (!P.empty() && P.back().is_exact_zero()) P.pop_back();
}

// modular inverse of a mod m (gcd 1)
long inv_mod(long a, long m) {
  long t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
  while (nr) {
    long q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return ((t % m) + m) % m;
}

Elem newton_lift(const KPoly& P, Elem x) {
  KPoly dP = kpoly_derivative(P);
  for (int it = 0; it < 100; ++it) {
    Elem v = kpoly_eval(P, x);
    if (v.is_zero()) return x;
    Elem d = kpoly_eval(dP, x);
    Elem step = v / d;
    if (step.is_zero()) return x;
    x = x - step;
  }
  throw PrecisionExhausted("Newton iteration for a root did not converge");
}

FqPoly residual_integral(const KPoly& P, int i1, int i2, std::int64_t s, std::int64_t base) {
  const Field& K = P[0].field();
  FqPoly R;
  for (int k = i1; k <= i2; ++k) {
    Elem t = P[k].mul_pi_pow(s * k - base);
    R.push_back(t.residue());
  }
  fq_trim(K->residue, R);
  return R;
}

void search(const KPoly& P0, std::int64_t lower, RootSearch& out);

void search_segment(const KPoly& P, int i1, int i2, std::int64_t lower, RootSearch& out) {
  const Field& K = P[0].field();
  const Fq& F = K->residue;
  std::int64_t w1 = P[i1].val_pi(), w2 = P[i2].val_pi();
  std::int64_t num = w1 - w2, den = i2 - i1;
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  std::int64_t h = num / g, ep = den / g;
  if (ep == 1) {
    std::int64_t s = h;
    if (s <= lower) return;
    FqPoly R = residual_integral(P, i1, i2, s, w1 + s * i1);
    auto rts = fq_roots(F, R);
    int found = 0;
    for (auto& [tau, m] : rts) {
      found += m;
      Elem c = Elem::lift(K, tau).mul_pi_pow(s);
      if (m == 1) {
        out.roots.push_back(newton_lift(P, c));
      } else {
        KPoly Q = kpoly_shift(P, c);
        RootSearch sub;
        search(Q, s, sub);
        for (auto& y : sub.roots) out.roots.push_back(c + y);
        if (sub.obstruction && !out.obstruction) out.obstruction = sub.obstruction;
      }
    }
    if (found < fq_deg(R) && !out.obstruction) {
      FqPoly rest = R;
      for (auto& [tau, m] : rts)
        for (int k = 0; k < m; ++k) rest = fq_divmod(F, rest, FqPoly{F.neg(tau), F.one()}).first;
      out.obstruction = Obstruction{Obstruction::Unramified, fq_min_factor_degree(F, rest), Elem()};
    }
    return;
  }
  // non-integral slope h/ep: roots need ramification ep
  if (lower != kNoLower && h <= lower * ep) return;
  if (out.obstruction) return;
  FqPoly R;
  for (int k = 0; i1 + k * ep <= i2; ++k) {
    Elem t = P[i1 + k * ep].mul_pi_pow(k * h - w1);
    R.push_back(t.residue());
  }
  fq_trim(F, R);
  auto rts = fq_roots(F, R);
  for (auto& [tau, m] : rts) {
    if (F.is_zero(tau)) continue;
    long a = inv_mod(static_cast<long>(((h % ep) + ep) % ep), static_cast<long>(ep));
    Elem c = Elem::lift(K, F.pow(tau, static_cast<std::uint64_t>(a)));
    out.obstruction = Obstruction{Obstruction::Ramified, static_cast<int>(ep), c};
    return;
  }
  out.obstruction = Obstruction{Obstruction::Unramified, fq_min_factor_degree(F, R), Elem()};
}

void search(const KPoly& P0, std::int64_t lower, RootSearch& out) {
  KPoly P = P0;
  trim(P);
  if (P.size() < 2) return;
  const Field& K = P[0].field();
  // roots at zero: leading zero coefficients
  while (P.size() >= 2 && P[0].is_zero()) {
    if (P[1].is_zero()) {
      if (P[0].is_exact_zero()) {
        out.roots.push_back(Elem(K));
        P.erase(P.begin());
        continue;
      }
      throw PrecisionExhausted("root search lost all precision");
    }
    std::int64_t a = P[0].is_exact_zero() ? Qp::kInf : P[0].abs_prec_pi() - P[1].val_pi();
    if (a <= lower) throw PrecisionExhausted("root cluster not separated at current precision");
    out.roots.push_back(a >= Qp::kInf / 2 ? Elem(K) : Elem::zero_mod(K, a));
    P.erase(P.begin());
  }
  if (P.size() < 2) return;
  std::vector<int> hull = newton_polygon(P);
  for (size_t k = 0; k + 1 < hull.size(); ++k) search_segment(P, hull[k], hull[k + 1], lower, out);
}

}  // namespace

KPoly kpoly_from_ints(const Field& K, const std::vector<long>& c) {
  KPoly P;
  for (long v : c) P.push_back(Elem(K, v));
  return P;
}

KPoly kpoly_map(const FieldHom& h, const KPoly& P) {
  KPoly r;
  for (auto& a : P) r.push_back(apply(h, a));
  return r;
}

Elem kpoly_eval(const KPoly& P, const Elem& x) {
  Elem r(x.field());
  for (size_t i = P.size(); i-- > 0;) r = r * x + P[i];
  return r;
}

KPoly kpoly_derivative(const KPoly& P) {
  KPoly r;
  for (size_t i = 1; i < P.size(); ++i) r.push_back(P[i].scale(mpq_class(static_cast<long>(i))));
  return r;
}

KPoly kpoly_shift(const KPoly& P, const Elem& c) {
  KPoly r = P;
  int n = static_cast<int>(r.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) r[j] = r[j] + c * r[j + 1];
  return r;
}

std::vector<int> newton_polygon(const KPoly& P) {
  std::vector<int> pts;
  for (int i = 0; i < static_cast<int>(P.size()); ++i)
    if (!P[i].is_zero()) pts.push_back(i);
  std::vector<int> hull;
  for (int i : pts) {
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull.back();
      std::int64_t wa = P[a].val_pi(), wb = P[b].val_pi(), wi = P[i].val_pi();
      // drop b if it lies on or above segment a-i
      if ((wb - wa) * (i - a) >= (wi - wa) * (b - a))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  // inexact zero coefficients must sit on or above the hull
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    int a = hull[k], b = hull[k + 1];
    for (int i = a + 1; i < b; ++i) {
      if (!P[i].is_zero() || P[i].is_exact_zero()) continue;
      std::int64_t wa = P[a].val_pi(), wb = P[b].val_pi();
      if (P[i].abs_prec_pi() * (b - a) < wa * (b - a) + (wb - wa) * (i - a))
        throw PrecisionExhausted("Newton polygon undetermined at current precision");
    }
  }
  return hull;
}

RootSearch find_roots(const KPoly& P) {
  RootSearch out;
  search(P, kNoLower, out);
  return out;
}

Field extend_unramified(const Field& K, int k, FieldHom& hom) {
  const Ctx& ctx = K->ctx;
  int f2 = K->f * k;
  Field Q2 = unramified_field(ctx, f2);
  Field Q1 = unramified_field(ctx, K->f);
  for (int i = 0; i <= K->f; ++i)
    if (K->U[i].lift_mod(ctx->cap()) != Q1->U[i].lift_mod(ctx->cap()))
      throw Unsupported("field not in standard unramified form");
  FieldHom zq{Q1, Q2, {}, Elem::pi(Q2).coords()};
  if (K->f == 1) {
    zq.zeta_img.assign(Q2->f, Qp(ctx));
    zq.zeta_img[0] = -K->U[0];
  } else {
    RootSearch rs = find_roots(kpoly_from_ints(Q2, [&] {
      std::vector<long> u;
      for (auto& c : K->U) u.push_back(c.is_exact_zero() ? 0 : c.lift_mod(ctx->cap()).get_si());
      return u;
    }()));
    if (rs.roots.empty()) throw std::logic_error("unramified embedding failed");
    zq.zeta_img = rs.roots[0].coords();
  }
  if (K->e == 1) {
    hom = FieldHom{K, Q2, zq.zeta_img, Elem::pi(Q2).coords()};
    return Q2;
  }
  std::vector<long> U2;
  for (auto& c : Q2->U) U2.push_back(c.is_exact_zero() ? 0 : c.lift_mod(ctx->cap()).get_si());
  std::vector<std::vector<Qp>> E2;
  for (auto& coef : K->E) E2.push_back(apply(zq, Elem(Q1, coef)).coords());
  auto L = build_field(ctx, U2, std::move(E2), K->label + "^(" + std::to_string(k) + ")");
  finalize_field(L);
  Field Lc = L;
  std::vector<Qp> zimg(Lc->degree(), Qp(ctx));
  for (int i = 0; i < f2; ++i) zimg[i] = zq.zeta_img[i];
  hom = FieldHom{K, Lc, zimg, Elem::pi(Lc).coords()};
  return Lc;
}

Field extend_ramified(const Field& K, int ep, const Elem& c, FieldHom& hom) {
  const Ctx& ctx = K->ctx;
  int e = K->e, f = K->f;
  for (int j = 1; j < e; ++j)
    for (int i = 0; i < f; ++i)
      if (!c.coord(i, j).is_zero()) throw std::logic_error("ramification constant must lie in Q_q");
  int e2 = e * ep;
  std::vector<std::vector<Qp>> E2(e2 + 1, std::vector<Qp>(f, Qp(ctx)));
  Elem cpow(K, 1);
  for (int j = e; j >= 0; --j) {
    Elem Ej(K);
    std::vector<Qp> co(K->degree(), Qp(ctx));
    for (int i = 0; i < f; ++i) co[i] = K->E[j][i];
    Ej = Elem(K, co);
    Elem t = Ej * cpow;
    for (int i = 0; i < f; ++i) E2[j * ep][i] = t.coord(i, 0);
    cpow = cpow * c;
  }
  std::vector<long> U;
  for (auto& u : K->U) U.push_back(u.is_exact_zero() ? 0 : u.lift_mod(ctx->cap()).get_si());
  auto L = build_field(ctx, U, std::move(E2), K->label + "(pi^(1/" + std::to_string(ep) + "))");
  finalize_field(L);
  Field Lc = L;
  std::vector<Qp> zimg(Lc->degree(), Qp(ctx));
  if (f == 1)
    zimg[0] = -K->U[0];
  else
    zimg[1] = Qp(ctx, 1);
  std::vector<Qp> cc(Lc->degree(), Qp(ctx));
  for (int i = 0; i < f; ++i) cc[i] = c.coord(i, 0);
  Elem cl(Lc, cc);
  Elem piimg = Elem::pi(Lc).pow(ep) / cl;
  hom = FieldHom{K, Lc, zimg, piimg.coords()};
  return Lc;
}

namespace {

Field extend_by(const Field& L, const Obstruction& ob, FieldHom& step) {
  if (ob.kind == Obstruction::Unramified) return extend_unramified(L, ob.degree, step);
  return extend_ramified(L, ob.degree, ob.c, step);
}

}  // namespace

Splitting splitting_field(const KPoly& P, int max_degree) {
  if (P.empty()) throw std::invalid_argument("empty polynomial");
  const Field& K = P[0].field();
  Splitting s{K, identity_hom(K), {}};
  int d = static_cast<int>(P.size()) - 1;
  while (true) {
    KPoly PL = kpoly_map(s.from_base, P);
    RootSearch rs = find_roots(PL);
    if (!rs.obstruction) {
      if (static_cast<int>(rs.roots.size()) != d)
        throw PrecisionExhausted("root count mismatch; polynomial not squarefree at current precision");
      s.roots = std::move(rs.roots);
      return s;
    }
    FieldHom step;
    Field L2 = extend_by(s.L, *rs.obstruction, step);
    if (L2->degree() > max_degree) throw SplittingFieldTooLarge("splitting field exceeds degree bound");
    s.from_base = compose(s.from_base, step);
    s.L = L2;
  }
}

Field make_extension(const Field& base, const KPoly& poly0) {
  KPoly poly = poly0;
  trim(poly);
  int d = static_cast<int>(poly.size()) - 1;
  if (d < 1) throw std::invalid_argument("polynomial of degree < 1");
  if (!assert_equal(poly.back(), Elem(base, 1), base->ctx->cap() / 2)) throw std::invalid_argument("polynomial must be monic");
  for (auto& c : poly)
    if (!c.is_zero() && c.val_pi() < 0) throw std::invalid_argument("coefficients must be integral");
  if (d == 1) throw ReduciblePolynomial("linear polynomial");
  if (newton_polygon(poly).size() > 2) throw ReduciblePolynomial("Newton polygon has several segments");
  Field L = base;
  FieldHom hom = identity_hom(base);
  while (true) {
    RootSearch rs = find_roots(kpoly_map(hom, poly));
    if (!rs.roots.empty()) {
      int D = L->degree() / base->degree();
      if (D < d) throw ReduciblePolynomial("polynomial has a root in a smaller extension");
      if (D > d) throw Unsupported("wild ramification: could not certify the extension");
      auto K2 = std::make_shared<FieldData>(*L);
      K2->base = base;
      K2->label = base->label + "[x]/(deg " + std::to_string(d) + ")";
      Field K2c = K2;
      FieldHom h = hom;
      h.dst = K2c;
      K2->from_base = h;
      for (auto& c : poly) K2->min_poly.push_back(c.coords());
      K2->generator = rs.roots[0].coords();
      return K2c;
    }
    if (!rs.obstruction) throw PrecisionExhausted("root search failed");
    FieldHom step;
    Field L2 = extend_by(L, *rs.obstruction, step);
    if (L2->degree() > d * base->degree()) throw ReduciblePolynomial("irreducibility certificate failed");
    hom = compose(hom, step);
    L = L2;
  }
}

Field make_extension(const Field& base, const std::vector<long>& poly) {
  return make_extension(base, kpoly_from_ints(base, poly));
}

std::vector<FieldHom> embeddings(const Field& Kp, const Field& target) {
  const Ctx& ctx = Kp->ctx;
  if (target->ctx != ctx) throw FieldMismatch("fields over different primes");
  std::vector<long> U;
  for (auto& u : Kp->U) U.push_back(u.is_exact_zero() ? 0 : u.lift_mod(ctx->cap()).get_si());
  std::vector<Elem> zetas;
  if (Kp->f == 1) {
    zetas.push_back(Elem(target, -U[0]));
  } else {
    RootSearch rs = find_roots(kpoly_from_ints(target, U));
    zetas = rs.roots;
  }
  std::vector<FieldHom> out;
  Field Q1 = unramified_field(ctx, Kp->f);
  for (auto& z : zetas) {
    FieldHom zq{Q1, target, z.coords(), Elem::pi(target).coords()};
    KPoly E;
    for (auto& coef : Kp->E) E.push_back(apply(zq, Elem(Q1, coef)));
    std::vector<Elem> pis;
    if (Kp->e == 1)
      pis.push_back(Elem(target, Kp->p()));
    else
      pis = find_roots(E).roots;
    for (auto& pimg : pis) out.push_back(FieldHom{Kp, target, z.coords(), pimg.coords()});
  }
  if (static_cast<int>(out.size()) < Kp->degree()) throw NoSplitting("target does not split the field");
  return out;
}

std::vector<FieldHom> embeddings_over(const Field& Kp, const FieldHom& base_to_target) {
  if (!Kp->from_base || Kp->base != base_to_target.src) throw FieldMismatch("field is not an extension of the given base");
  const Field& target = base_to_target.dst;
  std::vector<FieldHom> all = embeddings(Kp, target);
  std::vector<FieldHom> out;
  const Field& K = base_to_target.src;
  Elem zK = Elem::zeta(K), pK = Elem::pi(K);
  int tgt = target->ctx->cap() - 4;
  for (auto& s : all) {
    Elem z1 = apply(s, apply(*Kp->from_base, zK));
    Elem p1 = apply(s, apply(*Kp->from_base, pK));
    if (assert_equal(z1, apply(base_to_target, zK), tgt) && assert_equal(p1, apply(base_to_target, pK), tgt))
      out.push_back(s);
  }
  int rel = Kp->degree() / K->degree();
  if (static_cast<int>(out.size()) != rel) throw NoSplitting("embedding count differs from the relative degree");
  return out;
}

}  // namespace pak
