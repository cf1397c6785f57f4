#include "pak/ledger.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <tomlplusplus/toml.hpp>

#include "pak/coleman.hpp"
#include "pak/expr.hpp"
#include "pak/json_io.hpp"

namespace pak {

namespace {

Qp qzero(const Ctx& c) { return Qp(c); }

std::string place_key(long q) { return std::to_string(q); }

std::vector<long> primes_below(long bound) {
  std::vector<long> out;
  for (long q = 2; q < bound; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

}  // namespace

Qp PPlace::apply(const Elem& x) const {
  if (x.field() != Fv) throw FieldMismatch("t_v applied outside F_v");
  Qp r(Fv->ctx);
  for (size_t k = 0; k < t.size(); ++k) r += t[k] * x.coords()[k];
  return r;
}

bool PPlace::ramified() const {
  for (auto& a : t)
    if (!a.is_zero()) return true;
  return false;
}

const Qp& IdeleCharacter::at(long q) const {
  auto it = finite.find(q);
  if (it == finite.end()) throw UnknownPlace("character has no value at q = " + std::to_string(q));
  return it->second;
}

const PPlace& IdeleCharacter::place(const std::string& v) const {
  auto it = p_places.find(v);
  if (it == p_places.end()) throw UnknownPlace("character has no place " + v);
  return it->second;
}

Qp IdeleCharacter::finite_value(long q, const mpq_class& f) const {
  auto fac = factor_rational(f);
  auto it = fac.find(q);
  if (it == fac.end()) return qzero(ctx);
  return at(q) * Qp(ctx, it->second);
}

IdeleCharacter standard_character(const Ctx& ctx, const LogBranch& b, long bound) {
  IdeleCharacter l{ctx, {}, {}};
  Field K = qp_field(ctx);
  l.p_places["p"] = PPlace{K, {Qp(ctx, 1)}, b};
  for (long q : primes_below(bound))
    if (q != ctx->p()) l.finite[q] = -padic_log(Qp(ctx, q), b);
  return l;
}

IdeleCharacter zero_character(const Ctx& ctx, const LogBranch& b, long bound) {
  IdeleCharacter l{ctx, {}, {}};
  l.p_places["p"] = PPlace{qp_field(ctx), {Qp(ctx)}, b};
  for (long q : primes_below(bound))
    if (q != ctx->p()) l.finite[q] = Qp(ctx);
  return l;
}

IdeleCharacter character_from_toml(const std::string& text, int cap) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string("character file: ") + std::string(e.description()));
  }
  auto* ch = doc["character"].as_table();
  if (!ch) throw ParseError("character file: missing [character] table");
  auto p = (*ch)["p"].value<std::int64_t>();
  if (!p || !is_prime(static_cast<long>(*p))) throw ParseError("character file: p must be a prime");
  Ctx ctx = PrimeContext::get(static_cast<long>(*p), cap);
  auto token = [&](const toml::node_view<toml::node>& n, const std::string& what) -> std::string {
    if (auto s = n.value<std::string>()) return *s;
    if (auto i = n.value<std::int64_t>()) return std::to_string(*i);
    throw ParseError("character file: " + what + " must be a string or an integer");
  };
  LogBranch b{Qp(ctx)};
  if ((*ch)["lambda"]) b.lambda = parse_scalar_qp(token((*ch)["lambda"], "lambda"), ctx, b);
  IdeleCharacter l = standard_character(ctx, b);
  if (!(*ch)["standard"].value_or(false)) l.finite.clear();
  if ((*ch)["t"]) l.p_places["p"].t = {parse_scalar_qp(token((*ch)["t"], "t"), ctx, b)};
  if (auto* fin = (*ch)["finite"].as_table()) {
    for (auto& [k, v] : *fin) {
      std::string key(k.str());
      long q = 0;
      try {
        q = std::stol(key);
      } catch (const std::exception&) {
        throw ParseError("character file: finite place '" + key + "' is not an integer");
      }
      if (!is_prime(q) || q == ctx->p()) throw ParseError("character file: finite place " + key + " must be a prime other than p");
      toml::node_view<toml::node> nv(v);
      l.finite[q] = parse_scalar_qp(token(nv, "value at " + key), ctx, b);
    }
  }
  return l;
}

json character_to_json(const IdeleCharacter& l) {
  json j;
  j["p"] = l.p();
  json fin = json::object();
  for (auto& [q, v] : l.finite) fin[place_key(q)] = to_json(v);
  j["finite"] = fin;
  json places = json::object();
  for (auto& [v, P] : l.p_places) {
    json t = json::array();
    for (auto& a : P.t) t.push_back(to_json(a));
    places[v] = {{"t", t}, {"lambda", to_json(P.branch.lambda)}, {"ramified", P.ramified()}};
  }
  j["places"] = places;
  return j;
}

std::map<long, long> factor_rational(const mpq_class& f) {
  if (f == 0) throw ZeroArgument("factorisation of zero");
  std::map<long, long> out;
  auto run = [&](mpz_class n, long sign) {
    if (n < 0) n = -n;
    for (long d = 2; mpz_class(d) * d <= n; ++d) {
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
        out[d] += sign;
        n /= d;
      }
    }
    if (n > 1) {
      if (!n.fits_slong_p()) throw Unsupported("prime factor too large");
      out[n.get_si()] += sign;
    }
  };
  run(f.get_num(), 1);
  run(f.get_den(), -1);
  return out;
}

CharacterSum character_sum(const IdeleCharacter& l, const mpq_class& f) {
  CharacterSum s{f, {}, qzero(l.ctx)};
  for (auto& [q, e] : factor_rational(f)) {
    if (q == l.p()) continue;
    Qp v = l.at(q) * Qp(l.ctx, e);
    s.per_place[place_key(q)] = v;
    s.total += v;
  }
  for (auto& [v, P] : l.p_places) {
    Qp x = P.ell(Elem(P.Fv, f));
    s.per_place[v] = x;
    s.total += x;
  }
  return s;
}

CharacterReport validate_character(const IdeleCharacter& l, const std::vector<mpq_class>& gens, int target) {
  CharacterReport r;
  for (auto& f : gens) {
    r.sums.push_back(character_sum(l, f));
    if (!assert_equal(r.sums.back().total, qzero(l.ctx), target)) r.ok = false;
  }
  return r;
}

ArakelovDivisor ArakelovDivisor::operator+(const ArakelovDivisor& o) const {
  ArakelovDivisor r = *this;
  r.generic = generic + o.generic;
  for (auto& [q, m] : o.fibres) {
    r.fibres[q] += m;
    if (r.fibres[q] == 0) r.fibres.erase(q);
  }
  for (auto& [v, x] : o.infinite) {
    auto it = r.infinite.find(v);
    if (it == r.infinite.end()) r.infinite[v] = x;
    else it->second += x;
  }
  return r;
}

ArakelovDivisor ArakelovDivisor::scale(long k) const {
  ArakelovDivisor r;
  r.generic = generic.scale(k);
  if (k != 0) {
    for (auto& [q, m] : fibres) r.fibres[q] = m * k;
    for (auto& [v, x] : infinite) r.infinite[v] = x.scale(mpq_class(k));
  }
  return r;
}

ArakelovDivisor ArakelovDivisor::operator-(const ArakelovDivisor& o) const { return *this + o.scale(-1); }

namespace {
std::pair<std::string, std::string> pkey(const std::string& P, const std::string& Q) {
  return P < Q ? std::make_pair(P, Q) : std::make_pair(Q, P);
}
}  // namespace

void CurveData::set_local(long q, const std::string& P, const std::string& Q, long m) {
  if (P == Q) throw std::invalid_argument("local multiplicity of a point with itself");
  if (m == 0) finite[q].erase(pkey(P, Q));
  else finite[q][pkey(P, Q)] = m;
}

long CurveData::local(long q, const std::string& P, const std::string& Q) const {
  auto it = finite.find(q);
  if (it == finite.end()) return 0;
  auto jt = it->second.find(pkey(P, Q));
  return jt == it->second.end() ? 0 : jt->second;
}

void p1_multiplicities(CurveData& curve, const std::map<std::string, std::pair<long, long>>& points,
                       const std::vector<long>& primes) {
  for (auto& [P, a] : points)
    if (std::gcd(a.first, a.second) != 1) throw std::invalid_argument("coordinates of " + P + " are not coprime");
  for (auto i = points.begin(); i != points.end(); ++i)
    for (auto j = std::next(i); j != points.end(); ++j) {
      mpz_class det = mpz_class(i->second.first) * j->second.second - mpz_class(j->second.first) * i->second.second;
      if (det == 0) throw OverlappingSupport(i->first + " and " + j->first + " are the same point");
      for (long q : primes) curve.set_local(q, i->first, j->first, vp(det, q));
    }
}

namespace {

long finite_number(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve, long q) {
  long k = 0;
  for (auto& [P, n] : D.generic.terms())
    for (auto& [Q, m] : E.generic.terms()) k += n * m * curve.local(q, P, Q);
  auto fd = D.fibres.find(q), fe = E.fibres.find(q);
  if (fd != D.fibres.end()) k += fd->second * E.degree();
  if (fe != E.fibres.end()) k += fe->second * D.degree();
  return k;
}

std::set<long> finite_support(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve) {
  std::set<long> qs;
  for (auto& [q, m] : curve.finite) qs.insert(q);
  for (auto& [q, m] : D.fibres) qs.insert(q);
  for (auto& [q, m] : E.fibres) qs.insert(q);
  return qs;
}

// <D, E>_v before t_v
Elem place_value(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve, const PPlace& P,
                 const std::string& v) {
  Elem x(P.Fv);
  if (!D.generic.is_zero() && !E.generic.is_zero()) {
    auto it = curve.tables.find(v);
    if (it == curve.tables.end()) throw MissingOracle("no Green table at place " + v);
    x += pairing_from_green(it->second, D.generic, E.generic);
  }
  auto ld = D.infinite.find(v), le = E.infinite.find(v);
  if (le != E.infinite.end()) x += le->second.scale(mpq_class(D.degree()));
  if (ld != D.infinite.end()) x += ld->second.scale(mpq_class(E.degree()));
  return x;
}

void check_places(const ArakelovDivisor& D, const IdeleCharacter& l) {
  for (auto& [v, x] : D.infinite) l.place(v);
  for (auto& [q, m] : D.fibres)
    if (q == l.p()) throw UnknownPlace("the fibres above p are the X_v");
}

}  // namespace

IntersectionReport intersect(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve,
                             const IdeleCharacter& l) {
  if (!D.generic.disjoint(E.generic))
    throw OverlappingSupport(D.generic.str() + " and " + E.generic.str() + " share a point");
  check_places(D, l);
  check_places(E, l);
  IntersectionReport r{{}, qzero(l.ctx)};
  for (long q : finite_support(D, E, curve)) {
    long k = finite_number(D, E, curve, q);
    if (k == 0) continue;
    Qp x = l.at(q) * Qp(l.ctx, k);
    r.per_place[place_key(q)] = x;
    r.total += x;
  }
  for (auto& [v, P] : l.p_places) {
    Qp x = P.apply(place_value(D, E, curve, P, v));
    r.per_place[v] = x;
    r.total += x;
  }
  return r;
}

PrincipalReport principal_check(const ArakelovDivisor& D, const ArakelovDivisor& f_div,
                                const std::map<std::string, mpq_class>& f_values, const CurveData& curve,
                                const IdeleCharacter& l, int target) {
  PrincipalReport r{qzero(l.ctx), qzero(l.ctx), false};
  for (auto& [P, n] : D.generic.terms()) {
    auto it = f_values.find(P);
    if (it == f_values.end()) throw MissingIngredient("no value of f at " + P);
    r.character += character_sum(l, it->second).total * Qp(l.ctx, n);
  }
  r.ledger = intersect(D, f_div, curve, l).total;
  Qp z = qzero(l.ctx);
  r.ok = assert_equal(r.ledger, z, target) && assert_equal(r.character, z, target) &&
         assert_equal(r.ledger, r.character, target);
  return r;
}

PrincipalCase synthetic_principal(std::mt19937_64& rng, const IdeleCharacter& l) {
  if (l.p_places.size() != 1) throw NonSupported("synthetic data needs exactly one place above p");
  const auto& [v, place] = *l.p_places.begin();
  const Field& K = place.Fv;
  auto uni = [&](long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); };
  PrincipalCase c;
  c.curve.genus = static_cast<int>(uni(1, 3));
  GreenTable table(c.curve.genus, K);

  std::vector<long> pool{-1, l.p()};
  for (long q : {2L, 3L, 5L, 7L, 11L})
    if (q != l.p() && l.finite.count(q)) pool.push_back(q);

  long m2 = uni(0, 2);
  c.f_div.generic = DivisorFormal{{"Z", 1}, {"W", -1}, {"Z2", m2}, {"W2", -m2}};
  Elem iota = random_element(rng, K, 0, 2);
  c.f_div.infinite[v] = iota;

  int k = static_cast<int>(uni(1, 3));
  for (int i = 0; i < k; ++i) {
    std::string P = "P" + std::to_string(i + 1);
    long n = 0;
    while (n == 0) n = uni(-2, 2);
    c.D.generic = c.D.generic + DivisorFormal::point(P, n);
    mpq_class f = 1;
    for (int j = 0; j < 3; ++j) {
      long q = pool[uni(0, static_cast<long>(pool.size()) - 1)];
      if (q == -1) {
        f = -f;
        continue;
      }
      long e = uni(-2, 2);
      mpz_class qe;
      mpz_pow_ui(qe.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
      f = e < 0 ? mpq_class(f / qe) : mpq_class(f * qe);
    }
    c.values[P] = f;
    for (auto& [Z, m] : c.f_div.generic.terms())
      if (Z != "Z") table.set(P, Z, random_element(rng, K, -1, 2));
    // G_{div f}(P) = log f(P) - iota
    Elem want = padic_log(Elem(K, f), place.branch) - iota;
    for (auto& [Z, m] : c.f_div.generic.terms())
      if (Z != "Z") want -= table.get(P, Z).scale(mpq_class(m));
    table.set(P, "Z", want);
    for (auto& [q, e] : factor_rational(f)) {
      if (q == l.p()) continue;
      if (e > 0) c.curve.set_local(q, P, "Z", e);
      else c.curve.set_local(q, P, "W", -e);
    }
  }
  c.curve.tables[v] = table;
  return c;
}

MetrizedOFLine MetrizedOFLine::rebased(const mpq_class& f) const {
  if (f == 0) throw ZeroArgument("re-basing by zero");
  MetrizedOFLine r = *this;
  r.theta = theta * f;
  return r;
}

Qp deg_metrized_line(const MetrizedOFLine& N, const IdeleCharacter& l) {
  if (N.generator == 0 || N.theta == 0) throw ZeroArgument("degenerate line or trivialisation");
  for (auto& [v, s] : N.shift) l.place(v);
  Qp d = qzero(l.ctx);
  for (auto& [v, P] : l.p_places) {
    Elem x = padic_log(Elem(P.Fv, N.theta), P.branch);
    auto it = N.shift.find(v);
    if (it != N.shift.end()) x += it->second;
    d += P.apply(x);
  }
  mpq_class ideal = N.generator / N.theta;
  for (auto& [q, e] : factor_rational(ideal))
    if (q != l.p()) d -= l.at(q) * Qp(l.ctx, e);
  return d;
}

Qp det_quotient_log(const KLine& U, const KLine& V, const Elem& k, const LogBranch& b) {
  if (U.Kp != V.Kp || k.field() != U.Kp) throw FieldMismatch("lines over different fields");
  if (k.is_zero()) throw ZeroArgument("alpha must be an isomorphism");
  Elem c = padic_log(k, b) + V.log_u - U.log_u;
  return padic_log(norm_qp(k), b) - trace_qp(c);
}

namespace {

// the same field with cap raised; inputs are read as exact
Field at_cap(const Field& K, int cap) { return field_from_json(field_to_json(K), cap); }

Elem lift(const Elem& x, const Field& W) {
  std::vector<Qp> co;
  for (auto& a : x.coords()) co.push_back(a.with_context(W->ctx).as_exact());
  return Elem(W, co);
}

Qp log_det_embeddings(const Field& Kp, const std::vector<Elem>& beta, const LogBranch& b) {
  int n = Kp->degree();
  if (static_cast<int>(beta.size()) != n) throw std::invalid_argument("basis has the wrong size");
  std::vector<FieldHom> sig = embeddings(Kp, Kp);
  if (static_cast<int>(sig.size()) != n) throw NoSplitting("K' is not normal over Q_p");
  Mat<Elem> M(n, std::vector<Elem>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = apply(sig[j], beta[i]);
  Elem det = la_det(M, Elem(Kp, 1));
  if (det.is_zero()) throw SingularMatrix("basis is degenerate");
  Elem L = padic_log(det, b);
  // a conjugate permutes the columns, so log det must be Galois stable
  for (auto& s : sig)
    if (!assert_equal(apply(s, L), L, Kp->ctx->cap() / 2)) throw PrecisionExhausted("log det is not Galois stable");
  return L.to_qp();
}

struct Work {
  Field W;
  LogBranch b;
};

Work work_field(const Field& Kp, const LogBranch& b, int guard) {
  Field W = at_cap(Kp, Kp->ctx->cap() + guard);
  return {W, LogBranch{b.lambda.with_context(W->ctx).as_exact()}};
}

bool full_precision(const Qp& x, int cap) {
  return x.is_zero() ? x.abs_prec() >= cap : x.abs_prec() >= std::min<std::int64_t>(x.val(), 0) + cap;
}

// Nearly dependent bases lose digits in the determinant and the trace-dual
// inverse; double the guard until the result is known to the caller's cap.
template <class Fn>
Qp guarded(const Field& Kp, const LogBranch& b, Fn fn) {
  int cap = Kp->ctx->cap();
  for (int guard = kGuardDigits;; guard *= 2) {
    bool last = guard > 4 * cap;
    try {
      Qp r = fn(work_field(Kp, b, guard)).with_context(Kp->ctx);
      if (full_precision(r, cap) || last) return r;
    } catch (const PrecisionExhausted&) {
      if (last) throw;
    }
  }
}

std::vector<Elem> lift_all(const std::vector<Elem>& xs, const Field& W) {
  std::vector<Elem> out;
  for (auto& x : xs) out.push_back(lift(x, W));
  return out;
}

}  // namespace

Qp det_K_log(const Field& Kp, const std::vector<Elem>& beta, const Elem& log_x, const LogBranch& b) {
  Qp L = guarded(Kp, b, [&](const Work& w) { return log_det_embeddings(w.W, lift_all(beta, w.W), w.b); });
  return L + trace_qp(log_x);
}

std::vector<Elem> trace_dual_basis(const std::vector<Elem>& beta) {
  size_t n = beta.size();
  if (n == 0) throw std::invalid_argument("empty basis");
  const Ctx& ctx = beta[0].field()->ctx;
  Mat<Qp> G(n, std::vector<Qp>(n)), I(n, std::vector<Qp>(n, Qp(ctx)));
  for (size_t i = 0; i < n; ++i) {
    I[i][i] = Qp(ctx, 1);
    for (size_t j = 0; j < n; ++j) G[i][j] = trace_qp(beta[i] * beta[j]);
  }
  Mat<Qp> Gi = la_solve(G, I);
  std::vector<Elem> out;
  for (size_t i = 0; i < n; ++i) {
    Elem x(beta[0].field());
    for (size_t k = 0; k < n; ++k) x += beta[k].scale(Gi[i][k]);
    out.push_back(x);
  }
  return out;
}

Qp trace_dual_check(const Field& Kp, const std::vector<Elem>& beta, const LogBranch& b) {
  return guarded(Kp, b, [&](const Work& w) {
    std::vector<Elem> lb = lift_all(beta, w.W);
    return log_det_embeddings(w.W, lb, w.b) + log_det_embeddings(w.W, trace_dual_basis(lb), w.b);
  });
}

OrderReport codifferent_and_chi(const std::vector<long>& f, const IdeleCharacter& l) {
  if (f.size() < 2 || f.back() != 1) throw std::invalid_argument("order polynomial must be monic of degree >= 1");
  int n = static_cast<int>(f.size()) - 1;
  // power sums of the roots
  std::vector<mpq_class> s(2 * n - 1);
  s[0] = n;
  for (int k = 1; k < 2 * n - 1; ++k) {
    mpq_class acc = 0;
    for (int i = 1; i <= std::min(k, n); ++i) {
      if (i < k) acc -= mpq_class(f[n - i]) * s[k - i];
      else acc -= mpq_class(k) * f[n - k];
    }
    s[k] = acc;
  }
  Mat<mpq_class> G(n, std::vector<mpq_class>(n)), I(n, std::vector<mpq_class>(n, 0));
  for (int i = 0; i < n; ++i) {
    I[i][i] = 1;
    for (int j = 0; j < n; ++j) G[i][j] = s[i + j];
  }
  mpq_class disc = la_det(G, mpq_class(1));
  if (disc == 0) throw std::invalid_argument("order polynomial is not squarefree");
  if (vp(disc.get_num(), l.p()) > 0) throw NonSupported("p divides the discriminant");
  if (l.p_places.size() != 1) throw NonSupported("orders need exactly one place above p");

  OrderReport r{disc.get_num(), la_solve(G, I), qzero(l.ctx), qzero(l.ctx), qzero(l.ctx)};
  // W/A as a line in Q: the determinant of the codifferent basis
  MetrizedOFLine W{la_det(r.codifferent, mpq_class(1)), 1, {}};
  r.deg_W = deg_metrized_line(W, l);
  r.chi = -r.deg_W * Qp(l.ctx, mpq_class(1, 2));

  const PPlace& P = l.p_places.begin()->second;
  std::vector<long> fc(f.begin(), f.end());
  Splitting S = splitting_field(kpoly_from_ints(P.Fv, fc));
  Mat<Elem> V(n, std::vector<Elem>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V[i][j] = S.roots[j].pow(i);
  Elem L = padic_log(la_det(V, Elem(S.L, 1)), P.branch);
  r.chi_direct = P.apply(Elem(P.Fv, L.to_qp()));
  return r;
}

Qp chi_rescaled(const Qp& chi_log, long euler, const Qp& alpha) { return chi_log + alpha * Qp(alpha.ctx(), euler); }
Qp chi_add_point(const Qp& chi_log, const Qp& fibre_log) { return chi_log + fibre_log; }
Qp chi_remove_point(const Qp& chi_log, const Qp& fibre_log) { return chi_log - fibre_log; }
Qp chi_add_horizontal(const Qp& chi_D, const Qp& chi_restricted, const Qp& d_inf) {
  return chi_D + chi_restricted - d_inf * Qp(d_inf.ctx(), mpq_class(1, 2));
}

Elem d_v(const DivisorFormal& E, const GreenTable& table) {
  Elem x(table.field());
  for (auto& [P, m] : E.terms())
    for (auto& [Q, n] : E.terms())
      if (P != Q) x += table.get(P, Q).scale(mpq_class(m * n));
  return x;
}

Qp d_infinity(const DivisorFormal& E, const CurveData& curve, const IdeleCharacter& l) {
  Qp d = qzero(l.ctx);
  if (E.terms().size() < 2) return d;
  for (auto& [v, P] : l.p_places) {
    auto it = curve.tables.find(v);
    if (it == curve.tables.end()) throw MissingOracle("no Green table at place " + v);
    d += P.apply(d_v(E, it->second));
  }
  return d;
}

AdjunctionReport adjunction_check(const AdjunctionInput& in, const CurveData& curve, const IdeleCharacter& l) {
  if (!in.omega) throw MissingIngredient("adjunction needs the canonical divisor");
  if (!in.dE) throw MissingIngredient("adjunction needs d(E)");
  if (!in.self && !in.moved) throw MissingIngredient("adjunction needs E.E or a moved copy of E");
  AdjunctionReport r;
  r.omega_E = intersect(*in.omega, in.E, curve, l).total;
  r.E_E = in.self ? *in.self : intersect(in.E, *in.moved, curve, l).total;
  r.dE = *in.dE;
  r.d_inf = d_infinity(in.E.generic, curve, l);
  r.residual = r.omega_E + r.E_E - r.dE - r.d_inf;
  return r;
}

LedgerState synthetic_ledger(std::mt19937_64& rng, int g, const IdeleCharacter& l) {
  if (l.p_places.size() != 1) throw NonSupported("synthetic data needs exactly one place above p");
  const auto& [v, place] = *l.p_places.begin();
  if (place.Fv->degree() != 1 || place.t.empty() || place.t[0].is_zero())
    throw NonSupported("synthetic data needs F_v = Q_p and t_v invertible");
  const Field& K = place.Fv;
  auto uni = [&](long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); };

  LedgerState s{CurveData{g, {}, {}}, l, {}, {}, {}, {}, Qp(l.ctx)};
  long k = uni(1, 3);
  for (long i = 1; i <= k; ++i) {
    s.E.generic = s.E.generic + DivisorFormal::point("E" + std::to_string(i));
    s.E_moved.generic = s.E_moved.generic + DivisorFormal::point("F" + std::to_string(i));
  }
  s.D.generic = DivisorFormal{{"D1", uni(-3, 3)}, {"D2", uni(-3, 3)}};
  s.omega.generic = DivisorFormal{{"W1", 2L * g - 1}, {"W2", -1}};

  std::vector<std::string> labels;
  for (auto* d : {&s.D, &s.E, &s.E_moved, &s.omega})
    for (auto& [P, m] : d->generic.terms()) labels.push_back(P);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  GreenTable table(g, K);
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j) table.set(labels[i], labels[j], random_element(rng, K, -1, 2));
  s.curve.tables[v] = table;

  for (long q : {2L, 3L, 7L, 11L}) {
    if (q == l.p() || !l.finite.count(q)) continue;
    for (size_t i = 0; i < labels.size(); ++i)
      for (size_t j = i + 1; j < labels.size(); ++j)
        if (uni(0, 3) == 0) s.curve.set_local(q, labels[i], labels[j], uni(1, 2));
  }
  if (l.finite.count(2) && l.p() != 2) s.D.fibres[2] = uni(-1, 1);

  s.D.infinite[v] = random_element(rng, K, 0, 2);
  s.E.infinite[v] = random_element(rng, K, 0, 2);
  s.E_moved.infinite[v] = random_element(rng, K, 0, 2);
  s.dE = random_element(rng, K, 0, 2).to_qp();

  // fix lambda_omega so that adjunction holds
  s.omega.infinite.erase(v);
  Qp res = adjunction_check(s.adjunction(), s.curve, l).residual;
  Qp lambda = -res / (place.t[0] * Qp(l.ctx, s.E.degree()));
  s.omega.infinite[v] = Elem(K, lambda);
  return s;
}

DeltaReport rr_delta_check(const LedgerState& s) {
  const Ctx& c = s.l.ctx;
  Qp half(c, mpq_class(1, 2));
  Qp DE = intersect(s.D, s.E, s.curve, s.l).total;
  AdjunctionReport a = adjunction_check(s.adjunction(), s.curve, s.l);
  // chi(O(D+E)|_E) = deg(O(D+E)|_E) + chi(O_E) = (D+E).E - d(E)/2
  Qp restricted = DE + a.E_E - a.dE * half;
  DeltaReport r;
  r.lhs = chi_add_horizontal(qzero(c), restricted, a.d_inf);
  r.rhs = DE + (a.E_E - a.omega_E) * half;
  r.residual = r.lhs - r.rhs;
  return r;
}

DeltaReport rr_rescale_invariance(const Field& K, const Elem& c, long d, int g, std::uint64_t seed) {
  if (K->degree() != 1) throw NonSupported("rescaling check runs over Q_p");
  std::mt19937_64 rng(seed);
  const Ctx& ctx = K->ctx;
  using D = DivisorFormal;
  GreenState s;
  s.genus = g;
  GreenTable t(g, K);
  std::vector<std::string> labels{"L1", "L2", "W1", "Y"};
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j) t.set(labels[i], labels[j], random_element(rng, K, -1, 2));
  s.tables["v"] = t;
  s.lines["L"] = LineRecord{d, false, {{"v", random_element(rng, K, 0, 2)}}};
  s.lines["omega"] = LineRecord{2L * g - 2, true, {{"v", random_element(rng, K, 0, 2)}}};
  GreenState r = rescale_green(s, "v", c);

  // <A + a X_v, B + b X_v> with X_v . X_v = 0
  auto pair = [](const GreenState& S, const D& A, const Elem& a, const D& B, const Elem& b) {
    return pairing_from_green(S.tables.at("v"), A, B) + a.scale(mpq_class(B.degree())) +
           b.scale(mpq_class(A.degree()));
  };
  auto twice_rhs = [&](const GreenState& S) {
    const Elem& iL = S.lines.at("L").iota.at("v");
    const Elem& iw = S.lines.at("omega").iota.at("v");
    return pair(S, D::point("L1", d), iL, D::point("L2", d), iL) -
           pair(S, D::point("L1", d), iL, D::point("W1", 2L * g - 2), iw);
  };
  Qp half(ctx, mpq_class(1, 2));
  DeltaReport out;
  out.rhs = (twice_rhs(r) - twice_rhs(s)).to_qp() * half;

  // shift of log_{O(kP)} read off the tables
  auto shift = [&](long k) {
    D A = D::point("L1", k), Y = D::point("Y");
    return (pairing_from_green(r.tables.at("v"), A, Y) - pairing_from_green(s.tables.at("v"), A, Y)).to_qp();
  };
  Qp zero(ctx);
  // chi(L) - chi(O(D)): the metric on O(D) moves by shift(d)
  Qp first = -chi_rescaled(zero, d + 1 - g, shift(d));
  // chi(O(D)) - chi(O): add or remove one point at a time
  Qp second = zero;
  for (long k = 1; k <= d; ++k) second = chi_add_point(second, shift(k));
  for (long k = 0; k > d; --k) second = chi_remove_point(second, shift(k));
  out.lhs = first + second;
  out.residual = out.lhs - out.rhs;
  return out;
}

Qp intform_residual(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve,
                    const IdeleCharacter& l) {
  IntersectionReport rep = intersect(D, E, curve, l);
  MetrizedOFLine M;
  for (long q : finite_support(D, E, curve)) {
    long k = finite_number(D, E, curve, q);
    if (q == l.p() || k == 0) continue;
    mpz_class qk;
    mpz_pow_ui(qk.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
    M.generator = k > 0 ? mpq_class(M.generator / qk) : mpq_class(M.generator * qk);
  }
  for (auto& [v, P] : l.p_places) M.shift[v] = place_value(D, E, curve, P, v);
  return rep.total - deg_metrized_line(M, l);
}

}  // namespace pak
