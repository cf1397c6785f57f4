#include "pak/laurent.hpp"

#include <algorithm>

namespace pak {

Laurent::Laurent(Field K, std::int64_t low, std::vector<Elem> c) : K_(std::move(K)), low_(low), c_(std::move(c)) {
  size_t s = 0;
  while (s < c_.size() && c_[s].is_exact_zero()) ++s;
  if (s) {
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(s));
    low_ += static_cast<std::int64_t>(s);
  }
}

Laurent Laurent::zero(const Field& K, std::int64_t high) { return Laurent(K, high, {}); }

Laurent Laurent::from_terms(const Field& K, const std::map<std::int64_t, Elem>& terms, int window) {
  std::int64_t low = terms.empty() ? 0 : terms.begin()->first;
  std::vector<Elem> c(window, Elem(K));
  for (auto& [k, v] : terms) {
    if (k - low >= window) throw WindowUnderflow("monomial outside the window");
    c[k - low] = v;
  }
  return Laurent(K, low, std::move(c));
}

Laurent Laurent::monomial(const Elem& a, std::int64_t k, int window) {
  return from_terms(a.field(), {{k, a}}, window);
}

Elem Laurent::operator[](std::int64_t k) const {
  if (k < low_) return Elem(K_);
  if (k >= high()) throw WindowUnderflow("coefficient beyond the known window");
  return c_[k - low_];
}

std::int64_t Laurent::order() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return low_ + static_cast<std::int64_t>(i);
  return high();
}

bool Laurent::is_zero() const { return order() == high(); }

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Laurent operator+(const Laurent& a, const Laurent& b) {
  if (a.K_ != b.K_) throw FieldMismatch("Laurent series over different fields");
  std::int64_t hi = std::min(a.high(), b.high());
  std::int64_t lo = std::min({a.low_, b.low_, hi});
  std::vector<Elem> c;
  c.reserve(hi - lo);
  for (std::int64_t k = lo; k < hi; ++k) {
    bool ina = k >= a.low_, inb = k >= b.low_;
    if (ina && inb)
      c.push_back(a.c_[k - a.low_] + b.c_[k - b.low_]);
    else if (ina)
      c.push_back(a.c_[k - a.low_]);
    else if (inb)
      c.push_back(b.c_[k - b.low_]);
    else
      c.push_back(Elem(a.K_));
  }
  return Laurent(a.K_, lo, std::move(c));
}

Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

Laurent operator*(const Laurent& a, const Laurent& b) {
  if (a.K_ != b.K_) throw FieldMismatch("Laurent series over different fields");
  std::int64_t lo = a.low_ + b.low_;
  std::int64_t hi = std::min(a.low_ + b.high(), b.low_ + a.high());
  std::int64_t n = std::max<std::int64_t>(hi - lo, 0);
  std::vector<Elem> c(n, Elem(a.K_));
  for (std::int64_t i = 0; i < a.size() && i < n; ++i) {
    if (a.c_[i].is_exact_zero()) continue;
    for (std::int64_t j = 0; j < b.size() && i + j < n; ++j) {
      if (b.c_[j].is_exact_zero()) continue;
      c[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return Laurent(a.K_, n ? lo : hi, std::move(c));
}

Laurent Laurent::scale(const Elem& a) const {
  Laurent r = *this;
  for (auto& c : r.c_) c = c * a;
  return Laurent(K_, r.low_, std::move(r.c_));
}

Laurent Laurent::scale(const mpq_class& a) const {
  Laurent r = *this;
  for (auto& c : r.c_) c = c.scale(a);
  return Laurent(K_, r.low_, std::move(r.c_));
}

Laurent Laurent::shift(std::int64_t k) const {
  Laurent r = *this;
  r.low_ += k;
  return r;
}

Laurent Laurent::derivative() const {
  std::vector<Elem> c(c_.size(), Elem(K_));
  for (size_t i = 0; i < c_.size(); ++i) {
    std::int64_t k = low_ + static_cast<std::int64_t>(i);
    if (k != 0 && !c_[i].is_exact_zero()) c[i] = c_[i].scale(mpq_class(k));
  }
  return Laurent(K_, low_ - 1, std::move(c));
}

Laurent Laurent::inverse() const {
  if (c_.empty()) throw ZeroArgument("inverse of a series with no known terms");
  std::int64_t v = order();
  if (v == high()) throw PrecisionExhausted("leading coefficient undetermined");
  std::int64_t n = high() - v;
  std::vector<Elem> b(c_.begin() + (v - low_), c_.end());
  Elem inv0 = b[0].inverse();
  std::vector<Elem> r(n, Elem(K_));
  r[0] = inv0;
  for (std::int64_t i = 1; i < n; ++i) {
    Elem s(K_);
    for (std::int64_t j = 1; j <= i; ++j)
      if (!b[j].is_exact_zero()) s += b[j] * r[i - j];
    r[i] = -(s * inv0);
  }
  return Laurent(K_, -v, std::move(r));
}

Laurent Laurent::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  Laurent result = monomial(Elem(K_, 1), 0, static_cast<int>(std::max<std::int64_t>(size(), 1)));
  Laurent base = *this;
  bool first = true;
  while (n) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Laurent Laurent::truncate(std::int64_t h) const {
  if (h >= high()) return *this;
  if (h <= low_) return zero(K_, h);
  return Laurent(K_, low_, std::vector<Elem>(c_.begin(), c_.begin() + (h - low_)));
}

Laurent Laurent::compose(const Laurent& alpha) const {
  if (alpha.K_ != K_) throw FieldMismatch("substitution across fields");
  std::int64_t n = alpha.order();
  if (n <= 0 || n >= alpha.high()) throw BadSubstitution("substitution needs positive order");
  Laurent acc = zero(K_, n * high());
  if (c_.empty()) return acc;
  Laurent P = alpha.pow(low_);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i].is_exact_zero()) acc += P.scale(c_[i]);
    if (i + 1 < c_.size()) P = P * alpha;
  }
  return acc;
}

void LogPoly::normalize() {
  while (terms.size() > 1 && terms.back().is_zero()) terms.pop_back();
}

LogPoly LogPoly::operator+(const LogPoly& o) const {
  LogPoly r;
  size_t n = std::max(terms.size(), o.terms.size());
  for (size_t m = 0; m < n; ++m) {
    if (m >= terms.size())
      r.terms.push_back(o.terms[m]);
    else if (m >= o.terms.size())
      r.terms.push_back(terms[m]);
    else
      r.terms.push_back(terms[m] + o.terms[m]);
  }
  r.normalize();
  return r;
}

LogPoly LogPoly::operator*(const LogPoly& o) const {
  LogPoly r;
  for (size_t m = 0; m < terms.size(); ++m)
    for (size_t l = 0; l < o.terms.size(); ++l) {
      Laurent t = terms[m] * o.terms[l];
      if (m + l < r.terms.size())
        r.terms[m + l] += t;
      else
        r.terms.push_back(t);
    }
  r.normalize();
  return r;
}

LogPoly LogPoly::scale(const Elem& a) const {
  LogPoly r = *this;
  for (auto& t : r.terms) t = t.scale(a);
  r.normalize();
  return r;
}

namespace {

// exact constant with a window reaching at least to h
Laurent constant(const Elem& c, std::int64_t h) {
  return Laurent::monomial(c, 0, static_cast<int>(std::max<std::int64_t>(h, 1)));
}

// log(1 + u) for u of positive order, as the primitive of u' / (1 + u)
Laurent log1p(const Laurent& u) {
  const Field& K = u.field();
  std::int64_t h = u.high();
  Laurent d = u.derivative() * (constant(Elem(K, 1), h) + u).inverse();
  std::vector<Elem> c(h, Elem(K));
  for (std::int64_t k = 1; k < h; ++k) c[k] = d[k - 1].scale(mpq_class(1, k));
  return Laurent(K, 0, std::move(c));
}

}  // namespace

A1Element A1Element::operator+(const A1Element& o) const { return {f + o.f, a + o.a}; }

A1Element A1Element::scale(const Elem& c) const { return {f.scale(c), a * c}; }

LogPoly A1Element::as_logpoly() const {
  LogPoly r{{f}};
  if (!a.is_zero()) r.terms.push_back(constant(a, f.high()));
  return r;
}

LogPoly log_z(const Field& K, int window) {
  return LogPoly{{Laurent::zero(K, window), Laurent::monomial(Elem(K, 1), 0, window)}};
}

LogForm differentiate(const LogPoly& F) {
  const auto& c = F.terms;
  for (auto& t : c)
    if (t.size() == 0 && t.high() <= 0) throw WindowUnderflow("no known coefficients to differentiate");
  LogPoly body;
  for (size_t m = 0; m < c.size(); ++m) {
    Laurent d = c[m].derivative();
    if (m + 1 < c.size()) d += c[m + 1].shift(-1).scale(mpq_class(static_cast<long>(m + 1)));
    body.terms.push_back(d);
  }
  body.normalize();
  return LogForm{body};
}

LogPoly integrate(const LogForm& w) {
  const auto& b = w.body.terms;
  if (b.empty()) throw std::invalid_argument("empty form");
  const Field& K = b[0].field();
  int M = static_cast<int>(b.size()) - 1;
  for (auto& t : b)
    if (t.high() <= -1) throw WindowUnderflow("residue coefficient outside the window");
  std::vector<std::int64_t> lo(M + 2), hi(M + 2);
  for (int mp = 0; mp <= M + 1; ++mp) {
    std::int64_t l = Qp::kInf, h = Qp::kInf;
    for (int m = std::max(mp, 0); m <= M; ++m) {
      l = std::min(l, b[m].low() + 1);
      h = std::min(h, b[m].high() + 1);
    }
    if (mp >= 1) {
      l = std::min<std::int64_t>(l, 0);
      h = std::min(h, b[mp - 1].high() + 1);
    }
    if (l > h) l = h;
    lo[mp] = l;
    hi[mp] = h;
  }
  std::vector<std::vector<Elem>> acc(M + 2);
  for (int mp = 0; mp <= M + 1; ++mp) acc[mp].assign(hi[mp] - lo[mp], Elem(K));
  auto add = [&](int mp, std::int64_t k, const Elem& v) {
    if (k >= lo[mp] && k < hi[mp]) acc[mp][k - lo[mp]] += v;
  };
  for (int m = 0; m <= M; ++m) {
    for (std::int64_t k = b[m].low(); k < b[m].high(); ++k) {
      const Elem& a = b[m].coeffs()[k - b[m].low()];
      if (a.is_exact_zero()) continue;
      if (k == -1) {
        add(m + 1, 0, a.scale(mpq_class(1, m + 1)));
        continue;
      }
      // z^(k+1) sum_j (-1)^j m!/(m-j)! L^(m-j) / (k+1)^(j+1)
      mpq_class coef(1, k + 1);
      coef.canonicalize();
      for (int j = 0; j <= m; ++j) {
        add(m - j, k + 1, a.scale(coef));
        mpq_class step(-(m - j), k + 1);
        step.canonicalize();
        coef *= step;
      }
    }
  }
  LogPoly r;
  for (int mp = 0; mp <= M + 1; ++mp) r.terms.push_back(Laurent(K, lo[mp], std::move(acc[mp])));
  r.normalize();
  return r;
}

Elem residue(const LogForm& w) {
  const auto& b = w.body.terms;
  for (size_t m = 1; m < b.size(); ++m)
    if (!b[m].is_zero()) throw LogTermPresent("form has log terms");
  return b.at(0)[-1];
}

Elem res_dF(const A1Element& F) { return F.a; }

A1Element to_a1(const LogPoly& F) {
  LogPoly G = F;
  G.normalize();
  if (G.terms.size() > 2) throw LogTermPresent("log degree above one");
  const Field& K = G.terms[0].field();
  if (G.terms.size() == 1) return {G.terms[0], Elem(K)};
  const Laurent& t = G.terms[1];
  for (std::int64_t k = t.low(); k < t.high(); ++k)
    if (k != 0 && !t.coeffs()[k - t.low()].is_zero()) throw LogTermPresent("coefficient of log(z) is not constant");
  return {G.terms[0], t[0]};
}

namespace {

Elem const_term(const Laurent& f) {
  if (f.low() > 0) return Elem(f.field());
  if (f.high() <= 0) throw WindowUnderflow("constant term outside the window");
  return f[0];
}

}  // namespace

Elem double_index(const A1Element& F, const A1Element& G) {
  const Laurent& f = F.f;
  const Laurent& g = G.f;
  if (f.field() != g.field()) throw FieldMismatch("double index across fields");
  if (std::min(f.low() + g.high(), g.low() + f.high()) < 8) throw WindowUnderflow("windows overlap too little");
  const Field& K = f.field();
  Elem s(K);
  for (std::int64_t j = g.low(); j < g.high(); ++j) {
    if (j == 0 || -j < f.low() || -j >= f.high()) continue;
    const Elem& gj = g.coeffs()[j - g.low()];
    const Elem& fj = f.coeffs()[-j - f.low()];
    if (gj.is_exact_zero() || fj.is_exact_zero()) continue;
    s += (gj * fj).scale(mpq_class(j));
  }
  Elem r = s;
  if (!G.a.is_exact_zero()) r += G.a * const_term(f);
  if (!F.a.is_exact_zero()) r -= F.a * const_term(g);
  return r;
}

A1Element substitute(const A1Element& F, const Laurent& alpha, const LogBranch& branch) {
  const Field& K = F.f.field();
  std::int64_t n = alpha.order();
  if (n <= 0 || n >= alpha.high()) throw BadSubstitution("substitution needs positive order");
  Laurent fa = F.f.compose(alpha);
  if (F.a.is_exact_zero()) return {fa, Elem(K)};
  Elem an = alpha[n];
  Elem inv = an.inverse();
  // alpha = a_n w^n (1 + u)
  std::int64_t uh = alpha.high() - n;
  std::vector<Elem> uc(uh, Elem(K));
  for (std::int64_t k = 1; k < uh; ++k) uc[k] = alpha[n + k] * inv;
  Laurent u(K, 0, std::move(uc));
  Laurent lg = constant(padic_log(an, branch), uh) + log1p(u);
  return {fa + lg.scale(F.a), F.a.scale(mpq_class(n))};
}

}  // namespace pak
