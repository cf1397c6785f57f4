#include "pak/qpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace pak {

void qp_trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int qdeg(const QPoly& a) { return static_cast<int>(a.size()) - 1; }

QPoly qadd(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  qp_trim(r);
  return r;
}

QPoly qsub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  qp_trim(r);
  return r;
}

QPoly qmul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  qp_trim(r);
  return r;
}

QPoly qscale(const QPoly& a, const mpq_class& c) {
  if (c == 0) return {};
  QPoly r = a;
  for (auto& x : r) x *= c;
  return r;
}

std::pair<QPoly, QPoly> qdivmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  QPoly r = a;
  qp_trim(r);
  int db = qdeg(b);
  if (qdeg(r) < db) return {{}, r};
  QPoly q(qdeg(r) - db + 1, 0);
  mpq_class lead = b.back();
  while (!r.empty() && qdeg(r) >= db) {
    int k = qdeg(r) - db;
    mpq_class c = r.back() / lead;
    q[k] = c;
    for (int i = 0; i <= db; ++i) r[k + i] -= c * b[i];
    qp_trim(r);
  }
  qp_trim(q);
  return {q, r};
}

QPoly qmonic(const QPoly& a) {
  if (a.empty()) return a;
  return qscale(a, 1 / a.back());
}

QPoly qgcd(QPoly a, QPoly b) {
  qp_trim(a);
  qp_trim(b);
  while (!b.empty()) {
    QPoly r = qdivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return qmonic(a);
}

QPoly qxgcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t) {
  QPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  qp_trim(r0);
  qp_trim(r1);
  while (!r1.empty()) {
    auto [q, r] = qdivmod(r0, r1);
    QPoly s2 = qsub(s0, qmul(q, s1)), t2 = qsub(t0, qmul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) {
    s = {};
    t = {};
    return {};
  }
  mpq_class inv = 1 / r0.back();
  s = qscale(s0, inv);
  t = qscale(t0, inv);
  return qscale(r0, inv);
}

QPoly qderiv(const QPoly& a) {
  QPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
  qp_trim(r);
  return r;
}

QPoly qpow(const QPoly& a, int n) {
  QPoly r{1};
  for (int i = 0; i < n; ++i) r = qmul(r, a);
  return r;
}

mpq_class qeval(const QPoly& a, const mpq_class& x) {
  mpq_class r = 0;
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

std::vector<QPoly> qsquarefree(const QPoly& a0) {
  QPoly a = qmonic(a0);
  std::vector<QPoly> out;
  if (qdeg(a) <= 0) return out;
  QPoly b = qgcd(a, qderiv(a));
  QPoly c = qdivmod(a, b).first;
  QPoly d = qsub(qdivmod(qderiv(a), b).first, qderiv(c));
  while (qdeg(c) > 0) {
    QPoly g = qgcd(c, d);
    out.push_back(g);
    c = qdivmod(c, g).first;
    d = qsub(qdivmod(d, g).first, qderiv(c));
  }
  while (!out.empty() && qdeg(out.back()) == 0) out.pop_back();
  return out;
}

QPoly qsquarefree_part(const QPoly& a) {
  QPoly r{1};
  for (auto& f : qsquarefree(a)) r = qmul(r, f);
  return r;
}

std::string qstr(const QPoly& a, const std::string& var) {
  if (a.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0) continue;
    mpq_class c = a[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    mpq_class ac = abs(c);
    if (i == 0 || ac != 1) {
      if (ac.get_den() != 1 && i > 0) os << "(" << ac.get_str() << ")";
      else os << ac.get_str();
      if (i > 0) os << "*";
    }
    if (i > 0) os << var;
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

RationalFn::RationalFn(QPoly n, QPoly d) : num(std::move(n)), den(std::move(d)) {
  qp_trim(num);
  qp_trim(den);
  if (den.empty()) throw std::domain_error("rational function with zero denominator");
  if (num.empty()) {
    den = {1};
    return;
  }
  QPoly g = qgcd(num, den);
  if (qdeg(g) > 0) {
    num = qdivmod(num, g).first;
    den = qdivmod(den, g).first;
  }
  mpq_class lead = den.back();
  num = qscale(num, 1 / lead);
  den = qscale(den, 1 / lead);
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
  return RationalFn(qadd(qmul(num, o.den), qmul(o.num, den)), qmul(den, o.den));
}

RationalFn RationalFn::operator-(const RationalFn& o) const { return *this + (-o); }

RationalFn RationalFn::operator*(const RationalFn& o) const {
  return RationalFn(qmul(num, o.num), qmul(den, o.den));
}

RationalFn RationalFn::operator/(const RationalFn& o) const {
  if (o.is_zero()) throw std::domain_error("division by the zero function");
  return RationalFn(qmul(num, o.den), qmul(den, o.num));
}

RationalFn RationalFn::operator-() const {
  RationalFn r = *this;
  for (auto& c : r.num) c = -c;
  return r;
}

RationalFn RationalFn::pow(int n) const {
  if (n < 0) return RationalFn::constant(1) / pow(-n);
  RationalFn r = RationalFn::constant(1);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

RationalFn RationalFn::derivative() const {
  return RationalFn(qsub(qmul(qderiv(num), den), qmul(num, qderiv(den))), qmul(den, den));
}

int RationalFn::order_at_infinity() const {
  if (num.empty()) throw std::domain_error("order of the zero function");
  return qdeg(den) - qdeg(num);
}

RationalFn RationalFn::mobius(const mpq_class& a, const mpq_class& b, const mpq_class& c, const mpq_class& d) const {
  if (a * d - b * c == 0) throw std::domain_error("degenerate Mobius map");
  // P((at+b)/(ct+d)) = sum p_i (at+b)^i (ct+d)^(n-i) / (ct+d)^n
  auto hom = [&](const QPoly& P, int n) {
    QPoly r;
    QPoly lin1{b, a}, lin2{d, c};
    for (size_t i = 0; i < P.size(); ++i) {
      if (P[i] == 0) continue;
      r = qadd(r, qscale(qmul(qpow(lin1, static_cast<int>(i)), qpow(lin2, n - static_cast<int>(i))), P[i]));
    }
    return r;
  };
  int n = std::max(qdeg(num), qdeg(den));
  if (n < 0) n = 0;
  return RationalFn(hom(num, n), hom(den, n));
}

mpq_class RationalFn::eval(const mpq_class& x) const {
  mpq_class d = qeval(den, x);
  if (d == 0) throw std::domain_error("evaluation at a pole");
  return qeval(num, x) / d;
}

std::string RationalFn::str() const {
  if (den.size() == 1) return qstr(num);
  return "(" + qstr(num) + ")/(" + qstr(den) + ")";
}

}  // namespace pak
