#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace pak {

// Dense polynomial over Q, lowest degree first; the zero polynomial is empty.
using QPoly = std::vector<mpq_class>;

void qp_trim(QPoly& a);
int qdeg(const QPoly& a);
QPoly qadd(const QPoly& a, const QPoly& b);
QPoly qsub(const QPoly& a, const QPoly& b);
QPoly qmul(const QPoly& a, const QPoly& b);
QPoly qscale(const QPoly& a, const mpq_class& c);
std::pair<QPoly, QPoly> qdivmod(const QPoly& a, const QPoly& b);
QPoly qmonic(const QPoly& a);
QPoly qgcd(QPoly a, QPoly b);
// s a + t b = gcd (monic)
QPoly qxgcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t);
QPoly qderiv(const QPoly& a);
QPoly qpow(const QPoly& a, int n);
mpq_class qeval(const QPoly& a, const mpq_class& x);
// Yun: a = c * prod f_i^i, returns f_1, f_2, ... (monic, possibly 1)
std::vector<QPoly> qsquarefree(const QPoly& a);
QPoly qsquarefree_part(const QPoly& a);
std::string qstr(const QPoly& a, const std::string& var = "t");

// num/den in lowest terms with den monic.
struct RationalFn {
  QPoly num, den{1};

  RationalFn() = default;
  RationalFn(QPoly n, QPoly d);
  static RationalFn poly(QPoly n) { return RationalFn(std::move(n), QPoly{1}); }
  static RationalFn constant(const mpq_class& c) { return poly(QPoly{c}); }
  static RationalFn t() { return poly(QPoly{0, 1}); }

  bool is_zero() const { return num.empty(); }
  RationalFn operator+(const RationalFn& o) const;
  RationalFn operator-(const RationalFn& o) const;
  RationalFn operator*(const RationalFn& o) const;
  RationalFn operator/(const RationalFn& o) const;
  RationalFn operator-() const;
  RationalFn pow(int n) const;
  RationalFn derivative() const;
  bool operator==(const RationalFn& o) const { return num == o.num && den == o.den; }
  // order of vanishing at infinity: deg den - deg num
  int order_at_infinity() const;
  // r((a t + b) / (c t + d))
  RationalFn mobius(const mpq_class& a, const mpq_class& b, const mpq_class& c, const mpq_class& d) const;
  mpq_class eval(const mpq_class& x) const;
  std::string str() const;
};

}  // namespace pak
