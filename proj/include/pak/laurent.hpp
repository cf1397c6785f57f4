#pragma once

#include <map>
#include <vector>

#include "pak/padic.hpp"

namespace pak {

struct WindowUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LogTermPresent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadSubstitution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultWindow = 64;

// Truncated Laurent series: coefficients of z^k for low <= k < high are
// known, everything from z^high on is unknown.
class Laurent {
 public:
  Laurent() = default;
  Laurent(Field K, std::int64_t low, std::vector<Elem> c);
  // zero known below z^high
  static Laurent zero(const Field& K, std::int64_t high);
  // finite sum of monomials, known up to z^(low + window)
  static Laurent from_terms(const Field& K, const std::map<std::int64_t, Elem>& terms, int window = kDefaultWindow);
  static Laurent monomial(const Elem& a, std::int64_t k, int window = kDefaultWindow);

  const Field& field() const { return K_; }
  std::int64_t low() const { return low_; }
  std::int64_t high() const { return low_ + static_cast<std::int64_t>(c_.size()); }
  std::int64_t size() const { return static_cast<std::int64_t>(c_.size()); }
  const std::vector<Elem>& coeffs() const { return c_; }
  // coefficient of z^k; zero below low, WindowUnderflow at or above high
  Elem operator[](std::int64_t k) const;
  // index of the first coefficient distinguishable from zero
  std::int64_t order() const;
  bool is_zero() const;

  Laurent operator-() const;
  friend Laurent operator+(const Laurent& a, const Laurent& b);
  friend Laurent operator-(const Laurent& a, const Laurent& b);
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent scale(const Elem& a) const;
  Laurent scale(const mpq_class& a) const;
  // multiply by z^k
  Laurent shift(std::int64_t k) const;
  Laurent derivative() const;
  Laurent inverse() const;
  Laurent pow(std::int64_t n) const;
  Laurent truncate(std::int64_t high) const;
  // f(alpha(w)) for alpha of positive order
  Laurent compose(const Laurent& alpha) const;

 private:
  Field K_;
  std::int64_t low_ = 0;
  std::vector<Elem> c_;
};

// Element of M[L], L = log(z); terms[m] is the coefficient of L^m.
struct LogPoly {
  std::vector<Laurent> terms;

  int degree() const { return static_cast<int>(terms.size()) - 1; }
  const Field& field() const { return terms.at(0).field(); }
  void normalize();
  LogPoly operator+(const LogPoly& o) const;
  LogPoly operator*(const LogPoly& o) const;
  LogPoly scale(const Elem& a) const;
};

// body * dz
struct LogForm {
  LogPoly body;
};

// f + a L
struct A1Element {
  Laurent f;
  Elem a;

  A1Element operator+(const A1Element& o) const;
  A1Element scale(const Elem& c) const;
  LogPoly as_logpoly() const;
};

LogPoly log_z(const Field& K, int window = kDefaultWindow);
LogForm differentiate(const LogPoly& F);
LogPoly integrate(const LogForm& w);
Elem residue(const LogForm& w);
Elem res_dF(const A1Element& F);
A1Element to_a1(const LogPoly& F);
// Res(f dg) + b f_0 - a g_0
Elem double_index(const A1Element& F, const A1Element& G);
// F(alpha(w)) with L -> n L_w + log(a_n) + log(1 + u)
A1Element substitute(const A1Element& F, const Laurent& alpha, const LogBranch& branch);

}  // namespace pak
