#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pak/field.hpp"

namespace pak {

// Free module of rank r over Z (points are integer tuples) or over a local field.
template <class S>
using GroupPoint = std::vector<S>;

template <class S>
GroupPoint<S> add(const GroupPoint<S>& a, const GroupPoint<S>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rank mismatch");
  GroupPoint<S> r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

inline bool scalar_is_zero(const mpq_class& x) { return x == 0; }
inline bool scalar_is_zero(const Elem& x) { return x.is_zero(); }

// the residual of larger size: |.| for rationals, smaller valuation for p-adics
inline const mpq_class& larger(const mpq_class& a, const mpq_class& b) { return abs(a) >= abs(b) ? a : b; }
inline const Elem& larger(const Elem& a, const Elem& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return a.val_pi() <= b.val_pi() ? a : b;
}

// exponent vector -> rational coefficient
struct Polynomial {
  int rank = 1;
  std::map<std::vector<int>, mpq_class> terms;

  static Polynomial monomial(const std::vector<int>& exps, const mpq_class& c = 1);
  static Polynomial random(std::mt19937_64& rng, int rank, int degree, bool exact_degree = true);
  // all exponent vectors of total degree d in the given rank
  static std::vector<std::vector<int>> exponents(int rank, int d);

  int degree() const;  // -1 for the zero polynomial
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  std::string str() const;

  template <class S, class From>
  S eval(const GroupPoint<S>& x, From from) const {
    if (static_cast<int>(x.size()) != rank) throw std::invalid_argument("rank mismatch");
    S r = from(mpq_class(0));
    for (auto& [e, c] : terms) {
      S t = from(c);
      for (int i = 0; i < rank; ++i)
        for (int k = 0; k < e[i]; ++k) t = t * x[i];
      r = r + t;
    }
    return r;
  }
};

template <class S>
struct GroupFunction {
  int rank = 1;
  std::function<S(const GroupPoint<S>&)> eval;
  std::optional<Polynomial> poly;

  S operator()(const GroupPoint<S>& x) const { return eval(x); }
};

inline GroupFunction<mpq_class> rational_function(const Polynomial& P) {
  return {P.rank, [P](const GroupPoint<mpq_class>& x) { return P.eval(x, [](const mpq_class& q) { return q; }); }, P};
}

inline GroupFunction<Elem> local_function(const Polynomial& P, const Field& K) {
  return {P.rank, [P, K](const GroupPoint<Elem>& x) { return P.eval(x, [&K](const mpq_class& q) { return Elem(K, q); }); },
          P};
}

template <class S>
GroupFunction<S> operator+(const GroupFunction<S>& f, const GroupFunction<S>& g) {
  if (f.rank != g.rank) throw std::invalid_argument("rank mismatch");
  std::optional<Polynomial> P;
  if (f.poly && g.poly) P = *f.poly + *g.poly;
  return {f.rank, [f, g](const GroupPoint<S>& x) -> S { return f(x) + g(x); }, P};
}

// D^n f (x, h_1..h_n) = sum over I of (-1)^{n-|I|} f(x + sum_{i in I} h_i)
template <class S>
S dd_n(const GroupFunction<S>& f, const GroupPoint<S>& x, const std::vector<GroupPoint<S>>& h) {
  size_t n = h.size();
  if (n > 20) throw std::invalid_argument("too many steps");
  S acc = f(x);
  acc = acc - acc;
  for (unsigned long I = 0; I < (1UL << n); ++I) {
    GroupPoint<S> y = x;
    int size = 0;
    for (size_t i = 0; i < n; ++i)
      if (I >> i & 1) {
        y = add(y, h[i]);
        ++size;
      }
    S v = f(y);
    if ((static_cast<int>(n) - size) % 2)
      acc = acc - v;
    else
      acc = acc + v;
  }
  return acc;
}

// D^0 = f and D^n = (pi_n^* - m_n^*) D^{n-1}
template <class S>
S dd_recursive(const GroupFunction<S>& f, const GroupPoint<S>& x, const std::vector<GroupPoint<S>>& h) {
  if (h.empty()) return f(x);
  std::vector<GroupPoint<S>> head(h.begin(), h.end() - 1);
  return S(dd_recursive(f, x, head) - dd_recursive(f, add(x, h.back()), head));
}

template <class S>
struct Sample {
  GroupPoint<S> x;
  std::vector<GroupPoint<S>> h;
};

template <class S>
S max_residual(const std::vector<S>& rs) {
  if (rs.empty()) throw std::invalid_argument("no samples");
  S r = rs[0];
  for (auto& v : rs) r = larger(r, v);
  return r;
}

// the recursion produces (-1)^n D^n
template <class S>
S recursion_check(const GroupFunction<S>& f, const std::vector<Sample<S>>& samples) {
  std::vector<S> rs;
  for (auto& s : samples) {
    S rec = dd_recursive(f, s.x, s.h);
    if (s.h.size() % 2) rec = -rec;
    rs.push_back(S(dd_n(f, s.x, s.h) - rec));
  }
  return max_residual(rs);
}

// D^n with h_i replaced by 0
template <class S>
S restriction_vanishing(const GroupFunction<S>& f, const std::vector<Sample<S>>& samples, size_t i) {
  std::vector<S> rs;
  for (auto s : samples) {
    if (i >= s.h.size()) throw std::out_of_range("step index out of range");
    for (auto& c : s.h[i]) c = c - c;
    rs.push_back(dd_n(f, s.x, s.h));
  }
  return max_residual(rs);
}

template <class S>
struct DeterminacyReport {
  S residual;
  int certificate_degree = -1;
  bool determined = false;
};

// G' = G + certificate; D^3 G and D^3 G' agree when the certificate has degree <= 2
template <class S>
DeterminacyReport<S> green_determinacy_demo(const GroupFunction<S>& G, const GroupFunction<S>& G2,
                                            const GroupFunction<S>& certificate,
                                            const std::vector<Sample<S>>& samples) {
  if (!certificate.poly) throw std::invalid_argument("certificate must be a polynomial");
  std::vector<S> rs;
  for (auto& s : samples) {
    if (s.h.size() != 3) throw std::invalid_argument("D^3 needs three steps");
    if (!scalar_is_zero(S(G2(s.x) - G(s.x) - certificate(s.x))))
      throw std::invalid_argument("certificate does not match G' - G");
    rs.push_back(S(dd_n(G2, s.x, s.h) - dd_n(G, s.x, s.h)));
  }
  DeterminacyReport<S> r{max_residual(rs), certificate.poly->degree(), false};
  r.determined = scalar_is_zero(r.residual);
  return r;
}

// random integer points and steps in [-bound, bound]^r
std::vector<Sample<mpq_class>> integer_samples(std::mt19937_64& rng, int rank, int n, int count, long bound = 9);
std::vector<Sample<Elem>> local_samples(const std::vector<Sample<mpq_class>>& s, const Field& K);

}  // namespace pak
