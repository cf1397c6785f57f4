#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "pak/linalg.hpp"
#include "pak/qp.hpp"

namespace pak {

struct InvalidCupMatrix : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularDuality : std::logic_error {
  using std::logic_error::logic_error;
};

struct RationalKit {
  using S = mpq_class;
  S zero() const { return 0; }
  S from(const mpq_class& q) const { return q; }
};

struct QpKit {
  using S = Qp;
  Ctx ctx;
  S zero() const { return Qp(ctx); }
  S from(const mpq_class& q) const { return Qp(ctx, q); }
};

// H^1_dR(X) with basis w_1..w_g (indices 0..g-1) and the W-basis wbar_1..wbar_g
// (indices g..2g-1); cup[a][b] = tr(e_a cup e_b).
template <class Kit>
struct DeRhamSpace {
  using S = typename Kit::S;
  int g = 1;
  Kit kit;
  Mat<S> cup;

  int dim() const { return 2 * g; }
  int omega(int i) const { return i; }
  int omega_bar(int i) const { return g + i; }

  static DeRhamSpace standard(int g, Kit kit = {}) {
    if (g < 1) throw std::invalid_argument("genus must be at least 1");
    DeRhamSpace X{g, kit, Mat<S>(2 * g, std::vector<S>(2 * g, kit.zero()))};
    for (int i = 0; i < g; ++i) {
      X.cup[g + i][i] = kit.from(1);
      X.cup[i][g + i] = kit.from(-1);
    }
    return X;
  }

  static DeRhamSpace from_cup(int g, Kit kit, Mat<S> cup) {
    if (g < 1) throw std::invalid_argument("genus must be at least 1");
    if (static_cast<int>(cup.size()) != 2 * g) throw InvalidCupMatrix("cup matrix has the wrong size");
    for (auto& row : cup)
      if (static_cast<int>(row.size()) != 2 * g) throw InvalidCupMatrix("cup matrix has the wrong size");
    for (int a = 0; a < 2 * g; ++a)
      for (int b = 0; b < 2 * g; ++b) {
        if (!la_zero(cup[a][b] + cup[b][a])) throw InvalidCupMatrix("cup matrix is not antisymmetric");
        bool same_block = (a < g) == (b < g);
        if (same_block && !la_zero(cup[a][b])) throw InvalidCupMatrix("W or holomorphic block is not isotropic");
        if (a >= g && b < g && !la_zero(cup[a][b] - kit.from(a - g == b ? 1 : 0)))
          throw InvalidCupMatrix("W basis is not dual to the holomorphic basis");
      }
    return DeRhamSpace{g, kit, std::move(cup)};
  }
};

template <class S>
struct H1Class {
  std::vector<S> coords;
};

// H^1 (x) Omega^1: coords[a][j] is the coefficient of e_a (x) w_j
template <class S>
struct HTensorClass {
  Mat<S> coords;
};

// on X x X: rows 0..2g-1 are pi1^* e_a, rows 2g..4g-1 are pi2^* e_a;
// columns 0..g-1 are pi1^* w_j, g..2g-1 are pi2^* w_j
template <class S>
struct KunnethHTensor {
  Mat<S> coords;
};

// top_i is the trace of the pi_i^* H^2 part; mixed[a][b] is the coefficient of
// pi1^* e_a cup pi2^* e_b
template <class S>
struct H2Kunneth {
  S top1, top2;
  Mat<S> mixed;
};

template <class Kit>
HTensorClass<typename Kit::S> zero_htensor(const DeRhamSpace<Kit>& X) {
  return {Mat<typename Kit::S>(X.dim(), std::vector<typename Kit::S>(X.g, X.kit.zero()))};
}

template <class Kit>
KunnethHTensor<typename Kit::S> zero_kunneth(const DeRhamSpace<Kit>& X) {
  return {Mat<typename Kit::S>(2 * X.dim(), std::vector<typename Kit::S>(2 * X.g, X.kit.zero()))};
}

template <class Kit>
H2Kunneth<typename Kit::S> zero_h2(const DeRhamSpace<Kit>& X) {
  return {X.kit.zero(), X.kit.zero(), Mat<typename Kit::S>(X.dim(), std::vector<typename Kit::S>(X.dim(), X.kit.zero()))};
}

template <class Kit>
HTensorClass<typename Kit::S> mu(const DeRhamSpace<Kit>& X) {
  auto T = zero_htensor(X);
  for (int i = 0; i < X.g; ++i) T.coords[X.omega_bar(i)][i] = X.kit.from(mpq_class(1, X.g));
  return T;
}

template <class Kit>
HTensorClass<typename Kit::S> curvature_admissible(long deg, const DeRhamSpace<Kit>& X) {
  auto T = mu(X);
  for (auto& row : T.coords)
    for (auto& x : row) x = x * X.kit.from(deg);
  return T;
}

// pi_k^* for k = 1, 2
template <class Kit>
KunnethHTensor<typename Kit::S> pi_star(const DeRhamSpace<Kit>& X, int k, const HTensorClass<typename Kit::S>& T) {
  auto R = zero_kunneth(X);
  int ro = k == 1 ? 0 : X.dim(), co = k == 1 ? 0 : X.g;
  for (int a = 0; a < X.dim(); ++a)
    for (int j = 0; j < X.g; ++j) R.coords[ro + a][co + j] = T.coords[a][j];
  return R;
}

template <class Kit>
KunnethHTensor<typename Kit::S> phi(const DeRhamSpace<Kit>& X) {
  auto m = mu(X);
  auto R = pi_star(X, 1, m);
  auto R2 = pi_star(X, 2, m);
  for (int A = 0; A < 2 * X.dim(); ++A)
    for (int J = 0; J < 2 * X.g; ++J) R.coords[A][J] = R.coords[A][J] + R2.coords[A][J];
  auto one = X.kit.from(1);
  for (int i = 0; i < X.g; ++i) {
    // pi1^* wbar_i (x) pi2^* w_i and pi2^* wbar_i (x) pi1^* w_i
    auto& x = R.coords[X.omega_bar(i)][X.g + i];
    x = x - one;
    auto& y = R.coords[X.dim() + X.omega_bar(i)][i];
    y = y - one;
  }
  return R;
}

template <class Kit>
HTensorClass<typename Kit::S> diagonal_pullback(const DeRhamSpace<Kit>& X, const KunnethHTensor<typename Kit::S>& T) {
  auto R = zero_htensor(X);
  for (int A = 0; A < 2 * X.dim(); ++A)
    for (int J = 0; J < 2 * X.g; ++J) {
      auto& x = R.coords[A % X.dim()][J % X.g];
      x = x + T.coords[A][J];
    }
  return R;
}

// pullback along x -> (P, x)
template <class Kit>
HTensorClass<typename Kit::S> section_pullback(const DeRhamSpace<Kit>& X, const KunnethHTensor<typename Kit::S>& T) {
  auto R = zero_htensor(X);
  for (int a = 0; a < X.dim(); ++a)
    for (int j = 0; j < X.g; ++j) R.coords[a][j] = T.coords[X.dim() + a][X.g + j];
  return R;
}

// trace of the cup product H^1 (x) Omega^1 -> H^2(X)
template <class Kit>
typename Kit::S cup_trace(const DeRhamSpace<Kit>& X, const HTensorClass<typename Kit::S>& T) {
  auto s = X.kit.zero();
  for (int a = 0; a < X.dim(); ++a)
    for (int j = 0; j < X.g; ++j) s = s + T.coords[a][j] * X.cup[a][X.omega(j)];
  return s;
}

template <class Kit>
H2Kunneth<typename Kit::S> cup_of_htensor(const DeRhamSpace<Kit>& X, const KunnethHTensor<typename Kit::S>& T) {
  auto R = zero_h2(X);
  int n = X.dim(), g = X.g;
  for (int A = 0; A < 2 * n; ++A)
    for (int J = 0; J < 2 * g; ++J) {
      const auto& t = T.coords[A][J];
      if (la_zero(t)) continue;
      int a = A % n, j = X.omega(J % g);
      bool first_leg = A < n, first_form = J < g;
      if (first_leg && first_form) {
        R.top1 = R.top1 + t * X.cup[a][j];
      } else if (!first_leg && !first_form) {
        R.top2 = R.top2 + t * X.cup[a][j];
      } else if (first_leg) {
        R.mixed[a][j] = R.mixed[a][j] + t;
      } else {
        // pi2^* e_a cup pi1^* w_j = -pi1^* w_j cup pi2^* e_a
        R.mixed[j][a] = R.mixed[j][a] - t;
      }
    }
  return R;
}

// tr(phi cup psi) on X x X
template <class Kit>
typename Kit::S trace_pairing(const DeRhamSpace<Kit>& X, const H2Kunneth<typename Kit::S>& u,
                              const H2Kunneth<typename Kit::S>& v) {
  typename Kit::S s = u.top1 * v.top2 + u.top2 * v.top1;
  int n = X.dim();
  // (pi1^* a cup pi2^* b) cup (pi1^* c cup pi2^* d) = -pi1^*(a cup c) cup pi2^*(b cup d)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (la_zero(u.mixed[a][b])) continue;
      for (int c = 0; c < n; ++c) {
        if (la_zero(X.cup[a][c])) continue;
        for (int d = 0; d < n; ++d) {
          if (la_zero(v.mixed[c][d]) || la_zero(X.cup[b][d])) continue;
          s = s - u.mixed[a][b] * v.mixed[c][d] * X.cup[a][c] * X.cup[b][d];
        }
      }
    }
  return s;
}

// tr(Delta^* phi)
template <class Kit>
typename Kit::S trace_diagonal(const DeRhamSpace<Kit>& X, const H2Kunneth<typename Kit::S>& u) {
  typename Kit::S s = u.top1 + u.top2;
  for (int a = 0; a < X.dim(); ++a)
    for (int b = 0; b < X.dim(); ++b) s = s + u.mixed[a][b] * X.cup[a][b];
  return s;
}

template <class Kit>
std::vector<H2Kunneth<typename Kit::S>> kunneth_basis(const DeRhamSpace<Kit>& X) {
  std::vector<H2Kunneth<typename Kit::S>> B;
  auto one = X.kit.from(1);
  auto e = zero_h2(X);
  e.top1 = one;
  B.push_back(e);
  e = zero_h2(X);
  e.top2 = one;
  B.push_back(e);
  for (int a = 0; a < X.dim(); ++a)
    for (int b = 0; b < X.dim(); ++b) {
      e = zero_h2(X);
      e.mixed[a][b] = one;
      B.push_back(e);
    }
  return B;
}

// the class cl with tr(cl cup phi) = tr(Delta^* phi) for every phi
template <class Kit>
H2Kunneth<typename Kit::S> diagonal_class(const DeRhamSpace<Kit>& X) {
  using S = typename Kit::S;
  auto B = kunneth_basis(X);
  size_t N = B.size();
  Mat<S> A(N, std::vector<S>(N, X.kit.zero())), r(N, std::vector<S>(1, X.kit.zero()));
  for (size_t k = 0; k < N; ++k) {
    for (size_t l = 0; l < N; ++l) A[k][l] = trace_pairing(X, B[l], B[k]);
    r[k][0] = trace_diagonal(X, B[k]);
  }
  Mat<S> x;
  try {
    x = la_solve(A, r);
  } catch (const SingularMatrix&) {
    throw SingularDuality("trace pairing on H^2(X x X) is degenerate");
  }
  auto cl = zero_h2(X);
  cl.top1 = x[0][0];
  cl.top2 = x[1][0];
  size_t k = 2;
  for (int a = 0; a < X.dim(); ++a)
    for (int b = 0; b < X.dim(); ++b) cl.mixed[a][b] = x[k++][0];
  return cl;
}

// projection onto W along Omega^1
template <class Kit>
H1Class<typename Kit::S> w_projection(const DeRhamSpace<Kit>& X, const H1Class<typename Kit::S>& h) {
  H1Class<typename Kit::S> r = h;
  for (int i = 0; i < X.g; ++i) r.coords[X.omega(i)] = X.kit.zero();
  return r;
}

template <class Kit>
typename Kit::S cup_h1(const DeRhamSpace<Kit>& X, const H1Class<typename Kit::S>& u, const H1Class<typename Kit::S>& v) {
  auto s = X.kit.zero();
  for (int a = 0; a < X.dim(); ++a)
    for (int b = 0; b < X.dim(); ++b) s = s + u.coords[a] * v.coords[b] * X.cup[a][b];
  return s;
}

}  // namespace pak
