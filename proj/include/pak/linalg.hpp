#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "pak/field.hpp"

namespace pak {

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pivot scores: smaller is a better pivot; zero entries are never chosen.
inline bool la_zero(const mpq_class& a) { return a == 0; }
inline long la_score(const mpq_class&) { return 0; }
inline bool la_zero(const Qp& a) { return a.is_zero(); }
inline std::int64_t la_score(const Qp& a) { return a.val(); }
inline bool la_zero(const Elem& a) { return a.is_zero(); }
inline std::int64_t la_score(const Elem& a) { return a.val_pi(); }

template <class T>
using Mat = std::vector<std::vector<T>>;

// Solve A X = B with A square; T needs +, -, *, / and the two helpers above.
template <class T>
Mat<T> la_solve(Mat<T> A, Mat<T> B) {
  size_t n = A.size();
  size_t m = B.empty() ? 0 : B[0].size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t r = col; r < n; ++r) {
      if (la_zero(A[r][col])) continue;
      if (piv == n || la_score(A[r][col]) < la_score(A[piv][col])) piv = r;
    }
    if (piv == n) throw SingularMatrix("singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(B[piv], B[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || la_zero(A[r][col])) continue;
      T factor = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] = A[r][c] - factor * A[col][c];
      for (size_t c = 0; c < m; ++c) B[r][c] = B[r][c] - factor * B[col][c];
    }
  }
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < m; ++c) B[r][c] = B[r][c] / A[r][r];
  return B;
}

template <class T>
T la_det(Mat<T> A, const T& one) {
  size_t n = A.size();
  T det = one;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t r = col; r < n; ++r) {
      if (la_zero(A[r][col])) continue;
      if (piv == n || la_score(A[r][col]) < la_score(A[piv][col])) piv = r;
    }
    if (piv == n) return one - one;
    if (piv != col) {
      std::swap(A[piv], A[col]);
      det = -det;
    }
    det = det * A[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (la_zero(A[r][col])) continue;
      T factor = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] = A[r][c] - factor * A[col][c];
    }
  }
  return det;
}

}  // namespace pak
