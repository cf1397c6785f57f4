#include "pak/padic.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace pak {

namespace {

bool qp_integral_unit(const Elem& y) { return y.val_pi() == 0; }

// number of series terms needed so every later term lies below absolute
// precision A (units of 1/e) when v(z) = vz
long series_length(std::int64_t vz, std::int64_t A, int e, long p) {
  double lp = std::log(static_cast<double>(p));
  long last_bad = 0;
  long limit = static_cast<long>((A + 8 * e) / static_cast<double>(vz) * 4 + 64);
  for (long k = 1; k <= limit; ++k) {
    double tv = static_cast<double>(k) * vz - e * std::log(static_cast<double>(k)) / lp;
    if (tv < A + 1e-9) last_bad = k;
  }
  return last_bad + 1;
}

Elem log_one_unit(const Elem& y0) {
  const Field& K = y0.field();
  int e = K->e;
  long p = K->p();
  Elem one(K, 1);
  Elem y = y0;
  int s = 0;
  while (true) {
    Elem z = y - one;
    if (z.is_zero()) {
      Elem r = Elem::zero_mod(K, z.abs_prec_pi());
      return s ? r.scale(Qp(K->ctx, 1).shift(-s)) : r;
    }
    if (z.val_pi() <= 0) throw std::logic_error("log series argument is not a 1-unit");
    if (z.val_pi() * (p - 1) > e) break;
    y = y.pow(p);
    ++s;
  }
  Elem z = y - one;
  std::int64_t vz = z.val_pi();
  std::int64_t A = z.abs_prec_pi();
  long n = series_length(vz, A, e, p);
  Elem sum(K);
  Elem zk = z;
  for (long k = 1; k <= n; ++k) {
    mpq_class coef(k % 2 ? 1 : -1, k);
    coef.canonicalize();
    sum += zk.scale(coef);
    if (k < n) zk = zk * z;
  }
  if (s) sum = sum.scale(Qp(K->ctx, 1).shift(-s));
  return sum;
}

std::vector<Qp> basis_traces(const Field& K) {
  static std::mutex mu;
  static std::map<const FieldData*, std::pair<Field, std::vector<Qp>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(K.get());
    if (it != cache.end()) return it->second.second;
  }
  int n = K->degree();
  std::vector<Qp> tr(n, Qp(K->ctx));
  for (int k = 0; k < n; ++k) {
    Elem b = basis_element(K, k);
    for (int l = 0; l < n; ++l) {
      Elem t = b * basis_element(K, l);
      tr[k] += t.coords()[l];
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[K.get()] = {K, tr};
  return tr;
}

}  // namespace

Elem basis_element(const Field& K, int k) {
  std::vector<Qp> c(K->degree(), Qp(K->ctx));
  c[k] = Qp(K->ctx, 1);
  return Elem(K, c);
}

Elem padic_log(const Elem& x, const LogBranch& branch) {
  if (x.is_exact_zero()) throw ZeroArgument("log of zero");
  if (x.is_zero()) throw PrecisionExhausted("log of an element indistinguishable from zero");
  const Field& K = x.field();
  int e = K->e;
  long p = K->p();
  std::int64_t k = x.val_pi();
  std::int64_t qm1 = static_cast<std::int64_t>(K->residue.q()) - 1;
  std::int64_t m = e * qm1 * (p == 2 ? 2 : 1);
  // y = x^m p^(-v(x) m)
  std::int64_t vshift = k * qm1 * (p == 2 ? 2 : 1);
  Elem y = x.pow(m);
  y = y.scale(Qp(K->ctx, 1).shift(-vshift));
  if (!qp_integral_unit(y)) throw std::logic_error("normalized log argument is not a unit");
  Elem ly = log_one_unit(y).scale(mpq_class(1, m));
  if (k == 0) return ly;
  mpq_class vx(k, e);
  vx.canonicalize();
  Qp lam = branch.lambda.ctx() ? branch.lambda : Qp(K->ctx);
  return ly + Elem(K, Qp(K->ctx, vx) * lam);
}

Qp padic_log(const Qp& x, const LogBranch& branch) {
  Field K = qp_field(x.ctx());
  return padic_log(Elem(K, x), branch).to_qp();
}

Mat<Qp> mult_matrix(const Elem& x) {
  const Field& K = x.field();
  int n = K->degree();
  Mat<Qp> M(n, std::vector<Qp>(n, Qp(K->ctx)));
  for (int k = 0; k < n; ++k) {
    Elem t = x * basis_element(K, k);
    for (int l = 0; l < n; ++l) M[l][k] = t.coords()[l];
  }
  return M;
}

Qp trace_qp(const Elem& x) {
  const Field& K = x.field();
  std::vector<Qp> tr = basis_traces(K);
  Qp s(K->ctx);
  for (int k = 0; k < K->degree(); ++k) {
    const Qp& c = x.coords()[k];
    if (c.is_exact_zero()) continue;
    s += c * tr[k];
  }
  return s;
}

Qp norm_qp(const Elem& x) {
  return la_det(mult_matrix(x), Qp(x.field()->ctx, 1));
}

Elem trace(const Elem& x, const FieldHom& inc) {
  if (x.field() != inc.dst) throw FieldMismatch("element is not in the extension field");
  const Field& K = inc.src;
  int n = K->degree();
  if (K == inc.dst) return x;
  Mat<Qp> T(n, std::vector<Qp>(n, Qp(K->ctx)));
  Mat<Qp> rhs(n, std::vector<Qp>(1, Qp(K->ctx)));
  for (int i = 0; i < n; ++i) {
    Elem bi = basis_element(K, i);
    for (int k = 0; k < n; ++k) T[i][k] = trace_qp(bi * basis_element(K, k));
    rhs[i][0] = trace_qp(x * apply(inc, bi));
  }
  Mat<Qp> y = la_solve(T, rhs);
  std::vector<Qp> c(n);
  for (int k = 0; k < n; ++k) c[k] = y[k][0];
  return Elem(K, c);
}

namespace {

size_t rank_of(Mat<Qp> A) {
  size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = rows;
    for (size_t i = r; i < rows; ++i)
      if (!A[i][c].is_zero() && (piv == rows || A[i][c].val() < A[piv][c].val())) piv = i;
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (A[i][c].is_zero()) continue;
      Qp fct = A[i][c] / A[r][c];
      for (size_t j = c; j < cols; ++j) A[i][j] = A[i][j] - fct * A[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

Elem norm(const Elem& x, const FieldHom& inc) {
  if (x.field() != inc.dst) throw FieldMismatch("element is not in the extension field");
  const Field& K = inc.src;
  const Field& L = inc.dst;
  if (K == L) return x;
  int n = K->degree(), N = L->degree(), d = N / n;
  std::vector<Elem> binc;
  for (int i = 0; i < n; ++i) binc.push_back(apply(inc, basis_element(K, i)));
  // greedy K-basis of L among the Q_p basis vectors
  std::vector<Elem> w;
  Mat<Qp> cols;
  for (int k = 0; k < N && static_cast<int>(w.size()) < d; ++k) {
    Elem cand = basis_element(L, k);
    Mat<Qp> trial = cols;
    for (auto& b : binc) trial.push_back((b * cand).coords());
    if (rank_of(trial) == trial.size()) {
      cols = trial;
      w.push_back(cand);
    }
  }
  if (static_cast<int>(w.size()) != d) throw PrecisionExhausted("could not find a relative basis");
  Mat<Qp> M(N, std::vector<Qp>(N, Qp(K->ctx)));
  for (int c = 0; c < N; ++c)
    for (int r = 0; r < N; ++r) M[r][c] = cols[c][r];
  Mat<Qp> rhs(N, std::vector<Qp>(d, Qp(K->ctx)));
  for (int l = 0; l < d; ++l) {
    Elem t = x * w[l];
    for (int r = 0; r < N; ++r) rhs[r][l] = t.coords()[r];
  }
  Mat<Qp> s = la_solve(M, rhs);
  Mat<Elem> m(d, std::vector<Elem>(d, Elem(K)));
  for (int l = 0; l < d; ++l)
    for (int lp = 0; lp < d; ++lp) {
      std::vector<Qp> c(n);
      for (int i = 0; i < n; ++i) c[i] = s[lp * n + i][l];
      m[lp][l] = Elem(K, c);
    }
  return la_det(m, Elem(K, 1));
}

}  // namespace pak
