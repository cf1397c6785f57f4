#include "pak/field.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace pak {

namespace {

using QqV = std::vector<Qp>;

std::int64_t floordiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceildiv(std::int64_t a, std::int64_t b) { return -floordiv(-a, b); }

QqV qq_zero(const FieldData& K) { return QqV(K.f, Qp(K.ctx)); }

bool qq_is_exact_zero(const QqV& a) {
  for (auto& c : a)
    if (!c.is_exact_zero()) return false;
  return true;
}

QqV qq_add(const QqV& a, const QqV& b) {
  QqV r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QqV qq_sub(const QqV& a, const QqV& b) {
  QqV r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QqV qq_mul(const FieldData& K, const QqV& a, const QqV& b) {
  int f = K.f;
  if (f == 1) return QqV{a[0] * b[0]};
  QqV t(2 * f - 1, Qp(K.ctx));
  for (int i = 0; i < f; ++i) {
    if (a[i].is_exact_zero()) continue;
    for (int j = 0; j < f; ++j) {
      if (b[j].is_exact_zero()) continue;
      t[i + j] += a[i] * b[j];
    }
  }
  for (int k = 2 * f - 2; k >= f; --k) {
    if (t[k].is_exact_zero()) continue;
    for (int j = 0; j < f; ++j)
      if (!K.U[j].is_exact_zero()) t[k - f + j] -= t[k] * K.U[j];
  }
  t.resize(f);
  return t;
}

std::mutex& registry_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

std::shared_ptr<FieldData> build_field(const Ctx& ctx, const std::vector<long>& U, std::vector<std::vector<Qp>> E,
                                       std::string label) {
  auto K = std::make_shared<FieldData>(ctx, Fq(ctx->p(), U));
  K->f = static_cast<int>(U.size()) - 1;
  K->e = static_cast<int>(E.size()) - 1;
  for (long u : U) K->U.push_back(u == 0 ? Qp(ctx) : Qp(ctx, u));
  K->E = std::move(E);
  K->label = std::move(label);
  return K;
}

void finalize_field(const std::shared_ptr<FieldData>& K) {
  Field F = K;
  Elem pinv = Elem::pi(F).inverse();
  K->pi_inv = pinv.coords();
}

Field qp_field(const Ctx& ctx) {
  static std::map<const PrimeContext*, Field> cache;
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto& slot = cache[ctx.get()];
  if (!slot) {
    std::vector<std::vector<Qp>> E{{-Qp(ctx, ctx->p())}, {Qp(ctx, 1)}};
    auto K = build_field(ctx, {0, 1}, std::move(E), "Q_" + std::to_string(ctx->p()));
    K->pi_inv = {Qp(ctx, 1).shift(-1)};
    slot = K;
  }
  return slot;
}

Field unramified_field(const Ctx& ctx, int f) {
  if (f == 1) return qp_field(ctx);
  static std::map<std::pair<const PrimeContext*, int>, Field> cache;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = cache.find({ctx.get(), f});
    if (it != cache.end()) return it->second;
  }
  std::vector<long> U = first_irreducible(ctx->p(), f);
  std::vector<std::vector<Qp>> E(2, QqV(f, Qp(ctx)));
  E[0][0] = -Qp(ctx, ctx->p());
  E[1][0] = Qp(ctx, 1);
  auto K = build_field(ctx, U, std::move(E), "Q_" + std::to_string(ctx->p()) + "^(" + std::to_string(f) + ")");
  K->pi_inv = QqV(f, Qp(ctx));
  K->pi_inv[0] = Qp(ctx, 1).shift(-1);
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto& slot = cache[{ctx.get(), f}];
  if (!slot) slot = K;
  return slot;
}

Elem::Elem(Field K) : K_(std::move(K)) { c_.assign(K_->degree(), Qp(K_->ctx)); }

Elem::Elem(Field K, long n) : Elem(std::move(K)) {
  if (n) c_[0] = Qp(K_->ctx, n);
}

Elem::Elem(Field K, const mpq_class& q) : Elem(std::move(K)) {
  if (q != 0) c_[0] = Qp(K_->ctx, q);
}

Elem::Elem(Field K, const Qp& a) : Elem(std::move(K)) {
  if (a.ctx() && a.ctx() != K_->ctx) throw FieldMismatch("Q_p element from another context");
  c_[0] = a.ctx() ? a : Qp(K_->ctx);
  clamp();
}

Elem::Elem(Field K, std::vector<Qp> coords) : K_(std::move(K)), c_(std::move(coords)) {
  if (static_cast<int>(c_.size()) != K_->degree()) throw std::invalid_argument("coordinate count mismatch");
  for (auto& c : c_)
    if (!c.ctx()) c = Qp(K_->ctx);
  clamp();
}

Elem Elem::pi(const Field& K) {
  Elem r(K);
  if (K->e == 1)
    r.c_[0] = Qp(K->ctx, K->p());
  else
    r.c_[K->f] = Qp(K->ctx, 1);
  return r;
}

Elem Elem::zeta(const Field& K) {
  Elem r(K);
  if (K->f == 1)
    r.c_[0] = -K->U[0];
  else
    r.c_[1] = Qp(K->ctx, 1);
  return r;
}

Elem Elem::zero_mod(const Field& K, std::int64_t a_pi) {
  Elem r(K);
  int e = K->e, f = K->f;
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) r.c_[j * f + i] = Qp::zero_mod(K->ctx, ceildiv(a_pi - j, e));
  return r;
}

Elem Elem::lift(const Field& K, const Fq::E& r) {
  Elem x(K);
  if (K->f == 1) {
    if (r[0]) x.c_[0] = Qp(K->ctx, r[0]);
    return x;
  }
  for (int i = 0; i < K->f; ++i)
    if (r[i]) x.c_[i] = Qp(K->ctx, r[i]);
  return x;
}

void Elem::clamp() {
  std::int64_t A = abs_prec_pi();
  if (A >= Qp::kInf) return;
  int e = K_->e, f = K_->f;
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) {
      Qp& c = c_[j * f + i];
      std::int64_t need = ceildiv(A - j, e);
      if (c.is_exact_zero())
        c = Qp::zero_mod(K_->ctx, need);
      else if (c.abs_prec() > need)
        c = c.truncate_abs(need);
    }
}

std::int64_t Elem::val_pi() const {
  std::int64_t v = Qp::kInf;
  int e = K_->e, f = K_->f;
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) {
      const Qp& c = c_[j * f + i];
      if (c.rel() > 0) v = std::min(v, e * c.val() + j);
    }
  return v;
}

std::int64_t Elem::abs_prec_pi() const {
  std::int64_t a = Qp::kInf;
  int e = K_->e, f = K_->f;
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) {
      const Qp& c = c_[j * f + i];
      if (!c.is_exact_zero()) a = std::min(a, e * c.abs_prec() + j);
    }
  return a;
}

Rat Elem::abs_prec() const {
  std::int64_t a = abs_prec_pi();
  return Rat(a, K_->e);
}

bool Elem::is_zero() const {
  for (auto& c : c_)
    if (c.rel() > 0) return false;
  return true;
}

bool Elem::is_exact_zero() const {
  for (auto& c : c_)
    if (!c.is_exact_zero()) return false;
  return true;
}

Fq::E Elem::residue() const {
  if (val_pi() < 0) throw std::domain_error("residue of a non-integral element");
  if (abs_prec_pi() <= 0) throw PrecisionExhausted("residue undetermined at current precision");
  Fq::E r(K_->f, 0);
  for (int i = 0; i < K_->f; ++i) {
    const Qp& c = c_[i];
    if (c.rel() > 0 && c.val() == 0) r[i] = c.unit_residue();
  }
  if (K_->f == 1) return r;
  return r;
}

bool Elem::in_base_qp() const {
  for (size_t k = 1; k < c_.size(); ++k)
    if (c_[k].rel() > 0) return false;
  return true;
}

Qp Elem::to_qp() const {
  if (!in_base_qp()) throw FieldMismatch("element does not lie in Q_p");
  Qp r = c_[0];
  std::int64_t A = abs_prec_pi();
  if (A < Qp::kInf) r = r.truncate_abs(ceildiv(A, K_->e));
  return r;
}

Elem Elem::operator-() const {
  Elem r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Elem operator+(const Elem& a, const Elem& b) {
  if (a.K_ != b.K_) throw FieldMismatch("addition across fields");
  Elem r(a.K_);
  for (size_t k = 0; k < a.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
  r.clamp();
  return r;
}

Elem operator-(const Elem& a, const Elem& b) {
  if (a.K_ != b.K_) throw FieldMismatch("subtraction across fields");
  Elem r(a.K_);
  for (size_t k = 0; k < a.c_.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
  r.clamp();
  return r;
}

Elem operator*(const Elem& a, const Elem& b) {
  if (a.K_ != b.K_) throw FieldMismatch("multiplication across fields");
  const FieldData& K = *a.K_;
  int e = K.e, f = K.f;
  if (e == 1 && f == 1) {
    Elem r(a.K_);
    r.c_[0] = a.c_[0] * b.c_[0];
    return r;
  }
  std::vector<QqV> A(e), B(e);
  for (int j = 0; j < e; ++j) {
    A[j].assign(a.c_.begin() + j * f, a.c_.begin() + (j + 1) * f);
    B[j].assign(b.c_.begin() + j * f, b.c_.begin() + (j + 1) * f);
  }
  std::vector<QqV> T(2 * e - 1, qq_zero(K));
  for (int j = 0; j < e; ++j) {
    if (qq_is_exact_zero(A[j])) continue;
    for (int k = 0; k < e; ++k) {
      if (qq_is_exact_zero(B[k])) continue;
      T[j + k] = qq_add(T[j + k], qq_mul(K, A[j], B[k]));
    }
  }
  for (int m = 2 * e - 2; m >= e; --m) {
    if (qq_is_exact_zero(T[m])) continue;
    for (int j = 0; j < e; ++j) T[m - e + j] = qq_sub(T[m - e + j], qq_mul(K, T[m], K.E[j]));
  }
  Elem r(a.K_);
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) r.c_[j * f + i] = T[j][i];
  r.clamp();
  return r;
}

Elem Elem::scale(const Qp& s) const {
  Elem r = *this;
  for (auto& c : r.c_) c = c * s;
  r.clamp();
  return r;
}

Elem Elem::scale(const mpq_class& s) const { return scale(Qp(K_->ctx, s)); }

Elem Elem::truncate_abs_pi(std::int64_t a) const {
  Elem r = *this;
  int e = K_->e, f = K_->f;
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) {
      Qp& c = r.c_[j * f + i];
      std::int64_t need = ceildiv(a - j, e);
      if (c.is_exact_zero() || c.abs_prec() > need) c = c.is_exact_zero() ? Qp::zero_mod(K_->ctx, need) : c.truncate_abs(need);
    }
  r.clamp();
  return r;
}

Elem Elem::inverse() const {
  if (is_exact_zero()) throw ZeroArgument("inverse of zero");
  if (is_zero()) throw PrecisionExhausted("inverse of an element indistinguishable from zero");
  const Field& K = K_;
  int e = K->e;
  std::int64_t k = val_pi();
  std::int64_t a = floordiv(k, e), b = k - a * e;
  // multiplier m with x*m a unit
  Elem m(K);
  m.c_[0] = Qp(K->ctx, 1).shift(-a);
  if (b > 0) {
    Elem t = pi(K).pow(e - b);
    m = (m * t).scale(Qp(K->ctx, 1).shift(-1));
  }
  Elem u = *this * m;
  Elem y = lift(K, K->residue.inv(u.residue()));
  Elem one(K, 1);
  for (int it = 0; it < 80; ++it) {
    Elem r = u * y - one;
    if (r.is_zero()) return y * m;
    y = y - y * r;
  }
  throw PrecisionExhausted("inverse did not converge");
}

Elem operator/(const Elem& a, const Elem& b) { return a * b.inverse(); }

Elem Elem::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  Elem r(K_, 1);
  Elem b = *this;
  while (n) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n) b *= b;
  }
  return r;
}

Elem Elem::mul_pi_pow(std::int64_t k) const {
  if (k == 0) return *this;
  if (K_->e == 1) {
    Elem r = *this;
    for (auto& c : r.c_) c = c.shift(k);
    return r;
  }
  if (k > 0) return *this * pi(K_).pow(k);
  Elem pinv(K_, K_->pi_inv);
  return *this * pinv.pow(-k);
}

std::string Elem::str() const {
  if (K_->degree() == 1) return c_[0].str();
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < c_.size(); ++k) os << (k ? ", " : "") << c_[k].str();
  os << "]";
  return os.str();
}

Elem apply(const FieldHom& h, const Elem& x) {
  if (x.field() != h.src) throw FieldMismatch("homomorphism applied outside its source");
  const Field& S = h.src;
  Elem Z(h.dst, h.zeta_img), P(h.dst, h.pi_img);
  int e = S->e, f = S->f;
  std::vector<Elem> zp(f, Elem(h.dst, 1));
  for (int i = 1; i < f; ++i) zp[i] = zp[i - 1] * Z;
  Elem r(h.dst);
  for (int j = e - 1; j >= 0; --j) {
    Elem a(h.dst);
    for (int i = 0; i < f; ++i) {
      const Qp& c = x.coord(i, j);
      if (c.is_exact_zero()) continue;
      a += zp[i].scale(c);
    }
    r = (j == e - 1) ? a : r * P + a;
  }
  return r;
}

FieldHom identity_hom(const Field& K) {
  return FieldHom{K, K, Elem::zeta(K).coords(), Elem::pi(K).coords()};
}

FieldHom compose(const FieldHom& first, const FieldHom& second) {
  if (first.dst != second.src) throw FieldMismatch("composition of incompatible maps");
  FieldHom r;
  r.src = first.src;
  r.dst = second.dst;
  r.zeta_img = apply(second, Elem(first.dst, first.zeta_img)).coords();
  r.pi_img = apply(second, Elem(first.dst, first.pi_img)).coords();
  return r;
}

Elem teichmuller(const Elem& x) {
  const Field& K = x.field();
  if (x.val_pi() != 0) throw std::domain_error("teichmuller lift needs a unit");
  std::uint64_t q = K->residue.q();
  Elem y = Elem::lift(K, x.residue());
  Elem qe(K, static_cast<long>(q));
  Elem one(K, 1);
  for (int it = 0; it < 80; ++it) {
    Elem yq1 = y.pow(static_cast<std::int64_t>(q) - 1);
    Elem g = y * yq1 - y;
    if (g.is_zero()) return y;
    y = y - g / (qe * yq1 - one);
  }
  throw PrecisionExhausted("teichmuller iteration did not converge");
}

bool assert_equal(const Elem& x, const Elem& y, std::int64_t target) {
  Elem d = x - y;
  std::int64_t m = std::min(x.is_zero() ? 0 : x.val_pi(), y.is_zero() ? 0 : y.val_pi());
  if (d.is_zero()) return d.abs_prec_pi() >= std::min<std::int64_t>(m, 0) + target;
  return d.val_pi() >= m + target;
}

bool assert_equal(const Qp& x, const Qp& y, std::int64_t target) {
  Qp d = x - y;
  std::int64_t m = std::min(x.is_zero() ? 0 : x.val(), y.is_zero() ? 0 : y.val());
  if (d.is_zero()) return d.abs_prec() >= std::min<std::int64_t>(m, 0) + target;
  return d.val() >= m + target;
}

}  // namespace pak
