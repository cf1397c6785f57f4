#include "pak/qp.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace pak {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t vp(const mpz_class& a, long p) {
  if (a == 0) return Qp::kInf;
  mpz_class t = a;
  std::int64_t k = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++k;
  }
  return k;
}

PrimeContext::PrimeContext(long p, int cap) : p_(p), pz_(p), cap_(cap) {
  pows_.resize(4 * cap + 16);
  pows_[0] = 1;
  for (size_t i = 1; i < pows_.size(); ++i) pows_[i] = pows_[i - 1] * p;
}

mpz_class PrimeContext::pow(std::int64_t k) const {
  if (k < 0) throw std::logic_error("negative power of p");
  if (k < static_cast<std::int64_t>(pows_.size())) return pows_[k];
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p_, static_cast<unsigned long>(k));
  return r;
}

std::shared_ptr<const PrimeContext> PrimeContext::get(long p, int cap) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::shared_ptr<const PrimeContext>> cache;
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (cap < 4) throw std::invalid_argument("precision must be at least 4");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, cap}];
  if (!slot) slot = std::make_shared<PrimeContext>(p, cap);
  return slot;
}

void Qp::normalize(std::int64_t absprec) {
  if (unit_ == 0 || absprec <= val_) {
    unit_ = 0;
    rel_ = 0;
    val_ = absprec;
    return;
  }
  std::int64_t room = absprec - val_;
  mpz_class m = ctx_->pow(room);
  mpz_fdiv_r(unit_.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t());
  if (unit_ == 0) {
    rel_ = 0;
    val_ = absprec;
    return;
  }
  long p = ctx_->p();
  while (mpz_divisible_ui_p(unit_.get_mpz_t(), p)) {
    mpz_divexact_ui(unit_.get_mpz_t(), unit_.get_mpz_t(), p);
    ++val_;
  }
  std::int64_t r = absprec - val_;
  if (r > ctx_->cap()) r = ctx_->cap();
  rel_ = static_cast<int>(r);
  mpz_fdiv_r(unit_.get_mpz_t(), unit_.get_mpz_t(), ctx_->pow(rel_).get_mpz_t());
}

Qp::Qp(Ctx c, long n) : Qp(std::move(c), mpz_class(n)) {}

Qp::Qp(Ctx c, const mpz_class& n) : ctx_(std::move(c)) {
  if (n == 0) return;
  val_ = 0;
  unit_ = n;
  long p = ctx_->p();
  while (mpz_divisible_ui_p(unit_.get_mpz_t(), p)) {
    mpz_divexact_ui(unit_.get_mpz_t(), unit_.get_mpz_t(), p);
    ++val_;
  }
  rel_ = ctx_->cap();
  mpz_fdiv_r(unit_.get_mpz_t(), unit_.get_mpz_t(), ctx_->pow(rel_).get_mpz_t());
}

Qp::Qp(Ctx c, const mpq_class& q) : ctx_(std::move(c)) {
  if (q == 0) return;
  Qp a(ctx_, q.get_num());
  Qp b(ctx_, q.get_den());
  *this = a / b;
}

Qp Qp::from_parts(Ctx c, std::int64_t val, mpz_class unit, int rel) {
  Qp r(std::move(c));
  r.val_ = val;
  r.unit_ = std::move(unit);
  r.normalize(val + rel);
  return r;
}

Qp Qp::zero_mod(Ctx c, std::int64_t absprec) {
  Qp r(std::move(c));
  r.val_ = absprec;
  return r;
}

Qp Qp::p_power(Ctx c, std::int64_t k) {
  Qp r(std::move(c));
  r.val_ = k;
  r.unit_ = 1;
  r.rel_ = r.ctx_->cap();
  return r;
}

long Qp::unit_residue() const {
  if (rel_ == 0) return 0;
  return static_cast<long>(mpz_fdiv_ui(unit_.get_mpz_t(), ctx_->p()));
}

mpz_class Qp::lift_mod(std::int64_t k) const {
  if (k <= 0) return 0;
  if (rel_ == 0) return 0;
  if (val_ < 0) throw std::domain_error("lift of non-integral element");
  if (val_ >= k) return 0;
  mpz_class r = unit_ * ctx_->pow(val_);
  mpz_class m = ctx_->pow(k);
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

Qp Qp::operator-() const {
  Qp r = *this;
  if (rel_ > 0) {
    r.unit_ = -r.unit_;
    mpz_fdiv_r(r.unit_.get_mpz_t(), r.unit_.get_mpz_t(), ctx_->pow(rel_).get_mpz_t());
  }
  return r;
}

Qp operator+(const Qp& a, const Qp& b) {
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  if (a.ctx_ != b.ctx_) throw FieldMismatch("elements of different Q_p");
  std::int64_t A = std::min(a.abs_prec(), b.abs_prec());
  if (a.rel_ == 0 && b.rel_ == 0) return Qp::zero_mod(a.ctx_, A);
  std::int64_t v = std::min(a.rel_ ? a.val_ : Qp::kInf, b.rel_ ? b.val_ : Qp::kInf);
  if (A <= v) return Qp::zero_mod(a.ctx_, A);
  mpz_class s = 0;
  if (a.rel_) s += a.unit_ * a.ctx_->pow(a.val_ - v);
  if (b.rel_) s += b.unit_ * a.ctx_->pow(b.val_ - v);
  Qp r(a.ctx_);
  r.val_ = v;
  r.unit_ = std::move(s);
  r.normalize(A);
  return r;
}

Qp operator*(const Qp& a, const Qp& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return Qp(a.ctx_ ? a.ctx_ : b.ctx_);
  if (a.ctx_ != b.ctx_) throw FieldMismatch("elements of different Q_p");
  if (a.rel_ == 0 || b.rel_ == 0) return Qp::zero_mod(a.ctx_, a.val_ + b.val_);
  Qp r(a.ctx_);
  r.val_ = a.val_ + b.val_;
  r.rel_ = std::min(a.rel_, b.rel_);
  r.unit_ = a.unit_ * b.unit_;
  mpz_fdiv_r(r.unit_.get_mpz_t(), r.unit_.get_mpz_t(), a.ctx_->pow(r.rel_).get_mpz_t());
  return r;
}

Qp Qp::inverse() const {
  if (is_exact_zero()) throw ZeroArgument("inverse of zero");
  if (rel_ == 0) throw PrecisionExhausted("inverse of an element indistinguishable from zero");
  Qp r(ctx_);
  r.val_ = -val_;
  r.rel_ = rel_;
  mpz_class m = ctx_->pow(rel_);
  mpz_invert(r.unit_.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t());
  return r;
}

Qp operator/(const Qp& a, const Qp& b) {
  if (b.is_exact_zero()) throw ZeroArgument("division by zero");
  if (b.rel_ == 0) throw PrecisionExhausted("division by an element indistinguishable from zero");
  if (a.is_exact_zero()) return a;
  if (a.ctx_ != b.ctx_) throw FieldMismatch("elements of different Q_p");
  if (a.rel_ == 0) return Qp::zero_mod(a.ctx_, a.val_ - b.val_);
  return a * b.inverse();
}

Qp Qp::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  Qp result(ctx_, 1);
  Qp base = *this;
  while (n) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

Qp Qp::shift(std::int64_t k) const {
  if (is_exact_zero()) return *this;
  Qp r = *this;
  r.val_ += k;
  return r;
}

Qp Qp::truncate_abs(std::int64_t a) const {
  if (abs_prec() <= a) return *this;
  Qp r = *this;
  r.normalize(a);
  return r;
}

Qp Qp::as_exact() const {
  if (rel_ == 0) return Qp(ctx_);
  Qp r = *this;
  r.rel_ = ctx_->cap();
  return r;
}

Qp Qp::with_context(Ctx c) const {
  if (c->p() != ctx_->p()) throw FieldMismatch("context with a different prime");
  if (is_exact_zero()) return Qp(std::move(c));
  if (rel_ == 0) return zero_mod(std::move(c), val_);
  return from_parts(std::move(c), val_, unit_, rel_);
}

std::string Qp::str() const {
  std::ostringstream os;
  if (is_exact_zero()) return "0";
  if (rel_ == 0) {
    os << "O(" << ctx_->p() << "^" << val_ << ")";
    return os.str();
  }
  os << unit_.get_str() << "*" << ctx_->p() << "^" << val_ << " + O(" << ctx_->p() << "^" << abs_prec() << ")";
  return os.str();
}

}  // namespace pak
