#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace pak {

using Rat = boost::rational<std::int64_t>;

struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FieldMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared, immutable data for one prime and one precision cap.
class PrimeContext {
 public:
  static std::shared_ptr<const PrimeContext> get(long p, int cap);

  long p() const { return p_; }
  const mpz_class& pz() const { return pz_; }
  int cap() const { return cap_; }
  // p^k for 0 <= k; cached up to a bound, computed past it.
  mpz_class pow(std::int64_t k) const;

  PrimeContext(long p, int cap);

 private:
  long p_;
  mpz_class pz_;
  int cap_;
  std::vector<mpz_class> pows_;
};

using Ctx = std::shared_ptr<const PrimeContext>;

bool is_prime(long n);

// p-adic valuation of a nonzero integer.
std::int64_t vp(const mpz_class& a, long p);

// Element of Q_p with capped relative precision: p^val * unit, unit known
// modulo p^rel. rel == 0 means zero known modulo p^val; val == kInf is exact 0.
class Qp {
 public:
  static constexpr std::int64_t kInf = INT64_MAX / 4;

  Qp() = default;
  explicit Qp(Ctx c) : ctx_(std::move(c)), val_(kInf) {}
  Qp(Ctx c, long n);
  Qp(Ctx c, const mpz_class& n);
  Qp(Ctx c, const mpq_class& q);
  static Qp from_parts(Ctx c, std::int64_t val, mpz_class unit, int rel);
  static Qp zero_mod(Ctx c, std::int64_t absprec);
  static Qp p_power(Ctx c, std::int64_t k);

  const Ctx& ctx() const { return ctx_; }
  long p() const { return ctx_->p(); }

  bool is_exact_zero() const { return rel_ == 0 && val_ >= kInf; }
  // zero at the current precision
  bool is_zero() const { return rel_ == 0; }
  // valuation; for zero this is the known absolute precision
  std::int64_t val() const { return val_; }
  int rel() const { return rel_; }
  std::int64_t abs_prec() const { return rel_ == 0 ? val_ : val_ + rel_; }
  const mpz_class& unit() const { return unit_; }

  // residue of the unit part modulo p (0 for zero)
  long unit_residue() const;
  // integer congruent to this element modulo p^k; requires val >= 0
  mpz_class lift_mod(std::int64_t k) const;

  Qp operator-() const;
  Qp& operator+=(const Qp& o) { return *this = *this + o; }
  Qp& operator-=(const Qp& o) { return *this = *this - o; }
  Qp& operator*=(const Qp& o) { return *this = *this * o; }
  Qp& operator/=(const Qp& o) { return *this = *this / o; }

  friend Qp operator+(const Qp& a, const Qp& b);
  friend Qp operator-(const Qp& a, const Qp& b) { return a + (-b); }
  friend Qp operator*(const Qp& a, const Qp& b);
  friend Qp operator/(const Qp& a, const Qp& b);

  Qp inverse() const;
  Qp pow(std::int64_t n) const;
  // multiply by p^k exactly
  Qp shift(std::int64_t k) const;
  // lower absolute precision to at most a
  Qp truncate_abs(std::int64_t a) const;
  // raise relative precision to the cap by padding with zero digits
  Qp as_exact() const;
  // same digits in another context with the same prime; rel is capped there
  Qp with_context(Ctx c) const;

  std::string str() const;

 private:
  Ctx ctx_;
  std::int64_t val_ = kInf;
  int rel_ = 0;
  mpz_class unit_ = 0;

  void normalize(std::int64_t absprec);
};

}  // namespace pak
