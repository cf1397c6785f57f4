#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pak/fq.hpp"
#include "pak/qp.hpp"

namespace pak {

struct ReduciblePolynomial : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSplitting : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SplittingFieldTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Elem;
struct FieldData;
using Field = std::shared_ptr<const FieldData>;

// Map of fields given by the images of zeta and pi, stored as coordinates
// in the target.
struct FieldHom {
  Field src, dst;
  std::vector<Qp> zeta_img, pi_img;
};

// A finite extension of Q_p in the normal form Q_q = Q_p[zeta]/(U) followed
// by an Eisenstein polynomial E over Q_q. Coordinates of an element are
// indexed by j*f + i for zeta^i pi^j.
struct FieldData {
  Ctx ctx;
  int f = 1, e = 1;
  std::vector<Qp> U;               // monic degree f, integer coefficients
  std::vector<std::vector<Qp>> E;  // monic degree e, coefficients in Q_q
  Fq residue;
  std::string label;
  // optional tower data: the field this one was built over, and the inclusion
  Field base;
  std::optional<FieldHom> from_base;
  // defining polynomial over the base (coefficients as base coordinates)
  // and the root it was adjoined with (coordinates here)
  std::vector<std::vector<Qp>> min_poly;
  std::vector<Qp> generator;
  std::vector<Qp> pi_inv;

  FieldData(Ctx c, Fq res) : ctx(std::move(c)), residue(std::move(res)) {}
  int degree() const { return e * f; }
  long p() const { return ctx->p(); }
};

Field qp_field(const Ctx& ctx);
Field unramified_field(const Ctx& ctx, int f);
// Assemble a field from U (integers) and Eisenstein E over Q_q; fills the
// residue field and pi^-1.
std::shared_ptr<FieldData> build_field(const Ctx& ctx, const std::vector<long>& U,
                                       std::vector<std::vector<Qp>> E, std::string label);
void finalize_field(const std::shared_ptr<FieldData>& K);

// Element of a Field with Q_p coordinates.
class Elem {
 public:
  Elem() = default;
  explicit Elem(Field K);
  Elem(Field K, long n);
  Elem(Field K, const mpq_class& q);
  Elem(Field K, const Qp& a);
  Elem(Field K, std::vector<Qp> coords);

  static Elem pi(const Field& K);
  static Elem zeta(const Field& K);
  // zero known to absolute precision a (in units of 1/e)
  static Elem zero_mod(const Field& K, std::int64_t a_pi);
  // lift of a residue field element using zeta coordinates only
  static Elem lift(const Field& K, const Fq::E& r);

  const Field& field() const { return K_; }
  const std::vector<Qp>& coords() const { return c_; }
  const Qp& coord(int i, int j) const { return c_[j * K_->f + i]; }

  // valuations and precision in units of 1/e
  std::int64_t val_pi() const;
  std::int64_t abs_prec_pi() const;
  Rat valuation() const { return Rat(val_pi() == Qp::kInf ? Qp::kInf : val_pi(), 1) / Rat(K_->e); }
  Rat abs_prec() const;
  std::int64_t rel_prec_pi() const { return is_zero() ? 0 : abs_prec_pi() - val_pi(); }
  bool is_zero() const;
  bool is_exact_zero() const;
  bool is_integral() const { return val_pi() >= 0; }
  // residue of an integral element
  Fq::E residue() const;
  // nonzero element of Q_p only (all other coordinates zero)
  bool in_base_qp() const;
  Qp to_qp() const;

  Elem operator-() const;
  friend Elem operator+(const Elem& a, const Elem& b);
  friend Elem operator-(const Elem& a, const Elem& b);
  friend Elem operator*(const Elem& a, const Elem& b);
  friend Elem operator/(const Elem& a, const Elem& b);
  Elem& operator+=(const Elem& o) { return *this = *this + o; }
  Elem& operator-=(const Elem& o) { return *this = *this - o; }
  Elem& operator*=(const Elem& o) { return *this = *this * o; }
  Elem& operator/=(const Elem& o) { return *this = *this / o; }
  Elem scale(const Qp& a) const;
  Elem scale(const mpq_class& a) const;

  Elem inverse() const;
  Elem pow(std::int64_t n) const;
  // multiply by pi^k for any integer k
  Elem mul_pi_pow(std::int64_t k) const;
  Elem truncate_abs_pi(std::int64_t a) const;

  std::string str() const;

 private:
  Field K_;
  std::vector<Qp> c_;
  void clamp();
};

Elem apply(const FieldHom& h, const Elem& x);
FieldHom compose(const FieldHom& first, const FieldHom& second);
FieldHom identity_hom(const Field& K);

// Teichmuller representative of the residue of an integral unit.
Elem teichmuller(const Elem& x);

// A known nonzero difference must sit target/e beyond min(v(x), v(y)). A
// difference that vanishes to tracked precision needs that precision to reach
// target/e past min(v(x), v(y), 0).
bool assert_equal(const Elem& x, const Elem& y, std::int64_t target);
bool assert_equal(const Qp& x, const Qp& y, std::int64_t target);

}  // namespace pak
