#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace pak {

// Finite field F_p[z]/(m) with m monic irreducible. Elements are coefficient
// vectors of length f.
class Fq {
 public:
  using E = std::vector<long>;

  Fq(long p, std::vector<long> modulus);
  static Fq prime_field(long p) { return Fq(p, {0, 1}); }

  long p() const { return p_; }
  int f() const { return f_; }
  std::uint64_t q() const { return q_; }
  const std::vector<long>& modulus() const { return mod_; }

  E zero() const { return E(f_, 0); }
  E one() const { return from_int(1); }
  E from_int(long a) const;
  E gen() const;
  bool is_zero(const E& a) const;
  E add(const E& a, const E& b) const;
  E sub(const E& a, const E& b) const;
  E neg(const E& a) const;
  E mul(const E& a, const E& b) const;
  E pow(E a, std::uint64_t n) const;
  E inv(const E& a) const;
  E from_index(std::uint64_t k) const;
  std::uint64_t index(const E& a) const;
  E random(std::mt19937_64& rng) const;

 private:
  long p_;
  int f_;
  std::uint64_t q_;
  std::vector<long> mod_;
};

using FqPoly = std::vector<Fq::E>;

void fq_trim(const Fq& F, FqPoly& a);
int fq_deg(const FqPoly& a);
FqPoly fq_add(const Fq& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_sub(const Fq& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_mul(const Fq& F, const FqPoly& a, const FqPoly& b);
std::pair<FqPoly, FqPoly> fq_divmod(const Fq& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_gcd(const Fq& F, FqPoly a, FqPoly b);
FqPoly fq_monic(const Fq& F, const FqPoly& a);
FqPoly fq_powmod(const Fq& F, const FqPoly& base, std::uint64_t n, const FqPoly& mod);
FqPoly fq_derivative(const Fq& F, const FqPoly& a);
Fq::E fq_eval(const Fq& F, const FqPoly& a, const Fq::E& x);

// Distinct roots with multiplicities.
std::vector<std::pair<Fq::E, int>> fq_roots(const Fq& F, const FqPoly& a);
// Smallest degree of an irreducible factor of a (a nonconstant).
int fq_min_factor_degree(const Fq& F, const FqPoly& a);
bool fq_is_irreducible(const Fq& F, const FqPoly& a);

// First monic irreducible polynomial of degree f over F_p in a fixed
// enumeration order, as integer coefficients low to high.
std::vector<long> first_irreducible(long p, int f);

}  // namespace pak
