#pragma once

#include <random>

#include "pak/padic.hpp"

namespace pak::testing {

inline constexpr int kPrec = 32;
inline constexpr int kTol = kPrec - 4;

inline Ctx ctx(long p) { return PrimeContext::get(p, kPrec); }

inline long rand_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline mpq_class rand_q(std::mt19937_64& rng, long lo, long hi, long dmax) {
  mpq_class q(rand_int(rng, lo, hi), rand_int(rng, 1, dmax));
  q.canonicalize();
  return q;
}

// p-adic integer with full relative precision and random digits
inline Qp rand_qp_int(std::mt19937_64& rng, const Ctx& c) {
  mpz_class u = 0;
  for (int i = 0; i < c->cap(); ++i) u = u * c->p() + rand_int(rng, 0, c->p() - 1);
  return Qp(c, u);
}

inline Elem rand_elem(std::mt19937_64& rng, const Field& K, int vmin = 0, int vmax = 2) {
  std::vector<Qp> co;
  for (int k = 0; k < K->degree(); ++k) co.push_back(rand_qp_int(rng, K->ctx));
  Elem x(K, co);
  long s = rand_int(rng, vmin, vmax);
  return x.mul_pi_pow(s);
}

inline Elem rand_unit(std::mt19937_64& rng, const Field& K) {
  while (true) {
    Elem x = rand_elem(rng, K, 0, 0);
    if (x.val_pi() == 0) return x;
  }
}

inline Elem rand_nonzero(std::mt19937_64& rng, const Field& K, int vmin = 0, int vmax = 2) {
  while (true) {
    Elem x = rand_elem(rng, K, vmin, vmax);
    if (!x.is_zero()) return x;
  }
}

}  // namespace pak::testing
