#include "pak/fq.hpp"

#include <stdexcept>

namespace pak {

namespace {

long md(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

long inv_mod(long a, long p) {
  long t = 0, nt = 1, r = p, nr = md(a, p);
  while (nr) {
    long q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw std::domain_error("not invertible mod p");
  return md(t, p);
}

}  // namespace

Fq::Fq(long p, std::vector<long> modulus) : p_(p), mod_(std::move(modulus)) {
  f_ = static_cast<int>(mod_.size()) - 1;
  if (f_ < 1 || md(mod_.back(), p) != 1) throw std::invalid_argument("modulus must be monic");
  for (auto& c : mod_) c = md(c, p);
  q_ = 1;
  for (int i = 0; i < f_; ++i) q_ *= static_cast<std::uint64_t>(p);
}

Fq::E Fq::from_int(long a) const {
  E r(f_, 0);
  r[0] = md(a, p_);
  if (f_ == 1) return r;
  return r;
}

Fq::E Fq::gen() const {
  if (f_ == 1) return from_int(md(-mod_[0], p_));
  E r(f_, 0);
  r[1] = 1;
  return r;
}

bool Fq::is_zero(const E& a) const {
  for (long c : a)
    if (c) return false;
  return true;
}

Fq::E Fq::add(const E& a, const E& b) const {
  E r(f_);
  for (int i = 0; i < f_; ++i) r[i] = (a[i] + b[i]) % p_;
  return r;
}

Fq::E Fq::sub(const E& a, const E& b) const {
  E r(f_);
  for (int i = 0; i < f_; ++i) r[i] = md(a[i] - b[i], p_);
  return r;
}

Fq::E Fq::neg(const E& a) const {
  E r(f_);
  for (int i = 0; i < f_; ++i) r[i] = md(-a[i], p_);
  return r;
}

Fq::E Fq::mul(const E& a, const E& b) const {
  if (f_ == 1) return E{(a[0] * b[0]) % p_};
  std::vector<long> t(2 * f_ - 1, 0);
  for (int i = 0; i < f_; ++i)
    if (a[i])
      for (int j = 0; j < f_; ++j) t[i + j] = (t[i + j] + a[i] * b[j]) % p_;
  for (int k = 2 * f_ - 2; k >= f_; --k) {
    long c = t[k];
    if (!c) continue;
    for (int j = 0; j < f_; ++j) t[k - f_ + j] = md(t[k - f_ + j] - c * mod_[j], p_);
    t[k] = 0;
  }
  t.resize(f_);
  return t;
}

Fq::E Fq::pow(E a, std::uint64_t n) const {
  E r = one();
  while (n) {
    if (n & 1) r = mul(r, a);
    n >>= 1;
    if (n) a = mul(a, a);
  }
  return r;
}

Fq::E Fq::inv(const E& a) const {
  if (is_zero(a)) throw std::domain_error("inverse of zero in residue field");
  if (f_ == 1) return E{inv_mod(a[0], p_)};
  return pow(a, q_ - 2);
}

Fq::E Fq::from_index(std::uint64_t k) const {
  E r(f_);
  for (int i = 0; i < f_; ++i) {
    r[i] = static_cast<long>(k % static_cast<std::uint64_t>(p_));
    k /= static_cast<std::uint64_t>(p_);
  }
  return r;
}

std::uint64_t Fq::index(const E& a) const {
  std::uint64_t k = 0;
  for (int i = f_ - 1; i >= 0; --i) k = k * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(a[i]);
  return k;
}

Fq::E Fq::random(std::mt19937_64& rng) const {
  return from_index(rng() % q_);
}

void fq_trim(const Fq& F, FqPoly& a) {
  while (!a.empty() && F.is_zero(a.back())) a.pop_back();
}

int fq_deg(const FqPoly& a) { return static_cast<int>(a.size()) - 1; }

FqPoly fq_add(const Fq& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), F.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  fq_trim(F, r);
  return r;
}

FqPoly fq_sub(const Fq& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), F.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  fq_trim(F, r);
  return r;
}

FqPoly fq_mul(const Fq& F, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, F.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  fq_trim(F, r);
  return r;
}

std::pair<FqPoly, FqPoly> fq_divmod(const Fq& F, const FqPoly& a, const FqPoly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  FqPoly r = a;
  fq_trim(F, r);
  int db = fq_deg(b);
  if (fq_deg(r) < db) return {{}, r};
  FqPoly q(r.size() - b.size() + 1, F.zero());
  Fq::E lc = F.inv(b.back());
  for (int k = fq_deg(r); k >= db; --k) {
    Fq::E c = F.mul(r[k], lc);
    q[k - db] = c;
    if (F.is_zero(c)) continue;
    for (int j = 0; j <= db; ++j) r[k - db + j] = F.sub(r[k - db + j], F.mul(c, b[j]));
  }
  fq_trim(F, q);
  fq_trim(F, r);
  return {q, r};
}

FqPoly fq_monic(const Fq& F, const FqPoly& a) {
  if (a.empty()) return a;
  Fq::E li = F.inv(a.back());
  FqPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], li);
  return r;
}

FqPoly fq_gcd(const Fq& F, FqPoly a, FqPoly b) {
  fq_trim(F, a);
  fq_trim(F, b);
  while (!b.empty()) {
    FqPoly r = fq_divmod(F, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fq_monic(F, a);
}

FqPoly fq_powmod(const Fq& F, const FqPoly& base, std::uint64_t n, const FqPoly& mod) {
  FqPoly r{F.one()};
  r = fq_divmod(F, r, mod).second;
  FqPoly b = fq_divmod(F, base, mod).second;
  while (n) {
    if (n & 1) r = fq_divmod(F, fq_mul(F, r, b), mod).second;
    n >>= 1;
    if (n) b = fq_divmod(F, fq_mul(F, b, b), mod).second;
  }
  return r;
}

FqPoly fq_derivative(const Fq& F, const FqPoly& a) {
  FqPoly r;
  for (size_t i = 1; i < a.size(); ++i) {
    Fq::E c = F.zero();
    for (size_t k = 0; k < i % static_cast<size_t>(F.p()); ++k) c = F.add(c, a[i]);
    r.push_back(c);
  }
  fq_trim(F, r);
  return r;
}

Fq::E fq_eval(const Fq& F, const FqPoly& a, const Fq::E& x) {
  Fq::E r = F.zero();
  for (size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

namespace {

// x^(q^k) mod m computed by k Frobenius steps.
FqPoly frob_power(const Fq& F, const FqPoly& m, int k) {
  FqPoly x{F.zero(), F.one()};
  FqPoly r = fq_divmod(F, x, m).second;
  for (int i = 0; i < k; ++i) r = fq_powmod(F, r, F.q(), m);
  return r;
}

// Split a product of distinct linear factors.
void split_linear(const Fq& F, const FqPoly& g, std::mt19937_64& rng, std::vector<Fq::E>& out) {
  int d = fq_deg(g);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(F.neg(F.mul(g[0], F.inv(g[1]))));
    return;
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    FqPoly h;
    if (F.p() == 2) {
      // trace map z + z^2 + ... + z^(q/2)
      FqPoly a{F.random(rng), F.random(rng)};
      FqPoly t = fq_divmod(F, a, g).second;
      FqPoly s = t;
      for (int i = 1; i < F.f(); ++i) {
        t = fq_divmod(F, fq_mul(F, t, t), g).second;
        s = fq_add(F, s, t);
      }
      h = s;
    } else {
      FqPoly a{F.random(rng), F.one()};
      h = fq_powmod(F, a, (F.q() - 1) / 2, g);
      h = fq_sub(F, h, FqPoly{F.one()});
    }
    FqPoly c = fq_gcd(F, g, h);
    int dc = fq_deg(c);
    if (dc > 0 && dc < d) {
      split_linear(F, c, rng, out);
      split_linear(F, fq_divmod(F, g, c).first, rng, out);
      return;
    }
  }
  // fall back to enumeration
  for (std::uint64_t k = 0; k < F.q(); ++k) {
    Fq::E x = F.from_index(k);
    if (F.is_zero(fq_eval(F, g, x))) out.push_back(x);
  }
}

}  // namespace

std::vector<std::pair<Fq::E, int>> fq_roots(const Fq& F, const FqPoly& a0) {
  FqPoly a = a0;
  fq_trim(F, a);
  if (fq_deg(a) < 1) return {};
  a = fq_monic(F, a);
  FqPoly xq = frob_power(F, a, 1);
  FqPoly g = fq_gcd(F, a, fq_sub(F, xq, FqPoly{F.zero(), F.one()}));
  std::vector<Fq::E> rs;
  std::mt19937_64 rng(0x5eed);
  split_linear(F, g, rng, rs);
  std::vector<std::pair<Fq::E, int>> out;
  for (auto& r : rs) {
    int m = 0;
    FqPoly cur = a;
    FqPoly lin{F.neg(r), F.one()};
    while (true) {
      auto [q, rem] = fq_divmod(F, cur, lin);
      if (!rem.empty()) break;
      ++m;
      cur = q;
    }
    out.push_back({r, m});
  }
  return out;
}

int fq_min_factor_degree(const Fq& F, const FqPoly& a0) {
  FqPoly a = a0;
  fq_trim(F, a);
  int d = fq_deg(a);
  if (d < 1) throw std::invalid_argument("constant polynomial has no factors");
  a = fq_monic(F, a);
  FqPoly x{F.zero(), F.one()};
  FqPoly xk = fq_divmod(F, x, a).second;
  for (int k = 1; k <= d; ++k) {
    xk = fq_powmod(F, xk, F.q(), a);
    FqPoly g = fq_gcd(F, a, fq_sub(F, xk, x));
    if (fq_deg(g) > 0) return k;
  }
  return d;
}

bool fq_is_irreducible(const Fq& F, const FqPoly& a) {
  FqPoly b = a;
  fq_trim(F, b);
  int d = fq_deg(b);
  if (d < 1) return false;
  return fq_min_factor_degree(F, b) == d;
}

std::vector<long> first_irreducible(long p, int f) {
  if (f == 1) return {0, 1};
  Fq Fp = Fq::prime_field(p);
  std::uint64_t total = 1;
  for (int i = 0; i < f; ++i) total *= static_cast<std::uint64_t>(p);
  for (std::uint64_t k = 0; k < total; ++k) {
    std::vector<long> c(f + 1);
    std::uint64_t t = k;
    for (int i = 0; i < f; ++i) {
      c[i] = static_cast<long>(t % static_cast<std::uint64_t>(p));
      t /= static_cast<std::uint64_t>(p);
    }
    c[f] = 1;
    if (c[0] == 0) continue;
    FqPoly P;
    for (long v : c) P.push_back(Fq::E{v});
    if (fq_is_irreducible(Fp, P)) return c;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace pak
