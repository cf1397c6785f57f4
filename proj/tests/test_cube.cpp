#include <doctest.h>

#include <algorithm>

#include "pak/cube.hpp"
#include "pak/padic.hpp"
#include "support.hpp"

using namespace pak;
using namespace pak::testing;

namespace {

using Pt = GroupPoint<mpq_class>;

GroupFunction<mpq_class> mono(const std::vector<int>& e) { return rational_function(Polynomial::monomial(e)); }

// log(1 + p x_1 + p^2 x_2), far from any polynomial
GroupFunction<Elem> log_function(const Field& K, const LogBranch& b) {
  long p = K->ctx->p();
  return {2,
          [K, b, p](const GroupPoint<Elem>& x) {
            return padic_log(Elem(K, 1) + x[0] * Elem(K, p) + x[1] * Elem(K, p * p), b);
          },
          std::nullopt};
}

}  // namespace

TEST_CASE("difference operator fixtures") {
  auto sq = mono({2});
  CHECK(dd_n(sq, Pt{3}, {Pt{5}}) == 55);
  CHECK(dd_n(sq, Pt{3}, {}) == 9);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    mpq_class x = rand_q(rng, -20, 20, 5), h1 = rand_q(rng, -20, 20, 5), h2 = rand_q(rng, -20, 20, 5);
    CHECK(dd_n(sq, Pt{x}, {Pt{h1}, Pt{h2}}) == 2 * h1 * h2);
    CHECK(dd_n(sq, Pt{x}, {Pt{h1}}) == (x + h1) * (x + h1) - x * x);
  }
  // D^n x^n = n! h_1 ... h_n
  for (int n = 1; n <= 5; ++n) {
    auto s = integer_samples(rng, 1, n, 10);
    for (auto& t : s) {
      mpq_class want = 1;
      for (int k = 1; k <= n; ++k) want *= k * t.h[k - 1][0];
      CHECK(dd_n(mono({n}), t.x, t.h) == want);
    }
  }
  CHECK_THROWS_AS(dd_n(sq, Pt{1, 2}, {Pt{1}}), std::invalid_argument);
}

TEST_CASE("D^n annihilates monomials of degree below n") {
  std::mt19937_64 rng(2);
  int count = 0;
  for (int r = 1; r <= 3; ++r)
    for (int n = 1; n <= 5; ++n) {
      auto s = integer_samples(rng, r, n, 8);
      for (int d = 0; d <= 5; ++d)
        for (auto& e : Polynomial::exponents(r, d)) {
          auto f = mono(e);
          bool all_zero = true;
          for (auto& t : s) all_zero = all_zero && dd_n(f, t.x, t.h) == 0;
          if (d < n) CHECK(all_zero);
          if (d == n) CHECK_FALSE(all_zero);
          ++count;
        }
    }
  CHECK(count == 415);
}

TEST_CASE("subset sum and recursion agree") {
  std::mt19937_64 rng(3);
  for (int n = 0; n <= 5; ++n)
    for (int i = 0; i < 10; ++i) {
      int r = static_cast<int>(rand_int(rng, 1, 3));
      auto f = rational_function(Polynomial::random(rng, r, static_cast<int>(rand_int(rng, 0, 6))));
      auto s = integer_samples(rng, r, n, 6);
      CHECK(recursion_check(f, s) == 0);
      // the recursion alone carries the sign (-1)^n
      if (n % 2 == 1 && f.poly->degree() >= n) {
        bool differs = false;
        for (auto& t : s) differs = differs || dd_n(f, t.x, t.h) != dd_recursive(f, t.x, t.h);
        CHECK(differs);
      }
    }
  auto c = rational_function(Polynomial::monomial({0, 0}, 7));
  auto lin = rational_function(Polynomial::monomial({1, 0}, 3) + Polynomial::monomial({0, 1}, -2));
  for (int n = 1; n <= 4; ++n) {
    auto s = integer_samples(rng, 2, n, 10);
    CHECK(recursion_check(c, s) == 0);
    for (auto& t : s) CHECK(dd_recursive(c, t.x, t.h) == 0);
    if (n >= 2)
      for (auto& t : s) CHECK(dd_recursive(lin, t.x, t.h) == 0);
  }
  Field K = qp_field(ctx(5));
  LogBranch b = iwasawa_branch(K->ctx);
  auto G = log_function(K, b);
  for (int n = 1; n <= 4; ++n) CHECK(recursion_check(G, local_samples(integer_samples(rng, 2, n, 5), K)).is_zero());
}

TEST_CASE("restriction to h_i = 0 kills D^n") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    int r = static_cast<int>(rand_int(rng, 1, 3));
    auto f = rational_function(Polynomial::random(rng, r, 3));
    auto s = integer_samples(rng, r, 3, 6);
    for (size_t k = 0; k < 3; ++k) CHECK(restriction_vanishing(f, s, k) == 0);
    CHECK(larger(dd_n(f, s[0].x, s[0].h), mpq_class(0)) == dd_n(f, s[0].x, s[0].h));
  }
  auto f = rational_function(Polynomial::random(rng, 2, 4));
  CHECK(restriction_vanishing(f, integer_samples(rng, 2, 1, 5), 0) == 0);
  CHECK_THROWS_AS(restriction_vanishing(f, integer_samples(rng, 2, 1, 5), 1), std::out_of_range);
  Field K = qp_field(ctx(3));
  auto G = log_function(K, iwasawa_branch(K->ctx));
  auto s = local_samples(integer_samples(rng, 2, 3, 5), K);
  for (size_t k = 0; k < 3; ++k) CHECK(restriction_vanishing(G, s, k).is_zero());
}

TEST_CASE("D^n is symmetric in the steps") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    int r = static_cast<int>(rand_int(rng, 1, 3)), n = static_cast<int>(rand_int(rng, 2, 5));
    auto f = rational_function(Polynomial::random(rng, r, static_cast<int>(rand_int(rng, n, 7))));
    auto t = integer_samples(rng, r, n, 1)[0];
    mpq_class base = dd_n(f, t.x, t.h);
    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) idx[k] = k;
    int perms = 0;
    do {
      std::vector<Pt> h;
      for (int k : idx) h.push_back(t.h[k]);
      CHECK(dd_n(f, t.x, h) == base);
    } while (std::next_permutation(idx.begin(), idx.end()) && ++perms < 24);
  }
}

TEST_CASE("D^3 determines G up to degree 2") {
  std::mt19937_64 rng(6);
  for (long p : {3L, 5L, 7L}) {
    Field K = qp_field(ctx(p));
    auto G = log_function(K, iwasawa_branch(K->ctx));
    auto s = local_samples(integer_samples(rng, 2, 3, 6), K);
    CHECK(green_determinacy_demo(G, G, local_function(Polynomial{2, {}}, K), s).determined);
    for (int i = 0; i < 5; ++i) {
      auto q = local_function(Polynomial::random(rng, 2, 2), K);
      auto r = green_determinacy_demo(G, G + q, q, s);
      CHECK(r.determined);
      CHECK(r.residual.is_zero());
      CHECK(r.certificate_degree <= 2);
      auto cub = local_function(Polynomial::random(rng, 2, 3), K);
      auto w = green_determinacy_demo(G, G + cub, cub, s);
      CHECK_FALSE(w.determined);
      CHECK(w.certificate_degree == 3);
    }
    auto q = local_function(Polynomial::random(rng, 2, 2), K);
    CHECK_THROWS_AS(green_determinacy_demo(G, G + q, local_function(Polynomial::monomial({1, 1}, 1), K), s),
                    std::invalid_argument);
  }
  // the cubic witness equals D^3 of the cubic part
  auto cub = rational_function(Polynomial::monomial({3}, 2));
  auto zero = rational_function(Polynomial{1, {}});
  auto s = integer_samples(rng, 1, 3, 4);
  auto w = green_determinacy_demo(zero, cub, cub, s);
  mpq_class want = 0;
  for (auto& t : s) want = larger(want, mpq_class(12 * t.h[0][0] * t.h[1][0] * t.h[2][0]));
  CHECK(w.residual == want);
}
