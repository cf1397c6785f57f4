#include "pak/cube.hpp"

#include <sstream>

namespace pak {

Polynomial Polynomial::monomial(const std::vector<int>& exps, const mpq_class& c) {
  Polynomial P;
  P.rank = static_cast<int>(exps.size());
  if (c != 0) P.terms[exps] = c;
  return P;
}

std::vector<std::vector<int>> Polynomial::exponents(int rank, int d) {
  if (rank < 1 || d < 0) throw std::invalid_argument("bad rank or degree");
  if (rank == 1) return {{d}};
  std::vector<std::vector<int>> out;
  for (int k = d; k >= 0; --k)
    for (auto rest : exponents(rank - 1, d - k)) {
      rest.insert(rest.begin(), k);
      out.push_back(rest);
    }
  return out;
}

Polynomial Polynomial::random(std::mt19937_64& rng, int rank, int degree, bool exact_degree) {
  std::uniform_int_distribution<long> coef(-9, 9);
  Polynomial P;
  P.rank = rank;
  for (int d = 0; d <= degree; ++d)
    for (auto& e : exponents(rank, d)) {
      long c = coef(rng);
      if (c != 0) P.terms[e] = c;
    }
  if (exact_degree && P.degree() < degree) P.terms[exponents(rank, degree)[0]] = 1;
  return P;
}

int Polynomial::degree() const {
  int d = -1;
  for (auto& [e, c] : terms) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (rank != o.rank) throw std::invalid_argument("rank mismatch");
  Polynomial r = *this;
  for (auto& [e, c] : o.terms) {
    mpq_class s = r.terms[e] + c;
    if (s == 0)
      r.terms.erase(e);
    else
      r.terms[e] = s;
  }
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial n = o;
  for (auto& [e, c] : n.terms) c = -c;
  return *this + n;
}

std::string Polynomial::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : terms) {
    os << (first ? "" : " + ") << c.get_str();
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i]) os << "*x" << i + 1 << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    first = false;
  }
  return os.str();
}

std::vector<Sample<mpq_class>> integer_samples(std::mt19937_64& rng, int rank, int n, int count, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  auto point = [&] {
    GroupPoint<mpq_class> x;
    for (int i = 0; i < rank; ++i) x.push_back(d(rng));
    return x;
  };
  std::vector<Sample<mpq_class>> out;
  for (int k = 0; k < count; ++k) {
    Sample<mpq_class> s{point(), {}};
    for (int i = 0; i < n; ++i) s.h.push_back(point());
    out.push_back(s);
  }
  return out;
}

std::vector<Sample<Elem>> local_samples(const std::vector<Sample<mpq_class>>& s, const Field& K) {
  auto lift = [&K](const GroupPoint<mpq_class>& x) {
    GroupPoint<Elem> y;
    for (auto& c : x) y.push_back(Elem(K, c));
    return y;
  };
  std::vector<Sample<Elem>> out;
  for (auto& t : s) {
    Sample<Elem> u{lift(t.x), {}};
    for (auto& h : t.h) u.h.push_back(lift(h));
    out.push_back(u);
  }
  return out;
}

}  // namespace pak
