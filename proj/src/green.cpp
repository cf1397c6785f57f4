#include "pak/green.hpp"

#include <set>
#include <sstream>

#include "pak/expr.hpp"

namespace pak {

DivisorFormal::DivisorFormal(std::initializer_list<std::pair<std::string, long>> terms) {
  for (auto& [P, m] : terms) add(P, m);
}

DivisorFormal DivisorFormal::point(const std::string& P, long m) {
  DivisorFormal D;
  D.add(P, m);
  return D;
}

void DivisorFormal::add(const std::string& P, long m) {
  if (m == 0) return;
  long& x = terms_[P];
  x += m;
  if (x == 0) terms_.erase(P);
}

long DivisorFormal::degree() const {
  long d = 0;
  for (auto& [P, m] : terms_) d += m;
  return d;
}

long DivisorFormal::mult(const std::string& P) const {
  auto it = terms_.find(P);
  return it == terms_.end() ? 0 : it->second;
}

bool DivisorFormal::disjoint(const DivisorFormal& o) const {
  for (auto& [P, m] : terms_)
    if (o.terms_.count(P)) return false;
  return true;
}

DivisorFormal DivisorFormal::operator+(const DivisorFormal& o) const {
  DivisorFormal r = *this;
  for (auto& [P, m] : o.terms_) r.add(P, m);
  return r;
}

DivisorFormal DivisorFormal::operator-(const DivisorFormal& o) const { return *this + o.scale(-1); }

DivisorFormal DivisorFormal::scale(long k) const {
  DivisorFormal r;
  for (auto& [P, m] : terms_) r.add(P, m * k);
  return r;
}

std::string DivisorFormal::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [P, m] : terms_) {
    if (!first) os << (m < 0 ? " - " : " + ");
    else if (m < 0) os << "-";
    long am = m < 0 ? -m : m;
    if (am != 1) os << am;
    os << P;
    first = false;
  }
  return os.str();
}

namespace {
std::pair<std::string, std::string> key(const std::string& P, const std::string& Q) {
  return P < Q ? std::make_pair(P, Q) : std::make_pair(Q, P);
}
}  // namespace

void GreenTable::set(const std::string& P, const std::string& Q, const Elem& v) {
  if (P == Q) throw std::invalid_argument("Green function is not defined on the diagonal (" + P + ")");
  auto k = key(P, Q);
  auto it = entries_.find(k);
  if (it != entries_.end()) {
    if (!(it->second - v).is_zero())
      throw AsymmetricTable("G(" + P + "," + Q + ") and G(" + Q + "," + P + ") differ");
    return;
  }
  entries_.emplace(k, v);
}

void GreenTable::assign(const std::string& P, const std::string& Q, const Elem& v) {
  if (P == Q) throw std::invalid_argument("Green function is not defined on the diagonal (" + P + ")");
  entries_.insert_or_assign(key(P, Q), v);
}

bool GreenTable::has(const std::string& P, const std::string& Q) const { return entries_.count(key(P, Q)) > 0; }

const Elem& GreenTable::get(const std::string& P, const std::string& Q) const {
  if (P == Q) throw OverlappingSupport("G(" + P + "," + P + ") requested");
  auto it = entries_.find(key(P, Q));
  if (it == entries_.end()) throw MissingTableEntry("no table entry for G(" + P + "," + Q + ")");
  return it->second;
}

std::vector<std::string> GreenTable::labels() const {
  std::set<std::string> s;
  for (auto& [k, v] : entries_) {
    s.insert(k.first);
    s.insert(k.second);
  }
  return {s.begin(), s.end()};
}

GreenTable GreenTable::shifted(const Elem& c) const {
  GreenTable t = *this;
  for (auto& [k, v] : t.entries_) v = v + c;
  return t;
}

GreenTable GreenTable::normalized() const {
  if (!anchor) return *this;
  return shifted(-get(anchor->first, anchor->second));
}

Elem pairing_from_green(const GreenTable& table, const DivisorFormal& D, const DivisorFormal& E) {
  if (!D.disjoint(E)) throw OverlappingSupport("divisors " + D.str() + " and " + E.str() + " share a point");
  Elem s(table.field());
  for (auto& [P, n] : D.terms())
    for (auto& [Q, m] : E.terms()) s += table.get(P, Q).scale(mpq_class(n * m));
  return s;
}

Elem TableOracle::integrate(const DivisorFormal& D_res, const DivisorFormal& E) const {
  if (!D_res.is_degree_zero()) throw DegreeMismatch("residue divisor " + D_res.str() + " has nonzero degree");
  return pairing_from_green(table_, D_res, E);
}

namespace {

void check_log_form(int g, const std::string& X, const std::string& Y, const DivisorFormal& div, const char* name) {
  if (div.degree() != 2 * g - 2)
    throw DegreeMismatch(std::string(name) + " has degree " + std::to_string(div.degree()) + ", expected " +
                         std::to_string(2 * g - 2));
  if (div.mult(X) != -1 || div.mult(Y) != -1)
    throw DegreeMismatch(std::string(name) + " must have simple poles at " + X + " and " + Y);
}

Elem call_oracle(const HeightOracle& o, const DivisorFormal& D, const DivisorFormal& E) {
  try {
    return o.integrate(D, E);
  } catch (const std::exception& e) {
    throw OracleFailure(std::string("oracle failed on D = ") + D.str() + ", E = " + E.str() + ": " + e.what());
  }
}

}  // namespace

Elem green_from_formula(const HeightOracle& oracle, int g, const std::string& a, const std::string& b,
                        const std::string& P, const std::string& Q, const DivisorFormal& div_w1,
                        const DivisorFormal& div_w2) {
  if (g < 1) throw std::invalid_argument("genus must be at least 1");
  DivisorFormal DQ = DivisorFormal::point(Q) - DivisorFormal::point(b);
  DivisorFormal DP = DivisorFormal::point(P) - DivisorFormal::point(a);
  Elem s(oracle.field());
  if (!DQ.is_zero()) {
    check_log_form(g, Q, b, div_w2, "div w2");
    DivisorFormal E = DivisorFormal::point(P, 2 * g) - div_w2 - DivisorFormal::point(Q) - DivisorFormal::point(b);
    if (!E.is_degree_zero()) throw DegreeMismatch("integration divisor " + E.str() + " has nonzero degree");
    s += call_oracle(oracle, DQ, E);
  }
  if (!DP.is_zero()) {
    check_log_form(g, P, a, div_w1, "div w1");
    DivisorFormal E = DivisorFormal::point(b, 2 * g) - div_w1 - DivisorFormal::point(P) - DivisorFormal::point(a);
    if (!E.is_degree_zero()) throw DegreeMismatch("integration divisor " + E.str() + " has nonzero degree");
    s += call_oracle(oracle, DP, E);
  }
  return s.scale(mpq_class(1, 2 * g));
}

Elem residue_log_residual(const GreenTable& table, const std::string& X, const std::string& Y,
                          const DivisorFormal& div_w) {
  DivisorFormal Z = div_w + DivisorFormal::point(X) + DivisorFormal::point(Y);
  return pairing_from_green(table, DivisorFormal::point(X) - DivisorFormal::point(Y), Z);
}

Elem iota_log(const Elem& log_f, const Elem& G_principal) { return log_f - G_principal; }

GreenState rescale_green(const GreenState& s, const std::string& v, const Elem& c) {
  auto it = s.tables.find(v);
  if (it == s.tables.end()) throw std::out_of_range("no Green table at place " + v);
  GreenState r = s;
  r.tables[v] = it->second.shifted(c);
  const Field& K = it->second.field();
  for (auto& [name, L] : r.lines) {
    // the canonical line also loses c from its log function
    long k = L.canonical ? L.deg + 1 : L.deg;
    auto f = L.iota.find(v);
    Elem cur = f == L.iota.end() ? Elem(K) : f->second;
    L.iota[v] = cur - c.scale(mpq_class(k));
  }
  auto f = r.canonical_shift.find(v);
  Elem cur = f == r.canonical_shift.end() ? Elem(K) : f->second;
  r.canonical_shift[v] = cur - c.scale(mpq_class(2 * s.genus - 1));
  return r;
}

Elem random_element(std::mt19937_64& rng, const Field& K, int vmin, int vmax) {
  const Ctx& ctx = K->ctx;
  std::vector<Qp> co;
  std::uniform_int_distribution<long> digit(0, ctx->p() - 1);
  for (int k = 0; k < K->degree(); ++k) {
    mpz_class u = 0;
    for (int i = 0; i < ctx->cap(); ++i) u = u * ctx->p() + digit(rng);
    co.push_back(Qp(ctx, u));
  }
  long s = std::uniform_int_distribution<long>(vmin, vmax)(rng);
  return Elem(K, co).mul_pi_pow(s);
}

SyntheticGreen synthetic_green(std::mt19937_64& rng, int g, const Field& K) {
  SyntheticGreen S{GreenTable(g, K), "P", "Q", "a", "b", {}, {}};
  auto zeros = [&](const std::string& stem) {
    DivisorFormal Z;
    int left = 2 * g, k = 1;
    while (left > 0) {
      int m = std::uniform_int_distribution<int>(1, left)(rng);
      Z = Z + DivisorFormal::point(stem + std::to_string(k++), m);
      left -= m;
    }
    return Z;
  };
  DivisorFormal Z1 = zeros("z"), Z2 = zeros("y");
  std::vector<std::string> labels = {"P", "Q", "a", "b"};
  for (auto& [X, m] : Z1.terms()) labels.push_back(X);
  for (auto& [X, m] : Z2.terms()) labels.push_back(X);
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      S.table.set(labels[i], labels[j], random_element(rng, K, -1, 2));
  // solve G_{X-Y}(Z) = 0 for the entry G(X, first point of Z)
  auto impose = [&](const std::string& X, const std::string& Y, const DivisorFormal& Z) {
    auto first = *Z.terms().begin();
    DivisorFormal rest = Z - DivisorFormal::point(first.first, first.second);
    Elem r = rest.is_zero() ? Elem(K)
                            : pairing_from_green(S.table, DivisorFormal::point(X) - DivisorFormal::point(Y), rest);
    S.table.assign(X, first.first, S.table.get(Y, first.first) - r.scale(mpq_class(1, first.second)));
  };
  impose("P", "a", Z1);
  impose("Q", "b", Z2);
  S.table.anchor = std::make_pair(std::string("a"), std::string("b"));
  S.table = S.table.normalized();
  S.div_w1 = Z1 - DivisorFormal::point("P") - DivisorFormal::point("a");
  S.div_w2 = Z2 - DivisorFormal::point("Q") - DivisorFormal::point("b");
  return S;
}

namespace {

// exact representative u*p^v of a Q_p value
std::string qp_token(const Qp& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  os << x.unit().get_str();
  if (x.val() > 0) os << "*" << x.p() << "^" << x.val();
  if (x.val() < 0) os << "/" << x.p() << "^" << -x.val();
  return os.str();
}

}  // namespace

json green_table_to_json(const GreenTable& t) {
  json j;
  j["genus"] = t.genus();
  json entries = json::array();
  bool base = t.field()->degree() == 1;
  for (auto& [k, v] : t.entries()) {
    if (base) entries.push_back({k.first, k.second, qp_token(v.coords()[0])});
    else entries.push_back({k.first, k.second, to_json(v)});
  }
  j["entries"] = entries;
  if (t.anchor) j["anchor"] = {t.anchor->first, t.anchor->second};
  return j;
}

GreenTable green_table_from_json(const json& j, const Field& K, const LogBranch& b) {
  if (!j.is_object() || !j.contains("genus") || !j.contains("entries"))
    throw std::invalid_argument("Green table needs \"genus\" and \"entries\"");
  int g = j.at("genus").get<int>();
  if (g < 1) throw std::invalid_argument("genus must be at least 1");
  GreenTable t(g, K);
  for (auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("table entries are [P, Q, value]");
    const json& v = e[2];
    Elem x = v.is_string() ? parse_scalar(v.get<std::string>(), K, b) : elem_from_json(v, K);
    t.set(e[0].get<std::string>(), e[1].get<std::string>(), x);
  }
  if (j.contains("anchor")) {
    const json& a = j.at("anchor");
    if (!a.is_array() || a.size() != 2) throw std::invalid_argument("anchor is [a, b]");
    t.anchor = std::make_pair(a[0].get<std::string>(), a[1].get<std::string>());
  }
  return t;
}

json divisor_to_json(const DivisorFormal& D) {
  json j = json::array();
  for (auto& [P, m] : D.terms()) j.push_back({P, m});
  return j;
}

DivisorFormal divisor_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("divisor is a list of [point, multiplicity]");
  DivisorFormal D;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("divisor terms are [point, multiplicity]");
    D = D + DivisorFormal::point(e[0].get<std::string>(), e[1].get<long>());
  }
  return D;
}

}  // namespace pak
