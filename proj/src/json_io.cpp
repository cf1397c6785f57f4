#include "pak/json_io.hpp"

#include <stdexcept>

namespace pak {

namespace {

mpz_class symmetric_int(const Qp& c) {
  if (c.is_zero()) return 0;
  if (c.val() < 0) throw std::invalid_argument("coefficient is not an integer");
  const Ctx& ctx = c.ctx();
  mpz_class m = ctx->pow(ctx->cap());
  mpz_class v = c.lift_mod(ctx->cap());
  if (2 * v > m) v -= m;
  return v;
}

}  // namespace

json to_json(const Elem& x) {
  const Field& K = x.field();
  int e = K->e;
  if (x.is_exact_zero()) return {{"val", "inf"}, {"digits", json::array()}, {"prec", 0}};
  if (x.is_zero())
    return {{"val", std::to_string(x.abs_prec_pi()) + "/" + std::to_string(e)}, {"digits", json::array()}, {"prec", 0}};
  std::int64_t v = x.val_pi();
  std::int64_t n = x.rel_prec_pi();
  Elem y = x.mul_pi_pow(-v);
  Elem pinv(K, K->pi_inv);
  json digits = json::array();
  for (std::int64_t k = 0; k < n; ++k) {
    Fq::E d = y.residue();
    digits.push_back(K->residue.index(d));
    if (k + 1 < n) y = (y - Elem::lift(K, d)) * pinv;
  }
  return {{"val", std::to_string(v) + "/" + std::to_string(e)}, {"digits", digits}, {"prec", n}};
}

Elem elem_from_json(const json& j, const Field& K) {
  std::string vs = j.at("val").get<std::string>();
  if (vs == "inf") return Elem(K);
  auto slash = vs.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("valuation must be written a/e");
  std::int64_t v = std::stoll(vs.substr(0, slash));
  int e = std::stoi(vs.substr(slash + 1));
  if (e != K->e) throw FieldMismatch("valuation denominator does not match the field");
  std::int64_t n = j.at("prec").get<std::int64_t>();
  const json& digits = j.at("digits");
  if (static_cast<std::int64_t>(digits.size()) != n) throw std::invalid_argument("digit count differs from prec");
  if (n == 0) return Elem::zero_mod(K, v);
  Elem s(K);
  Elem pk(K, 1);
  Elem pi = Elem::pi(K);
  for (std::int64_t k = 0; k < n; ++k) {
    std::uint64_t d = digits[k].get<std::uint64_t>();
    if (d >= K->residue.q()) throw std::invalid_argument("digit outside the residue field");
    if (d) s += Elem::lift(K, K->residue.from_index(d)) * pk;
    pk = pk * pi;
  }
  return s.mul_pi_pow(v).truncate_abs_pi(v + n);
}

json to_json(const Qp& x) { return to_json(Elem(qp_field(x.ctx()), x)); }

Qp qp_from_json(const json& j, const Ctx& ctx) { return elem_from_json(j, qp_field(ctx)).to_qp(); }

json field_to_json(const Field& K) {
  json poly = json::array();
  if (!K->base) {
    if (K->degree() != 1) throw std::invalid_argument("field has no recorded minimal polynomial");
    poly = {0, 1};
  } else {
    if (K->base->degree() != 1) throw std::invalid_argument("only extensions of Q_p are serialised");
    for (auto& c : K->min_poly) poly.push_back(symmetric_int(c.at(0)).get_str());
  }
  return {{"p", K->p()}, {"min_poly", poly}};
}

Field field_from_json(const json& j, int cap) {
  long p = j.at("p").get<long>();
  Ctx ctx = PrimeContext::get(p, cap);
  Field Q = qp_field(ctx);
  std::vector<long> poly;
  for (auto& c : j.at("min_poly")) poly.push_back(c.is_string() ? std::stol(c.get<std::string>()) : c.get<long>());
  if (poly.size() == 2 && poly[0] == 0 && poly[1] == 1) return Q;
  return make_extension(Q, poly);
}

json to_json(const LogPoly& F) {
  json coeffs = json::array();
  for (auto& t : F.terms) {
    json c = json::array();
    for (auto& a : t.coeffs()) c.push_back(to_json(a));
    coeffs.push_back({t.low(), c});
  }
  return {{"L_deg", F.degree()}, {"coeffs", coeffs}};
}

LogPoly logpoly_from_json(const json& j, const Field& K) {
  LogPoly F;
  int M = j.at("L_deg").get<int>();
  const json& coeffs = j.at("coeffs");
  if (static_cast<int>(coeffs.size()) != M + 1) throw std::invalid_argument("L_deg does not match coefficient count");
  for (auto& entry : coeffs) {
    std::int64_t low = entry.at(0).get<std::int64_t>();
    std::vector<Elem> c;
    for (auto& a : entry.at(1)) c.push_back(elem_from_json(a, K));
    F.terms.push_back(Laurent(K, low, std::move(c)));
  }
  return F;
}

}  // namespace pak
