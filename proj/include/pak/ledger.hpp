#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pak/green.hpp"
#include "pak/padic.hpp"

namespace pak {

struct UnknownPlace : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct MissingOracle : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct MissingIngredient : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonSupported : Unsupported {
  using Unsupported::Unsupported;
};

// A place v above p: F_v, the linear map t_v (row on the Q_p basis of F_v)
// and the branch of log_v.
struct PPlace {
  Field Fv;
  std::vector<Qp> t;
  LogBranch branch;

  Qp apply(const Elem& x) const;
  Qp ell(const Elem& x) const { return apply(padic_log(x, branch)); }
  // t_v o log_v nonzero on units
  bool ramified() const;
};

// Idele class character of Q with values in Q_p. Finite places carry
// ell_q(q); units at q are killed.
struct IdeleCharacter {
  Ctx ctx;
  std::map<long, Qp> finite;
  std::map<std::string, PPlace> p_places;

  long p() const { return ctx->p(); }
  const Qp& at(long q) const;
  const PPlace& place(const std::string& v) const;
  // ell_q(f) for f in Q^x
  Qp finite_value(long q, const mpq_class& f) const;
};

// t = id on Q_p, branch b, ell_q(q) = -t(log q) for every prime q < bound
IdeleCharacter standard_character(const Ctx& ctx, const LogBranch& b, long bound = 100);
IdeleCharacter zero_character(const Ctx& ctx, const LogBranch& b, long bound = 100);
// [character] p, lambda, optional t and standard; [character.finite] q = "token"
IdeleCharacter character_from_toml(const std::string& text, int cap);
json character_to_json(const IdeleCharacter& l);

// prime factorisation of a nonzero rational: q -> ord_q
std::map<long, long> factor_rational(const mpq_class& f);

struct CharacterSum {
  mpq_class f;
  std::map<std::string, Qp> per_place;
  Qp total;
};

// sum over all places of ell_v(f); zero exactly when the class condition holds at f
CharacterSum character_sum(const IdeleCharacter& l, const mpq_class& f);

struct CharacterReport {
  std::vector<CharacterSum> sums;
  bool ok = true;
};

CharacterReport validate_character(const IdeleCharacter& l, const std::vector<mpq_class>& gens, int target);

// D = closure of a formal sum of points + vertical fibres + sum lambda_v X_v
struct ArakelovDivisor {
  DivisorFormal generic;
  std::map<long, long> fibres;
  std::map<std::string, Elem> infinite;

  long degree() const { return generic.degree(); }
  ArakelovDivisor operator+(const ArakelovDivisor& o) const;
  ArakelovDivisor operator-(const ArakelovDivisor& o) const;
  ArakelovDivisor scale(long k) const;
};

struct CurveData {
  int genus = 1;
  std::map<std::string, GreenTable> tables;
  // local intersection numbers of horizontal points at q
  std::map<long, std::map<std::pair<std::string, std::string>, long>> finite;

  void set_local(long q, const std::string& P, const std::string& Q, long m);
  long local(long q, const std::string& P, const std::string& Q) const;
};

// Points of P^1 over Z given by coprime [x:y]; the multiplicity at q is
// ord_q(x1 y2 - x2 y1).
void p1_multiplicities(CurveData& curve, const std::map<std::string, std::pair<long, long>>& points,
                       const std::vector<long>& primes);

struct IntersectionReport {
  std::map<std::string, Qp> per_place;
  Qp total;
};

IntersectionReport intersect(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve,
                             const IdeleCharacter& l);

struct PrincipalReport {
  Qp ledger, character;
  bool ok = false;
};

// D.(f) through the ledger, with (f) given as an Arakelov divisor whose
// infinite parts are the iota_log constants, and through the character sum
// over the values f(P).
PrincipalReport principal_check(const ArakelovDivisor& D, const ArakelovDivisor& f_div,
                                const std::map<std::string, mpq_class>& f_values, const CurveData& curve,
                                const IdeleCharacter& l, int target);

struct PrincipalCase {
  CurveData curve;
  ArakelovDivisor D, f_div;
  std::map<std::string, mpq_class> values;
};

// consistent synthetic data at the single place "p" of l
PrincipalCase synthetic_principal(std::mt19937_64& rng, const IdeleCharacter& l);

// N = generator * Z inside Q, log_N = log_v + shift_v at v | p, and the
// trivialisation theta(1) = theta.
struct MetrizedOFLine {
  mpq_class generator = 1;
  mpq_class theta = 1;
  std::map<std::string, Elem> shift;

  MetrizedOFLine rebased(const mpq_class& f) const;
};

Qp deg_metrized_line(const MetrizedOFLine& N, const IdeleCharacter& l);

// K'-line with a chosen basis u; log(a u) = log a + log_u
struct KLine {
  Field Kp;
  Elem log_u;
};

// log of the generator (det U) (det V)^-1 computed through alpha(u) = k v
Qp det_quotient_log(const KLine& U, const KLine& V, const Elem& k, const LogBranch& b);

// log(wedge beta_i x) = log det(sigma_j beta_i) + tr log x, for K' over Q_p
Qp det_K_log(const Field& Kp, const std::vector<Elem>& beta, const Elem& log_x, const LogBranch& b);
std::vector<Elem> trace_dual_basis(const std::vector<Elem>& beta);
Qp trace_dual_check(const Field& Kp, const std::vector<Elem>& beta, const LogBranch& b);

struct OrderReport {
  mpz_class disc;
  // codifferent basis in coordinates of 1, x, ..., x^{n-1}
  std::vector<std::vector<mpq_class>> codifferent;
  Qp deg_W, chi, chi_direct;
};

// A = Z[x]/(f) for monic squarefree f with p not dividing disc f
OrderReport codifferent_and_chi(const std::vector<long>& f, const IdeleCharacter& l);

// determinant of cohomology bookkeeping
Qp chi_rescaled(const Qp& chi_log, long euler, const Qp& alpha);
Qp chi_add_point(const Qp& chi_log, const Qp& fibre_log);
Qp chi_remove_point(const Qp& chi_log, const Qp& fibre_log);
// chi(O(D+E)) from chi(O(D)), chi(O(D+E)|_E) and d_inf(E)
Qp chi_add_horizontal(const Qp& chi_D, const Qp& chi_restricted, const Qp& d_inf);

// sum over i != j of m_i m_j G(P_i, P_j)
Elem d_v(const DivisorFormal& E, const GreenTable& table);
Qp d_infinity(const DivisorFormal& E, const CurveData& curve, const IdeleCharacter& l);

struct AdjunctionInput {
  ArakelovDivisor E;
  std::optional<ArakelovDivisor> omega;
  // E.E is taken from self, or else from a disjoint copy linearly equivalent to E
  std::optional<Qp> self;
  std::optional<ArakelovDivisor> moved;
  std::optional<Qp> dE;
};

struct AdjunctionReport {
  Qp omega_E, E_E, dE, d_inf, residual;
};

// omega.E + E.E - d(E) - d_inf(E)
AdjunctionReport adjunction_check(const AdjunctionInput& in, const CurveData& curve, const IdeleCharacter& l);

struct LedgerState {
  CurveData curve;
  IdeleCharacter l;
  ArakelovDivisor D, E, E_moved, omega;
  Qp dE;

  AdjunctionInput adjunction() const { return {E, omega, std::nullopt, E_moved, dE}; }
};

// random tables and multiplicities; the infinite part of omega is solved for
// so that adjunction holds for E
LedgerState synthetic_ledger(std::mt19937_64& rng, int g, const IdeleCharacter& l);

struct DeltaReport {
  Qp lhs, rhs, residual;
};

// change of both sides of Riemann-Roch when E is added to D
DeltaReport rr_delta_check(const LedgerState& s);
// change of both sides under G -> G + c at one place, for deg L = d and genus g
DeltaReport rr_rescale_invariance(const Field& K, const Elem& c, long d, int g, std::uint64_t seed);

// D.E against the degree of O(D)|_E assembled from the same local data
Qp intform_residual(const ArakelovDivisor& D, const ArakelovDivisor& E, const CurveData& curve,
                    const IdeleCharacter& l);

}  // namespace pak
