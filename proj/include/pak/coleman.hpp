#pragma once

#include <string>
#include <vector>

#include "pak/laurent.hpp"
#include "pak/qpoly.hpp"

namespace pak {

struct NotThirdKindFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// body * dt
struct MeromorphicForm {
  RationalFn body;

  static MeromorphicForm dlog(const RationalFn& f) { return {f.derivative() / f}; }
  static MeromorphicForm d(const RationalFn& f) { return {f.derivative()}; }
  MeromorphicForm operator+(const MeromorphicForm& o) const { return {body + o.body}; }
  MeromorphicForm operator-(const MeromorphicForm& o) const { return {body - o.body}; }
  MeromorphicForm scale(const mpq_class& c) const { return {body * RationalFn::constant(c)}; }
  // pullback along t -> (a t + b) / (c t + d)
  MeromorphicForm mobius(const mpq_class& a, const mpq_class& b, const mpq_class& c, const mpq_class& d) const;
  std::string str() const { return body.str() + " dt"; }
};

struct PointP1 {
  bool inf = false;
  Elem a;

  static PointP1 infinity() { return {true, Elem()}; }
  static PointP1 finite(const Elem& x) { return {false, x}; }
  std::string str() const { return inf ? "inf" : a.str(); }
};

// residue c of a simple pole at a
struct Pole {
  Elem a, c;
};

Splitting splitting_of(const QPoly& P, const Ctx& ctx);

// w = d(exact) + sum c_i dlog(t - a_i)
struct PartialFractions {
  RationalFn exact;
  QPoly log_num, log_den;
  Splitting split;
  std::vector<Pole> poles;
};

PartialFractions partial_fractions(const MeromorphicForm& w, const Ctx& ctx);
// S must contain the roots of the squarefree part of the denominator among S.roots
PartialFractions partial_fractions(const MeromorphicForm& w, const Splitting& S);

// rat + sum c_i log(t - a_i) + c_const over the field L
struct ColemanPrimitive {
  Field L;
  LogBranch branch;
  RationalFn rat;
  std::vector<Pole> logs;
  Elem c_const;

  std::string str() const;
};

ColemanPrimitive primitive(const MeromorphicForm& w, const LogBranch& b);
ColemanPrimitive primitive(const MeromorphicForm& w, const LogBranch& b, const Splitting& S);
// F((a t + b) / (c t + d)) as a primitive of the pulled back form
ColemanPrimitive mobius(const ColemanPrimitive& F, const mpq_class& a, const mpq_class& b, const mpq_class& c,
                        const mpq_class& d);
PointP1 mobius_inverse_point(const PointP1& x, const Field& L, const mpq_class& a, const mpq_class& b,
                             const mpq_class& c, const mpq_class& d);

// local variable t - x, or 1/t at infinity
A1Element expand_at(const ColemanPrimitive& F, const PointP1& x, int window);
// Laurent expansion of the form body at x, in the local variable, as the
// coefficient of d(local variable)
Laurent expand_form_at(const MeromorphicForm& w, const PointP1& x, const Field& L, int window);

struct LocalIndex {
  PointP1 x;
  Elem value;
};

// The form version works with kGuardDigits extra digits; split, branch and
// local values live at that precision and total_qp at the caller's.
inline constexpr int kGuardDigits = 16;

struct GlobalIndex {
  Splitting split;
  LogBranch branch;
  std::vector<LocalIndex> local;
  Elem total;
  Qp total_qp;
};

int expansion_window(const ColemanPrimitive& F, const ColemanPrimitive& G);
GlobalIndex global_double_index(const MeromorphicForm& w, const MeromorphicForm& e, const LogBranch& b);
// sum of local indices over the roots of S and infinity
GlobalIndex global_double_index(const ColemanPrimitive& F, const ColemanPrimitive& G, const Splitting& S);

struct ResidueEntry {
  PointP1 x;
  Elem res;
};

std::vector<ResidueEntry> residue_divisor(const MeromorphicForm& w, const Ctx& ctx);
bool is_second_kind(const MeromorphicForm& w);
bool is_third_kind(const MeromorphicForm& w);

// Polynomial in t and s: coefficient of s^j is terms[j].
struct BiPoly {
  std::vector<QPoly> terms;
  QPoly at(const mpq_class& s) const;
  BiPoly ds() const;
};

// omega_s = num(t, s) / den(t, s) dt
struct FormFamily {
  BiPoly num, den;
  MeromorphicForm at(const mpq_class& s) const;
};

MeromorphicForm family_derivative(const FormFamily& fam, const mpq_class& s0);

}  // namespace pak
