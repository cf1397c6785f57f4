#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pak/field.hpp"

namespace pak {

using KPoly = std::vector<Elem>;

KPoly kpoly_from_ints(const Field& K, const std::vector<long>& c);
KPoly kpoly_map(const FieldHom& h, const KPoly& P);
Elem kpoly_eval(const KPoly& P, const Elem& x);
KPoly kpoly_derivative(const KPoly& P);
// P(c + x)
KPoly kpoly_shift(const KPoly& P, const Elem& c);

// Lower convex hull of the points (i, v(a_i)) in units of 1/e; returns the
// vertex indices.
std::vector<int> newton_polygon(const KPoly& P);

// What prevents a root search from finishing in the current field.
struct Obstruction {
  enum Kind { Unramified, Ramified } kind = Unramified;
  int degree = 1;  // residue degree k, or ramification e'
  Elem c;          // for Ramified: adjoin w with w^e' = c * pi
};

struct RootSearch {
  std::vector<Elem> roots;
  std::optional<Obstruction> obstruction;
};

RootSearch find_roots(const KPoly& P);

Field extend_unramified(const Field& K, int k, FieldHom& hom);
Field extend_ramified(const Field& K, int eprime, const Elem& c, FieldHom& hom);

struct Splitting {
  Field L;
  FieldHom from_base;
  std::vector<Elem> roots;
};

// Smallest field reached by successive minimal extensions in which the
// squarefree polynomial P splits.
Splitting splitting_field(const KPoly& P, int max_degree = 8);

// K[x]/(poly) as a field, certified irreducible.
Field make_extension(const Field& base, const KPoly& poly);
Field make_extension(const Field& base, const std::vector<long>& poly);

// Field maps K' -> target over Q_p, or over K when a map K -> target is given.
std::vector<FieldHom> embeddings(const Field& Kp, const Field& target);
std::vector<FieldHom> embeddings_over(const Field& Kp, const FieldHom& base_to_target);

}  // namespace pak
