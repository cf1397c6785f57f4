#pragma once

#include <vector>

#include "pak/field.hpp"
#include "pak/linalg.hpp"
#include "pak/roots.hpp"

namespace pak {

// Value assigned to log(p); any element of Q_p is a valid branch.
struct LogBranch {
  Qp lambda;
};

inline LogBranch iwasawa_branch(const Ctx& ctx) { return LogBranch{Qp(ctx)}; }

Elem padic_log(const Elem& x, const LogBranch& branch);
Qp padic_log(const Qp& x, const LogBranch& branch);

// Matrix of multiplication by x on the Q_p basis zeta^i pi^j (columns are
// images of basis vectors).
Mat<Qp> mult_matrix(const Elem& x);
Qp trace_qp(const Elem& x);
Qp norm_qp(const Elem& x);

// Relative trace and norm for K -> K' given by inc; x lies in K'.
Elem trace(const Elem& x, const FieldHom& inc);
Elem norm(const Elem& x, const FieldHom& inc);

// Q_p basis element zeta^i pi^j with flat index j*f+i.
Elem basis_element(const Field& K, int k);

}  // namespace pak
