#pragma once

#include <json.hpp>

#include "pak/laurent.hpp"

namespace pak {

using json = nlohmann::json;

// {"val": "a/e", "digits": [d0, ...], "prec": n}; digits are pi-adic with
// residue field elements written by index.
json to_json(const Elem& x);
Elem elem_from_json(const json& j, const Field& K);
json to_json(const Qp& x);
Qp qp_from_json(const json& j, const Ctx& ctx);

// {"p": p, "min_poly": [c0, ..., 1]} for Q_p and simple extensions of it
json field_to_json(const Field& K);
Field field_from_json(const json& j, int cap);

json to_json(const LogPoly& F);
LogPoly logpoly_from_json(const json& j, const Field& K);

}  // namespace pak
