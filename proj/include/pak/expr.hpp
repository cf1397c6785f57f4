#pragma once

#include <stdexcept>
#include <string>

#include "pak/coleman.hpp"
#include "pak/padic.hpp"

namespace pak {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scalars: integers, p, + - * / ^n, parentheses and log(...), e.g. "-log(2)",
// "3/2*log(2) + 5^3".
Elem parse_scalar(const std::string& s, const Field& K, const LogBranch& b);
Qp parse_scalar_qp(const std::string& s, const Ctx& ctx, const LogBranch& b);

// Rational functions in t, e.g. "(t^2 - 2)/(3t + 1)".
RationalFn parse_rational(const std::string& s);

// Sums of terms r dt, dlog f and d f with rational r, f; juxtaposition
// multiplies, e.g. "dt/t^2", "dlog (t-2)", "2 dlog t - d(1/t)", "(t+1)/t dt".
MeromorphicForm parse_form(const std::string& s);

}  // namespace pak
