#include "pak/expr.hpp"

#include <cctype>
#include <vector>

namespace pak {

namespace {

struct Tok {
  enum Kind { Num, Ident, Sym, End } kind;
  std::string text;
  size_t pos;
};

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    size_t j = i;
    if (std::isdigit(c)) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Num, s.substr(i, j - i), i});
    } else if (std::isalpha(c) || c == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), i});
    } else if (std::string("+-*/^()").find(static_cast<char>(c)) != std::string::npos) {
      j = i + 1;
      out.push_back({Tok::Sym, s.substr(i, 1), i});
    } else {
      throw ParseError("unexpected character '" + s.substr(i, 1) + "' at " + std::to_string(i));
    }
    i = j;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

template <class Alg>
class Parser {
 public:
  using V = typename Alg::V;
  Parser(const std::string& s, const Alg& alg) : toks_(lex(s)), alg_(alg) {}

  V parse() {
    V v = expr();
    if (peek().kind != Tok::End) fail("trailing input");
    return v;
  }

 private:
  std::vector<Tok> toks_;
  size_t k_ = 0;
  const Alg& alg_;

  const Tok& peek() const { return toks_[k_]; }
  bool sym(const char* c) const { return peek().kind == Tok::Sym && peek().text == c; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at " + std::to_string(peek().pos));
  }

  V expr() {
    V v = term();
    while (sym("+") || sym("-")) {
      bool plus = peek().text == "+";
      ++k_;
      V w = term();
      v = plus ? alg_.add(v, w) : alg_.sub(v, w);
    }
    return v;
  }

  bool starts_factor() const {
    return peek().kind == Tok::Num || peek().kind == Tok::Ident || sym("(");
  }

  V term() {
    V v = unary();
    while (true) {
      if (sym("*")) {
        ++k_;
        v = alg_.mul(v, unary());
      } else if (sym("/")) {
        ++k_;
        v = alg_.div(v, unary());
      } else if (starts_factor()) {
        v = alg_.mul(v, power());
      } else {
        return v;
      }
    }
  }

  V unary() {
    if (sym("-")) {
      ++k_;
      return alg_.neg(unary());
    }
    if (sym("+")) {
      ++k_;
      return unary();
    }
    return power();
  }

  V power() {
    V v = primary();
    if (sym("^")) {
      ++k_;
      bool neg = false;
      if (sym("-")) {
        neg = true;
        ++k_;
      }
      if (peek().kind != Tok::Num) fail("expected an integer exponent");
      if (peek().text.size() > 6) fail("exponent too large");
      int n = std::stoi(peek().text);
      ++k_;
      v = alg_.pow(v, neg ? -n : n);
    }
    return v;
  }

  V primary() {
    const Tok& t = peek();
    if (t.kind == Tok::Num) {
      ++k_;
      return alg_.number(mpz_class(t.text));
    }
    if (sym("(")) {
      ++k_;
      V v = expr();
      if (!sym(")")) fail("expected ')'");
      ++k_;
      return v;
    }
    if (t.kind == Tok::Ident) {
      std::string name = t.text;
      ++k_;
      if (alg_.is_prefix(name)) {
        if (!starts_factor()) fail("missing argument to " + name);
        return alg_.apply(name, power());
      }
      return alg_.ident(name, t.pos);
    }
    fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }
};

struct ScalarAlg {
  using V = Elem;
  Field K;
  LogBranch b;

  V number(const mpz_class& n) const { return Elem(K, mpq_class(n)); }
  V ident(const std::string& name, size_t pos) const {
    if (name == "p") return Elem(K, K->p());
    throw ParseError("unknown symbol '" + name + "' at " + std::to_string(pos));
  }
  bool is_prefix(const std::string& name) const { return name == "log"; }
  V apply(const std::string&, const V& x) const {
    if (x.is_zero()) throw ParseError("log of zero");
    return padic_log(x, b);
  }
  V add(const V& a, const V& c) const { return a + c; }
  V sub(const V& a, const V& c) const { return a - c; }
  V mul(const V& a, const V& c) const { return a * c; }
  V div(const V& a, const V& c) const {
    if (c.is_zero()) throw ParseError("division by zero");
    return a / c;
  }
  V neg(const V& a) const { return -a; }
  V pow(const V& a, int n) const {
    if (n < 0 && a.is_zero()) throw ParseError("division by zero");
    return a.pow(n);
  }
};

struct FormValue {
  RationalFn r;
  bool form = false;
};

struct FormAlg {
  using V = FormValue;
  bool allow_forms = true;

  V number(const mpz_class& n) const { return {RationalFn::constant(mpq_class(n)), false}; }
  V ident(const std::string& name, size_t pos) const {
    if (name == "t") return {RationalFn::t(), false};
    if (name == "dt" && allow_forms) return {RationalFn::constant(1), true};
    throw ParseError("unknown symbol '" + name + "' at " + std::to_string(pos));
  }
  bool is_prefix(const std::string& name) const { return allow_forms && (name == "dlog" || name == "d"); }
  V apply(const std::string& name, const V& x) const {
    if (x.form) throw ParseError(name + " of a form");
    if (name == "dlog") {
      if (x.r.is_zero()) throw ParseError("dlog of zero");
      return {MeromorphicForm::dlog(x.r).body, true};
    }
    return {x.r.derivative(), true};
  }
  V add(const V& a, const V& c) const {
    if (a.form != c.form) throw ParseError("cannot add a function and a form");
    return {a.r + c.r, a.form};
  }
  V sub(const V& a, const V& c) const {
    if (a.form != c.form) throw ParseError("cannot subtract a function and a form");
    return {a.r - c.r, a.form};
  }
  V mul(const V& a, const V& c) const {
    if (a.form && c.form) throw ParseError("product of two forms");
    return {a.r * c.r, a.form || c.form};
  }
  V div(const V& a, const V& c) const {
    if (c.form) throw ParseError("division by a form");
    if (c.r.is_zero()) throw ParseError("division by zero");
    return {a.r / c.r, a.form};
  }
  V neg(const V& a) const { return {-a.r, a.form}; }
  V pow(const V& a, int n) const {
    if (a.form) throw ParseError("power of a form");
    if (n < 0 && a.r.is_zero()) throw ParseError("division by zero");
    return {a.r.pow(n), false};
  }
};

}  // namespace

Elem parse_scalar(const std::string& s, const Field& K, const LogBranch& b) {
  ScalarAlg alg{K, b};
  return Parser<ScalarAlg>(s, alg).parse();
}

Qp parse_scalar_qp(const std::string& s, const Ctx& ctx, const LogBranch& b) {
  Elem x = parse_scalar(s, qp_field(ctx), b);
  return x.coords()[0];
}

RationalFn parse_rational(const std::string& s) {
  FormAlg alg{false};
  return Parser<FormAlg>(s, alg).parse().r;
}

MeromorphicForm parse_form(const std::string& s) {
  FormAlg alg{true};
  FormValue v = Parser<FormAlg>(s, alg).parse();
  if (!v.form && !v.r.is_zero()) throw ParseError("expected a differential form (use dt, dlog or d)");
  return {v.r};
}

}  // namespace pak
