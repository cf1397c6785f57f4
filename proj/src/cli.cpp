#include "pak/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "pak/cube.hpp"
#include "pak/curvature.hpp"
#include "pak/expr.hpp"
#include "pak/green.hpp"
#include "pak/ledger.hpp"

namespace pak {
namespace {

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  long prime = 5;
  int precision = 32;
  std::string log_branch = "0";
  std::uint64_t seed = 1;
  std::string out;
  bool prime_given = false;

  int target() const { return precision - 4; }
  Ctx ctx() const { return PrimeContext::get(prime, precision); }
  LogBranch branch() const {
    Ctx c = ctx();
    return LogBranch{parse_scalar_qp(log_branch, c, LogBranch{Qp(c)})};
  }
  json to_json() const {
    return {{"prime", prime}, {"precision", precision}, {"log_branch", log_branch}, {"seed", seed}};
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path_or_text) {
  std::string text = !path_or_text.empty() && path_or_text[0] == '{' ? path_or_text : slurp(path_or_text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("bad JSON in " + (text == path_or_text ? std::string("argument") : path_or_text) + ": " + e.what());
  }
}

// a/b with |a|, |b| < 10^6 congruent to x to its full precision, if any
std::optional<mpq_class> small_rational(const Qp& x) {
  if (x.is_zero()) return x.is_exact_zero() ? std::optional<mpq_class>(0) : std::nullopt;
  mpz_class m, bound = 1000000;
  mpz_ui_pow_ui(m.get_mpz_t(), x.p(), x.rel());
  if (m < 2 * bound * bound) return std::nullopt;
  mpz_class r0 = m, r1 = x.unit() % m, t0 = 0, t1 = 1;
  while (r1 >= bound) {
    mpz_class q = r0 / r1, r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1, r1 = r2, t0 = t1, t1 = t2;
  }
  if (t1 == 0 || abs(t1) >= bound) return std::nullopt;
  mpq_class v(r1, t1);
  v.canonicalize();
  if (x.val() >= 0) {
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), x.p(), x.val());
    v *= s;
  } else {
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), x.p(), -x.val());
    v /= s;
  }
  return v;
}

json value_json(const Elem& x) {
  json j = {{"padic", x.str()}};
  if (x.field()->degree() == 1)
    if (auto q = small_rational(x.coord(0, 0))) j["rational"] = q->get_str();
  return j;
}

json report_head(const std::string& command, const RunConfig& cfg) {
  return {{"schema", kSchema}, {"command", command}, {"config", cfg.to_json()}};
}

std::vector<long> parse_longs(const std::string& s) {
  std::vector<long> r;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      r.push_back(std::stol(tok, &used));
      if (tok.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("not an integer list: " + s);
    }
  }
  if (r.empty()) throw ParseError("empty integer list");
  return r;
}

// {"points": {"P": 1}, "fibres": {"3": 1}, "infinite": {"p": "log(2)"}}
ArakelovDivisor divisor_arg(const std::string& s, const Field& K, const LogBranch& b) {
  json j = read_json(s);
  ArakelovDivisor D;
  try {
    json pts = j.value("points", json::object()), fib = j.value("fibres", json::object());
    json inf = j.value("infinite", json::object());
    for (auto& [P, m] : pts.items()) D.generic = D.generic + DivisorFormal::point(P, m.get<long>());
    for (auto& [q, m] : fib.items()) D.fibres[std::stol(q)] = m.get<long>();
    for (auto& [v, t] : inf.items()) D.infinite[v] = parse_scalar(t.get<std::string>(), K, b);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad divisor: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    throw ParseError(std::string("bad divisor: ") + e.what());
  }
  return D;
}

// {"genus": g, "tables": {"p": table}, "finite": [[q, "P", "Q", m], ...]}
CurveData curve_arg(const std::string& path, const Field& K, const LogBranch& b) {
  json j = read_json(path);
  CurveData C;
  try {
    C.genus = j.at("genus").get<int>();
    for (auto& [v, t] : j.at("tables").items()) C.tables[v] = green_table_from_json(t, K, b);
    for (auto& e : j.value("finite", json::array()))
      C.set_local(e.at(0).get<long>(), e.at(1).get<std::string>(), e.at(2).get<std::string>(), e.at(3).get<long>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad curve file: ") + e.what());
  }
  return C;
}

IdeleCharacter character_arg(const std::string& path, const RunConfig& cfg) {
  IdeleCharacter l = character_from_toml(slurp(path), cfg.precision);
  if (cfg.prime_given && l.p() != cfg.prime) throw ParseError("character file is for p = " + std::to_string(l.p()));
  return l;
}

json sum_to_json(const CharacterSum& s) {
  json places = json::object();
  for (auto& [v, x] : s.per_place) places[v] = x.str();
  return {{"f", s.f.get_str()}, {"per_place", places}, {"total", s.total.str()}};
}

json cmd_double_index(const RunConfig& cfg, const std::string& f, const std::string& g) {
  MeromorphicForm w = parse_form(f), e = parse_form(g);
  GlobalIndex gi = global_double_index(w, e, cfg.branch());
  json r = report_head("double-index", cfg);
  r["f"] = w.str();
  r["g"] = e.str();
  r["splitting_degree"] = gi.split.L->degree();
  json loc = json::array();
  for (auto& li : gi.local) loc.push_back({{"point", li.x.str()}, {"index", value_json(li.value)}});
  r["local"] = loc;
  r["global"] = gi.total_qp.str();
  r["pass"] = assert_equal(gi.total_qp, Qp(cfg.ctx()), cfg.target());
  return r;
}

json cmd_validate_character(const RunConfig& cfg, const std::string& path, const std::string& gens) {
  IdeleCharacter l = character_arg(path, cfg);
  std::vector<mpq_class> fs;
  if (gens.empty()) {
    fs.push_back(-1);
    for (long q = 2; q < 50; ++q)
      if (is_prime(q)) fs.push_back(q);
  } else {
    for (long x : parse_longs(gens)) fs.push_back(x);
  }
  CharacterReport rep = validate_character(l, fs, cfg.target());
  json r = report_head("ledger validate-character", cfg);
  r["character"] = character_to_json(l);
  json sums = json::array();
  for (auto& s : rep.sums) sums.push_back(sum_to_json(s));
  r["sums"] = sums;
  r["pass"] = rep.ok;
  return r;
}

json cmd_intersect(const RunConfig& cfg, const std::string& curve, const std::string& chr, const std::string& d,
                   const std::string& e) {
  IdeleCharacter l = character_arg(chr, cfg);
  Field K = qp_field(l.ctx);
  CurveData C = curve_arg(curve, K, l.place("p").branch);
  ArakelovDivisor D = divisor_arg(d, K, l.place("p").branch), E = divisor_arg(e, K, l.place("p").branch);
  IntersectionReport ir = intersect(D, E, C, l);
  Qp res = intform_residual(D, E, C, l);
  json r = report_head("ledger intersect", cfg);
  json places = json::object();
  for (auto& [v, x] : ir.per_place) places[v] = x.str();
  r["per_place"] = places;
  r["total"] = ir.total.str();
  r["intform_residual"] = res.str();
  r["pass"] = assert_equal(res, Qp(l.ctx), cfg.target());
  return r;
}

json cmd_adjunction(const RunConfig& cfg, const std::string& curve, const std::string& chr, const std::string& e,
                    const std::string& omega, const std::string& self, const std::string& moved,
                    const std::string& dE) {
  IdeleCharacter l = character_arg(chr, cfg);
  Field K = qp_field(l.ctx);
  const LogBranch& b = l.place("p").branch;
  CurveData C = curve_arg(curve, K, b);
  AdjunctionInput in{divisor_arg(e, K, b), std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  if (!omega.empty()) in.omega = divisor_arg(omega, K, b);
  if (!self.empty()) in.self = parse_scalar_qp(self, l.ctx, b);
  if (!moved.empty()) in.moved = divisor_arg(moved, K, b);
  if (!dE.empty()) in.dE = parse_scalar_qp(dE, l.ctx, b);
  AdjunctionReport a = adjunction_check(in, C, l);
  json r = report_head("ledger adjunction", cfg);
  r["omega_E"] = a.omega_E.str();
  r["E_E"] = a.E_E.str();
  r["d_E"] = a.dE.str();
  r["d_inf"] = a.d_inf.str();
  r["residual"] = a.residual.str();
  r["pass"] = assert_equal(a.residual, Qp(l.ctx), cfg.target());
  return r;
}

json cmd_riemann_roch(const RunConfig& cfg, const std::string& rescale, std::optional<long> d, std::optional<int> g,
                      int synthetic) {
  Ctx c = cfg.ctx();
  LogBranch b = cfg.branch();
  json r = report_head("ledger riemann-roch", cfg);
  json rows = json::array();
  bool pass = true;
  if (!rescale.empty()) {
    std::string tok = rescale.rfind("c=", 0) == 0 ? rescale.substr(2) : rescale;
    Field K = qp_field(c);
    Elem cv = parse_scalar(tok, K, b);
    std::vector<long> ds;
    std::vector<int> gs;
    for (long x = -5; x <= 5; ++x)
      if (!d || *d == x) ds.push_back(x);
    for (int x = 1; x <= 5; ++x)
      if (!g || *g == x) gs.push_back(x);
    if (d && ds.empty()) ds.push_back(*d);
    if (g && gs.empty()) gs.push_back(*g);
    for (long dd : ds)
      for (int gg : gs) {
        DeltaReport dr = rr_rescale_invariance(K, cv, dd, gg, cfg.seed);
        bool ok = assert_equal(dr.residual, Qp(c), cfg.target());
        pass = pass && ok;
        rows.push_back({{"d", dd}, {"g", gg}, {"delta_lhs", dr.lhs.str()}, {"delta_rhs", dr.rhs.str()}, {"pass", ok}});
      }
    r["rescale"] = tok;
  } else {
    std::mt19937_64 rng(cfg.seed);
    IdeleCharacter l = standard_character(c, b);
    for (int i = 0; i < synthetic; ++i) {
      int gg = g ? *g : static_cast<int>(1 + i % 3);
      LedgerState s = synthetic_ledger(rng, gg, l);
      DeltaReport dr = rr_delta_check(s);
      AdjunctionReport a = adjunction_check(s.adjunction(), s.curve, s.l);
      bool ok = assert_equal(dr.residual, Qp(c), cfg.target()) && assert_equal(a.residual, Qp(c), cfg.target());
      pass = pass && ok;
      rows.push_back({{"state", i}, {"g", gg}, {"delta_lhs", dr.lhs.str()}, {"delta_rhs", dr.rhs.str()},
                      {"adjunction_residual", a.residual.str()}, {"pass", ok}});
    }
  }
  r["rows"] = rows;
  r["pass"] = pass;
  return r;
}

json cmd_codifferent(const RunConfig& cfg, const std::string& poly, const std::string& chr) {
  IdeleCharacter l = chr.empty() ? standard_character(cfg.ctx(), cfg.branch()) : character_arg(chr, cfg);
  OrderReport o = codifferent_and_chi(parse_longs(poly), l);
  json r = report_head("ledger codifferent", cfg);
  r["disc"] = o.disc.get_str();
  json basis = json::array();
  for (auto& v : o.codifferent) {
    json row = json::array();
    for (auto& x : v) row.push_back(x.get_str());
    basis.push_back(row);
  }
  r["codifferent"] = basis;
  r["deg_W"] = o.deg_W.str();
  r["chi"] = o.chi.str();
  r["chi_direct"] = o.chi_direct.str();
  r["pass"] = assert_equal(o.chi, o.chi_direct, cfg.target());
  return r;
}

json cmd_curvature(const RunConfig& cfg, int g) {
  using X = DeRhamSpace<RationalKit>;
  X sp = X::standard(g);
  auto m = mu(sp);
  auto P = phi(sp);
  auto scaled = m.coords;
  for (auto& row : scaled)
    for (auto& x : row) x *= 2 - 2 * g;
  bool delta = diagonal_pullback(sp, P).coords == scaled;
  bool section = section_pullback(sp, P).coords == m.coords;
  auto cl = diagonal_class(sp);
  auto cp = cup_of_htensor(sp, P);
  bool coords = cp.top1 == cl.top1 && cp.top2 == cl.top2 && cp.mixed == cl.mixed;
  bool duality = true;
  int n = 0;
  for (auto& b : kunneth_basis(sp)) {
    duality = duality && trace_pairing(sp, cp, b) == trace_diagonal(sp, b);
    ++n;
  }
  json r = report_head("curvature", cfg);
  r["genus"] = g;
  r["identities"] = json::array({{{"name", "Delta^* Phi = (2-2g) mu"}, {"pass", delta}},
                                 {{"name", "i_P^* Phi = mu"}, {"pass", section}},
                                 {{"name", "cup Phi = cl(Delta)"}, {"pass", coords}},
                                 {{"name", "trace duality on the Kunneth basis"}, {"pass", duality}, {"basis", n}}});
  r["pass"] = delta && section && coords && duality;
  return r;
}

json formula_block(const SyntheticGreen& S) {
  return {{"P", S.P}, {"Q", S.Q}, {"a", S.a}, {"b", S.b}, {"div_w1", divisor_to_json(S.div_w1)},
          {"div_w2", divisor_to_json(S.div_w2)}};
}

json cmd_green(const RunConfig& cfg, const std::string& table, bool check, bool synthetic, int g) {
  Field K = qp_field(cfg.ctx());
  LogBranch b = cfg.branch();
  json r = report_head("green", cfg);
  if (synthetic) {
    std::mt19937_64 rng(cfg.seed);
    SyntheticGreen S = synthetic_green(rng, g, K);
    json t = green_table_to_json(S.table);
    t["formula"] = formula_block(S);
    r["table"] = t;
    r["pass"] = true;
    return r;
  }
  if (table.empty()) throw ParseError("green needs --table or --synthetic");
  json j = read_json(table);
  if (j.contains("table")) j = j["table"];
  GreenTable T = green_table_from_json(j, K, b);
  r["genus"] = T.genus();
  r["entries"] = T.entries().size();
  bool pass = true;
  if (check) {
    json f = j.value("formula", json());
    if (f.is_null()) throw ParseError("table has no formula block");
    std::string P, Q, a, bb;
    DivisorFormal w1, w2;
    try {
      P = f.at("P");
      Q = f.at("Q");
      a = f.at("a");
      bb = f.at("b");
      w1 = divisor_from_json(f.at("div_w1"));
      w2 = divisor_from_json(f.at("div_w2"));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad formula block: ") + e.what());
    }
    Elem r1 = residue_log_residual(T, P, a, w1), r2 = residue_log_residual(T, Q, bb, w2);
    Elem G = green_from_formula(TableOracle(T), T.genus(), a, bb, P, Q, w1, w2);
    const Elem& want = T.get(P, Q);
    bool c1 = assert_equal(r1, Elem(K), cfg.target()), c2 = assert_equal(r2, Elem(K), cfg.target());
    bool c3 = assert_equal(G, want, cfg.target());
    r["checks"] = json::array({{{"name", "residue-log condition at (P, a)"}, {"residual", r1.str()}, {"pass", c1}},
                               {{"name", "residue-log condition at (Q, b)"}, {"residual", r2.str()}, {"pass", c2}},
                               {{"name", "Green formula reproduces G(P, Q)"},
                                {"formula", G.str()},
                                {"table", want.str()},
                                {"pass", c3}}});
    pass = c1 && c2 && c3;
  }
  r["pass"] = pass;
  return r;
}

json cmd_cube_diff(const RunConfig& cfg, int n, int degree, int rank, int samples) {
  if (n < 0 || n > 8 || degree < 0 || rank < 1 || samples < 1) throw ParseError("cube-diff: bad sizes");
  std::mt19937_64 rng(cfg.seed);
  auto f = rational_function(Polynomial::random(rng, rank, degree));
  auto s = integer_samples(rng, rank, n, samples);
  json rows = json::array();
  bool pass = true;
  auto row = [&](const std::string& name, bool ok, json extra = json::object()) {
    extra["identity"] = name;
    extra["pass"] = ok;
    rows.push_back(extra);
    pass = pass && ok;
  };
  bool zero = true;
  mpq_class witness = 0;
  for (auto& t : s) {
    mpq_class v = dd_n(f, t.x, t.h);
    zero = zero && v == 0;
    witness = larger(witness, v);
  }
  row("D^n f = 0 exactly when deg f < n", zero == (degree < n),
      {{"annihilated", zero}, {"expected", degree < n}, {"max_value", witness.get_str()}});
  bool mono = true;
  int count = 0;
  for (int d = 0; d < n; ++d)
    for (auto& e : Polynomial::exponents(rank, d)) {
      auto m = rational_function(Polynomial::monomial(e));
      for (auto& t : s) mono = mono && dd_n(m, t.x, t.h) == 0;
      ++count;
    }
  row("D^n kills every monomial of degree < n", mono, {{"monomials", count}});
  row("subset sum = (-1)^n recursion", recursion_check(f, s) == 0);
  for (int i = 0; i < n; ++i)
    row("restriction h_" + std::to_string(i + 1) + " = 0", restriction_vanishing(f, s, i) == 0);
  bool sym = true;
  for (auto& t : s) {
    auto h = t.h;
    std::reverse(h.begin(), h.end());
    sym = sym && dd_n(f, t.x, h) == dd_n(f, t.x, t.h);
    if (h.size() > 1) {
      std::rotate(h.begin(), h.begin() + 1, h.end());
      sym = sym && dd_n(f, t.x, h) == dd_n(f, t.x, t.h);
    }
  }
  row("symmetric in the steps", sym);
  json r = report_head("cube-diff", cfg);
  r["n"] = n;
  r["degree"] = degree;
  r["rank"] = rank;
  r["f"] = f.poly->str();
  r["table"] = rows;
  r["pass"] = pass;
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic Arakelov toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  auto* prime_opt = app.add_option("--prime", cfg.prime, "the prime p");
  app.add_option("--precision", cfg.precision, "relative precision N; checks use N - 4");
  app.add_option("--log-branch", cfg.log_branch, "lambda = log p, as a scalar token");
  app.add_option("--seed", cfg.seed, "seed of the synthetic generators");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");

  std::function<json()> action;

  auto* di = app.add_subcommand("double-index", "global double index of two forms on P^1");
  std::string f, g;
  di->add_option("--f", f)->required();
  di->add_option("--g", g)->required();
  di->callback([&] { action = [&] { return cmd_double_index(cfg, f, g); }; });

  auto* led = app.add_subcommand("ledger", "Arakelov ledger");
  led->require_subcommand(1);
  led->fallthrough();
  auto* vc = led->add_subcommand("validate-character");
  std::string chr, gens;
  vc->add_option("file", chr)->required();
  vc->add_option("--generators", gens, "comma separated integers");
  vc->callback([&] { action = [&] { return cmd_validate_character(cfg, chr, gens); }; });

  auto* is = led->add_subcommand("intersect");
  std::string curve, d_arg, e_arg;
  is->add_option("--curve", curve)->required();
  is->add_option("--character", chr)->required();
  is->add_option("--D", d_arg)->required();
  is->add_option("--E", e_arg)->required();
  is->callback([&] { action = [&] { return cmd_intersect(cfg, curve, chr, d_arg, e_arg); }; });

  auto* ad = led->add_subcommand("adjunction");
  std::string omega, self, moved, dE;
  ad->add_option("--curve", curve)->required();
  ad->add_option("--character", chr)->required();
  ad->add_option("--E", e_arg)->required();
  ad->add_option("--omega", omega);
  ad->add_option("--self", self);
  ad->add_option("--moved", moved);
  ad->add_option("--dE", dE);
  ad->callback([&] { action = [&] { return cmd_adjunction(cfg, curve, chr, e_arg, omega, self, moved, dE); }; });

  auto* rr = led->add_subcommand("riemann-roch");
  std::string rescale;
  std::optional<long> rr_d;
  std::optional<int> rr_g;
  int synthetic = 20;
  rr->add_option("--rescale", rescale, "c=TOKEN");
  rr->add_option("--degree", rr_d);
  rr->add_option("--genus", rr_g);
  rr->add_option("--synthetic", synthetic, "number of synthetic states");
  rr->callback([&] { action = [&] { return cmd_riemann_roch(cfg, rescale, rr_d, rr_g, synthetic); }; });

  auto* cd = led->add_subcommand("codifferent");
  std::string poly, cchr;
  cd->add_option("--poly", poly, "coefficients of f, constant term first")->required();
  cd->add_option("--character", cchr);
  cd->callback([&] { action = [&] { return cmd_codifferent(cfg, poly, cchr); }; });

  auto* cu = app.add_subcommand("curvature");
  int genus = 1;
  cu->add_option("--genus", genus)->check(CLI::Range(1, 12));
  cu->callback([&] { action = [&] { return cmd_curvature(cfg, genus); }; });

  auto* gr = app.add_subcommand("green");
  std::string table;
  bool check = false, synth = false;
  int ggenus = 2;
  gr->add_option("--table", table);
  gr->add_flag("--check-formula", check);
  gr->add_flag("--synthetic", synth);
  gr->add_option("--genus", ggenus)->check(CLI::Range(1, 8));
  gr->callback([&] { action = [&] { return cmd_green(cfg, table, check, synth, ggenus); }; });

  auto* cube = app.add_subcommand("cube-diff");
  int n = 3, degree = 2, rank = 2, samples = 10;
  cube->add_option("--n", n);
  cube->add_option("--degree", degree);
  cube->add_option("--rank", rank);
  cube->add_option("--samples", samples);
  cube->callback([&] { action = [&] { return cmd_cube_diff(cfg, n, degree, rank, samples); }; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  cfg.prime_given = prime_opt->count() > 0;

  try {
    if (!is_prime(cfg.prime)) throw ParseError("--prime must be a prime");
    if (cfg.precision < 8 || cfg.precision > 4096) throw ParseError("--precision out of range");
    json r = action();
    std::string text = r.dump(2) + "\n";
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream o(cfg.out);
      if (!o) throw FileError("cannot write " + cfg.out);
      o << text;
    }
    return r.value("pass", false) ? kExitOk : kExitViolated;
  } catch (const PrecisionExhausted& e) {
    err << "precision: " << e.what() << "\n";
    return kExitPrecision;
  } catch (const ParseError& e) {
    err << "parse: " << e.what() << "\n";
    return kExitParse;
  } catch (const FileError& e) {
    err << "file: " << e.what() << "\n";
    return kExitParse;
  } catch (const json::exception& e) {
    err << "parse: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::out_of_range& e) {
    err << "input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace pak
