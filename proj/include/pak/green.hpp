#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pak/json_io.hpp"
#include "pak/padic.hpp"

namespace pak {

struct OverlappingSupport : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingTableEntry : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct DegreeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct OracleFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AsymmetricTable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CurvePoints {
  std::vector<std::string> labels;
  // field of definition of each point, e.g. "Q_5"
  std::map<std::string, std::string> field_tags;
};

// Formal sum of labelled points; kept sorted with no zero multiplicities.
class DivisorFormal {
 public:
  DivisorFormal() = default;
  DivisorFormal(std::initializer_list<std::pair<std::string, long>> terms);
  static DivisorFormal point(const std::string& P, long m = 1);

  const std::map<std::string, long>& terms() const { return terms_; }
  long degree() const;
  bool is_degree_zero() const { return degree() == 0; }
  bool is_zero() const { return terms_.empty(); }
  long mult(const std::string& P) const;
  bool disjoint(const DivisorFormal& o) const;

  DivisorFormal operator+(const DivisorFormal& o) const;
  DivisorFormal operator-(const DivisorFormal& o) const;
  DivisorFormal scale(long k) const;
  bool operator==(const DivisorFormal& o) const { return terms_ == o.terms_; }
  std::string str() const;

 private:
  std::map<std::string, long> terms_;
  void add(const std::string& P, long m);
};

class GreenTable {
 public:
  GreenTable() = default;
  GreenTable(int genus, Field K) : genus_(genus), K_(std::move(K)) {}

  int genus() const { return genus_; }
  const Field& field() const { return K_; }
  // rejects P == Q; a second, different value for the same pair throws AsymmetricTable
  void set(const std::string& P, const std::string& Q, const Elem& v);
  void assign(const std::string& P, const std::string& Q, const Elem& v);
  bool has(const std::string& P, const std::string& Q) const;
  const Elem& get(const std::string& P, const std::string& Q) const;
  const std::map<std::pair<std::string, std::string>, Elem>& entries() const { return entries_; }
  std::vector<std::string> labels() const;

  std::optional<std::pair<std::string, std::string>> anchor;
  // shift every entry by c
  GreenTable shifted(const Elem& c) const;
  // shift so that G(anchor) = 0
  GreenTable normalized() const;

 private:
  int genus_ = 1;
  Field K_;
  std::map<std::pair<std::string, std::string>, Elem> entries_;
};

// sum n_i m_j G(P_i, Q_j)
Elem pairing_from_green(const GreenTable& table, const DivisorFormal& D, const DivisorFormal& E);

class HeightOracle {
 public:
  virtual ~HeightOracle() = default;
  // integral over E of the third kind form with residue divisor D_res
  virtual Elem integrate(const DivisorFormal& D_res, const DivisorFormal& E) const = 0;
  virtual const Field& field() const = 0;
};

class TableOracle : public HeightOracle {
 public:
  explicit TableOracle(GreenTable t) : table_(std::move(t)) {}
  Elem integrate(const DivisorFormal& D_res, const DivisorFormal& E) const override;
  const Field& field() const override { return table_.field(); }
  const GreenTable& table() const { return table_; }

 private:
  GreenTable table_;
};

// div_w1 is the divisor of a log form with poles at P and a, div_w2 likewise for Q and b
Elem green_from_formula(const HeightOracle& oracle, int g, const std::string& a, const std::string& b,
                        const std::string& P, const std::string& Q, const DivisorFormal& div_w1,
                        const DivisorFormal& div_w2);

// G_{X-Y}(div w + X + Y); the residue-log condition on w makes this vanish
Elem residue_log_residual(const GreenTable& table, const std::string& X, const std::string& Y,
                          const DivisorFormal& div_w);

Elem iota_log(const Elem& log_f, const Elem& G_principal);

struct LineRecord {
  long deg = 0;
  bool canonical = false;
  // iota_log at each place; also the fibre coefficient of its Chern class
  std::map<std::string, Elem> iota;
};

struct GreenState {
  int genus = 1;
  std::map<std::string, GreenTable> tables;
  std::map<std::string, LineRecord> lines;
  // fibre shift of the canonical class recorded per place
  std::map<std::string, Elem> canonical_shift;
};

// G -> G + c at place v
GreenState rescale_green(const GreenState& s, const std::string& v, const Elem& c);

// log form whose divisor is div, with simple poles at the two labels
struct LogFormData {
  std::string pole1, pole2;
  DivisorFormal div;
};

struct SyntheticGreen {
  GreenTable table;
  std::string P, Q, a, b;
  DivisorFormal div_w1, div_w2;
};

// Random symmetric table with G(a, b) = 0, and divisors of log forms at (P, a)
// and (Q, b) satisfying the residue-log condition.
SyntheticGreen synthetic_green(std::mt19937_64& rng, int g, const Field& K);
Elem random_element(std::mt19937_64& rng, const Field& K, int vmin, int vmax);

json green_table_to_json(const GreenTable& t);
GreenTable green_table_from_json(const json& j, const Field& K, const LogBranch& b);
json divisor_to_json(const DivisorFormal& D);
DivisorFormal divisor_from_json(const json& j);

}  // namespace pak
