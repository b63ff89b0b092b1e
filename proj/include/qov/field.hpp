#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qov/common.hpp"

namespace qov::field {

using Rat = boost::multiprecision::cpp_rational;

// Dense polynomial over the rationals; index = degree, high zeros stripped,
// the zero polynomial is the empty list.
struct Poly {
  std::vector<Rat> c;

  static Poly zero() { return {}; }
  static Poly constant(Rat v);
  static Poly t_power(int64_t n);  // n >= 0

  bool is_zero() const { return c.empty(); }
  int64_t degree() const { return static_cast<int64_t>(c.size()) - 1; }
  int64_t trail_degree() const;  // lowest nonzero degree; -1 when zero
  Rat eval(const Rat& x) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  bool operator==(const Poly& o) const { return c == o.c; }
};

// Exact rational function over Q in one variable t, normalized so that the
// numerator and denominator share no factor t.
struct RatFunc {
  Poly num;
  Poly den;  // nonzero

  RatFunc() : den(Poly::constant(1)) {}
  RatFunc(Poly n, Poly d);
  static RatFunc constant(Rat v) { return RatFunc(Poly::constant(std::move(v)), Poly::constant(1)); }
  static RatFunc t_power(int64_t n);  // any sign

  bool is_zero() const { return num.is_zero(); }
  bool same_value(const RatFunc& o) const { return (num * o.den) == (o.num * den); }
  Rat eval(const Rat& x) const;  // throws DivisionByZero when den(x) = 0

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const;
  RatFunc inverse() const;  // throws DivisionByZero on 0

  std::string to_string() const;
};

RatFunc parse_ratfunc(std::string_view text);  // "(2 + t - 3t^2)/(t^3)" etc.

// t-adic value: lowest nonzero degree of the numerator minus the
// denominator's; nullopt encodes infinity (only at 0).
std::optional<int64_t> tadic_val(const RatFunc& f);

// Residue: ratio of the trailing coefficients when v(f) = 0, zero when
// v(f) > 0. Requires v(f) >= 0.
Rat residue(const RatFunc& f);

// phi_g(a) = t^g * a, an isomorphism from the residue field onto the level-g
// quotient; its inverse is f -> residue(f / t^g) (requires v(f) >= g).
RatFunc phi(int64_t g, const Rat& a);
Rat phi_inv(int64_t g, const RatFunc& f);

// The fixed q-section n -> t^n: s(0) = 1, v(s(n)) = n, and
// s(m+n) = s(m) s(n) exactly (so the square defect is 1).
RatFunc q_section(int64_t n);
CheckResult check_q_section(int64_t radius);

struct FieldOrderTag {
  int eta = +1;  // sign given to t; the residue order is the standard one on Q
};

// Sign of f under the order that makes t an infinitesimal of sign eta:
// sign(residue ratio) * eta^v(f). Validated against the evaluation oracle.
int sign_under(const RatFunc& f, const FieldOrderTag& tag);

// Independent oracle: exact sign of f(eta * 10^-k), with k and k+1 required
// to agree (k starts high enough for the integer-coefficient corpus and is
// bumped past any accidental pole).
int sign_by_evaluation(const RatFunc& f, const FieldOrderTag& tag, int k_start = 6);

struct SampleCheck {
  bool pass = true;
  uint64_t pairs = 0;
  std::string failure;  // first failing identity, if any
};

// For all sample pairs: sign multiplicativity, additivity on same-sign pairs,
// and v-compatibility (0 < f < g implies v(f) >= v(g)).
SampleCheck check_field_order_samples(const std::function<int(const RatFunc&)>& sign,
                                      const std::vector<RatFunc>& samples);
SampleCheck check_field_order_samples(const FieldOrderTag& tag, const std::vector<RatFunc>& samples);

// Direction table for the quotient isomorphisms: +1 when phi_g preserves the
// order, -1 when it reverses it.
struct DirectionTable {
  std::vector<std::pair<int64_t, int>> entries;  // (g, direction)
};

struct DirectionResult {
  bool pass = false;
  int eta = +1;  // table(1) when passing
  std::optional<std::pair<int64_t, int64_t>> witness_pair;
  std::string note;
};

// The table extends to a homomorphism Z -> {-1,1} iff table(g) = table(1)^g
// on the probe set. The witness pair (1, g-1) names the first forced value
// that the table contradicts.
DirectionResult check_prop_fieldorders(const DirectionTable& table);

// Sign character on Z^d from signs on the basis: eps(g) = prod signs_i^(g_i mod 2).
struct SignHom {
  int rank = 1;
  std::vector<int> basis_signs;
  int eval(const std::vector<int64_t>& g) const;
};

SignHom epsilon_from_eta(int rank, std::vector<int> basis_signs);
CheckResult check_sign_hom_multiplicative(const SignHom& hom, int64_t radius);

struct ClassicalTagReport {
  int eta = +1;
  bool oracle_agrees = false;
  bool order_valid = false;
  int recovered_eta = 0;
  bool residue_order_standard = false;
  std::string detail;
};

struct ClassicalBKReport {
  uint64_t seed = 0;
  int corpus_size = 0;
  std::vector<std::string> corpus;  // literals, echoed for reproducibility
  ClassicalTagReport tags[2];
  bool tags_distinct = false;
  int count = 0;  // orders passing every check (expected: exactly 2)
  bool pass = false;
};

// Enumerate the compatible field orders of Q(t) over the t-adic valuation:
// two tags (eta = +1 / -1, residue order standard), verified on a seeded
// random corpus and mapped back to (eta, residue order).
ClassicalBKReport classical_bk(uint64_t seed, int corpus_size);
ClassicalBKReport classical_bk_on(const std::vector<RatFunc>& corpus, uint64_t seed_echo = 0);

// Seeded corpus of nonzero rational functions with numerator/denominator
// degree <= 4 and integer coefficients in [-10, 10].
std::vector<RatFunc> random_corpus(uint64_t seed, int count, int max_degree = 4,
                                   int coeff_bound = 10);

}  // namespace qov::field
