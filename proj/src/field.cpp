#include "qov/field.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace qov::field {

namespace {
void strip_high_zeros(std::vector<Rat>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}
}  // namespace

Poly Poly::constant(Rat v) {
  Poly p;
  if (v != 0) p.c.push_back(std::move(v));
  return p;
}

Poly Poly::t_power(int64_t n) {
  Poly p;
  p.c.assign(n + 1, Rat(0));
  p.c[n] = 1;
  return p;
}

int64_t Poly::trail_degree() const {
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) return static_cast<int64_t>(i);
  return -1;
}

Rat Poly::eval(const Rat& x) const {
  Rat acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
  strip_high_zeros(out.c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& v : out.c) v = -v;
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly::zero();
  Poly out;
  out.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  }
  strip_high_zeros(out.c);
  return out;
}

RatFunc::RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw Error(Errc::DivisionByZero, "zero denominator");
  if (num.is_zero()) {
    den = Poly::constant(1);
    return;
  }
  // Cancel the common power of t.
  int64_t shift = std::min(num.trail_degree(), den.trail_degree());
  if (shift > 0) {
    num.c.erase(num.c.begin(), num.c.begin() + shift);
    den.c.erase(den.c.begin(), den.c.begin() + shift);
  }
}

RatFunc RatFunc::t_power(int64_t n) {
  if (n >= 0) return RatFunc(Poly::t_power(n), Poly::constant(1));
  return RatFunc(Poly::constant(1), Poly::t_power(-n));
}

Rat RatFunc::eval(const Rat& x) const {
  Rat d = den.eval(x);
  if (d == 0) throw Error(Errc::DivisionByZero, "denominator vanishes at the evaluation point");
  return num.eval(x) / d;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc RatFunc::operator-() const {
  RatFunc out = *this;
  out.num = -out.num;
  return out;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num * b.num, a.den * b.den);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of 0");
  return RatFunc(den, num);
}

namespace {

std::string poly_to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < p.c.size(); ++i) {
    const Rat& v = p.c[i];
    if (v == 0) continue;
    Rat a = v;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (i == 0) {
      os << a;
    } else {
      if (a != 1) os << a << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace

std::string RatFunc::to_string() const {
  std::string n = poly_to_string(num);
  if (den == Poly::constant(1)) return n;
  return "(" + n + ")/(" + poly_to_string(den) + ")";
}

namespace {

struct PolyParser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek_digit() {
    skip_ws();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  int64_t integer() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw Error(Errc::ParseError, "expected integer in rational function literal");
    return std::stoll(std::string(s.substr(start, pos - start)));
  }

  // term := int | int '*'? 't' ('^' int)? | 't' ('^' int)?
  Poly term() {
    Rat coeff = 1;
    bool have_coeff = false;
    if (peek_digit()) {
      coeff = integer();
      have_coeff = true;
      eat('*');
    }
    skip_ws();
    if (pos < s.size() && s[pos] == 't') {
      ++pos;
      int64_t e = 1;
      if (eat('^')) e = integer();
      Poly p = Poly::t_power(e);
      for (auto& v : p.c) v *= coeff;
      strip_high_zeros(p.c);
      return p;
    }
    if (!have_coeff) throw Error(Errc::ParseError, "expected term in rational function literal");
    return Poly::constant(coeff);
  }

  Poly sum() {
    Poly acc = Poly::zero();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    while (true) {
      Poly t = term();
      acc = neg ? acc - t : acc + t;
      skip_ws();
      if (eat('-')) {
        neg = true;
      } else if (eat('+')) {
        neg = false;
      } else {
        break;
      }
    }
    return acc;
  }

  Poly factor() {
    if (eat('(')) {
      Poly p = sum();
      if (!eat(')')) throw Error(Errc::ParseError, "missing ')' in rational function literal");
      return p;
    }
    return sum();
  }
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text) {
  PolyParser p{text};
  Poly num = p.factor();
  p.skip_ws();
  Poly den = Poly::constant(1);
  if (p.eat('/')) {
    den = p.factor();
    p.skip_ws();
  }
  if (p.pos != p.s.size())
    throw Error(Errc::ParseError, "trailing characters in rational function literal: '" +
                                      std::string(text) + "'");
  return RatFunc(std::move(num), std::move(den));
}

std::optional<int64_t> tadic_val(const RatFunc& f) {
  if (f.is_zero()) return std::nullopt;
  return f.num.trail_degree() - f.den.trail_degree();
}

Rat residue(const RatFunc& f) {
  auto v = tadic_val(f);
  if (!v) return Rat(0);
  if (*v < 0) throw Error(Errc::InvalidInput, "residue requires v(f) >= 0");
  if (*v > 0) return Rat(0);
  return f.num.c[f.num.trail_degree()] / f.den.c[f.den.trail_degree()];
}

RatFunc phi(int64_t g, const Rat& a) { return RatFunc::t_power(g) * RatFunc::constant(a); }

Rat phi_inv(int64_t g, const RatFunc& f) {
  auto v = tadic_val(f);
  if (v && *v < g) throw Error(Errc::InvalidInput, "phi_inv requires v(f) >= g");
  return residue(f * RatFunc::t_power(-g));
}

RatFunc q_section(int64_t n) { return RatFunc::t_power(n); }

CheckResult check_q_section(int64_t radius) {
  CheckResult out;
  out.check = "q-section";
  if (!q_section(0).same_value(RatFunc::constant(1))) {
    out.pass = false;
    out.witness = Witness{"q-section", {}, "s(0) != 1"};
    return out;
  }
  for (int64_t m = -radius; m <= radius; ++m) {
    auto v = tadic_val(q_section(m));
    ++out.instances;
    if (!v || *v != m) {
      out.pass = false;
      out.witness = Witness{"q-section", {}, "v(s(" + std::to_string(m) + ")) != " + std::to_string(m)};
      return out;
    }
    for (int64_t n = -radius; n <= radius; ++n) {
      ++out.instances;
      // s(m+n) / (s(m) s(n)) must be the square 1^2; for this section it is
      // exactly 1.
      RatFunc defect = q_section(m + n) * (q_section(m) * q_section(n)).inverse();
      if (!defect.same_value(RatFunc::constant(1))) {
        out.pass = false;
        out.witness = Witness{"q-section", {},
                              "square defect at (" + std::to_string(m) + "," + std::to_string(n) + ") is not 1"};
        return out;
      }
    }
  }
  return out;
}

namespace {
int rat_sign(const Rat& r) { return r.sign(); }
}  // namespace

int sign_under(const RatFunc& f, const FieldOrderTag& tag) {
  if (f.is_zero()) return 0;
  int s = rat_sign(f.num.c[f.num.trail_degree()]) * rat_sign(f.den.c[f.den.trail_degree()]);
  int64_t v = *tadic_val(f);
  if (tag.eta < 0 && ((v % 2) + 2) % 2 == 1) s = -s;
  return s;
}

int sign_by_evaluation(const RatFunc& f, const FieldOrderTag& tag, int k_start) {
  if (f.is_zero()) return 0;
  auto sign_at = [&](int k) -> std::optional<int> {
    Rat t0 = Rat(tag.eta);
    Rat p = 1;
    for (int i = 0; i < k; ++i) p *= 10;
    t0 /= p;
    Rat d = f.den.eval(t0);
    if (d == 0) return std::nullopt;
    return rat_sign(f.num.eval(t0)) * rat_sign(d);
  };
  for (int k = k_start; k < k_start + 60; ++k) {
    auto a = sign_at(k);
    auto b = sign_at(k + 1);
    if (a && b && *a == *b) return *a;
  }
  throw Error(Errc::InvalidInput, "evaluation oracle did not stabilize for " + f.to_string());
}

SampleCheck check_field_order_samples(const std::function<int(const RatFunc&)>& sign,
                                      const std::vector<RatFunc>& samples) {
  SampleCheck out;
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = 0; j < samples.size(); ++j) {
      ++out.pairs;
      const RatFunc& f = samples[i];
      const RatFunc& g = samples[j];
      if (sign(f * g) != sign(f) * sign(g)) {
        out.pass = false;
        out.failure = "sign(f*g) != sign(f)sign(g) for f=" + f.to_string() + ", g=" + g.to_string();
        return out;
      }
      if (sign(f) == sign(g) && sign(f) != 0 && sign(f + g) != sign(f)) {
        out.pass = false;
        out.failure = "sign(f+g) != sign(f) on same-sign pair f=" + f.to_string() +
                      ", g=" + g.to_string();
        return out;
      }
      // 0 < f < g forces v(f) >= v(g).
      if (sign(f) > 0 && sign(g - f) > 0) {
        auto vf = tadic_val(f), vg = tadic_val(g);
        if (vf && vg && *vf < *vg) {
          out.pass = false;
          out.failure = "0 < f < g but v(f) < v(g) for f=" + f.to_string() + ", g=" + g.to_string();
          return out;
        }
      }
    }
  }
  return out;
}

SampleCheck check_field_order_samples(const FieldOrderTag& tag, const std::vector<RatFunc>& samples) {
  return check_field_order_samples([&](const RatFunc& f) { return sign_under(f, tag); }, samples);
}

DirectionResult check_prop_fieldorders(const DirectionTable& table) {
  DirectionResult out;
  auto entries = table.entries;
  std::sort(entries.begin(), entries.end());
  int eta = 0;
  for (auto& [g, dir] : entries) {
    if (dir != 1 && dir != -1)
      throw Error(Errc::InvalidInput, "direction table entries must be +1 or -1");
    if (g == 1) eta = dir;
  }
  if (eta == 0)
    throw Error(Errc::InvalidInput, "direction table must include the probe g = 1");
  for (auto& [g, dir] : entries) {
    int forced = (((g % 2) + 2) % 2 == 0) ? 1 : eta;
    if (dir != forced) {
      out.pass = false;
      out.eta = eta;
      out.witness_pair = {int64_t{1}, g - 1};
      out.note = "table(" + std::to_string(g) + ") contradicts table(1)^" + std::to_string(g);
      return out;
    }
  }
  out.pass = true;
  out.eta = eta;
  return out;
}

int SignHom::eval(const std::vector<int64_t>& g) const {
  int s = 1;
  for (int k = 0; k < rank; ++k)
    if (((g[k] % 2) + 2) % 2 == 1) s *= basis_signs[k];
  return s;
}

SignHom epsilon_from_eta(int rank, std::vector<int> basis_signs) {
  if (rank < 1 || static_cast<int>(basis_signs.size()) != rank)
    throw Error(Errc::InvalidInput, "one basis sign per coordinate required");
  for (int s : basis_signs)
    if (s != 1 && s != -1) throw Error(Errc::InvalidInput, "basis signs must be +1 or -1");
  return SignHom{rank, std::move(basis_signs)};
}

CheckResult check_sign_hom_multiplicative(const SignHom& hom, int64_t radius) {
  CheckResult out;
  out.check = "sign-hom-multiplicative";
  std::vector<int64_t> g(hom.rank, -radius), h(hom.rank, -radius), sum(hom.rank);
  auto bump = [&](std::vector<int64_t>& v) {
    int k = 0;
    while (k < hom.rank && ++v[k] > radius) v[k++] = -radius;
    return k < hom.rank;
  };
  while (true) {
    std::fill(h.begin(), h.end(), -radius);
    while (true) {
      ++out.instances;
      for (int k = 0; k < hom.rank; ++k) sum[k] = g[k] + h[k];
      if (hom.eval(sum) != hom.eval(g) * hom.eval(h)) {
        out.pass = false;
        std::string note = "eps(g+h) != eps(g)eps(h) at g=(";
        for (int k = 0; k < hom.rank; ++k) note += std::to_string(g[k]) + (k + 1 < hom.rank ? "," : "");
        note += "), h=(";
        for (int k = 0; k < hom.rank; ++k) note += std::to_string(h[k]) + (k + 1 < hom.rank ? "," : "");
        note += ")";
        out.witness = Witness{"sign-hom", {}, note};
        return out;
      }
      if (!bump(h)) break;
    }
    if (!bump(g)) break;
  }
  return out;
}

std::vector<RatFunc> random_corpus(uint64_t seed, int count, int max_degree, int coeff_bound) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
  auto random_poly = [&](bool nonzero) {
    while (true) {
      Poly p;
      int d = deg(rng);
      p.c.resize(d + 1);
      for (int i = 0; i <= d; ++i) p.c[i] = coeff(rng);
      strip_high_zeros(p.c);
      if (!nonzero || !p.is_zero()) return p;
    }
  };
  std::vector<RatFunc> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Poly num = random_poly(true);
    Poly den = random_poly(true);
    out.emplace_back(std::move(num), std::move(den));
  }
  return out;
}

ClassicalBKReport classical_bk(uint64_t seed, int corpus_size) {
  return classical_bk_on(random_corpus(seed, corpus_size), seed);
}

ClassicalBKReport classical_bk_on(const std::vector<RatFunc>& corpus, uint64_t seed_echo) {
  for (auto& f : corpus)
    if (f.is_zero()) throw Error(Errc::InvalidInput, "corpus functions must be nonzero");
  ClassicalBKReport rep;
  rep.seed = seed_echo;
  rep.corpus_size = static_cast<int>(corpus.size());
  for (auto& f : corpus) rep.corpus.push_back(f.to_string());

  int valid = 0;
  for (int idx = 0; idx < 2; ++idx) {
    FieldOrderTag tag{idx == 0 ? +1 : -1};
    ClassicalTagReport& tr = rep.tags[idx];
    tr.eta = tag.eta;

    tr.oracle_agrees = true;
    for (auto& f : corpus) {
      if (sign_under(f, tag) != sign_by_evaluation(f, tag)) {
        tr.oracle_agrees = false;
        tr.detail = "oracle disagreement on " + f.to_string();
        break;
      }
    }

    SampleCheck sc = check_field_order_samples(tag, corpus);
    tr.order_valid = sc.pass;
    if (!sc.pass) tr.detail = sc.failure;

    // Map the order back to (eta, residue order): eta is the sign of t, and
    // the residue order is read off the residues of valuation-zero positives.
    tr.recovered_eta = sign_under(parse_ratfunc("t"), tag);
    tr.residue_order_standard = true;
    for (auto& f : corpus) {
      auto v = tadic_val(f);
      if (!v || *v != 0) continue;
      if ((sign_under(f, tag) > 0) != (residue(f) > 0)) {
        tr.residue_order_standard = false;
        tr.detail = "residue order not standard at " + f.to_string();
        break;
      }
    }
    if (tr.oracle_agrees && tr.order_valid && tr.recovered_eta == tag.eta &&
        tr.residue_order_standard)
      ++valid;
  }
  FieldOrderTag plus{+1}, minus{-1};
  RatFunc t = parse_ratfunc("t");
  rep.tags_distinct = sign_under(t, plus) != sign_under(t, minus);
  rep.count = valid;
  rep.pass = valid == 2 && rep.tags_distinct;
  return rep;
}

}  // namespace qov::field
