#include <doctest.h>

#include "qov/field.hpp"

using namespace qov;
using namespace qov::field;

namespace {
RatFunc rf(const std::string& s) { return parse_ratfunc(s); }
}  // namespace

TEST_CASE("rational function arithmetic") {
  CHECK((rf("1/t") + rf("t")).same_value(rf("(1+t^2)/t")));
  CHECK((rf("t^2") * rf("1/t")).same_value(rf("t")));
  CHECK_THROWS_AS(rf("0").inverse(), Error);
  CHECK((rf("(1+t)/(1-t)") - rf("(1+t)/(1-t)")).is_zero());
  CHECK((rf("2t + 3") * rf("1/2")).same_value(rf("(2t+3)/2")));
  CHECK((-rf("t-1")).same_value(rf("1-t")));

  // parse errors
  CHECK_THROWS_AS(rf(""), Error);
  CHECK_THROWS_AS(rf("t^"), Error);
  CHECK_THROWS_AS(rf("(1+t"), Error);
  CHECK_THROWS_AS(rf("1+t)x"), Error);
  CHECK_THROWS_AS(rf("1/0"), Error);

  // normalization strips the common power of t
  RatFunc f = rf("(t^2+t^3)/(t^2)");
  CHECK(f.num.trail_degree() == 0);
  CHECK(f.same_value(rf("1+t")));
}

TEST_CASE("t-adic valuation") {
  CHECK(*tadic_val(rf("(t^2+t^3)/(1-t)")) == 2);
  CHECK(*tadic_val(rf("1")) == 0);
  CHECK_FALSE(tadic_val(rf("0")).has_value());
  CHECK(*tadic_val(rf("1/t")) == -1);
  CHECK(*tadic_val(rf("(3t^4)/(2t)")) == 3);

  // v(fg) = v(f) + v(g), v(f+g) >= min on a deterministic corpus
  auto corpus = random_corpus(11, 25);
  for (auto& f : corpus)
    for (auto& g : corpus) {
      CHECK(*tadic_val(f * g) == *tadic_val(f) + *tadic_val(g));
      auto s = tadic_val(f + g);
      if (s) CHECK(*s >= std::min(*tadic_val(f), *tadic_val(g)));
    }
}

TEST_CASE("residues and the level isomorphisms") {
  CHECK(residue(rf("(2+t)/(1+3t)")) == Rat(2));
  CHECK(residue(rf("t + t^2")) == Rat(0));
  CHECK_THROWS_AS(residue(rf("1/t")), Error);

  CHECK(phi(-2, Rat(3) / 2).same_value(rf("3/(2t^2)")));
  CHECK(phi(3, Rat(5)).same_value(rf("5t^3")));

  // phi_g composed with its inverse is the identity on probes
  for (int64_t g : {-3, -1, 0, 2, 5}) {
    for (int num : {-7, -1, 1, 2, 9}) {
      Rat a = Rat(num) / 4;
      CHECK(phi_inv(g, phi(g, a)) == a);
    }
  }

  // phi_{g+h}(ab) equals phi_g(a) * phi_h(b) exactly for this q-section
  for (int64_t g : {-2, 0, 3})
    for (int64_t h : {-1, 2}) {
      Rat a = Rat(3) / 7, b = Rat(-5) / 2;
      CHECK(phi(g + h, a * b).same_value(phi(g, a) * phi(h, b)));
    }
}

TEST_CASE("q-section") {
  CheckResult r = check_q_section(8);
  CHECK(r.pass);
  CHECK(q_section(0).same_value(rf("1")));
  CHECK(q_section(-3).same_value(rf("1/t^3")));
  CHECK(*tadic_val(q_section(5)) == 5);
}

TEST_CASE("signs under the two compatible orders") {
  FieldOrderTag plus{+1}, minus{-1};
  CHECK(sign_under(rf("-t + t^3"), plus) == -1);
  CHECK(sign_under(rf("t"), minus) == -1);
  CHECK(sign_under(rf("t^2"), minus) == +1);
  CHECK(sign_under(rf("0"), plus) == 0);
  CHECK(sign_under(rf("0"), minus) == 0);
  CHECK(sign_under(rf("1/t"), minus) == -1);
  CHECK(sign_under(rf("(1-t)/(1+t)"), plus) == +1);

  // the evaluation oracle agrees on these and on a seeded corpus
  for (const char* lit : {"-t + t^3", "t", "t^2", "1/t", "(1-t)/(1+t)", "(2-3t)/(t^2 - 10t^3)"}) {
    CHECK(sign_under(rf(lit), plus) == sign_by_evaluation(rf(lit), plus));
    CHECK(sign_under(rf(lit), minus) == sign_by_evaluation(rf(lit), minus));
  }
  for (auto& f : random_corpus(23, 40)) {
    CHECK(sign_under(f, plus) == sign_by_evaluation(f, plus));
    CHECK(sign_under(f, minus) == sign_by_evaluation(f, minus));
  }
}

TEST_CASE("field order sample checks") {
  std::vector<RatFunc> samples{rf("t"), rf("t^2"), rf("1 - t"), rf("1/t")};
  FieldOrderTag plus{+1}, minus{-1};
  CHECK(check_field_order_samples(plus, samples).pass);
  CHECK(check_field_order_samples(minus, samples).pass);

  // 0 < t^2 < t < 1 under eta = +1, with valuations 2 > 1 > 0
  CHECK(sign_under(rf("t^2"), plus) == +1);
  CHECK(sign_under(rf("t") - rf("t^2"), plus) == +1);
  CHECK(sign_under(rf("1") - rf("t"), plus) == +1);

  // under eta = -1 the roles of t and -t swap
  CHECK(sign_under(-rf("t"), minus) == +1);
  CHECK(sign_under(-rf("t") - rf("t^2"), minus) == +1);

  // an adversarial sign table that flips t^3 only loses multiplicativity
  std::vector<RatFunc> small{rf("t"), rf("t^2"), rf("t^3")};
  auto flipped = [&](const RatFunc& f) {
    int s = sign_under(f, plus);
    return f.same_value(rf("t^3")) ? -s : s;
  };
  SampleCheck bad = check_field_order_samples(flipped, small);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("direction tables") {
  DirectionTable parity;
  for (int64_t g = -2; g <= 3; ++g) parity.entries.push_back({g, (g % 2 == 0) ? +1 : -1});
  DirectionResult r = check_prop_fieldorders(parity);
  CHECK(r.pass);
  CHECK(r.eta == -1);

  DirectionTable trivial;
  for (int64_t g = -2; g <= 3; ++g) trivial.entries.push_back({g, +1});
  CHECK(check_prop_fieldorders(trivial).pass);

  DirectionTable broken;
  for (int64_t g = -2; g <= 3; ++g) broken.entries.push_back({g, (g % 2 == 0) ? +1 : -1});
  broken.entries[5].second = +1;  // table(3) := +1 against table(1) = -1
  DirectionResult b = check_prop_fieldorders(broken);
  CHECK_FALSE(b.pass);
  REQUIRE(b.witness_pair.has_value());
  CHECK(b.witness_pair->first == 1);
  CHECK(b.witness_pair->second == 2);

  DirectionTable constant_minus;
  for (int64_t g = -2; g <= 3; ++g) constant_minus.entries.push_back({g, -1});
  DirectionResult cm = check_prop_fieldorders(constant_minus);
  CHECK_FALSE(cm.pass);  // even probes forced to +1

  DirectionTable no_one;
  no_one.entries = {{2, +1}, {3, -1}};
  CHECK_THROWS_AS(check_prop_fieldorders(no_one), Error);
}

TEST_CASE("sign characters on Z^d") {
  SignHom h1 = epsilon_from_eta(1, {-1});
  CHECK(h1.eval({5}) == -1);
  CHECK(h1.eval({-4}) == +1);

  SignHom h2 = epsilon_from_eta(2, {-1, +1});
  CHECK(h2.eval({3, 2}) == -1);

  SignHom all_plus = epsilon_from_eta(2, {+1, +1});
  for (int64_t a = -3; a <= 3; ++a)
    for (int64_t b = -3; b <= 3; ++b) CHECK(all_plus.eval({a, b}) == +1);

  CHECK(check_sign_hom_multiplicative(h1, 8).pass);
  CHECK(check_sign_hom_multiplicative(h2, 4).pass);
  CHECK_THROWS_AS(epsilon_from_eta(2, {1}), Error);
  CHECK_THROWS_AS(epsilon_from_eta(1, {0}), Error);
}

TEST_CASE("literal grammar corner cases") {
  RatFunc f = rf("(2 + t - 3t^2)/(t^3)");
  CHECK(*tadic_val(f) == -3);
  CHECK(residue(f.inverse()) == Rat(0));  // v(1/f) = 3 > 0
  CHECK(parse_ratfunc(f.to_string()).same_value(f));  // printing round-trips
  CHECK(rf("2*t^2").same_value(rf("2t^2")));
}

TEST_CASE("explicit corpus runs through the correspondence report") {
  std::vector<RatFunc> corpus{rf("t"), rf("t^2"), rf("1 - t"), rf("1/t"),
                              rf("(2 + t - 3t^2)/(t^3)")};
  ClassicalBKReport rep = classical_bk_on(corpus, 42);
  CHECK(rep.pass);
  CHECK(rep.count == 2);
  CHECK(rep.corpus.size() == corpus.size());
  CHECK_THROWS_AS(classical_bk_on({rf("0")}), Error);
}

TEST_CASE("classical correspondence on Q(t)") {
  ClassicalBKReport rep = classical_bk(1729, 60);
  CHECK(rep.pass);
  CHECK(rep.count == 2);
  CHECK(rep.tags_distinct);
  for (auto& tag : rep.tags) {
    CHECK(tag.oracle_agrees);
    CHECK(tag.order_valid);
    CHECK(tag.recovered_eta == tag.eta);
    CHECK(tag.residue_order_standard);
  }
  // deterministic for a fixed seed
  ClassicalBKReport again = classical_bk(1729, 60);
  CHECK(again.corpus == rep.corpus);
}
