#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "qov/enumerate.hpp"
#include "qov/orders.hpp"
#include "qov/quotient_lift.hpp"

using namespace qovtest;

TEST_CASE("induction on quotients") {
  QO dy = dyadic_qo("Z/4");
  auto z4 = dy.carrier();

  auto ind = induce_on_quotient(dy, {0, at(z4, {2})});
  REQUIRE(ind.ok());
  CHECK(ind->qv.quotient->size() == 2);
  CHECK(ind->qo.lt(0, 1));  // 0 < 1+H

  // chain-valuation q.o. 0 < (1,0) < (0,1) ~ (1,1) on Z/2 x Z/2
  auto v4 = G("Z/2 x Z/2");
  QO chain = qo_from_classes(v4, {{{0, 0}}, {{1, 0}}, {{0, 1}, {1, 1}}});
  auto bad = induce_on_quotient(chain, {at(v4, {0, 0}), at(v4, {0, 1})});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.failure().code == Errc::NotConvex);
  CHECK(bad.failure().witness->elems ==
        std::vector<ElemIdx>{at(v4, {0, 0}), at(v4, {1, 0}), at(v4, {0, 1})});

  // H = {0} returns the q.o. itself
  auto same = induce_on_quotient(dy, {z4->zero()});
  REQUIRE(same.ok());
  CHECK(same->qo.same_relation(dy));
}

TEST_CASE("raw induction succeeds exactly on convex subgroups (STAR inputs)") {
  for (const char* spec : {"Z/4", "Z/5", "Z/6", "Z/2 x Z/2"}) {
    auto g = G(spec);
    auto subgroups = all_subgroups(g);
    for_each_passing(g, {AxiomId::STAR}, [&](const QO& qo, uint64_t) {
      for (const auto& H : subgroups) {
        bool convex = check_convex(qo, H).pass;
        auto qv = g->quotient_by(H, "q");
        auto raw = induce_raw(qo, qv);
        CHECK(raw.ok() == convex);
      }
    });
  }
}

TEST_CASE("type transfer through convex quotients (the quotient lemma, second clause)") {
  for (const char* spec : {"Z/2", "Z/3", "Z/4", "Z/2 x Z/2", "Z/5", "Z/6", "Z/7", "Z/8"}) {
    auto g = G(spec);
    auto subgroups = all_subgroups(g);
    for_each_passing(g, {AxiomId::STAR}, [&](const QO& qo, uint64_t) {
      for (const auto& H : subgroups) {
        if (!check_convex(qo, H).pass) continue;
        auto qv = g->quotient_by(H, "q");
        auto raw = induce_raw(qo, qv);
        REQUIRE(raw.ok());
        std::set<ElemIdx> members(H.begin(), H.end());
        for (ElemIdx e = 0; e < g->size(); ++e) {
          if (members.count(e)) continue;
          CHECK(element_type(qo, e) == element_type(*raw, qv.proj[e]));
        }
      }
    });
  }
}

TEST_CASE("family induction") {
  QO dy = dyadic_qo("Z/4");
  Valuation v = dyadic("Z/4");
  auto fam = induce_family(dy, v);
  REQUIRE(fam.ok());
  REQUIRE(fam->levels.size() == 2);
  for (auto& fl : fam->levels) {
    CHECK(fl.scaffold.qv.quotient->size() == 2);
    CHECK(fl.member.lt(0, 1));
  }

  // incompatible pair is rejected up front
  auto line = G("Z^1[B=10]");
  QO std_order = (*lex_order(line, {1})).qo_view;
  auto bad = induce_family(std_order, dyadic("Z^1[B=10]"));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.failure().code == Errc::PreconditionFailed);

  // lex order over the coordinate valuation induces the two standard orders
  auto plane = G("Z^2[B=6]");
  QO lexq = (*lex_order(plane, {1, 1})).qo_view;
  Valuation cv = coordinate_valuation(plane);
  auto lf = induce_family(lexq, cv);
  REQUIRE(lf.ok());
  REQUIRE(lf->levels.size() == 2);
  for (auto& fl : lf->levels) {
    CHECK(fl.member.num_classes() == 13);  // total order on 13 cosets
    QOType t = classify(fl.member, Exec::Serial);
    CHECK(t.is_order);
  }
  // level-0 member is the standard order on the representatives (a,0)
  auto& q0 = lf->levels[0];
  ElemIdx m1 = q0.scaffold.qv.proj[q0.scaffold.up.parent_to_sub[at(plane, {-1, 0})]];
  ElemIdx p1 = q0.scaffold.qv.proj[q0.scaffold.up.parent_to_sub[at(plane, {1, 0})]];
  CHECK(q0.member.lt(m1, p1));

  // a valuational q.o. induces the trivial valuational q.o. at every level
  auto triv = induce_family(dy, v);
  REQUIRE(triv.ok());
  for (auto& fl : triv->levels) CHECK(fl.member.num_classes() == 2);
}

TEST_CASE("lifting the unique dyadic family reproduces the dyadic q.o.") {
  Valuation v = dyadic("Z/4");
  QO dy = valuational_qo(v);
  auto fam = induce_family(dy, v);
  REQUIRE(fam.ok());
  auto lifted = lift_family(*fam);
  REQUIRE(lifted.ok());
  CHECK(lifted->same_relation(dy));
  CHECK(lifted->provenance() == Provenance::Lifted);
}

TEST_CASE("lifting order families through the raw formula collapses cosets") {
  // Members taken as plain order q.o.'s (not omega preimages): the raw lift
  // compares only at the minimum level, so same-coset elements collapse.
  auto plane = G("Z^2[B=6]");
  Valuation cv = coordinate_valuation(plane);
  QO lexq = (*lex_order(plane, {1, 1})).qo_view;
  auto fam = induce_family(lexq, cv);
  REQUIRE(fam.ok());
  auto lifted = lift_family(*fam);
  REQUIRE(lifted.ok());

  CHECK(lifted->sim(at(plane, {1, 2}), at(plane, {1, 5})));
  CHECK(lifted->lt(at(plane, {0, 3}), at(plane, {1, -6})));
  CHECK(lifted->lt(at(plane, {-1, 6}), at(plane, {0, -5})));

  // expected relation: compare first coordinates, ties at a=0 compare second
  auto expected = QO::from_comparator(
      plane,
      [&](ElemIdx x, ElemIdx y) {
        auto& a = plane->coords(x);
        auto& b = plane->coords(y);
        if (a[0] != b[0]) return a[0] < b[0];
        if (a[0] != 0) return true;
        return a[1] <= b[1];
      },
      Provenance::Matrix);
  REQUIRE(expected.ok());
  CHECK(lifted->same_relation(*expected));

  // members satisfy Q1 and Q2 but the lift does not: the compatible class is
  // not stable under lifting
  for (auto& fl : fam->levels) {
    CHECK(check_axiom(fl.member, AxiomId::Q1, Exec::Serial).pass);
    CHECK(check_axiom(fl.member, AxiomId::Q2, Exec::Serial).pass);
  }
  CheckResult q2 = check_axiom(*lifted, AxiomId::Q2);
  CHECK_FALSE(q2.pass);
}

TEST_CASE("a mixed family lifts to a q.o. that is neither all v-type nor all o-type") {
  auto plane = G("Z^2[B=6]");
  Valuation cv = coordinate_valuation(plane);
  auto scaffolds = family_scaffold(cv);
  REQUIRE(scaffolds.size() == 2);

  QOFamily fam{cv, {}};
  // level 0: trivial valuational member (everything nonzero equivalent)
  {
    auto qc = scaffolds[0].qv.quotient;
    fam.levels.push_back(FamilyLevel{scaffolds[0], valuational_qo(trivial_valuation(qc))});
  }
  // level 1: omega preimage of the standard order (o-type)
  {
    auto qc = scaffolds[1].qv.quotient;
    std::vector<char> cone(qc->size(), 0);
    for (ElemIdx e = 0; e < qc->size(); ++e)
      if (qc->coords(e)[1] >= 0) cone[e] = 1;
    auto ord = order_from_cone(qc, cone);
    REQUIRE(ord.ok());
    fam.levels.push_back(FamilyLevel{scaffolds[1], omega_preimage(*ord)});
  }
  auto lifted = lift_family(fam);
  REQUIRE(lifted.ok());
  QOType t = classify(*lifted, Exec::Serial);
  CHECK_FALSE(t.all_v);
  CHECK_FALSE(t.all_o);
  CHECK(element_type(*lifted, at(plane, {1, 0})) == ElementType::VType);
  CHECK(element_type(*lifted, at(plane, {0, 1})) == ElementType::OType);
}

TEST_CASE("the o-type set of a compatible-member lift need not be an initial segment") {
  // standard order at level 0, trivial valuational at level 1: both members
  // pass Q1 and Q2, the lift fails Q2, and its o-type elements do not form an
  // initial segment.
  auto plane = G("Z^2[B=6]");
  Valuation cv = coordinate_valuation(plane);
  auto scaffolds = family_scaffold(cv);

  QOFamily fam{cv, {}};
  {
    auto qc = scaffolds[0].qv.quotient;
    std::vector<char> cone(qc->size(), 0);
    for (ElemIdx e = 0; e < qc->size(); ++e)
      if (qc->coords(e)[0] >= 0) cone[e] = 1;
    auto ord = order_from_cone(qc, cone);
    REQUIRE(ord.ok());
    fam.levels.push_back(FamilyLevel{scaffolds[0], ord->qo_view});
  }
  {
    auto qc = scaffolds[1].qv.quotient;
    fam.levels.push_back(FamilyLevel{scaffolds[1], valuational_qo(trivial_valuation(qc))});
  }
  for (auto& fl : fam.levels) {
    CHECK(check_axiom(fl.member, AxiomId::Q1, Exec::Serial).pass);
    CHECK(check_axiom(fl.member, AxiomId::Q2, Exec::Serial).pass);
  }
  auto lifted = lift_family(fam);
  REQUIRE(lifted.ok());
  CheckResult q2 = check_axiom(*lifted, AxiomId::Q2);
  CHECK_FALSE(q2.pass);

  std::vector<ElemIdx> otype;
  for (ElemIdx e = 0; e < plane->size(); ++e)
    if (element_type(*lifted, e) == ElementType::OType) otype.push_back(e);
  CHECK_FALSE(check_initial_segment(*lifted, otype).pass);
}

TEST_CASE("equivalence theorem reports") {
  // all four conditions hold for the dyadic pair on Z/4
  auto rep = check_equiv_theorem(dyadic_qo("Z/4"), dyadic("Z/4"), TheoremClass::CQO);
  REQUIRE(rep.ok());
  CHECK(rep->agree);
  CHECK(rep->conditions_hold);
  CHECK(rep->pass);
  REQUIRE(rep->moreover.size() == 2);
  CHECK(rep->moreover[0].property == "v-type");
  CHECK(rep->moreover[0].base);
  CHECK(rep->moreover[0].agree);

  // all four fail together for the standard order against the dyadic valuation
  auto line = G("Z^1[B=10]");
  QO std_order = (*lex_order(line, {1})).qo_view;
  auto rep2 = check_equiv_theorem(std_order, dyadic("Z^1[B=10]"), TheoremClass::Compatible);
  REQUIRE(rep2.ok());
  CHECK(rep2->agree);
  CHECK_FALSE(rep2->conditions_hold);
  for (auto& c : rep2->cond) CHECK_FALSE(c.holds);
  CHECK(rep2->pass);

  // trivial valuation: conditions hold for any class-passing q.o.
  auto rep3 = check_equiv_theorem(std_order, trivial_valuation(line), TheoremClass::Compatible);
  REQUIRE(rep3.ok());
  CHECK(rep3->conditions_hold);
  CHECK(rep3->pass);

  // class gate enforced
  auto gate = check_equiv_theorem(std_order, dyadic("Z^1[B=10]"), TheoremClass::CQO);
  CHECK_FALSE(gate.ok());
  CHECK(gate.failure().code == Errc::PreconditionFailed);
}

TEST_CASE("equivalence theorem agreement on all gated pairs up to 6 elements") {
  for (const char* spec : {"Z/2", "Z/3", "Z/4", "Z/2 x Z/2", "Z/5", "Z/6"}) {
    auto g = G(spec);
    auto valuations = all_chain_valuations(g);
    for (auto cls : {TheoremClass::Compatible, TheoremClass::CQO}) {
      auto gate = cls == TheoremClass::Compatible
                      ? std::vector<AxiomId>{AxiomId::Q1, AxiomId::Q2}
                      : std::vector<AxiomId>{AxiomId::C_AXIOMS};
      for_each_passing(g, gate, [&](const QO& qo, uint64_t) {
        for (const Valuation& v : valuations) {
          auto rep = check_equiv_theorem(qo, v, cls, Exec::Serial);
          REQUIRE(rep.ok());
          CHECK(rep->agree);
          CHECK(rep->pass);
        }
      });
    }
  }
}

TEST_CASE("round trips over the dyadic valuations") {
  for (const char* spec : {"Z/4", "Z/8"}) {
    Valuation v = dyadic(spec);
    uint64_t count = 0;
    FamilyCensus census = for_each_c_family(v, [&](const QOFamily& fam) {
      ++count;
      RoundTripReport rt = bk_roundtrip_from_family(fam);
      CHECK(rt.pass);
    });
    CHECK(count == census.total);
    CHECK(census.total == 1);
    for (uint64_t c : census.per_level) CHECK(c == 1);

    QO dy = valuational_qo(v);
    RoundTripReport rt = bk_roundtrip_from_qo(dy, v);
    CHECK(rt.pass);
  }
}

TEST_CASE("the lift is the only C-q.o. inducing its family (exhaustive on Z/4)") {
  // Arbitrary q.o.'s can induce the same family (0 < 2 < 1 < 3 induces the
  // dyadic one); within the C class the inducer is unique and equals the
  // lift, which is what the bijection needs.
  Valuation v = dyadic("Z/4");
  auto g = v.carrier();
  auto fam = induce_family(valuational_qo(v), v);
  REQUIRE(fam.ok());
  auto lifted = lift_family(*fam);
  REQUIRE(lifted.ok());

  uint64_t inducing = 0, inducing_c = 0, inducing_star = 0;
  auto scaffolds = family_scaffold(v);
  weak_orders(g->size(), [&](const std::vector<int32_t>& ranks) {
    QO qo = QO::from_ranks(g, ranks, Provenance::Matrix);
    for (size_t i = 0; i < scaffolds.size(); ++i) {
      QO restricted = restrict_qo(qo, scaffolds[i].up);
      auto ind = induce_raw(restricted, scaffolds[i].qv);
      if (!ind.ok() || !ind->same_relation(fam->levels[i].member)) return;
    }
    ++inducing;
    if (check_axiom(qo, AxiomId::STAR, Exec::Serial).pass) ++inducing_star;
    if (check_axiom(qo, AxiomId::C_AXIOMS, Exec::Serial).pass) {
      ++inducing_c;
      CHECK(qo.same_relation(*lifted));
    }
  });
  CHECK(inducing == 3);  // the lift plus the two chain refinements of 1 ~ 3
  CHECK(inducing_c == 1);
  CHECK(inducing_star == 1);
}

TEST_CASE("precondition failures are reported with witnesses") {
  // a family with a non-C member is rejected by the family round trip
  auto v4 = G("Z/2 x Z/2");
  Valuation v = chain_valuation(v4, {{at(v4, {0, 0}), at(v4, {0, 1})}});
  auto scaffolds = family_scaffold(v);
  QOFamily fam{v, {}};
  for (auto& sc : scaffolds) {
    auto qc = sc.qv.quotient;
    // reversed chain: nonzero strictly below zero fails the C axioms
    std::vector<int32_t> ranks(qc->size(), 0);
    ranks[qc->zero()] = 1;
    fam.levels.push_back(FamilyLevel{sc, QO::from_ranks(qc, ranks, Provenance::Matrix)});
  }
  RoundTripReport rt = bk_roundtrip_from_family(fam);
  CHECK_FALSE(rt.pass);
  REQUIRE_FALSE(rt.steps.empty());
  CHECK(rt.steps.front().witness.has_value());
}

TEST_CASE("coarsening decompositions") {
  // v = w = dyadic on Z/4: one trivial quotient valuation per level
  {
    Valuation v = dyadic("Z/4");
    auto rep = coarsening_decompose(v, v);
    REQUIRE(rep.ok());
    CHECK(rep->pass);
    CHECK(rep->reconstruction_ok);
    for (auto& lvl : rep->quotient_valuations) CHECK(lvl.w_gamma.num_levels() == 1);
  }
  // floor(v2/2) under v2 on Z^1[B=16]: the level-0 quotient valuation is the
  // dyadic valuation of the 4-element quotient
  {
    Valuation w = dyadic("Z^1[B=16]");
    auto carrier = w.carrier();
    std::vector<int32_t> levels(carrier->size());
    for (ElemIdx g = 0; g < carrier->size(); ++g)
      levels[g] = w.level(g) == kInfLevel ? kInfLevel : w.level(g) / 2;
    Valuation v(carrier, {"0", "1", "2"}, levels);
    REQUIRE(check_valuation(v, Exec::Serial).pass);
    REQUIRE(is_coarsening(v, w, Exec::Serial).pass);

    auto rep = coarsening_decompose(v, w);
    REQUIRE(rep.ok());
    CHECK(rep->pass);
    CHECK(rep->reconstruction_ok);
    const Valuation& w0 = rep->quotient_valuations[0].w_gamma;
    auto q = w0.carrier();
    REQUIRE(q->size() == 4);
    CHECK(w0.num_levels() == 2);
    CHECK(w0.level(q->locate({2})) == 1);   // the coset of 2 is one level up
    CHECK(w0.level(q->locate({1})) == 0);
    CHECK(w0.level(q->locate({-1})) == 0);
  }
  // trivial coarsening: single quotient isomorphic to the carrier
  {
    Valuation w = dyadic("Z^1[B=8]");
    auto rep = coarsening_decompose(trivial_valuation(w.carrier()), w);
    REQUIRE(rep.ok());
    CHECK(rep->pass);
    CHECK(rep->reconstruction_ok);
    CHECK(rep->quotient_valuations[0].w_gamma.carrier()->size() == w.carrier()->size());
  }
  // precondition: v must be a coarsening of w
  {
    auto line = G("Z^1[B=10]");
    auto bad = coarsening_decompose(dyadic("Z^1[B=10]"), trivial_valuation(line));
    CHECK_FALSE(bad.ok());
    CHECK(bad.failure().code == Errc::PreconditionFailed);
  }
}
