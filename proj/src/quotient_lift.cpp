#include "qov/quotient_lift.hpp"

#include <algorithm>
#include <functional>

#include "qov/enumerate.hpp"
#include "qov/scan.hpp"

namespace qov {

std::vector<LevelScaffold> family_scaffold(const Valuation& v) {
  std::vector<LevelScaffold> out;
  const CarrierPtr& base = v.carrier();
  for (int32_t lev = 0; lev < v.num_levels(); ++lev) {
    LevelScaffold s;
    s.level = lev;
    s.label = v.labels()[lev];
    auto geq = level_set(v, lev, LevelKind::Geq);
    auto gt = level_set(v, lev, LevelKind::Gt);
    s.up = base->subcarrier(geq, base->label() + "^" + s.label);
    std::vector<ElemIdx> gt_sub;
    gt_sub.reserve(gt.size());
    for (ElemIdx g : gt) gt_sub.push_back(s.up.parent_to_sub[g]);
    s.qv = s.up.sub->quotient_by(gt_sub, base->label() + "^" + s.label + "/_" + s.label);
    out.push_back(std::move(s));
  }
  return out;
}

QO restrict_qo(const QO& qo, const SubcarrierView& view) {
  std::vector<int32_t> ranks(view.member_parent.size());
  for (size_t i = 0; i < view.member_parent.size(); ++i) ranks[i] = qo.rank(view.member_parent[i]);
  return QO::from_ranks(view.sub, std::move(ranks), qo.provenance());
}

OrFail<QO> induce_raw(const QO& qo, const QuotientView& qv) {
  const ElemIdx n = qo.carrier()->size();
  const ElemIdx m = qv.quotient->size();
  std::vector<std::vector<ElemIdx>> members(m);
  for (ElemIdx g = 0; g < n; ++g) members[qv.proj[g]].push_back(g);

  std::vector<std::vector<int>> rows(m, std::vector<int>(m, 0));
  for (ElemIdx r1 = 0; r1 < m; ++r1)
    for (ElemIdx r2 = 0; r2 < m; ++r2) {
      bool rel = false;
      for (ElemIdx a : members[r1]) {
        for (ElemIdx b : members[r2])
          if (qo.leq(a, b)) {
            rel = true;
            break;
          }
        if (rel) break;
      }
      rows[r1][r2] = rel ? 1 : 0;
    }

  auto induced = QO::from_matrix(qv.quotient, rows, Provenance::Matrix);
  if (!induced.ok()) return induced.failure();
  const ElemIdx zq = qv.quotient->zero();
  for (ElemIdx r = 0; r < m; ++r)
    if (r != zq && induced->sim(r, zq))
      return Failure{Errc::ZeroClassFat, "induced relation identifies a nonzero coset with 0",
                     Witness{"zero-class", {r}, ""}};
  return induced;
}

OrFail<InducedQO> induce_on_quotient(const QO& qo, const std::vector<ElemIdx>& subgroup,
                                     const std::string& label) {
  CheckResult convex = check_convex(qo, subgroup);
  if (!convex.pass)
    return Failure{Errc::NotConvex, "subgroup is not convex", convex.witness};
  std::string lbl = label.empty() ? qo.carrier()->label() + "/H" : label;
  QuotientView qv = qo.carrier()->quotient_by(subgroup, lbl);
  auto induced = induce_raw(qo, qv);
  if (!induced.ok()) return induced.failure();
  return InducedQO{std::move(qv), std::move(*induced)};
}

OrFail<QOFamily> induce_family(const QO& qo, const Valuation& v) {
  CheckResult compat = check_v_compatible(v, qo, Exec::Serial);
  if (!compat.pass)
    return Failure{Errc::PreconditionFailed, "valuation is not compatible with the q.o.",
                   compat.witness};
  QOFamily fam{v, {}};
  for (auto& sc : family_scaffold(v)) {
    QO restricted = restrict_qo(qo, sc.up);
    auto induced = induce_raw(restricted, sc.qv);
    if (!induced.ok()) {
      Failure f = induced.failure();
      return Failure{Errc::TheoremViolation,
                     "induction failed at level " + sc.label +
                         " despite compatibility: " + f.message,
                     f.witness};
    }
    fam.levels.push_back(FamilyLevel{std::move(sc), std::move(*induced)});
  }
  return fam;
}

OrFail<QO> lift_family(const QOFamily& fam) {
  const CarrierPtr& base = fam.v.carrier();
  if (fam.levels.size() != static_cast<size_t>(fam.v.num_levels()))
    return Failure{Errc::MissingFamilyEntry, "family must provide one q.o. per value label"};
  for (int32_t lev = 0; lev < fam.v.num_levels(); ++lev)
    if (fam.levels[lev].scaffold.level != lev)
      return Failure{Errc::MissingFamilyEntry, "family levels out of order"};

  auto coset_at = [&](ElemIdx g, int32_t lev) {
    const FamilyLevel& fl = fam.levels[lev];
    return fl.scaffold.qv.proj[fl.scaffold.up.parent_to_sub[g]];
  };
  auto cmp = [&](ElemIdx g, ElemIdx h) {
    if (g == h) return true;
    int32_t lev = std::min(fam.v.level(g), fam.v.level(h));
    return fam.levels[lev].member.leq(coset_at(g, lev), coset_at(h, lev));
  };
  auto lifted = QO::from_comparator(base, cmp, Provenance::Lifted);
  if (!lifted.ok()) {
    Failure f = lifted.failure();
    f.message = "lifted relation is not a q.o.: " + f.message;
    return f;
  }
  return *lifted;
}

namespace {

std::vector<AxiomId> class_axioms(TheoremClass cls) {
  return cls == TheoremClass::Compatible ? std::vector<AxiomId>{AxiomId::Q1, AxiomId::Q2}
                                         : std::vector<AxiomId>{AxiomId::C_AXIOMS};
}

bool passes_all(const QO& qo, const std::vector<AxiomId>& axioms, CheckResult* out = nullptr) {
  for (AxiomId a : axioms) {
    CheckResult r = check_axiom(qo, a, Exec::Serial);
    if (!r.pass) {
      if (out) *out = r;
      return false;
    }
  }
  return true;
}

}  // namespace

OrFail<EquivReport> check_equiv_theorem(const QO& qo, const Valuation& v, TheoremClass cls,
                                        Exec exec) {
  CheckResult gate;
  if (!passes_all(qo, class_axioms(cls), &gate))
    return Failure{Errc::PreconditionFailed,
                   "q.o. fails the class gate: " + gate.check, gate.witness};

  EquivReport rep;
  rep.cls = cls;
  auto scaffolds = family_scaffold(v);

  // (1) and (2): convexity of the level sets, computed directly in the base.
  for (int side = 0; side < 2; ++side) {
    EquivCondition& cond = rep.cond[side];
    for (int32_t lev = 0; lev < v.num_levels(); ++lev) {
      auto set = level_set(v, lev, side == 0 ? LevelKind::Geq : LevelKind::Gt);
      CheckResult r = check_convex(qo, set);
      if (!r.pass) {
        cond.holds = false;
        cond.witness = r.witness;
        cond.note = "level " + v.labels()[lev];
        break;
      }
    }
  }

  // (3): induction succeeds at every level and the induced q.o. is in class.
  {
    EquivCondition& cond = rep.cond[2];
    for (auto& sc : scaffolds) {
      QO restricted = restrict_qo(qo, sc.up);
      auto induced = induce_raw(restricted, sc.qv);
      if (!induced.ok()) {
        cond.holds = false;
        cond.witness = induced.failure().witness;
        cond.note = "level " + sc.label + ": " + induced.failure().message;
        break;
      }
      CheckResult cls_check;
      if (!passes_all(*induced, class_axioms(cls), &cls_check)) {
        cond.holds = false;
        cond.witness = cls_check.witness;
        cond.note = "level " + sc.label + ": induced q.o. fails " + cls_check.check;
        break;
      }
    }
  }

  // (4): compatibility scan.
  {
    CheckResult r = check_v_compatible(v, qo, exec);
    if (!r.pass) {
      rep.cond[3].holds = false;
      rep.cond[3].witness = r.witness;
    }
  }

  bool first = rep.cond[0].holds;
  rep.agree = true;
  for (auto& c : rep.cond)
    if (c.holds != first) rep.agree = false;
  rep.conditions_hold = rep.cond[0].holds && rep.cond[1].holds && rep.cond[2].holds && rep.cond[3].holds;
  rep.pass = rep.agree;

  if (rep.conditions_hold) {
    // Moreover: the classification transfers between the q.o. and the family.
    std::vector<QO> members;
    for (auto& sc : scaffolds) {
      QO restricted = restrict_qo(qo, sc.up);
      auto induced = induce_raw(restricted, sc.qv);
      members.push_back(std::move(*induced));
    }
    QOType base_t = classify(qo, Exec::Serial);
    std::vector<QOType> member_t;
    member_t.reserve(members.size());
    for (auto& m : members) member_t.push_back(classify(m, Exec::Serial));
    auto add_clause = [&](const std::string& name, bool base, auto proj) {
      MoreoverClause cl;
      cl.property = name;
      cl.base = base;
      cl.members = true;
      for (auto& t : member_t)
        if (!proj(t)) cl.members = false;
      cl.agree = cl.base == cl.members;
      if (!cl.agree) rep.pass = false;
      rep.moreover.push_back(cl);
    };
    if (cls == TheoremClass::Compatible) {
      add_clause("valuational", base_t.is_valuational, [](const QOType& t) { return t.is_valuational; });
      add_clause("order", base_t.is_order, [](const QOType& t) { return t.is_order; });
    } else {
      add_clause("v-type", base_t.all_v, [](const QOType& t) { return t.all_v; });
      add_clause("o-type", base_t.all_o, [](const QOType& t) { return t.all_o; });
    }
  }
  return rep;
}

namespace {

void step(RoundTripReport& rep, const std::string& name, bool pass,
          std::optional<Witness> w = std::nullopt, const std::string& note = "") {
  rep.steps.push_back(RoundTripStep{name, pass, std::move(w), note});
  if (!pass) rep.pass = false;
}

bool family_members_equal(const QOFamily& a, const QOFamily& b, RoundTripReport& rep) {
  bool all = true;
  for (size_t i = 0; i < a.levels.size(); ++i) {
    const QO& qa = a.levels[i].member;
    const QO& qb = b.levels[i].member;
    bool eq = qa.same_relation(qb);
    if (!eq) {
      std::optional<Witness> w;
      for (ElemIdx g = 0; g < qa.carrier()->size() && !w; ++g)
        for (ElemIdx h = 0; h < qa.carrier()->size() && !w; ++h)
          if (qa.leq(g, h) != qb.leq(g, h)) w = Witness{"family-mismatch", {g, h}, ""};
      step(rep, "members equal at level " + a.levels[i].scaffold.label, false, w);
      all = false;
    }
  }
  if (all) step(rep, "induced family reproduces the members", true);
  return all;
}

void type_transfer_steps(RoundTripReport& rep, const QO& base, const QOFamily& fam) {
  QOType bt = classify(base, Exec::Serial);
  bool mem_v = true, mem_o = true;
  for (auto& fl : fam.levels) {
    QOType t = classify(fl.member, Exec::Serial);
    mem_v = mem_v && t.all_v;
    mem_o = mem_o && t.all_o;
  }
  step(rep, "v-type transfers (base " + std::string(bt.all_v ? "yes" : "no") + ", members " +
                (mem_v ? "yes" : "no") + ")",
       bt.all_v == mem_v);
  step(rep, "o-type transfers (base " + std::string(bt.all_o ? "yes" : "no") + ", members " +
                (mem_o ? "yes" : "no") + ")",
       bt.all_o == mem_o);
}

}  // namespace

RoundTripReport bk_roundtrip_from_family(const QOFamily& fam, Exec exec) {
  RoundTripReport rep;
  for (auto& fl : fam.levels) {
    CheckResult c = check_axiom(fl.member, AxiomId::C_AXIOMS, exec);
    if (!c.pass) {
      step(rep, "member at level " + fl.scaffold.label + " is a C-q.o.", false, c.witness);
      return rep;
    }
  }
  step(rep, "every member is a C-q.o.", true);

  auto lifted = lift_family(fam);
  if (!lifted.ok()) {
    step(rep, "family lifts to a q.o.", false, lifted.failure().witness, lifted.failure().message);
    return rep;
  }
  step(rep, "family lifts to a q.o.", true);

  CheckResult c = check_axiom(*lifted, AxiomId::C_AXIOMS, exec);
  step(rep, "lift is a C-q.o.", c.pass, c.witness);
  CheckResult compat = check_v_compatible(fam.v, *lifted, exec);
  step(rep, "lift is v-compatible", compat.pass, compat.witness);

  auto back = induce_family(*lifted, fam.v);
  if (!back.ok()) {
    step(rep, "lift induces a family", false, back.failure().witness, back.failure().message);
    return rep;
  }
  family_members_equal(fam, *back, rep);
  type_transfer_steps(rep, *lifted, fam);
  return rep;
}

RoundTripReport bk_roundtrip_from_qo(const QO& qo, const Valuation& v, Exec exec) {
  RoundTripReport rep;
  CheckResult c = check_axiom(qo, AxiomId::C_AXIOMS, exec);
  if (!c.pass) {
    step(rep, "q.o. is a C-q.o.", false, c.witness);
    return rep;
  }
  CheckResult compat = check_v_compatible(v, qo, exec);
  if (!compat.pass) {
    step(rep, "q.o. is v-compatible", false, compat.witness);
    return rep;
  }
  step(rep, "q.o. is a v-compatible C-q.o.", true);

  auto fam = induce_family(qo, v);
  if (!fam.ok()) {
    step(rep, "q.o. induces a family", false, fam.failure().witness, fam.failure().message);
    return rep;
  }
  bool members_c = true;
  for (auto& fl : fam->levels) {
    CheckResult mc = check_axiom(fl.member, AxiomId::C_AXIOMS, exec);
    if (!mc.pass) {
      step(rep, "induced member at level " + fl.scaffold.label + " is a C-q.o.", false, mc.witness);
      members_c = false;
    }
  }
  if (members_c) step(rep, "every induced member is a C-q.o.", true);

  auto lifted = lift_family(*fam);
  if (!lifted.ok()) {
    step(rep, "induced family lifts", false, lifted.failure().witness, lifted.failure().message);
    return rep;
  }
  bool eq = lifted->same_relation(qo);
  std::optional<Witness> w;
  if (!eq) {
    for (ElemIdx g = 0; g < qo.carrier()->size() && !w; ++g)
      for (ElemIdx h = 0; h < qo.carrier()->size() && !w; ++h)
        if (lifted->leq(g, h) != qo.leq(g, h)) w = Witness{"roundtrip-mismatch", {g, h}, ""};
  }
  step(rep, "lift of the induced family equals the q.o.", eq, w);
  type_transfer_steps(rep, qo, *fam);
  return rep;
}

FamilyCensus for_each_c_family(const Valuation& v, const std::function<void(const QOFamily&)>& cb,
                               int cap) {
  auto scaffolds = family_scaffold(v);
  std::vector<std::vector<QO>> choices(scaffolds.size());
  FamilyCensus census;
  for (size_t i = 0; i < scaffolds.size(); ++i) {
    for_each_passing(
        scaffolds[i].qv.quotient, {AxiomId::C_AXIOMS},
        [&](const QO& qo, uint64_t) { choices[i].push_back(qo); }, cap);
    census.per_level.push_back(choices[i].size());
    census.total *= choices[i].size();
  }
  std::vector<size_t> pick(scaffolds.size(), 0);
  if (census.total == 0) return census;
  while (true) {
    QOFamily fam{v, {}};
    for (size_t i = 0; i < scaffolds.size(); ++i)
      fam.levels.push_back(FamilyLevel{scaffolds[i], choices[i][pick[i]]});
    cb(fam);
    size_t k = 0;
    while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return census;
}

OrFail<CoarseningReport> coarsening_decompose(const Valuation& v, const Valuation& w, Exec exec) {
  CheckResult coarse = is_coarsening(v, w, exec);
  if (!coarse.pass)
    return Failure{Errc::PreconditionFailed, "v is not a coarsening of w", coarse.witness};

  CoarseningReport rep;
  auto scaffolds = family_scaffold(v);
  QOFamily fam{v, {}};
  for (auto& sc : scaffolds) {
    const ElemIdx m = sc.qv.quotient->size();
    const ElemIdx zq = sc.qv.quotient->zero();
    std::vector<int64_t> wlev(m, -1);
    for (size_t i = 0; i < sc.up.member_parent.size(); ++i) {
      ElemIdx coset = sc.qv.proj[i];
      if (coset == zq) continue;
      int64_t lw = w.level(sc.up.member_parent[i]);
      if (wlev[coset] == -1) {
        wlev[coset] = lw;
      } else if (wlev[coset] != lw) {
        return Failure{Errc::TheoremViolation,
                       "w is not constant on a coset at level " + sc.label,
                       Witness{"coset-value", {coset}, ""}};
      }
    }
    // Densify the used w-levels into a fresh value set; keep w's labels.
    std::vector<int64_t> used;
    for (ElemIdx r = 0; r < m; ++r)
      if (r != zq) used.push_back(wlev[r]);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::vector<std::string> labels;
    for (int64_t u : used) labels.push_back(w.labels()[u]);
    std::vector<int32_t> levels(m, kInfLevel);
    for (ElemIdx r = 0; r < m; ++r)
      if (r != zq)
        levels[r] = static_cast<int32_t>(std::lower_bound(used.begin(), used.end(), wlev[r]) -
                                         used.begin());
    Valuation wg(sc.qv.quotient, std::move(labels), std::move(levels));

    CheckResult ax = check_valuation(wg, Exec::Serial);
    rep.steps.push_back(RoundTripStep{"w_" + sc.label + " is a valuation", ax.pass, ax.witness, ""});
    if (!ax.pass) rep.pass = false;
    rep.quotient_valuations.push_back(QuotientValuationLevel{sc.label, wg});
    fam.levels.push_back(FamilyLevel{sc, valuational_qo(wg)});
  }

  auto lifted = lift_family(fam);
  if (!lifted.ok()) {
    rep.steps.push_back(RoundTripStep{"valuational family lifts", false, lifted.failure().witness,
                                      lifted.failure().message});
    rep.pass = false;
    return rep;
  }
  QO expected = valuational_qo(w);
  rep.reconstruction_ok = lifted->same_relation(expected);
  rep.steps.push_back(
      RoundTripStep{"lifting the quotient valuations reproduces w's q.o.", rep.reconstruction_ok});
  if (!rep.reconstruction_ok) rep.pass = false;
  return rep;
}

}  // namespace qov
