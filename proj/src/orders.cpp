#include "qov/orders.hpp"

#include <algorithm>

#include "qov/scan.hpp"

namespace qov {

CheckResult check_cone(const CarrierPtr& carrier, const std::vector<char>& P, Exec exec) {
  const Carrier& c = *carrier;
  const ElemIdx n = c.size();
  CheckResult out;
  out.check = "positive-cone";
  if (P.size() != static_cast<size_t>(n))
    throw Error(Errc::InvalidInput, "cone indicator must cover the carrier");

  // P n -P = {0} (and 0 must belong to P).
  if (!P[c.zero()]) {
    out.pass = false;
    out.witness = Witness{"cone:zero", {c.zero()}, "0 not in P"};
    return out;
  }
  for (ElemIdx g = 0; g < n; ++g) {
    ++out.instances;
    if (g != c.zero() && P[g] && P[c.neg(g)]) {
      out.pass = false;
      out.witness = Witness{"cone:intersection", {g}, "both g and -g in P"};
      return out;
    }
  }
  // P u -P = G.
  for (ElemIdx g = 0; g < n; ++g) {
    ++out.instances;
    if (!P[g] && !P[c.neg(g)]) {
      out.pass = false;
      out.witness = Witness{"cone:union", {g}, "neither g nor -g in P"};
      return out;
    }
  }
  // P + P inside P.
  auto r = scan::run(
      static_cast<uint64_t>(n) * n,
      [&](uint64_t i) {
        ElemIdx g = static_cast<ElemIdx>(i / n), h = static_cast<ElemIdx>(i % n);
        if (!P[g] || !P[h]) return scan::Step::Ok;
        ElemIdx s = c.add(g, h);
        if (s == kOutOfWindow) return scan::Step::Skip;
        return P[s] ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  out.instances += r.instances;
  out.skips = r.skips;
  if (r.failed) {
    out.pass = false;
    out.witness = Witness{"cone:sum",
                          {static_cast<ElemIdx>(r.index / n), static_cast<ElemIdx>(r.index % n)},
                          "g, h in P but g+h outside"};
  }
  return out;
}

namespace {

// Lexicographic positivity of a coordinate vector under the sign vector.
bool lex_nonneg(const std::vector<int64_t>& coords, const std::vector<int>& signs) {
  for (size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] == 0) continue;
    return signs[k] * coords[k] > 0;
  }
  return true;  // zero vector
}

std::vector<char> lex_cone(const Carrier& c, const std::vector<int>& signs) {
  std::vector<char> P(c.size(), 0);
  for (ElemIdx g = 0; g < c.size(); ++g) P[g] = lex_nonneg(c.coords(g), signs) ? 1 : 0;
  return P;
}

// Try to match the cone against one of the 2^d lex cones (first match in
// lexicographic sign order wins).
std::optional<std::vector<int>> recognize_lex(const Carrier& c, const std::vector<char>& P) {
  if (!c.free_coords()) return std::nullopt;
  const int d = c.coord_dim();
  std::vector<int> signs(d, 1);
  for (uint32_t mask = 0; mask < (1u << d); ++mask) {
    for (int k = 0; k < d; ++k) signs[k] = (mask & (1u << k)) ? -1 : 1;
    if (lex_cone(c, signs) == P) return signs;
  }
  return std::nullopt;
}

GroupOrder make_order(CarrierPtr carrier, std::vector<char> P, QO qo_view, std::vector<int> signs) {
  GroupOrder ord;
  ord.carrier = std::move(carrier);
  ord.cone = PositiveCone{ord.carrier, std::move(P)};
  ord.qo_view = std::move(qo_view);
  ord.lex_signs = std::move(signs);
  return ord;
}

}  // namespace

OrFail<GroupOrder> lex_order(const CarrierPtr& carrier, const std::vector<int>& signs) {
  if (!carrier->free_coords())
    return Failure{Errc::InvalidInput, "lex orders require a free-abelian carrier"};
  if (static_cast<int>(signs.size()) != carrier->coord_dim())
    return Failure{Errc::InvalidInput, "sign vector must have one entry per coordinate"};
  for (int s : signs)
    if (s != 1 && s != -1) return Failure{Errc::InvalidInput, "signs must be +1 or -1"};

  auto cmp = [&carrier, signs](ElemIdx a, ElemIdx b) {
    const auto& ca = carrier->coords(a);
    const auto& cb = carrier->coords(b);
    std::vector<int64_t> diff(ca.size());
    for (size_t k = 0; k < ca.size(); ++k) diff[k] = cb[k] - ca[k];
    return lex_nonneg(diff, signs);
  };
  auto qo = QO::from_comparator(carrier, cmp, Provenance::LexOrder);
  if (!qo.ok()) return qo.failure();
  return make_order(carrier, lex_cone(*carrier, signs), std::move(*qo), signs);
}

OrFail<GroupOrder> order_from_cone(const CarrierPtr& carrier, std::vector<char> P, Exec exec) {
  CheckResult cone_ok = check_cone(carrier, P, exec);
  if (!cone_ok.pass)
    return Failure{Errc::ConeAxiomFailed, "not a positive cone", cone_ok.witness};

  const Carrier& c = *carrier;
  if (c.windowed()) {
    if (auto signs = recognize_lex(c, P)) return lex_order(carrier, *signs);
    // No lex match: usable only if every pair is decidable by differences.
    for (ElemIdx g = 0; g < c.size(); ++g)
      for (ElemIdx h = 0; h < c.size(); ++h)
        if (c.sub(h, g) == kOutOfWindow)
          return Failure{Errc::WindowUndecidable,
                         "cone cannot compare a pair whose difference leaves the window",
                         Witness{"undecidable", {g, h}, ""}};
  }
  auto cmp = [&carrier, &P](ElemIdx a, ElemIdx b) { return P[carrier->sub(b, a)] != 0; };
  auto qo = QO::from_comparator(carrier, cmp, Provenance::LexOrder);
  if (!qo.ok()) return qo.failure();
  return make_order(carrier, std::move(P), std::move(*qo), {});
}

OrFail<GroupOrder> order_from_qo(const QO& qo, Exec exec) {
  const Carrier& c = *qo.carrier();
  for (ElemIdx g = 0; g < c.size(); ++g)
    for (ElemIdx h = static_cast<ElemIdx>(g + 1); h < c.size(); ++h)
      if (qo.sim(g, h))
        return Failure{Errc::PreconditionFailed, "q.o. is not antisymmetric",
                       Witness{"antisymmetry", {g, h}, ""}};
  std::vector<char> P(c.size(), 0);
  for (ElemIdx g = 0; g < c.size(); ++g) P[g] = qo.leq(c.zero(), g) ? 1 : 0;
  CheckResult cone_ok = check_cone(qo.carrier(), P, exec);
  if (!cone_ok.pass)
    return Failure{Errc::ConeAxiomFailed, "positive set of the q.o. is not a cone",
                   cone_ok.witness};
  std::vector<int> signs;
  if (c.windowed()) {
    if (auto rec = recognize_lex(c, P)) signs = *rec;
  }
  return make_order(qo.carrier(), std::move(P), qo, std::move(signs));
}

OrFail<PositiveCone> cone_from_qo(const QO& qo, Exec exec) {
  CheckResult c_ax = check_axiom(qo, AxiomId::C_AXIOMS, exec);
  if (!c_ax.pass)
    return Failure{Errc::PreconditionFailed, "q.o. fails the C axioms", c_ax.witness};
  const Carrier& c = *qo.carrier();
  for (ElemIdx g = 0; g < c.size(); ++g)
    if (g != c.zero() && qo.sim(g, c.neg(g)))
      return Failure{Errc::PreconditionFailed, "q.o. is not o-type",
                     Witness{"o-type", {g}, "g ~ -g"}};

  std::vector<char> P(c.size(), 0);
  for (ElemIdx g = 0; g < c.size(); ++g) P[g] = qo.leq(c.neg(g), g) ? 1 : 0;

  CheckResult cone_ok = check_cone(qo.carrier(), P, exec);
  if (!cone_ok.pass)
    return Failure{Errc::ConeAxiomFailed,
                   "extracted set fails the cone axioms (o-type C-q.o. expected to prevent this)",
                   cone_ok.witness};
  for (ElemIdx g = 0; g < c.size(); ++g) {
    if (!P[g]) continue;
    for (ElemIdx h = 0; h < c.size(); ++h)
      if (qo.sim(g, h) && !P[h])
        return Failure{Errc::TheoremViolation, "cone is not stable under ~",
                       Witness{"sim-stability", {g, h}, ""}};
  }
  return PositiveCone{qo.carrier(), std::move(P)};
}

OrFail<GroupOrder> omega(const QO& qo, Exec exec) {
  auto cone = cone_from_qo(qo, exec);
  if (!cone.ok()) return cone.failure();
  return order_from_cone(qo.carrier(), std::move(cone->members), exec);
}

QO omega_preimage(const GroupOrder& order) {
  const Carrier& c = *order.carrier;
  const ElemIdx n = c.size();
  const auto& P = order.cone.members;
  // Dense rank of the positives under the order.
  std::vector<int32_t> pos_ranks;
  for (ElemIdx g = 0; g < n; ++g)
    if (P[g] && g != c.zero()) pos_ranks.push_back(order.qo_view.rank(g));
  std::sort(pos_ranks.begin(), pos_ranks.end());
  pos_ranks.erase(std::unique(pos_ranks.begin(), pos_ranks.end()), pos_ranks.end());

  std::vector<int32_t> ranks(n);
  for (ElemIdx g = 0; g < n; ++g) {
    if (g == c.zero()) {
      ranks[g] = 0;
    } else if (!P[g]) {
      ranks[g] = 1;
    } else {
      ranks[g] = 2 + static_cast<int32_t>(std::lower_bound(pos_ranks.begin(), pos_ranks.end(),
                                                           order.qo_view.rank(g)) -
                                          pos_ranks.begin());
    }
  }
  return QO::from_ranks(order.carrier, std::move(ranks), Provenance::OmegaPreimage);
}

CheckResult check_translation_invariance(const GroupOrder& order, Exec exec) {
  const Carrier& c = *order.carrier;
  const ElemIdx n = c.size();
  const uint64_t n2 = static_cast<uint64_t>(n) * n;
  auto r = scan::run(
      n2 * n,
      [&](uint64_t i) {
        ElemIdx g = static_cast<ElemIdx>(i / n2);
        ElemIdx h = static_cast<ElemIdx>((i / n) % n);
        ElemIdx x = static_cast<ElemIdx>(i % n);
        ElemIdx gx = c.add(g, x), hx = c.add(h, x);
        if (gx == kOutOfWindow || hx == kOutOfWindow) return scan::Step::Skip;
        return order.leq(g, h) == order.leq(gx, hx) ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  CheckResult out;
  out.check = "translation-invariance";
  out.pass = !r.failed;
  out.instances = r.instances;
  out.skips = r.skips;
  if (r.failed)
    out.witness = Witness{"translation",
                          {static_cast<ElemIdx>(r.index / n2),
                           static_cast<ElemIdx>((r.index / n) % n),
                           static_cast<ElemIdx>(r.index % n)},
                          "g <= h disagrees with g+x <= h+x"};
  return out;
}

OrFail<OrderLiftResult> lift_order_family(
    const Valuation& v,
    const std::function<OrFail<GroupOrder>(const LevelScaffold&)>& member_builder, Exec exec) {
  OrderLiftResult res;
  auto scaffolds = family_scaffold(v);
  QOFamily fam{v, {}};
  for (auto& sc : scaffolds) {
    auto member = member_builder(sc);
    if (!member.ok()) return member.failure();
    fam.levels.push_back(FamilyLevel{sc, omega_preimage(*member)});
    res.members.push_back(std::move(*member));
  }

  auto& rep = res.checks;
  auto lifted = lift_family(fam);
  if (!lifted.ok()) {
    rep.steps.push_back(RoundTripStep{"preimage family lifts", false, lifted.failure().witness,
                                      lifted.failure().message});
    rep.pass = false;
    return res;
  }
  rep.steps.push_back(RoundTripStep{"preimage family lifts", true});
  res.lifted_cqo = std::move(*lifted);

  CheckResult c_ax = check_axiom(res.lifted_cqo, AxiomId::C_AXIOMS, exec);
  rep.steps.push_back(RoundTripStep{"lift is a C-q.o.", c_ax.pass, c_ax.witness});
  if (!c_ax.pass) rep.pass = false;
  QOType t = classify(res.lifted_cqo, Exec::Serial);
  rep.steps.push_back(RoundTripStep{"lift is o-type", t.all_o, std::nullopt});
  if (!t.all_o) rep.pass = false;
  CheckResult compat = check_v_compatible(v, res.lifted_cqo, exec);
  rep.steps.push_back(RoundTripStep{"lift is v-compatible", compat.pass, compat.witness});
  if (!compat.pass) rep.pass = false;

  auto ord = omega(res.lifted_cqo, exec);
  if (!ord.ok()) {
    rep.steps.push_back(
        RoundTripStep{"omega maps the lift to an order", false, ord.failure().witness,
                      ord.failure().message});
    rep.pass = false;
    return res;
  }
  rep.steps.push_back(RoundTripStep{"omega maps the lift to an order", true});
  res.order = std::move(*ord);

  // Inducing the lifted order back on each level quotient must reproduce the
  // member orders.
  for (size_t i = 0; i < scaffolds.size(); ++i) {
    QO restricted = restrict_qo(res.order.qo_view, scaffolds[i].up);
    auto induced = induce_raw(restricted, scaffolds[i].qv);
    bool ok = induced.ok() && induced->same_relation(res.members[i].qo_view);
    rep.steps.push_back(RoundTripStep{
        "induced order at level " + scaffolds[i].label + " matches the member", ok,
        induced.ok() ? std::nullopt : induced.failure().witness});
    if (!ok) rep.pass = false;
  }
  return res;
}

}  // namespace qov
