#pragma once

#include <functional>
#include <vector>

#include "qov/carrier.hpp"
#include "qov/common.hpp"
#include "qov/qo.hpp"
#include "qov/quotient_lift.hpp"
#include "qov/valuation.hpp"

namespace qov {

struct PositiveCone {
  CarrierPtr carrier;
  std::vector<char> members;  // indicator per element index
};

// P n -P = {0}, P u -P = G, P + P inside P (in-window sums; skips counted).
CheckResult check_cone(const CarrierPtr& carrier, const std::vector<char>& P,
                       Exec exec = Exec::Parallel);

// A total group order, kept both as its positive cone and as a q.o. view.
// On windowed carriers the cone alone cannot compare pairs whose difference
// leaves the window; lexicographic orders (and cones recognized as such) use
// a direct coordinate comparator instead.
struct GroupOrder {
  CarrierPtr carrier;
  PositiveCone cone;
  QO qo_view;
  std::vector<int> lex_signs;  // nonempty when backed by a lex comparator

  bool leq(ElemIdx a, ElemIdx b) const { return qo_view.leq(a, b); }
  bool same_order(const GroupOrder& other) const { return qo_view.same_relation(other.qo_view); }
};

// (a_1..a_d) positive iff the first nonzero eps_i * a_i is > 0. Free-abelian
// carriers only; signs has one entry per coordinate.
OrFail<GroupOrder> lex_order(const CarrierPtr& carrier, const std::vector<int>& signs);

// Order of a validated cone: g <= h iff h - g in P. Windowed cones that miss
// pairs are accepted only when they coincide with a lex cone.
OrFail<GroupOrder> order_from_cone(const CarrierPtr& carrier, std::vector<char> P,
                                   Exec exec = Exec::Parallel);

// View an antisymmetric q.o. as an order (used for orders induced on
// quotients).
OrFail<GroupOrder> order_from_qo(const QO& qo, Exec exec = Exec::Parallel);

// P := {g : -g <= g} for an o-type C-q.o.; the three cone axioms and
// stability under ~ are certified on every call.
OrFail<PositiveCone> cone_from_qo(const QO& qo, Exec exec = Exec::Parallel);

// omega = order_from_cone after cone_from_qo.
OrFail<GroupOrder> omega(const QO& qo, Exec exec = Exec::Parallel);

// The canonical preimage of an order under omega: 0 strictly below the
// collapsed class of -P\{0}, strictly below P\{0} ordered by the order.
QO omega_preimage(const GroupOrder& order);

// g <= h iff g+x <= h+x for all in-window translations.
CheckResult check_translation_invariance(const GroupOrder& order, Exec exec = Exec::Parallel);

struct OrderLiftResult {
  std::vector<GroupOrder> members;
  QO lifted_cqo;      // lift of the omega-preimages: an o-type v-compatible C-q.o.
  GroupOrder order;   // its image under omega
  RoundTripReport checks;
};

// The order correspondence over a valuation: build one order per level on
// the level quotient, take omega-preimages, lift, and map back through
// omega. The checks record that the lift is an o-type v-compatible C-q.o.
// and that inducing it back reproduces the member orders.
OrFail<OrderLiftResult> lift_order_family(
    const Valuation& v,
    const std::function<OrFail<GroupOrder>(const LevelScaffold&)>& member_builder,
    Exec exec = Exec::Parallel);

}  // namespace qov
