#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qov/carrier.hpp"
#include "qov/common.hpp"
#include "qov/qo.hpp"
#include "qov/valuation.hpp"

namespace qov {

// The carrier machinery for one value level: the subgroup {v >= gamma} as a
// carrier of its own, and its quotient by {v > gamma}.
struct LevelScaffold {
  int32_t level = 0;
  std::string label;
  SubcarrierView up;  // {v >= gamma} inside the base carrier
  QuotientView qv;    // {v >= gamma} / {v > gamma}
};

std::vector<LevelScaffold> family_scaffold(const Valuation& v);

// Restriction of a q.o. to a subcarrier.
QO restrict_qo(const QO& qo, const SubcarrierView& view);

struct InducedQO {
  QuotientView qv;
  QO qo;
};

// Existential relation on cosets: r1 <= r2 iff some member of r1's coset
// compares below some member of r2's. No convexity gate; fails with
// NotTransitive or ZeroClassFat when the relation is not a q.o. with a thin
// zero class.
OrFail<QO> induce_raw(const QO& qo, const QuotientView& qv);

// Convexity-gated induction: NotConvex (with witness) when the subgroup is
// not convex, otherwise the induced q.o. For q.o.'s satisfying STAR the two
// gates agree; the test suites verify that equivalence independently.
OrFail<InducedQO> induce_on_quotient(const QO& qo, const std::vector<ElemIdx>& subgroup,
                                     const std::string& label = "");

struct FamilyLevel {
  LevelScaffold scaffold;
  QO member;  // q.o. on scaffold.qv.quotient
};

struct QOFamily {
  Valuation v;
  std::vector<FamilyLevel> levels;  // one per value label, ascending
};

// Requires v compatible with qo (PreconditionFailed otherwise); induction at
// each level must then succeed (TheoremViolation if not).
OrFail<QOFamily> induce_family(const QO& qo, const Valuation& v);

// g <= h iff the cosets of g and h compare at level min(v(g), v(h)).
// Fails with NotTransitive when the family does not lift to a q.o.
OrFail<QO> lift_family(const QOFamily& fam);

enum class TheoremClass { Compatible, CQO };

struct EquivCondition {
  bool holds = true;
  std::optional<Witness> witness;
  std::string note;
};

struct MoreoverClause {
  std::string property;  // "valuational"/"order" or "v-type"/"o-type"
  bool base = false;     // the property on the base q.o.
  bool members = false;  // the property on every induced member
  bool agree = false;
};

struct EquivReport {
  TheoremClass cls = TheoremClass::CQO;
  EquivCondition cond[4];
  bool agree = false;            // all four conditions equal
  bool conditions_hold = false;  // all four true
  std::vector<MoreoverClause> moreover;  // present when conditions hold
  bool pass = false;  // agree and every moreover clause agrees
};

// The four equivalent conditions, each computed by an independent procedure:
// (1) every {v >= gamma} convex, (2) every {v > gamma} convex, (3) induction
// succeeds at every level and lands in the class, (4) v compatible with qo.
OrFail<EquivReport> check_equiv_theorem(const QO& qo, const Valuation& v, TheoremClass cls,
                                        Exec exec = Exec::Parallel);

struct RoundTripStep {
  std::string name;
  bool pass = true;
  std::optional<Witness> witness;
  std::string note;
};

struct RoundTripReport {
  bool pass = true;
  std::vector<RoundTripStep> steps;
  uint64_t skipped_pairs = 0;
};

// family -> lift -> induced family must reproduce the members; the lift must
// be a v-compatible C-q.o. and transfer v-type/o-type memberwise.
RoundTripReport bk_roundtrip_from_family(const QOFamily& fam, Exec exec = Exec::Parallel);

// q.o. -> induced family -> lift must reproduce the q.o. pairwise.
RoundTripReport bk_roundtrip_from_qo(const QO& qo, const Valuation& v, Exec exec = Exec::Parallel);

// All C-q.o. families over the quotients of v: per-level counts and a
// deterministic iteration. Level carriers fall under the enumeration cap.
struct FamilyCensus {
  std::vector<uint64_t> per_level;
  uint64_t total = 1;
};

FamilyCensus for_each_c_family(const Valuation& v,
                               const std::function<void(const QOFamily&)>& cb, int cap = 8);

struct QuotientValuationLevel {
  std::string label;
  Valuation w_gamma;
};

struct CoarseningReport {
  bool pass = true;
  std::vector<RoundTripStep> steps;
  std::vector<QuotientValuationLevel> quotient_valuations;
  bool reconstruction_ok = false;
};

// Decompose the finer valuation w along the coarsening v: each level carries
// w_gamma(coset) := w(member), asserted well-defined and a valuation; lifting
// the induced valuational q.o.'s must reproduce w's q.o.
OrFail<CoarseningReport> coarsening_decompose(const Valuation& v, const Valuation& w,
                                              Exec exec = Exec::Parallel);

}  // namespace qov
