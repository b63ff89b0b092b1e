#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qov/carrier.hpp"
#include "qov/common.hpp"

namespace qov {

enum class Provenance { Matrix, Valuational, OmegaPreimage, LexOrder, Lifted };

const char* provenance_name(Provenance p);

enum class AxiomId { TOTAL, Q1, Q2, STAR, C_AXIOMS };

AxiomId axiom_from_name(std::string_view name);
const char* axiom_name(AxiomId a);

enum class ElementType { VType, OType };

struct QOType {
  bool all_v = false;
  bool all_o = false;
  bool is_order = false;
  bool is_valuational = false;
};

// A total quasi-order on a carrier. Any valid total q.o. is a weak order, so
// after validation the relation is stored as a dense rank function:
// g <= h iff rank(g) <= rank(h). Ranks start at 0 and have no gaps.
class QO {
 public:
  QO() = default;  // empty shell; only assigned-to values are usable

  // Validates reflexivity, totality and transitivity; the witness of the
  // first violation (in enumeration order) is reported on failure.
  static OrFail<QO> from_matrix(CarrierPtr carrier, const std::vector<std::vector<int>>& rows,
                                Provenance prov = Provenance::Matrix);
  static OrFail<QO> from_comparator(CarrierPtr carrier,
                                    const std::function<bool(ElemIdx, ElemIdx)>& leq,
                                    Provenance prov);
  // Trusted constructor for rank vectors that are weak orders by construction.
  static QO from_ranks(CarrierPtr carrier, std::vector<int32_t> ranks, Provenance prov);

  bool leq(ElemIdx a, ElemIdx b) const { return ranks_[a] <= ranks_[b]; }
  bool sim(ElemIdx a, ElemIdx b) const { return ranks_[a] == ranks_[b]; }
  bool lt(ElemIdx a, ElemIdx b) const { return ranks_[a] < ranks_[b]; }
  int32_t rank(ElemIdx a) const { return ranks_[a]; }
  int32_t num_classes() const { return num_classes_; }
  const std::vector<int32_t>& ranks() const { return ranks_; }
  const CarrierPtr& carrier() const { return carrier_; }
  Provenance provenance() const { return provenance_; }

  bool same_relation(const QO& other) const { return ranks_ == other.ranks_; }

 private:
  CarrierPtr carrier_;
  std::vector<int32_t> ranks_;
  int32_t num_classes_ = 0;
  Provenance provenance_ = Provenance::Matrix;
};

// Exhaustive axiom scan over the carrier; windowed instances that leave the
// carrier are counted as skips. C_AXIOMS checks the derived ternary relation
// C(f,g,h) := not((f-h) <= (g-h)) against the four C-relation axioms, in the
// order: strict zero separation (x != y => C(x,y,y)), swap, asymmetry,
// branching.
CheckResult check_axiom(const QO& qo, AxiomId axiom, Exec exec = Exec::Parallel);

ElementType element_type(const QO& qo, ElemIdx g);

// all_v / all_o by element scan, is_order by antisymmetry plus
// translation-invariance scans, is_valuational by a natural-valuation
// round trip.
QOType classify(const QO& qo, Exec exec = Exec::Parallel);

// Convexity of S in the carrier: fail when some a outside S sits between two
// members. The witness is (b, a, c) with a the first violating element.
CheckResult check_convex(const QO& qo, const std::vector<ElemIdx>& S);
CheckResult check_initial_segment(const QO& qo, const std::vector<ElemIdx>& S);

}  // namespace qov
