#pragma once

#include <string>
#include <vector>

#include "qov/carrier.hpp"
#include "qov/common.hpp"
#include "qov/qo.hpp"

namespace qov {

inline constexpr int32_t kInfLevel = INT32_MAX;

// Group valuation with a finite value set. Levels index the ordered label
// list; the reserved top value (v(g) = infinity, exactly at g = 0 for valid
// valuations) is kInfLevel.
class Valuation {
 public:
  Valuation(CarrierPtr carrier, std::vector<std::string> labels, std::vector<int32_t> levels);

  const CarrierPtr& carrier() const { return carrier_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int32_t num_levels() const { return static_cast<int32_t>(labels_.size()); }
  int32_t level(ElemIdx g) const { return levels_[g]; }
  const std::vector<int32_t>& levels() const { return levels_; }
  std::string value_name(ElemIdx g) const;
  int32_t label_index(const std::string& label) const;  // throws UnknownLabel

  // Equality up to order isomorphism of the value sets.
  bool same_up_to_relabeling(const Valuation& other) const { return levels_ == other.levels_; }

 private:
  CarrierPtr carrier_;
  std::vector<std::string> labels_;
  std::vector<int32_t> levels_;
};

// Axiom scan: v(g) = infinity iff g = 0, and v(g-h) >= min(v(g), v(h)) over
// all in-window pairs.
CheckResult check_valuation(const Valuation& v, Exec exec = Exec::Parallel);

// g <= h iff v(g) >= v(h).
QO valuational_qo(const Valuation& v);

// Recovers the valuation from a q.o.: classes ordered by the reverse of the
// relation, cl(0) mapped to infinity. Succeeds iff the candidate satisfies
// the valuation axioms and re-induces the q.o. exactly.
OrFail<Valuation> natural_valuation(const QO& qo);

enum class LevelKind { Geq, Gt };

// {g : v(g) >= gamma} or {g : v(g) > gamma}; validated to be a subgroup.
std::vector<ElemIdx> level_set(const Valuation& v, int32_t level, LevelKind kind);

// 0 <= g <= h implies v(g) >= v(h).
CheckResult check_v_compatible(const Valuation& v, const QO& qo, Exec exec = Exec::Parallel);

// v is a coarsening of w when v is compatible with the q.o. induced by w.
CheckResult is_coarsening(const Valuation& v, const Valuation& w, Exec exec = Exec::Parallel);

// ---- constructors used by the CLI, tests and sweeps ----

Valuation trivial_valuation(CarrierPtr carrier);

// chain = strictly descending proper nontrivial subgroups T_1 > T_2 > ...;
// v(g) counts how many T_i contain g (0 gets the infinite value). The empty
// chain gives the trivial valuation.
Valuation chain_valuation(CarrierPtr carrier, const std::vector<std::vector<ElemIdx>>& chain);

// First nonzero coordinate position on a free-abelian root carrier.
Valuation coordinate_valuation(CarrierPtr carrier);

// 2-adic valuation on Z^1[B=...] windows and on cyclic 2-power groups.
Valuation dyadic_valuation(CarrierPtr carrier);

// All subgroups of a small carrier (element count capped), then all chain
// valuations, in deterministic order.
std::vector<std::vector<ElemIdx>> all_subgroups(const CarrierPtr& carrier);
std::vector<Valuation> all_chain_valuations(const CarrierPtr& carrier);

}  // namespace qov
