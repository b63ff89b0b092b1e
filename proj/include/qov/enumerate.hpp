#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qov/common.hpp"
#include "qov/qo.hpp"

namespace qov {

// Number of weak orders (ordered set partitions) on n elements.
uint64_t ordered_bell(int n);

// Every total q.o. on {0..n-1}, presented as its rank vector: a function
// {0..n-1} -> {0..n-1} whose image is an initial segment. Emitted in
// lexicographic order of the vector. Throws when n exceeds the cap.
void weak_orders(int n, const std::function<void(const std::vector<int32_t>&)>& cb, int cap = 8);

std::vector<std::vector<int32_t>> all_weak_orders(int n, int cap = 8);

struct SurveyWitness {
  std::string mode;          // failing check tag
  uint64_t order_index = 0;  // index of the weak order in generation order
  std::vector<int32_t> ranks;
  Witness witness;
};

struct SurveyRow {
  std::string group;
  std::string filter;
  uint64_t candidates = 0;
  uint64_t passes = 0;
  std::vector<SurveyWitness> witnesses;  // first witness per distinct failure mode
};

// Generate every weak order on the carrier, filter by the conjunction of the
// given axioms, count passes and archive one witness per failure mode.
SurveyRow survey(const CarrierPtr& carrier, const std::vector<AxiomId>& axioms,
                 Exec exec = Exec::Parallel, int cap = 8);

// Deterministic serial iteration over the q.o.'s passing all given axioms.
void for_each_passing(const CarrierPtr& carrier, const std::vector<AxiomId>& axioms,
                      const std::function<void(const QO&, uint64_t)>& cb, int cap = 8);

std::string filter_name(const std::vector<AxiomId>& axioms);

}  // namespace qov
