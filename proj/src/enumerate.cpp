#include "qov/enumerate.hpp"

#include <algorithm>
#include <map>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qov {

uint64_t ordered_bell(int n) {
  // a(n) = sum_{k=1..n} C(n,k) a(n-k)
  std::vector<uint64_t> a(n + 1, 0);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    std::vector<uint64_t> binom(m + 1, 0);  // C(m, j)
    binom[0] = 1;
    for (int i = 1; i <= m; ++i)
      for (int j = i; j > 0; --j) binom[j] += binom[j - 1];
    uint64_t total = 0;
    for (int k = 1; k <= m; ++k) total += binom[k] * a[m - k];
    a[m] = total;
  }
  return a[n];
}

namespace {

void gen(std::vector<int32_t>& r, int pos, int n, uint32_t used, int32_t maxv,
         const std::function<void(const std::vector<int32_t>&)>& cb) {
  if (pos == n) {
    cb(r);
    return;
  }
  const int remaining = n - pos;
  for (int32_t v = 0; v < n; ++v) {
    uint32_t used2 = used | (1u << v);
    int32_t max2 = std::max(maxv, v);
    // The image must end up being {0..max2}: count missing values.
    int missing = (max2 + 1) - __builtin_popcount(used2 & ((1u << (max2 + 1)) - 1));
    if (missing > remaining - 1) continue;
    r[pos] = v;
    gen(r, pos + 1, n, used2, max2, cb);
  }
}

}  // namespace

void weak_orders(int n, const std::function<void(const std::vector<int32_t>&)>& cb, int cap) {
  if (n > cap)
    throw Error(Errc::CarrierTooLarge,
                "weak-order enumeration capped at " + std::to_string(cap) + " elements");
  if (n == 0) return;
  std::vector<int32_t> r(n, 0);
  gen(r, 0, n, 0, -1, cb);
}

std::vector<std::vector<int32_t>> all_weak_orders(int n, int cap) {
  std::vector<std::vector<int32_t>> out;
  out.reserve(ordered_bell(n));
  weak_orders(n, [&](const std::vector<int32_t>& r) { out.push_back(r); }, cap);
  return out;
}

std::string filter_name(const std::vector<AxiomId>& axioms) {
  if (axioms.empty()) return "ALL";
  std::string out;
  for (size_t i = 0; i < axioms.size(); ++i) {
    if (i) out += "&";
    out += axiom_name(axioms[i]);
  }
  return out;
}

namespace {

// First failing axiom check (serial scans; parallelism lives across orders).
std::optional<CheckResult> first_failure(const QO& qo, const std::vector<AxiomId>& axioms) {
  for (AxiomId a : axioms) {
    CheckResult r = check_axiom(qo, a, Exec::Serial);
    if (!r.pass) return r;
  }
  return std::nullopt;
}

}  // namespace

SurveyRow survey(const CarrierPtr& carrier, const std::vector<AxiomId>& axioms, Exec exec, int cap) {
  SurveyRow row;
  row.group = carrier->label();
  row.filter = filter_name(axioms);
  auto orders = all_weak_orders(carrier->size(), cap);
  row.candidates = orders.size();

  std::map<std::string, SurveyWitness> modes;
  uint64_t passes = 0;

#if defined(_OPENMP)
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      uint64_t local_passes = 0;
      std::map<std::string, SurveyWitness> local_modes;
#pragma omp for schedule(dynamic, 256) nowait
      for (int64_t i = 0; i < static_cast<int64_t>(orders.size()); ++i) {
        QO qo = QO::from_ranks(carrier, orders[i], Provenance::Matrix);
        auto fail = first_failure(qo, axioms);
        if (!fail) {
          ++local_passes;
          continue;
        }
        const std::string& mode = fail->witness ? fail->witness->tag : fail->check;
        auto it = local_modes.find(mode);
        if (it == local_modes.end() || it->second.order_index > static_cast<uint64_t>(i))
          local_modes[mode] = SurveyWitness{mode, static_cast<uint64_t>(i), orders[i],
                                            fail->witness.value_or(Witness{mode, {}, ""})};
      }
#pragma omp critical
      {
        passes += local_passes;
        for (auto& [mode, w] : local_modes) {
          auto it = modes.find(mode);
          if (it == modes.end() || it->second.order_index > w.order_index) modes[mode] = w;
        }
      }
    }
    row.passes = passes;
    for (auto& [_, w] : modes) row.witnesses.push_back(w);
    std::sort(row.witnesses.begin(), row.witnesses.end(),
              [](const auto& a, const auto& b) { return a.mode < b.mode; });
    return row;
  }
#else
  (void)exec;
#endif

  for (uint64_t i = 0; i < orders.size(); ++i) {
    QO qo = QO::from_ranks(carrier, orders[i], Provenance::Matrix);
    auto fail = first_failure(qo, axioms);
    if (!fail) {
      ++passes;
      continue;
    }
    const std::string& mode = fail->witness ? fail->witness->tag : fail->check;
    if (!modes.count(mode))
      modes[mode] =
          SurveyWitness{mode, i, orders[i], fail->witness.value_or(Witness{mode, {}, ""})};
  }
  row.passes = passes;
  for (auto& [_, w] : modes) row.witnesses.push_back(w);
  std::sort(row.witnesses.begin(), row.witnesses.end(),
            [](const auto& a, const auto& b) { return a.mode < b.mode; });
  return row;
}

void for_each_passing(const CarrierPtr& carrier, const std::vector<AxiomId>& axioms,
                      const std::function<void(const QO&, uint64_t)>& cb, int cap) {
  uint64_t index = 0;
  weak_orders(
      carrier->size(),
      [&](const std::vector<int32_t>& ranks) {
        QO qo = QO::from_ranks(carrier, ranks, Provenance::Matrix);
        if (!first_failure(qo, axioms)) cb(qo, index);
        ++index;
      },
      cap);
}

}  // namespace qov
