#pragma once

#include <string>
#include <vector>

#include "qov/carrier.hpp"
#include "qov/qo.hpp"
#include "qov/valuation.hpp"

namespace qovtest {

using namespace qov;

inline CarrierPtr G(const std::string& spec) { return Carrier::make(GroupSpec::parse(spec)); }

inline ElemIdx at(const Carrier& c, std::vector<int64_t> coords) {
  ElemIdx i = c.locate(coords);
  if (i == kOutOfWindow) throw std::runtime_error("test element not in carrier");
  return i;
}

inline ElemIdx at(const CarrierPtr& c, std::vector<int64_t> coords) { return at(*c, std::move(coords)); }

// Build a q.o. from its classes listed bottom-up; every carrier element must
// appear exactly once.
inline QO qo_from_classes(const CarrierPtr& c,
                          const std::vector<std::vector<std::vector<int64_t>>>& classes) {
  std::vector<int32_t> ranks(c->size(), -1);
  for (size_t r = 0; r < classes.size(); ++r)
    for (const auto& coords : classes[r]) ranks[at(*c, coords)] = static_cast<int32_t>(r);
  for (int32_t v : ranks)
    if (v < 0) throw std::runtime_error("qo_from_classes: carrier not covered");
  return QO::from_ranks(c, ranks, Provenance::Matrix);
}

// ---- independent test-side oracles: plain loops straight off the ----------
// ---- definitions, no shared scan machinery                        ----------

inline bool naive_q1(const QO& q) {
  const Carrier& c = *q.carrier();
  for (ElemIdx g = 0; g < c.size(); ++g)
    if (g != c.zero() && q.leq(g, c.zero()) && q.leq(c.zero(), g)) return false;
  return true;
}

inline bool naive_q2(const QO& q) {
  const Carrier& c = *q.carrier();
  for (ElemIdx x = 0; x < c.size(); ++x)
    for (ElemIdx y = 0; y < c.size(); ++y)
      for (ElemIdx z = 0; z < c.size(); ++z) {
        bool sim_yz = q.leq(y, z) && q.leq(z, y);
        if (!q.leq(x, y) || sim_yz) continue;
        ElemIdx xz = c.add(x, z), yz = c.add(y, z);
        if (xz == kOutOfWindow || yz == kOutOfWindow) continue;
        if (!q.leq(xz, yz)) return false;
      }
  return true;
}

inline bool naive_star(const QO& q) {
  if (!naive_q1(q)) return false;
  const Carrier& c = *q.carrier();
  for (ElemIdx g = 0; g < c.size(); ++g)
    for (ElemIdx h = 0; h < c.size(); ++h)
      for (ElemIdx f = 0; f < c.size(); ++f) {
        ElemIdx nf = c.neg(f);
        bool sim = q.leq(h, nf) && q.leq(nf, h);
        if (!q.leq(g, h) || sim) continue;
        ElemIdx gf = c.add(g, f), hf = c.add(h, f);
        if (gf == kOutOfWindow || hf == kOutOfWindow) continue;
        if (!q.leq(gf, hf)) return false;
      }
  return true;
}

// Derived ternary relation evaluated straight off the definition; the middle
// result is "unknown" when a difference leaves the window.
inline int naive_c_rel(const QO& q, ElemIdx f, ElemIdx g, ElemIdx h) {
  const Carrier& c = *q.carrier();
  ElemIdx a = c.sub(f, h), b = c.sub(g, h);
  if (a == kOutOfWindow || b == kOutOfWindow) return -1;
  return q.leq(a, b) ? 0 : 1;
}

inline bool naive_c_axioms(const QO& q) {
  const Carrier& c = *q.carrier();
  const ElemIdx n = c.size();
  for (ElemIdx x = 0; x < n; ++x)
    for (ElemIdx y = 0; y < n; ++y) {
      if (x == y) continue;
      int r = naive_c_rel(q, x, y, y);
      if (r == 0) return false;
    }
  for (ElemIdx x = 0; x < n; ++x)
    for (ElemIdx y = 0; y < n; ++y)
      for (ElemIdx z = 0; z < n; ++z) {
        if (naive_c_rel(q, x, y, z) != 1) continue;
        if (naive_c_rel(q, x, z, y) == 0) return false;
        if (naive_c_rel(q, y, x, z) == 1) return false;
        for (ElemIdx w = 0; w < n; ++w) {
          int a = naive_c_rel(q, w, y, z), b = naive_c_rel(q, x, w, z);
          if (a == 0 && b == 0) return false;
        }
      }
  return true;
}

inline bool naive_convex(const QO& q, const std::vector<ElemIdx>& S) {
  const Carrier& c = *q.carrier();
  std::vector<char> in(c.size(), 0);
  for (ElemIdx s : S) in[s] = 1;
  for (ElemIdx b = 0; b < c.size(); ++b)
    for (ElemIdx a = 0; a < c.size(); ++a)
      for (ElemIdx d = 0; d < c.size(); ++d)
        if (in[b] && in[d] && !in[a] && q.leq(b, a) && q.leq(a, d)) return false;
  return true;
}

inline Valuation dyadic(const std::string& spec) { return dyadic_valuation(G(spec)); }

inline QO dyadic_qo(const std::string& spec) { return valuational_qo(dyadic(spec)); }

}  // namespace qovtest
