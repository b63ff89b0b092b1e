#include "qov/valuation.hpp"

#include <algorithm>
#include <set>

#include "qov/scan.hpp"

namespace qov {

Valuation::Valuation(CarrierPtr carrier, std::vector<std::string> labels,
                     std::vector<int32_t> levels)
    : carrier_(std::move(carrier)), labels_(std::move(labels)), levels_(std::move(levels)) {
  if (levels_.size() != static_cast<size_t>(carrier_->size()))
    throw Error(Errc::InvalidInput, "valuation table must cover the carrier");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size())
    throw Error(Errc::InvalidInput, "valuation labels must be distinct");
  for (int32_t l : levels_)
    if (l != kInfLevel && (l < 0 || l >= num_levels()))
      throw Error(Errc::InvalidInput, "valuation level out of range");
}

std::string Valuation::value_name(ElemIdx g) const {
  return levels_[g] == kInfLevel ? "inf" : labels_[levels_[g]];
}

int32_t Valuation::label_index(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int32_t>(i);
  throw Error(Errc::UnknownLabel, "unknown value label: " + label);
}

CheckResult check_valuation(const Valuation& v, Exec exec) {
  const Carrier& c = *v.carrier();
  const ElemIdx n = c.size();
  const ElemIdx zero = c.zero();

  CheckResult out;
  out.check = "valuation";
  for (ElemIdx g = 0; g < n; ++g) {
    const bool inf = v.level(g) == kInfLevel;
    if (inf != (g == zero)) {
      out.pass = false;
      out.witness = Witness{"infinity", {g}, inf ? "v(g) infinite with g != 0" : "v(0) finite"};
      out.instances = static_cast<uint64_t>(g) + 1;
      return out;
    }
  }

  auto r = scan::run(
      static_cast<uint64_t>(n) * n,
      [&](uint64_t i) {
        ElemIdx g = static_cast<ElemIdx>(i / n), h = static_cast<ElemIdx>(i % n);
        ElemIdx d = c.sub(g, h);
        if (d == kOutOfWindow) return scan::Step::Skip;
        int64_t lo = std::min<int64_t>(v.level(g), v.level(h));
        return static_cast<int64_t>(v.level(d)) >= lo ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  out.instances = static_cast<uint64_t>(n) + r.instances;
  out.skips = r.skips;
  if (r.failed) {
    out.pass = false;
    out.witness = Witness{"ultrametric",
                          {static_cast<ElemIdx>(r.index / n), static_cast<ElemIdx>(r.index % n)},
                          "v(g-h) < min(v(g), v(h))"};
  }
  return out;
}

QO valuational_qo(const Valuation& v) {
  const ElemIdx n = v.carrier()->size();
  const int32_t m = v.num_levels();
  std::vector<int32_t> ranks(n);
  for (ElemIdx g = 0; g < n; ++g)
    ranks[g] = v.level(g) == kInfLevel ? 0 : (m - v.level(g));
  return QO::from_ranks(v.carrier(), std::move(ranks), Provenance::Valuational);
}

OrFail<Valuation> natural_valuation(const QO& qo) {
  const CarrierPtr& c = qo.carrier();
  const ElemIdx n = c->size();
  const ElemIdx zero = c->zero();

  // Candidate: reverse the class order, send cl(0) to infinity.
  std::vector<int32_t> raw(n);
  int32_t top = qo.num_classes() - 1;
  for (ElemIdx g = 0; g < n; ++g) raw[g] = g == zero ? kInfLevel : top - qo.rank(g);
  std::vector<int32_t> uniq;
  for (ElemIdx g = 0; g < n; ++g)
    if (raw[g] != kInfLevel) uniq.push_back(raw[g]);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<int32_t> levels(n);
  for (ElemIdx g = 0; g < n; ++g)
    levels[g] = raw[g] == kInfLevel
                    ? kInfLevel
                    : static_cast<int32_t>(std::lower_bound(uniq.begin(), uniq.end(), raw[g]) -
                                           uniq.begin());
  std::vector<std::string> labels(uniq.size());
  for (size_t i = 0; i < uniq.size(); ++i) labels[i] = std::to_string(i);
  Valuation cand(c, std::move(labels), std::move(levels));

  CheckResult axioms = check_valuation(cand, Exec::Serial);
  if (!axioms.pass)
    return Failure{Errc::NotValuational, "candidate valuation fails: " + axioms.witness->tag,
                   axioms.witness};
  QO back = valuational_qo(cand);
  if (!back.same_relation(qo)) {
    for (ElemIdx g = 0; g < n; ++g)
      for (ElemIdx h = 0; h < n; ++h)
        if (back.leq(g, h) != qo.leq(g, h))
          return Failure{Errc::NotValuational, "candidate valuation does not re-induce the q.o.",
                         Witness{"re-induction", {g, h}, ""}};
  }
  return cand;
}

std::vector<ElemIdx> level_set(const Valuation& v, int32_t level, LevelKind kind) {
  if (level < 0 || level >= v.num_levels())
    throw Error(Errc::UnknownLabel, "level index out of range");
  const Carrier& c = *v.carrier();
  std::vector<ElemIdx> out;
  for (ElemIdx g = 0; g < c.size(); ++g) {
    int64_t lv = v.level(g);
    if (kind == LevelKind::Geq ? lv >= level : lv > level) out.push_back(g);
  }
  // Level sets of valid valuations are subgroups; verify.
  std::set<ElemIdx> s(out.begin(), out.end());
  if (!s.count(c.zero()))
    throw Error(Errc::TheoremViolation, "level set misses 0 (invalid valuation?)");
  for (ElemIdx g : out) {
    if (!s.count(c.neg(g)))
      throw Error(Errc::TheoremViolation, "level set not closed under negation",
                  Witness{"negation", {g}, ""});
    for (ElemIdx h : out) {
      ElemIdx sum = c.add(g, h);
      if (sum != kOutOfWindow && !s.count(sum))
        throw Error(Errc::TheoremViolation, "level set not closed under addition",
                    Witness{"addition", {g, h}, ""});
    }
  }
  return out;
}

CheckResult check_v_compatible(const Valuation& v, const QO& qo, Exec exec) {
  const ElemIdx n = qo.carrier()->size();
  const ElemIdx zero = qo.carrier()->zero();
  auto r = scan::run(
      static_cast<uint64_t>(n) * n,
      [&](uint64_t i) {
        ElemIdx g = static_cast<ElemIdx>(i / n), h = static_cast<ElemIdx>(i % n);
        if (!qo.leq(zero, g) || !qo.leq(g, h)) return scan::Step::Ok;
        int64_t vg = v.level(g), vh = v.level(h);
        return vg >= vh ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  CheckResult out;
  out.check = "v-compatible";
  out.pass = !r.failed;
  out.instances = r.instances;
  out.skips = r.skips;
  if (r.failed)
    out.witness = Witness{"v-compatible",
                          {static_cast<ElemIdx>(r.index / n), static_cast<ElemIdx>(r.index % n)},
                          "0 <= g <= h but v(g) < v(h)"};
  return out;
}

CheckResult is_coarsening(const Valuation& v, const Valuation& w, Exec exec) {
  CheckResult out = check_v_compatible(v, valuational_qo(w), exec);
  out.check = "coarsening";
  return out;
}

QOType classify(const QO& qo, Exec exec) {
  const Carrier& c = *qo.carrier();
  const ElemIdx n = c.size();
  QOType t;
  t.all_v = true;
  t.all_o = true;
  for (ElemIdx g = 0; g < n; ++g) {
    bool vt = qo.sim(g, c.neg(g));
    if (!vt) t.all_v = false;
    if (g != c.zero() && vt) t.all_o = false;
  }
  // A group order is antisymmetric AND translation-invariant; on Z/2 the
  // q.o. 0 < a is antisymmetric but translating by a flips it.
  t.is_order = true;
  for (ElemIdx g = 0; g < n && t.is_order; ++g)
    for (ElemIdx h = static_cast<ElemIdx>(g + 1); h < n; ++h)
      if (qo.sim(g, h)) {
        t.is_order = false;
        break;
      }
  for (ElemIdx x = 0; x < n && t.is_order; ++x)
    for (ElemIdx y = 0; y < n && t.is_order; ++y) {
      if (!qo.leq(x, y)) continue;
      for (ElemIdx z = 0; z < n; ++z) {
        ElemIdx xz = c.add(x, z), yz = c.add(y, z);
        if (xz == kOutOfWindow || yz == kOutOfWindow) continue;
        if (!qo.leq(xz, yz)) {
          t.is_order = false;
          break;
        }
      }
    }
  t.is_valuational = natural_valuation(qo).ok();
  (void)exec;
  return t;
}

Valuation trivial_valuation(CarrierPtr carrier) {
  std::vector<int32_t> levels(carrier->size(), 0);
  levels[carrier->zero()] = kInfLevel;
  return Valuation(std::move(carrier), {"0"}, std::move(levels));
}

Valuation chain_valuation(CarrierPtr carrier, const std::vector<std::vector<ElemIdx>>& chain) {
  const ElemIdx n = carrier->size();
  std::vector<int32_t> levels(n, 0);
  for (const auto& sub : chain) {
    std::set<ElemIdx> s(sub.begin(), sub.end());
    for (ElemIdx g = 0; g < n; ++g)
      if (s.count(g)) ++levels[g];
  }
  levels[carrier->zero()] = kInfLevel;
  std::vector<std::string> labels(chain.size() + 1);
  for (size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(i);
  return Valuation(std::move(carrier), std::move(labels), std::move(levels));
}

Valuation coordinate_valuation(CarrierPtr carrier) {
  if (!carrier->free_coords())
    throw Error(Errc::InvalidInput, "coordinate valuation requires a free-abelian carrier");
  const ElemIdx n = carrier->size();
  const int d = carrier->coord_dim();
  std::vector<int32_t> levels(n, kInfLevel);
  for (ElemIdx g = 0; g < n; ++g) {
    const auto& co = carrier->coords(g);
    for (int k = 0; k < d; ++k)
      if (co[k] != 0) {
        levels[g] = k;
        break;
      }
  }
  std::vector<std::string> labels(d);
  for (int k = 0; k < d; ++k) labels[k] = std::to_string(k);
  return Valuation(std::move(carrier), std::move(labels), std::move(levels));
}

Valuation dyadic_valuation(CarrierPtr carrier) {
  const ElemIdx n = carrier->size();
  std::vector<int32_t> levels(n, kInfLevel);
  int32_t maxlev = 0;
  auto v2 = [](int64_t x) {
    int32_t k = 0;
    while (x % 2 == 0) {
      x /= 2;
      ++k;
    }
    return k;
  };
  if (carrier->free_coords()) {
    if (carrier->coord_dim() != 1)
      throw Error(Errc::InvalidInput, "dyadic valuation requires rank 1 or a cyclic 2-power group");
    for (ElemIdx g = 0; g < n; ++g) {
      int64_t x = carrier->coords(g)[0];
      if (x == 0) continue;
      levels[g] = v2(x < 0 ? -x : x);
      maxlev = std::max(maxlev, levels[g]);
    }
  } else {
    if (carrier->coord_dim() != 1 || (n & (n - 1)) != 0)
      throw Error(Errc::InvalidInput, "dyadic valuation requires a cyclic group of 2-power order");
    for (ElemIdx g = 0; g < n; ++g) {
      int64_t x = carrier->coords(g)[0];
      if (x == 0) continue;
      levels[g] = v2(x);
      maxlev = std::max(maxlev, levels[g]);
    }
  }
  std::vector<std::string> labels(maxlev + 1);
  for (int32_t k = 0; k <= maxlev; ++k) labels[k] = std::to_string(k);
  return Valuation(std::move(carrier), std::move(labels), std::move(levels));
}

std::vector<std::vector<ElemIdx>> all_subgroups(const CarrierPtr& carrier) {
  const ElemIdx n = carrier->size();
  if (carrier->windowed() || n > 16)
    throw Error(Errc::CarrierTooLarge, "subgroup enumeration is limited to finite carriers of <= 16 elements");
  std::vector<std::vector<ElemIdx>> out;
  const uint32_t total = 1u << n;
  for (uint32_t mask = 0; mask < total; ++mask) {
    if (!(mask & (1u << carrier->zero()))) continue;
    std::vector<ElemIdx> members;
    for (ElemIdx g = 0; g < n; ++g)
      if (mask & (1u << g)) members.push_back(g);
    bool closed = true;
    for (ElemIdx g : members) {
      if (!(mask & (1u << carrier->neg(g)))) {
        closed = false;
        break;
      }
      for (ElemIdx h : members)
        if (!(mask & (1u << carrier->add(g, h)))) {
          closed = false;
          break;
        }
      if (!closed) break;
    }
    if (closed) out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return out;
}

std::vector<Valuation> all_chain_valuations(const CarrierPtr& carrier) {
  auto subs = all_subgroups(carrier);
  // Proper nontrivial subgroups, ordered by size ascending.
  std::vector<std::vector<ElemIdx>> proper;
  for (auto& s : subs)
    if (s.size() > 1 && s.size() < static_cast<size_t>(carrier->size())) proper.push_back(s);

  auto contains = [](const std::vector<ElemIdx>& big, const std::vector<ElemIdx>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  std::vector<Valuation> out;
  std::vector<std::vector<ElemIdx>> chain;  // descending
  // DFS over descending chains; the empty chain is the trivial valuation.
  std::function<void(size_t)> dfs = [&](size_t max_size_idx) {
    std::vector<std::vector<ElemIdx>> desc(chain.rbegin(), chain.rend());
    out.push_back(chain_valuation(carrier, desc));
    for (size_t i = max_size_idx; i < proper.size(); ++i) {
      if (!chain.empty() && (proper[i].size() <= chain.back().size() ||
                             !contains(proper[i], chain.back())))
        continue;
      if (chain.empty() || proper[i].size() > chain.back().size()) {
        chain.push_back(proper[i]);
        dfs(i + 1);
        chain.pop_back();
      }
    }
  };
  dfs(0);
  return out;
}

}  // namespace qov
