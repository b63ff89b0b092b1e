#include "qov/qo.hpp"

#include <algorithm>
#include <numeric>

#include "qov/scan.hpp"

namespace qov {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Matrix: return "matrix";
    case Provenance::Valuational: return "valuational";
    case Provenance::OmegaPreimage: return "omega-preimage";
    case Provenance::LexOrder: return "lex-order";
    case Provenance::Lifted: return "lifted";
  }
  return "unknown";
}

AxiomId axiom_from_name(std::string_view name) {
  if (name == "TOTAL") return AxiomId::TOTAL;
  if (name == "Q1") return AxiomId::Q1;
  if (name == "Q2") return AxiomId::Q2;
  if (name == "STAR" || name == "*") return AxiomId::STAR;
  if (name == "C" || name == "C_AXIOMS") return AxiomId::C_AXIOMS;
  throw Error(Errc::InvalidInput, "unknown axiom: " + std::string(name));
}

const char* axiom_name(AxiomId a) {
  switch (a) {
    case AxiomId::TOTAL: return "TOTAL";
    case AxiomId::Q1: return "Q1";
    case AxiomId::Q2: return "Q2";
    case AxiomId::STAR: return "STAR";
    case AxiomId::C_AXIOMS: return "C_AXIOMS";
  }
  return "?";
}

namespace {

OrFail<QO> ranks_from_relation(CarrierPtr carrier, const std::function<bool(ElemIdx, ElemIdx)>& leq,
                               Provenance prov) {
  const ElemIdx n = carrier->size();
  std::vector<uint8_t> rel(static_cast<size_t>(n) * n);
  for (ElemIdx i = 0; i < n; ++i)
    for (ElemIdx j = 0; j < n; ++j) rel[static_cast<size_t>(i) * n + j] = leq(i, j) ? 1 : 0;
  auto at = [&](ElemIdx i, ElemIdx j) { return rel[static_cast<size_t>(i) * n + j] != 0; };

  for (ElemIdx i = 0; i < n; ++i)
    if (!at(i, i))
      return Failure{Errc::NotReflexive, "relation is not reflexive", Witness{"reflexive", {i}, ""}};
  for (ElemIdx i = 0; i < n; ++i)
    for (ElemIdx j = 0; j < n; ++j)
      if (!at(i, j) && !at(j, i))
        return Failure{Errc::NotTotal, "relation is not total", Witness{"total", {i, j}, ""}};
  for (ElemIdx i = 0; i < n; ++i)
    for (ElemIdx j = 0; j < n; ++j) {
      if (!at(i, j)) continue;
      for (ElemIdx k = 0; k < n; ++k)
        if (at(j, k) && !at(i, k))
          return Failure{Errc::NotTransitive, "relation is not transitive",
                         Witness{"transitive", {i, j, k}, ""}};
    }

  // Total preorder: rank by descending out-degree.
  std::vector<int32_t> score(n, 0);
  for (ElemIdx i = 0; i < n; ++i)
    for (ElemIdx j = 0; j < n; ++j) score[i] += rel[static_cast<size_t>(i) * n + j];
  std::vector<int32_t> uniq(score.begin(), score.end());
  std::sort(uniq.begin(), uniq.end(), std::greater<>());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<int32_t> ranks(n);
  for (ElemIdx i = 0; i < n; ++i)
    ranks[i] = static_cast<int32_t>(std::lower_bound(uniq.begin(), uniq.end(), score[i],
                                                     std::greater<>()) -
                                    uniq.begin());
  return QO::from_ranks(std::move(carrier), std::move(ranks), prov);
}

}  // namespace

OrFail<QO> QO::from_matrix(CarrierPtr carrier, const std::vector<std::vector<int>>& rows,
                           Provenance prov) {
  const size_t n = static_cast<size_t>(carrier->size());
  if (rows.size() != n)
    throw Error(Errc::InvalidInput, "matrix must have one row per carrier element");
  for (const auto& r : rows)
    if (r.size() != n) throw Error(Errc::InvalidInput, "matrix rows must match the carrier size");
  return ranks_from_relation(
      std::move(carrier), [&rows](ElemIdx i, ElemIdx j) { return rows[i][j] != 0; }, prov);
}

OrFail<QO> QO::from_comparator(CarrierPtr carrier, const std::function<bool(ElemIdx, ElemIdx)>& leq,
                               Provenance prov) {
  return ranks_from_relation(std::move(carrier), leq, prov);
}

QO QO::from_ranks(CarrierPtr carrier, std::vector<int32_t> ranks, Provenance prov) {
  QO qo;
  qo.carrier_ = std::move(carrier);
  // Densify so that ranks are 0..k-1 and relation equality is rank equality.
  std::vector<int32_t> uniq(ranks.begin(), ranks.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  for (auto& r : ranks)
    r = static_cast<int32_t>(std::lower_bound(uniq.begin(), uniq.end(), r) - uniq.begin());
  qo.ranks_ = std::move(ranks);
  qo.num_classes_ = static_cast<int32_t>(uniq.size());
  qo.provenance_ = prov;
  return qo;
}

namespace {

struct AxiomScan {
  CheckResult result;
};

CheckResult merge_name(std::string name, scan::Result r, std::function<Witness(uint64_t)> wit) {
  CheckResult out;
  out.check = std::move(name);
  out.pass = !r.failed;
  out.instances = r.instances;
  out.skips = r.skips;
  if (r.failed) out.witness = wit(r.index);
  return out;
}

CheckResult check_total(const QO& qo, Exec exec) {
  const ElemIdx n = qo.carrier()->size();
  auto r = scan::run(
      static_cast<uint64_t>(n) * n,
      [&](uint64_t i) {
        ElemIdx a = static_cast<ElemIdx>(i / n), b = static_cast<ElemIdx>(i % n);
        return (qo.leq(a, b) || qo.leq(b, a)) ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  return merge_name("TOTAL", r, [&](uint64_t i) {
    return Witness{"total", {static_cast<ElemIdx>(i / n), static_cast<ElemIdx>(i % n)}, ""};
  });
}

CheckResult check_q1(const QO& qo, Exec exec) {
  const ElemIdx n = qo.carrier()->size();
  const ElemIdx zero = qo.carrier()->zero();
  auto r = scan::run(
      static_cast<uint64_t>(n),
      [&](uint64_t i) {
        ElemIdx g = static_cast<ElemIdx>(i);
        return (g != zero && qo.sim(g, zero)) ? scan::Step::Fail : scan::Step::Ok;
      },
      exec);
  return merge_name("Q1", r, [&](uint64_t i) {
    return Witness{"Q1", {static_cast<ElemIdx>(i)}, "g ~ 0 with g != 0"};
  });
}

CheckResult check_q2(const QO& qo, Exec exec) {
  const Carrier& c = *qo.carrier();
  const ElemIdx n = c.size();
  const uint64_t n2 = static_cast<uint64_t>(n) * n;
  auto r = scan::run(
      n2 * n,
      [&](uint64_t i) {
        ElemIdx x = static_cast<ElemIdx>(i / n2);
        ElemIdx y = static_cast<ElemIdx>((i / n) % n);
        ElemIdx z = static_cast<ElemIdx>(i % n);
        if (!qo.leq(x, y) || qo.sim(y, z)) return scan::Step::Ok;
        ElemIdx xz = c.add(x, z), yz = c.add(y, z);
        if (xz == kOutOfWindow || yz == kOutOfWindow) return scan::Step::Skip;
        return qo.leq(xz, yz) ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  return merge_name("Q2", r, [&](uint64_t i) {
    return Witness{"Q2",
                   {static_cast<ElemIdx>(i / n2), static_cast<ElemIdx>((i / n) % n),
                    static_cast<ElemIdx>(i % n)},
                   "x <= y, y !~ z, but x+z > y+z"};
  });
}

CheckResult check_star(const QO& qo, Exec exec) {
  CheckResult zero_part = check_q1(qo, exec);
  if (!zero_part.pass) {
    zero_part.check = "STAR";
    zero_part.witness->tag = "STAR:zero-class";
    return zero_part;
  }
  const Carrier& c = *qo.carrier();
  const ElemIdx n = c.size();
  const uint64_t n2 = static_cast<uint64_t>(n) * n;
  auto r = scan::run(
      n2 * n,
      [&](uint64_t i) {
        ElemIdx g = static_cast<ElemIdx>(i / n2);
        ElemIdx h = static_cast<ElemIdx>((i / n) % n);
        ElemIdx f = static_cast<ElemIdx>(i % n);
        if (!qo.leq(g, h) || qo.sim(h, c.neg(f))) return scan::Step::Ok;
        ElemIdx gf = c.add(g, f), hf = c.add(h, f);
        if (gf == kOutOfWindow || hf == kOutOfWindow) return scan::Step::Skip;
        return qo.leq(gf, hf) ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  auto out = merge_name("STAR", r, [&](uint64_t i) {
    return Witness{"STAR:translation",
                   {static_cast<ElemIdx>(i / n2), static_cast<ElemIdx>((i / n) % n),
                    static_cast<ElemIdx>(i % n)},
                   "g <= h, h !~ -f, but g+f > h+f"};
  });
  out.instances += zero_part.instances;
  out.skips += zero_part.skips;
  return out;
}

// Derived relation C(f,g,h) = not((f-h) <= (g-h)); instances with a
// difference outside the window are skipped.
CheckResult check_c_axioms(const QO& qo, Exec exec) {
  const Carrier& c = *qo.carrier();
  const ElemIdx n = c.size();
  const ElemIdx zero = c.zero();
  const uint64_t n2 = static_cast<uint64_t>(n) * n;
  const uint64_t n3 = n2 * n;

  uint64_t instances = 0, skips = 0;

  // x != y => C(x,y,y), i.e. every nonzero difference sits strictly above 0.
  auto r1 = scan::run(
      n2,
      [&](uint64_t i) {
        ElemIdx x = static_cast<ElemIdx>(i / n), y = static_cast<ElemIdx>(i % n);
        if (x == y) return scan::Step::Ok;
        ElemIdx d = c.sub(x, y);
        if (d == kOutOfWindow) return scan::Step::Skip;
        return qo.leq(d, zero) ? scan::Step::Fail : scan::Step::Ok;
      },
      exec);
  instances += r1.instances;
  skips += r1.skips;
  if (r1.failed) {
    auto out = merge_name("C_AXIOMS", r1, [&](uint64_t i) {
      return Witness{"C:zero-separation",
                     {static_cast<ElemIdx>(i / n), static_cast<ElemIdx>(i % n)},
                     "x != y but not C(x,y,y)"};
    });
    out.instances = instances;
    out.skips = skips;
    return out;
  }

  // C(x,y,z) => C(x,z,y)
  auto r2 = scan::run(
      n3,
      [&](uint64_t i) {
        ElemIdx x = static_cast<ElemIdx>(i / n2);
        ElemIdx y = static_cast<ElemIdx>((i / n) % n);
        ElemIdx z = static_cast<ElemIdx>(i % n);
        ElemIdx dxz = c.sub(x, z), dyz = c.sub(y, z);
        if (dxz == kOutOfWindow || dyz == kOutOfWindow) return scan::Step::Skip;
        if (qo.leq(dxz, dyz)) return scan::Step::Ok;  // premise C(x,y,z) false
        ElemIdx dxy = c.sub(x, y), dzy = c.sub(z, y);
        if (dxy == kOutOfWindow || dzy == kOutOfWindow) return scan::Step::Skip;
        return qo.leq(dxy, dzy) ? scan::Step::Fail : scan::Step::Ok;
      },
      exec);
  instances += r2.instances;
  skips += r2.skips;
  if (r2.failed) {
    auto out = merge_name("C_AXIOMS", r2, [&](uint64_t i) {
      return Witness{"C:swap",
                     {static_cast<ElemIdx>(i / n2), static_cast<ElemIdx>((i / n) % n),
                      static_cast<ElemIdx>(i % n)},
                     "C(x,y,z) but not C(x,z,y)"};
    });
    out.instances = instances;
    out.skips = skips;
    return out;
  }

  // C(x,y,z) => not C(y,x,z)
  auto r3 = scan::run(
      n3,
      [&](uint64_t i) {
        ElemIdx x = static_cast<ElemIdx>(i / n2);
        ElemIdx y = static_cast<ElemIdx>((i / n) % n);
        ElemIdx z = static_cast<ElemIdx>(i % n);
        ElemIdx dxz = c.sub(x, z), dyz = c.sub(y, z);
        if (dxz == kOutOfWindow || dyz == kOutOfWindow) return scan::Step::Skip;
        if (qo.leq(dxz, dyz)) return scan::Step::Ok;
        return qo.leq(dyz, dxz) ? scan::Step::Ok : scan::Step::Fail;
      },
      exec);
  instances += r3.instances;
  skips += r3.skips;
  if (r3.failed) {
    auto out = merge_name("C_AXIOMS", r3, [&](uint64_t i) {
      return Witness{"C:asymmetry",
                     {static_cast<ElemIdx>(i / n2), static_cast<ElemIdx>((i / n) % n),
                      static_cast<ElemIdx>(i % n)},
                     "both C(x,y,z) and C(y,x,z)"};
    });
    out.instances = instances;
    out.skips = skips;
    return out;
  }

  // C(x,y,z) => C(w,y,z) or C(x,w,z), quantified over quadruples. The scan is
  // restructured around z so the per-z difference ranks land in one array;
  // instance set, skip accounting and first-witness semantics match the plain
  // lexicographic (x,y,z,w) scan, which is rerun to locate the witness when a
  // violation is detected.
  auto r4 = [&]() -> scan::Result {
    const int32_t* rank = qo.ranks().data();
    std::vector<uint64_t> z_skips(n, 0);
    std::vector<uint8_t> z_bad(n, 0);

    auto scan_z = [&](ElemIdx z) {
      std::vector<int32_t> rz(n);  // rank of (e - z), or -1 out of window
      for (ElemIdx e = 0; e < n; ++e) {
        ElemIdx d = c.sub(e, z);
        rz[e] = d == kOutOfWindow ? -1 : rank[d];
      }
      uint64_t sk = 0;
      bool bad = false;
      for (ElemIdx x = 0; x < n && !bad; ++x) {
        const int32_t rxz = rz[x];
        for (ElemIdx y = 0; y < n; ++y) {
          const int32_t ryz = rz[y];
          if (rxz < 0 || ryz < 0) {
            sk += static_cast<uint64_t>(n);  // premise unavailable for every w
            continue;
          }
          if (rxz <= ryz) continue;  // premise C(x,y,z) false
          for (ElemIdx w = 0; w < n; ++w) {
            const int32_t rwz = rz[w];
            if (rwz < 0) {
              ++sk;
            } else if (rwz <= ryz && rxz <= rwz) {
              bad = true;
              break;
            }
          }
          if (bad) break;
        }
      }
      z_skips[z] = sk;
      z_bad[z] = bad ? 1 : 0;
    };

#if defined(_OPENMP)
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (ElemIdx z = 0; z < n; ++z) scan_z(z);
    } else {
      for (ElemIdx z = 0; z < n; ++z) scan_z(z);
    }
#else
    for (ElemIdx z = 0; z < n; ++z) scan_z(z);
#endif

    scan::Result res;
    res.instances = n3 * n;
    bool any_bad = false;
    for (ElemIdx z = 0; z < n; ++z) {
      res.skips += z_skips[z];
      if (z_bad[z]) any_bad = true;
    }
    if (!any_bad) return res;
    // A violation exists somewhere: locate the lexicographically first one.
    return scan::run_serial(n3 * n, [&](uint64_t i) {
      ElemIdx x = static_cast<ElemIdx>(i / n3);
      ElemIdx y = static_cast<ElemIdx>((i / n2) % n);
      ElemIdx z = static_cast<ElemIdx>((i / n) % n);
      ElemIdx w = static_cast<ElemIdx>(i % n);
      ElemIdx dxz = c.sub(x, z), dyz = c.sub(y, z);
      if (dxz == kOutOfWindow || dyz == kOutOfWindow) return scan::Step::Skip;
      if (qo.leq(dxz, dyz)) return scan::Step::Ok;
      ElemIdx dwz = c.sub(w, z);
      if (dwz == kOutOfWindow) return scan::Step::Skip;
      return (!qo.leq(dwz, dyz) || !qo.leq(dxz, dwz)) ? scan::Step::Ok : scan::Step::Fail;
    });
  }();
  instances += r4.instances;
  skips += r4.skips;
  auto out = merge_name("C_AXIOMS", r4, [&](uint64_t i) {
    return Witness{"C:branching",
                   {static_cast<ElemIdx>(i / n3), static_cast<ElemIdx>((i / n2) % n),
                    static_cast<ElemIdx>((i / n) % n), static_cast<ElemIdx>(i % n)},
                   "C(x,y,z) but neither C(w,y,z) nor C(x,w,z)"};
  });
  out.instances = instances;
  out.skips = skips;
  return out;
}

}  // namespace

CheckResult check_axiom(const QO& qo, AxiomId axiom, Exec exec) {
  switch (axiom) {
    case AxiomId::TOTAL: return check_total(qo, exec);
    case AxiomId::Q1: return check_q1(qo, exec);
    case AxiomId::Q2: return check_q2(qo, exec);
    case AxiomId::STAR: return check_star(qo, exec);
    case AxiomId::C_AXIOMS: return check_c_axioms(qo, exec);
  }
  throw Error(Errc::InvalidInput, "unknown axiom id");
}

ElementType element_type(const QO& qo, ElemIdx g) {
  const Carrier& c = *qo.carrier();
  if (g == c.zero()) return ElementType::OType;
  return qo.sim(g, c.neg(g)) ? ElementType::VType : ElementType::OType;
}

CheckResult check_convex(const QO& qo, const std::vector<ElemIdx>& S) {
  const ElemIdx n = qo.carrier()->size();
  CheckResult out;
  out.check = "convex";
  out.instances = static_cast<uint64_t>(n);
  if (S.empty()) return out;
  std::vector<char> in(n, 0);
  int32_t lo = INT32_MAX, hi = INT32_MIN;
  for (ElemIdx s : S) {
    in[s] = 1;
    lo = std::min(lo, qo.rank(s));
    hi = std::max(hi, qo.rank(s));
  }
  for (ElemIdx a = 0; a < n; ++a) {
    if (in[a] || qo.rank(a) < lo || qo.rank(a) > hi) continue;
    ElemIdx b = -1, cc = -1;
    for (ElemIdx s = 0; s < n && (b < 0 || cc < 0); ++s) {
      if (!in[s]) continue;
      if (b < 0 && qo.leq(s, a)) b = s;
      if (cc < 0 && qo.leq(a, s)) cc = s;
    }
    out.pass = false;
    out.witness = Witness{"convex", {b, a, cc}, "b <= a <= c with a outside the set"};
    return out;
  }
  return out;
}

CheckResult check_initial_segment(const QO& qo, const std::vector<ElemIdx>& S) {
  const ElemIdx n = qo.carrier()->size();
  CheckResult out;
  out.check = "initial-segment";
  out.instances = static_cast<uint64_t>(n);
  if (S.empty()) return out;
  std::vector<char> in(n, 0);
  int32_t hi = INT32_MIN;
  for (ElemIdx s : S) {
    in[s] = 1;
    hi = std::max(hi, qo.rank(s));
  }
  for (ElemIdx a = 0; a < n; ++a) {
    if (in[a] || qo.rank(a) > hi) continue;
    ElemIdx b = -1;
    for (ElemIdx s = 0; s < n && b < 0; ++s)
      if (in[s] && qo.leq(a, s)) b = s;
    out.pass = false;
    out.witness = Witness{"initial-segment", {a, b}, "a <= b in the set but a outside"};
    return out;
  }
  return out;
}

}  // namespace qov
