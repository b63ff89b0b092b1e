#include "qov/carrier.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace qov {

namespace {

constexpr int64_t kMaxCarrier = 4096;

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

int64_t parse_int(std::string_view s, std::string_view what) {
  try {
    size_t pos = 0;
    long long v = std::stoll(std::string(s), &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "bad integer in " + std::string(what) + ": '" + std::string(s) + "'");
  }
}

// Windowed coordinate <-> digit: enumerate 0, 1, -1, 2, -2, ... per axis.
int64_t digit_of(int64_t c) { return c > 0 ? 2 * c - 1 : -2 * c; }
int64_t coord_of_digit(int64_t d) { return (d % 2 == 1) ? (d + 1) / 2 : -d / 2; }

struct DisjointSet {
  std::vector<ElemIdx> parent;
  explicit DisjointSet(ElemIdx n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  ElemIdx find(ElemIdx x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(ElemIdx a, ElemIdx b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

GroupSpec GroupSpec::parse(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw Error(Errc::ParseError, "empty group spec");
  GroupSpec spec;
  if (s.rfind("Z^", 0) == 0) {
    auto lb = s.find('[');
    if (lb == std::string::npos || s.back() != ']' || s.compare(lb, 3, "[B=") != 0)
      throw Error(Errc::ParseError, "free spec must look like Z^d[B=k]: '" + s + "'");
    spec.kind = Kind::FreeWindowed;
    spec.rank = static_cast<int>(parse_int(s.substr(2, lb - 2), "rank"));
    spec.window = parse_int(s.substr(lb + 3, s.size() - lb - 4), "window bound");
    if (spec.rank < 1) throw Error(Errc::ParseError, "rank must be >= 1");
    if (spec.window < 1) throw Error(Errc::ParseError, "window bound must be >= 1");
    return spec;
  }
  spec.kind = Kind::Finite;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find('x', pos);
    std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (part.rfind("Z/", 0) != 0)
      throw Error(Errc::ParseError, "finite factor must look like Z/n: '" + part + "'");
    int64_t n = parse_int(part.substr(2), "factor");
    if (n < 2) throw Error(Errc::ParseError, "factor must be >= 2: Z/" + std::to_string(n));
    spec.factors.push_back(n);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (spec.factors.empty()) throw Error(Errc::ParseError, "no factors in group spec");
  return spec;
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  if (kind == Kind::FreeWindowed) {
    os << "Z^" << rank << "[B=" << window << "]";
  } else {
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) os << " x ";
      os << "Z/" << factors[i];
    }
  }
  return os.str();
}

CarrierPtr Carrier::make(const GroupSpec& spec) {
  auto c = std::shared_ptr<Carrier>(new Carrier());
  c->label_ = spec.to_string();
  c->spec_ = spec;
  if (spec.kind == GroupSpec::Kind::Finite) {
    int64_t n = 1;
    for (int64_t f : spec.factors) {
      n *= f;
      if (n > kMaxCarrier)
        throw Error(Errc::CarrierTooLarge,
                    "carrier exceeds " + std::to_string(kMaxCarrier) + " elements: " + c->label_);
    }
    const int d = static_cast<int>(spec.factors.size());
    c->n_ = static_cast<ElemIdx>(n);
    c->coord_dim_ = d;
    c->coords_.resize(n, std::vector<int64_t>(d));
    for (int64_t i = 0; i < n; ++i) {
      int64_t rem = i;
      for (int k = d - 1; k >= 0; --k) {
        c->coords_[i][k] = rem % spec.factors[k];
        rem /= spec.factors[k];
      }
    }
    c->neg_.resize(n);
    c->add_.resize(n * n);
    std::vector<int64_t> tmp(d);
    for (int64_t i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) tmp[k] = (spec.factors[k] - c->coords_[i][k]) % spec.factors[k];
      int64_t idx = 0;
      for (int k = 0; k < d; ++k) idx = idx * spec.factors[k] + tmp[k];
      c->neg_[i] = static_cast<ElemIdx>(idx);
    }
    for (int64_t i = 0; i < n; ++i) {
      for (int64_t j = 0; j < n; ++j) {
        int64_t idx = 0;
        for (int k = 0; k < d; ++k)
          idx = idx * spec.factors[k] + (c->coords_[i][k] + c->coords_[j][k]) % spec.factors[k];
        c->add_[i * n + j] = static_cast<ElemIdx>(idx);
      }
    }
  } else {
    const int d = spec.rank;
    const int64_t b = spec.window;
    const int64_t side = 2 * b + 1;
    int64_t n = 1;
    for (int k = 0; k < d; ++k) {
      n *= side;
      if (n > kMaxCarrier)
        throw Error(Errc::CarrierTooLarge,
                    "carrier exceeds " + std::to_string(kMaxCarrier) + " elements: " + c->label_);
    }
    c->n_ = static_cast<ElemIdx>(n);
    c->coord_dim_ = d;
    c->free_coords_ = true;
    c->coords_.resize(n, std::vector<int64_t>(d));
    for (int64_t i = 0; i < n; ++i) {
      int64_t rem = i;
      for (int k = d - 1; k >= 0; --k) {
        c->coords_[i][k] = coord_of_digit(rem % side);
        rem /= side;
      }
    }
    auto encode = [&](const std::vector<int64_t>& v) -> ElemIdx {
      int64_t idx = 0;
      for (int k = 0; k < d; ++k) {
        if (v[k] < -b || v[k] > b) return kOutOfWindow;
        idx = idx * side + digit_of(v[k]);
      }
      return static_cast<ElemIdx>(idx);
    };
    c->neg_.resize(n);
    c->add_.resize(n * n);
    std::vector<int64_t> tmp(d);
    for (int64_t i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) tmp[k] = -c->coords_[i][k];
      c->neg_[i] = encode(tmp);
    }
    for (int64_t i = 0; i < n; ++i) {
      for (int64_t j = 0; j < n; ++j) {
        for (int k = 0; k < d; ++k) tmp[k] = c->coords_[i][k] + c->coords_[j][k];
        c->add_[i * n + j] = encode(tmp);
      }
    }
  }
  c->finalize();
  return c;
}

void Carrier::finalize() {
  zero_ = 0;
  windowed_ = false;
  for (ElemIdx v : add_)
    if (v == kOutOfWindow) {
      windowed_ = true;
      break;
    }
  index_.clear();
  for (ElemIdx i = 0; i < n_; ++i) index_[coords_[i]] = i;
  // index 0 must be the neutral element
  bool zero_ok = true;
  for (int64_t v : coords_[0])
    if (v != 0) zero_ok = false;
  if (!zero_ok) throw Error(Errc::InvalidInput, "internal: carrier enumeration does not start at 0");
}

std::string Carrier::name(ElemIdx a) const {
  const auto& c = coords_[a];
  std::ostringstream os;
  if (c.size() == 1) {
    os << c[0];
  } else {
    os << "(";
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) os << ",";
      os << c[i];
    }
    os << ")";
  }
  return os.str();
}

ElemIdx Carrier::index_of(const std::vector<int64_t>& coords) const {
  auto it = index_.find(coords);
  return it == index_.end() ? kOutOfWindow : it->second;
}

ElemIdx Carrier::locate(const std::vector<int64_t>& coords) const {
  if (static_cast<int>(coords.size()) != coord_dim_)
    throw Error(Errc::SpecMismatch, "element has " + std::to_string(coords.size()) +
                                        " coordinates, carrier expects " + std::to_string(coord_dim_));
  if (spec_ && spec_->kind == GroupSpec::Kind::Finite) {
    std::vector<int64_t> reduced(coords.size());
    for (size_t k = 0; k < coords.size(); ++k) {
      int64_t m = spec_->factors[k];
      reduced[k] = ((coords[k] % m) + m) % m;
    }
    return index_of(reduced);
  }
  return index_of(coords);
}

std::vector<ElemIdx> Carrier::all_indices() const {
  std::vector<ElemIdx> out(n_);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

SubcarrierView Carrier::subcarrier(std::vector<ElemIdx> members, const std::string& label) const {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty() || members.front() != zero_)
    throw Error(Errc::NotClosed, "subcarrier must contain 0");
  const ElemIdx m = static_cast<ElemIdx>(members.size());
  std::vector<ElemIdx> to_sub(n_, kOutOfWindow);
  for (ElemIdx i = 0; i < m; ++i) to_sub[members[i]] = i;

  auto sc = std::shared_ptr<Carrier>(new Carrier());
  sc->label_ = label;
  sc->n_ = m;
  sc->coord_dim_ = coord_dim_;
  sc->free_coords_ = free_coords_;
  sc->coords_.reserve(m);
  for (ElemIdx i = 0; i < m; ++i) sc->coords_.push_back(coords_[members[i]]);
  sc->neg_.resize(m);
  for (ElemIdx i = 0; i < m; ++i) {
    ElemIdx ng = neg_[members[i]];
    if (ng == kOutOfWindow || to_sub[ng] == kOutOfWindow)
      throw Error(Errc::NotClosed, "subcarrier not closed under negation",
                  Witness{"negation", {members[i]}, ""});
    sc->neg_[i] = to_sub[ng];
  }
  sc->add_.resize(static_cast<size_t>(m) * m);
  for (ElemIdx i = 0; i < m; ++i)
    for (ElemIdx j = 0; j < m; ++j) {
      ElemIdx s = add(members[i], members[j]);
      if (s == kOutOfWindow) {
        sc->add_[static_cast<size_t>(i) * m + j] = kOutOfWindow;
      } else {
        if (to_sub[s] == kOutOfWindow)
          throw Error(Errc::NotClosed, "subcarrier not closed under addition",
                      Witness{"addition", {members[i], members[j]}, ""});
        sc->add_[static_cast<size_t>(i) * m + j] = to_sub[s];
      }
    }
  sc->finalize();
  SubcarrierView view;
  view.sub = sc;
  view.member_parent = std::move(members);
  view.parent_to_sub = std::move(to_sub);
  return view;
}

QuotientView Carrier::quotient_by(const std::vector<ElemIdx>& subgroup, const std::string& label) const {
  // Validate the subgroup shape.
  std::set<ElemIdx> hs(subgroup.begin(), subgroup.end());
  if (!hs.count(zero_)) throw Error(Errc::NotClosed, "subgroup must contain 0");
  for (ElemIdx h : hs) {
    if (!hs.count(neg_[h]))
      throw Error(Errc::NotClosed, "subgroup not closed under negation", Witness{"negation", {h}, ""});
    for (ElemIdx k : hs) {
      ElemIdx s = add(h, k);
      if (s != kOutOfWindow && !hs.count(s))
        throw Error(Errc::NotClosed, "subgroup not closed under addition", Witness{"addition", {h, k}, ""});
    }
  }

  // Cosets: connected components of g ~ g + h over in-window translations.
  DisjointSet ds(n_);
  for (ElemIdx g = 0; g < n_; ++g)
    for (ElemIdx h : hs) {
      ElemIdx s = add(g, h);
      if (s != kOutOfWindow) ds.unite(g, s);
    }
  // Representative of each coset: minimal enumeration index (near-zero first
  // on windowed carriers, so masked-out coordinates project to 0).
  std::vector<ElemIdx> proj(n_);
  std::vector<ElemIdx> reps;
  std::vector<ElemIdx> comp_id(n_, kOutOfWindow);
  for (ElemIdx g = 0; g < n_; ++g) {
    ElemIdx root = ds.find(g);
    if (comp_id[root] == kOutOfWindow) {
      comp_id[root] = static_cast<ElemIdx>(reps.size());
      reps.push_back(root);  // roots are component minima by construction
    }
    proj[g] = comp_id[root];
  }

  const ElemIdx m = static_cast<ElemIdx>(reps.size());
  std::vector<std::vector<ElemIdx>> members(m);
  for (ElemIdx g = 0; g < n_; ++g) members[proj[g]].push_back(g);

  auto qc = std::shared_ptr<Carrier>(new Carrier());
  qc->label_ = label;
  qc->n_ = m;
  qc->coord_dim_ = coord_dim_;
  qc->free_coords_ = free_coords_;
  qc->coords_.reserve(m);
  for (ElemIdx r = 0; r < m; ++r) qc->coords_.push_back(coords_[reps[r]]);
  qc->neg_.resize(m);
  for (ElemIdx r = 0; r < m; ++r) qc->neg_[r] = proj[neg_[reps[r]]];
  qc->add_.resize(static_cast<size_t>(m) * m);
  for (ElemIdx r1 = 0; r1 < m; ++r1)
    for (ElemIdx r2 = 0; r2 < m; ++r2) {
      // The sum coset must be reachable unambiguously inside the window.
      ElemIdx found = kOutOfWindow;
      bool ambiguous = false;
      for (ElemIdx a : members[r1]) {
        for (ElemIdx b : members[r2]) {
          ElemIdx s = add(a, b);
          if (s == kOutOfWindow) continue;
          ElemIdx comp = proj[s];
          if (found == kOutOfWindow) {
            found = comp;
            if (!windowed_) break;
          } else if (comp != found) {
            ambiguous = true;
            break;
          }
        }
        if (ambiguous || (found != kOutOfWindow && !windowed_)) break;
      }
      qc->add_[static_cast<size_t>(r1) * m + r2] = ambiguous ? kOutOfWindow : found;
    }
  qc->finalize();

  QuotientView view;
  view.quotient = qc;
  view.proj = std::move(proj);
  view.rep_parent = std::move(reps);
  return view;
}

SubgroupDesc subgroup_closure(const CarrierPtr& carrier, const std::vector<ElemIdx>& gens) {
  if (carrier->free_coords()) {
    // Only coordinate subgroups: each generator must be a signed unit vector.
    std::set<int> support;
    for (ElemIdx g : gens) {
      const auto& c = carrier->coords(g);
      int nz = -1;
      for (int k = 0; k < carrier->coord_dim(); ++k) {
        if (c[k] == 0) continue;
        if (nz >= 0 || (c[k] != 1 && c[k] != -1))
          throw Error(Errc::InvalidInput,
                      "free-abelian subgroups are coordinate subgroups; generator " +
                          carrier->name(g) + " is not a signed unit vector");
        nz = k;
      }
      if (nz >= 0) support.insert(nz);
    }
    return mask_subgroup(carrier, std::vector<int>(support.begin(), support.end()));
  }
  std::set<ElemIdx> closure{carrier->zero()};
  std::vector<ElemIdx> frontier{carrier->zero()};
  for (ElemIdx g : gens)
    if (closure.insert(g).second) frontier.push_back(g);
  while (!frontier.empty()) {
    ElemIdx x = frontier.back();
    frontier.pop_back();
    std::vector<ElemIdx> next{carrier->neg(x)};
    for (ElemIdx y : closure) next.push_back(carrier->add(x, y));
    for (ElemIdx z : next)
      if (closure.insert(z).second) frontier.push_back(z);
  }
  SubgroupDesc d;
  d.members.assign(closure.begin(), closure.end());
  return d;
}

SubgroupDesc mask_subgroup(const CarrierPtr& carrier, const std::vector<int>& coords) {
  if (!carrier->free_coords())
    throw Error(Errc::InvalidInput, "coordinate masks require a free-abelian carrier");
  std::vector<bool> in_mask(carrier->coord_dim(), false);
  for (int k : coords) {
    if (k < 0 || k >= carrier->coord_dim())
      throw Error(Errc::InvalidInput, "mask coordinate out of range: " + std::to_string(k));
    in_mask[k] = true;
  }
  SubgroupDesc d;
  d.mask.assign(coords.begin(), coords.end());
  std::sort(d.mask.begin(), d.mask.end());
  for (ElemIdx g = 0; g < carrier->size(); ++g) {
    bool ok = true;
    const auto& c = carrier->coords(g);
    for (int k = 0; k < carrier->coord_dim(); ++k)
      if (c[k] != 0 && !in_mask[k]) ok = false;
    if (ok) d.members.push_back(g);
  }
  return d;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParseError: return "parse-error";
    case Errc::InvalidInput: return "invalid-input";
    case Errc::CarrierTooLarge: return "carrier-too-large";
    case Errc::SpecMismatch: return "spec-mismatch";
    case Errc::NotReflexive: return "not-reflexive";
    case Errc::NotTransitive: return "not-transitive";
    case Errc::NotTotal: return "not-total";
    case Errc::NotClosed: return "not-closed";
    case Errc::UnknownLabel: return "unknown-label";
    case Errc::NotValuational: return "not-valuational";
    case Errc::NotConvex: return "not-convex";
    case Errc::ZeroClassFat: return "zero-class-fat";
    case Errc::MissingFamilyEntry: return "missing-family-entry";
    case Errc::PreconditionFailed: return "precondition-failed";
    case Errc::ConeAxiomFailed: return "cone-axiom-failed";
    case Errc::WindowUndecidable: return "window-undecidable";
    case Errc::NotAHomomorphism: return "not-a-homomorphism";
    case Errc::DivisionByZero: return "division-by-zero";
    case Errc::TheoremViolation: return "theorem-violation";
  }
  return "unknown";
}

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace qov
