#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qov/common.hpp"

namespace qov {

// Group specification, parsed from "Z/n", "Z/a x Z/b x ...", or "Z^d[B=k]".
struct GroupSpec {
  enum class Kind { Finite, FreeWindowed };
  Kind kind = Kind::Finite;
  std::vector<int64_t> factors;  // Finite: each >= 2
  int rank = 0;                  // FreeWindowed
  int64_t window = 0;            // FreeWindowed: coordinates range over [-B, B]

  static GroupSpec parse(std::string_view text);
  std::string to_string() const;
};

class Carrier;
using CarrierPtr = std::shared_ptr<const Carrier>;

struct QuotientView {
  CarrierPtr quotient;
  std::vector<ElemIdx> proj;        // parent index -> quotient index
  std::vector<ElemIdx> rep_parent;  // quotient index -> representative's parent index
};

struct SubcarrierView {
  CarrierPtr sub;
  std::vector<ElemIdx> member_parent;  // sub index -> parent index
  std::vector<ElemIdx> parent_to_sub;  // parent index -> sub index, or -1
};

// A finite, table-driven abelian carrier: either a whole group, a window of
// one, or a subgroup/quotient derived from another carrier. Elements are
// handled by enumeration index. Windowed carriers enumerate coordinates
// near zero first (0, 1, -1, 2, -2, ...), so index 0 is always the neutral
// element and witness reports prefer small elements.
class Carrier {
 public:
  static CarrierPtr make(const GroupSpec& spec);

  ElemIdx size() const { return n_; }
  ElemIdx zero() const { return zero_; }
  ElemIdx neg(ElemIdx a) const { return neg_[a]; }
  // Returns kOutOfWindow when the sum is not representable.
  ElemIdx add(ElemIdx a, ElemIdx b) const { return add_[static_cast<size_t>(a) * n_ + b]; }
  ElemIdx sub(ElemIdx a, ElemIdx b) const { return add(a, neg_[b]); }
  bool windowed() const { return windowed_; }
  // True when coordinates are plain integers under coordinate addition
  // (free-abelian roots and carriers derived from them).
  bool free_coords() const { return free_coords_; }
  int coord_dim() const { return coord_dim_; }

  const std::vector<int64_t>& coords(ElemIdx a) const { return coords_[a]; }
  std::string name(ElemIdx a) const;
  const std::string& label() const { return label_; }
  ElemIdx index_of(const std::vector<int64_t>& coords) const;  // -1 if absent
  // Like index_of, but reduces coordinates modulo the factors on finite root
  // carriers (so "-1" or "5" address elements of Z/4).
  ElemIdx locate(const std::vector<int64_t>& coords) const;
  const std::optional<GroupSpec>& spec() const { return spec_; }

  // Derived carriers. `members` must contain zero, be closed under negation,
  // and closed under in-window addition; violations throw Errc::NotClosed.
  SubcarrierView subcarrier(std::vector<ElemIdx> members, const std::string& label) const;
  QuotientView quotient_by(const std::vector<ElemIdx>& subgroup, const std::string& label) const;

  std::vector<ElemIdx> all_indices() const;

 private:
  Carrier() = default;
  void finalize();

  std::string label_;
  std::optional<GroupSpec> spec_;  // root carriers only
  ElemIdx n_ = 0;
  ElemIdx zero_ = 0;
  bool windowed_ = false;
  bool free_coords_ = false;
  int coord_dim_ = 0;
  std::vector<std::vector<int64_t>> coords_;
  std::vector<ElemIdx> neg_;
  std::vector<ElemIdx> add_;
  std::map<std::vector<int64_t>, ElemIdx> index_;
};

// Subgroup description: a realized member set, plus the coordinate mask for
// free-abelian carriers (the only subgroup shape supported there).
struct SubgroupDesc {
  std::vector<ElemIdx> members;     // sorted parent indices
  std::vector<int> mask;            // free-abelian: support coordinates (sorted)
};

// Smallest subset containing the generators, zero, closed under + and -.
// Free-abelian carriers only admit coordinate subgroups: every generator must
// be a signed unit vector.
SubgroupDesc subgroup_closure(const CarrierPtr& carrier, const std::vector<ElemIdx>& gens);

// Subgroup of elements supported on the given coordinates.
SubgroupDesc mask_subgroup(const CarrierPtr& carrier, const std::vector<int>& coords);

}  // namespace qov
