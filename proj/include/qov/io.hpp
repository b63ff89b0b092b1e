#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "qov/carrier.hpp"
#include "qov/common.hpp"
#include "qov/orders.hpp"
#include "qov/qo.hpp"
#include "qov/quotient_lift.hpp"
#include "qov/valuation.hpp"

namespace qov::io {

using json = nlohmann::json;

// Element literals: "(1,0)" / "3" strings, [1,0] arrays, or bare integers.
std::vector<int64_t> parse_coords(const json& j);
ElemIdx parse_elem(const json& j, const Carrier& carrier);

// {"values": ["0","1"], "table": {"(coords)": "label", ...}}
// The zero element may be omitted (implied infinity).
Valuation load_valuation(const json& j, CarrierPtr carrier);

// {"kind": "matrix"|"valuational"|"omega-preimage"|"lex"|"lift", ...}
QO load_qo(const json& j, CarrierPtr carrier);

// {"kind": "lex", "signs": [...]} or {"kind": "cone", "elements": [...]}
GroupOrder load_order(const json& j, CarrierPtr carrier);

// {"valuation": {...}, "members": {"label": qo-spec, ...}}
QOFamily load_family(const json& j, CarrierPtr carrier);
QOFamily load_family_members(const json& members, const Valuation& v);

json witness_json(const Witness& w, const Carrier* carrier);
json check_json(const CheckResult& r, const Carrier* carrier);
json ranks_json(const QO& qo);

json read_json_file(const std::string& path);

// Machine-readable run report: command echo, input digests, verdict list,
// overall pass flag.
struct Report {
  std::string command;
  json inputs = json::object();
  json verdicts = json::array();
  bool pass = true;

  void input_file(const std::string& key, const std::string& path, const std::string& content);
  void input_value(const std::string& key, const json& value);
  void add(const std::string& name, bool ok, const json& detail = json());
  void add_check(const CheckResult& r, const Carrier* carrier);
  json to_json() const;
  std::string text() const;
  void write(const std::string& path) const;
};

}  // namespace qov::io
