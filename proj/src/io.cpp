#include "qov/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qov::io {

std::vector<int64_t> parse_coords(const json& j) {
  if (j.is_number_integer()) return {j.get<int64_t>()};
  if (j.is_array()) {
    std::vector<int64_t> out;
    for (auto& v : j) {
      if (!v.is_number_integer()) throw Error(Errc::ParseError, "element coordinates must be integers");
      out.push_back(v.get<int64_t>());
    }
    return out;
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    std::string inner = s;
    if (!s.empty() && s.front() == '(') {
      if (s.back() != ')') throw Error(Errc::ParseError, "unbalanced parentheses in element: " + s);
      inner = s.substr(1, s.size() - 2);
    }
    std::vector<int64_t> out;
    std::stringstream ss(inner);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        out.push_back(std::stoll(part));
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, "bad element coordinate: '" + part + "'");
      }
    }
    if (out.empty()) throw Error(Errc::ParseError, "empty element literal: " + s);
    return out;
  }
  throw Error(Errc::ParseError, "element must be an integer, array, or \"(a,b)\" string");
}

ElemIdx parse_elem(const json& j, const Carrier& carrier) {
  auto coords = parse_coords(j);
  ElemIdx idx = carrier.locate(coords);
  if (idx == kOutOfWindow) {
    std::string lit = j.is_string() ? j.get<std::string>() : j.dump();
    throw Error(Errc::InvalidInput, "element " + lit + " is not in carrier " + carrier.label());
  }
  return idx;
}

Valuation load_valuation(const json& j, CarrierPtr carrier) {
  if (!j.contains("values") || !j["values"].is_array())
    throw Error(Errc::ParseError, "valuation needs a \"values\" label array");
  std::vector<std::string> labels;
  for (auto& v : j["values"]) labels.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  if (!j.contains("table") || !j["table"].is_object())
    throw Error(Errc::ParseError, "valuation needs a \"table\" object");

  std::vector<int32_t> levels(carrier->size(), kInfLevel);
  std::vector<char> seen(carrier->size(), 0);
  for (auto& [key, val] : j["table"].items()) {
    ElemIdx g = parse_elem(json(key), *carrier);
    std::string lab = val.is_string() ? val.get<std::string>() : val.dump();
    if (seen[g]) throw Error(Errc::ParseError, "duplicate table entry for element " + key);
    seen[g] = 1;
    if (lab == "inf") {
      levels[g] = kInfLevel;
      continue;
    }
    auto it = std::find(labels.begin(), labels.end(), lab);
    if (it == labels.end()) throw Error(Errc::UnknownLabel, "value label not declared: " + lab);
    levels[g] = static_cast<int32_t>(it - labels.begin());
  }
  for (ElemIdx g = 0; g < carrier->size(); ++g)
    if (!seen[g] && g != carrier->zero())
      throw Error(Errc::ParseError, "valuation table misses element " + carrier->name(g));
  return Valuation(std::move(carrier), std::move(labels), std::move(levels));
}

QO load_qo(const json& j, CarrierPtr carrier) {
  if (!j.contains("kind")) throw Error(Errc::ParseError, "q.o. spec needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "matrix") {
    if (!j.contains("rows")) throw Error(Errc::ParseError, "matrix q.o. needs \"rows\"");
    std::vector<std::vector<int>> rows;
    for (auto& r : j["rows"]) rows.push_back(r.get<std::vector<int>>());
    auto qo = QO::from_matrix(std::move(carrier), rows);
    if (!qo.ok())
      throw Error(qo.failure().code, "matrix is not a total q.o.: " + qo.failure().message,
                  qo.failure().witness);
    return *qo;
  }
  if (kind == "valuational") {
    Valuation v = load_valuation(j.at("valuation"), carrier);
    CheckResult ok = check_valuation(v, Exec::Serial);
    if (!ok.pass) throw Error(Errc::InvalidInput, "not a valuation: " + ok.witness->tag, ok.witness);
    return valuational_qo(v);
  }
  if (kind == "omega-preimage") {
    GroupOrder ord = load_order(j.at("order"), std::move(carrier));
    return omega_preimage(ord);
  }
  if (kind == "lex") {
    GroupOrder ord = load_order(j, std::move(carrier));
    return ord.qo_view;
  }
  if (kind == "lift") {
    Valuation v = load_valuation(j.at("valuation"), carrier);
    CheckResult ok = check_valuation(v, Exec::Serial);
    if (!ok.pass) throw Error(Errc::InvalidInput, "not a valuation: " + ok.witness->tag, ok.witness);
    QOFamily fam = load_family_members(j.at("family"), v);
    auto lifted = lift_family(fam);
    if (!lifted.ok())
      throw Error(lifted.failure().code, lifted.failure().message, lifted.failure().witness);
    return *lifted;
  }
  throw Error(Errc::ParseError, "unknown q.o. kind: " + kind);
}

GroupOrder load_order(const json& j, CarrierPtr carrier) {
  if (!j.contains("kind")) throw Error(Errc::ParseError, "order spec needs a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "lex") {
    auto signs = j.at("signs").get<std::vector<int>>();
    auto ord = lex_order(carrier, signs);
    if (!ord.ok()) throw Error(ord.failure().code, ord.failure().message, ord.failure().witness);
    return *ord;
  }
  if (kind == "cone") {
    std::vector<char> P(carrier->size(), 0);
    for (auto& e : j.at("elements")) P[parse_elem(e, *carrier)] = 1;
    auto ord = order_from_cone(carrier, std::move(P));
    if (!ord.ok()) throw Error(ord.failure().code, ord.failure().message, ord.failure().witness);
    return *ord;
  }
  throw Error(Errc::ParseError, "unknown order kind: " + kind);
}

QOFamily load_family_members(const json& members, const Valuation& v) {
  if (!members.is_object()) throw Error(Errc::ParseError, "family \"members\" must map labels to q.o. specs");
  QOFamily fam{v, {}};
  for (auto& sc : family_scaffold(v)) {
    if (!members.contains(sc.label))
      throw Error(Errc::MissingFamilyEntry, "family misses the member for label " + sc.label);
    QO member = load_qo(members.at(sc.label), sc.qv.quotient);
    fam.levels.push_back(FamilyLevel{sc, std::move(member)});
  }
  return fam;
}

QOFamily load_family(const json& j, CarrierPtr carrier) {
  Valuation v = load_valuation(j.at("valuation"), std::move(carrier));
  CheckResult ok = check_valuation(v, Exec::Serial);
  if (!ok.pass) throw Error(Errc::InvalidInput, "not a valuation: " + ok.witness->tag, ok.witness);
  return load_family_members(j.at("members"), v);
}

json witness_json(const Witness& w, const Carrier* carrier) {
  json out;
  out["tag"] = w.tag;
  json elems = json::array();
  for (ElemIdx e : w.elems) {
    if (carrier && e >= 0 && e < carrier->size())
      elems.push_back(carrier->name(e));
    else
      elems.push_back(e);
  }
  out["elements"] = elems;
  if (!w.note.empty()) out["note"] = w.note;
  return out;
}

json check_json(const CheckResult& r, const Carrier* carrier) {
  json out;
  out["check"] = r.check;
  out["pass"] = r.pass;
  out["instances"] = r.instances;
  if (r.skips) out["skips"] = r.skips;
  if (r.witness) out["witness"] = witness_json(*r.witness, carrier);
  return out;
}

json ranks_json(const QO& qo) {
  json classes = json::array();
  for (int32_t r = 0; r < qo.num_classes(); ++r) {
    json cls = json::array();
    for (ElemIdx g = 0; g < qo.carrier()->size(); ++g)
      if (qo.rank(g) == r) cls.push_back(qo.carrier()->name(g));
    classes.push_back(cls);
  }
  json out;
  out["carrier"] = qo.carrier()->label();
  out["classes_ascending"] = classes;
  out["provenance"] = provenance_name(qo.provenance());
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(Errc::ParseError, "bad JSON in " + path + ": " + e.what());
  }
  return j;
}

void Report::input_file(const std::string& key, const std::string& path,
                        const std::string& content) {
  inputs[key] = json{{"path", path}, {"fnv1a64", fnv1a64_hex(content)}};
}

void Report::input_value(const std::string& key, const json& value) { inputs[key] = value; }

void Report::add(const std::string& name, bool ok, const json& detail) {
  json v;
  v["name"] = name;
  v["pass"] = ok;
  if (!detail.is_null()) v["detail"] = detail;
  verdicts.push_back(v);
  if (!ok) pass = false;
}

void Report::add_check(const CheckResult& r, const Carrier* carrier) {
  json v;
  v["name"] = r.check;
  v["pass"] = r.pass;
  v["detail"] = check_json(r, carrier);
  verdicts.push_back(v);
  if (!r.pass) pass = false;
}

json Report::to_json() const {
  json out;
  out["command"] = command;
  out["inputs"] = inputs;
  out["verdicts"] = verdicts;
  out["pass"] = pass;
  return out;
}

std::string Report::text() const {
  std::ostringstream os;
  for (auto& v : verdicts) {
    os << (v["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << v["name"].get<std::string>();
    if (v.contains("detail") && v["detail"].contains("witness"))
      os << "  witness: " << v["detail"]["witness"].dump();
    os << "\n";
  }
  os << (pass ? "OVERALL: pass" : "OVERALL: FAIL") << "\n";
  return os.str();
}

void Report::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidInput, "cannot write report: " + path);
  out << to_json().dump(2) << "\n";
}

}  // namespace qov::io
