// Batch verifier for quasi-ordered abelian groups: axiom checks, censuses,
// quotient induction, lifting, valuation round trips and the Q(t) field demo.
//
// Exit codes: 0 all verdicts pass, 1 a verification verdict failed,
// 2 usage or input error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qov/enumerate.hpp"
#include "qov/field.hpp"
#include "qov/io.hpp"
#include "qov/orders.hpp"
#include "qov/qo.hpp"
#include "qov/quotient_lift.hpp"
#include "qov/valuation.hpp"

namespace {

using namespace qov;
using qov::io::json;

struct Common {
  std::string group;
  std::string json_out;
  bool serial = false;

  Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }
  CarrierPtr carrier() const { return Carrier::make(GroupSpec::parse(group)); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load_file(io::Report& rep, const std::string& key, const std::string& path) {
  std::string content = slurp(path);
  rep.input_file(key, path, content);
  try {
    return json::parse(content);
  } catch (const std::exception& e) {
    throw Error(Errc::ParseError, "bad JSON in " + path + ": " + e.what());
  }
}

int finish(const io::Report& rep, const Common& common) {
  std::cout << rep.text();
  if (!common.json_out.empty()) rep.write(common.json_out);
  return rep.pass ? 0 : 1;
}

void add_common(CLI::App* cmd, Common& common, bool with_group = true) {
  if (with_group)
    cmd->add_option("--group", common.group, "group spec: Z/n, Z/a x Z/b, or Z^d[B=k]")
        ->required();
  cmd->add_option("--json", common.json_out, "write the JSON report to this path");
  cmd->add_flag("--serial", common.serial, "run scans on one thread");
}

// ---- check ----------------------------------------------------------------

int run_check(const Common& common, const std::string& qo_path, const std::string& axioms_csv) {
  io::Report rep;
  rep.command = "check";
  rep.input_value("group", common.group);
  CarrierPtr carrier = common.carrier();
  json spec = load_file(rep, "qo", qo_path);

  // A well-formed file describing a relation that is not a total q.o. is a
  // verification failure, not a usage error.
  QO qo;
  try {
    qo = io::load_qo(spec, carrier);
  } catch (const Error& e) {
    if (e.code != Errc::NotReflexive && e.code != Errc::NotTransitive && e.code != Errc::NotTotal)
      throw;
    json detail;
    detail["error"] = errc_name(e.code);
    detail["message"] = e.what();
    if (e.witness) detail["witness"] = io::witness_json(*e.witness, carrier.get());
    rep.add("q.o. file describes a valid total quasi-order", false, detail);
    return finish(rep, common);
  }
  rep.add("q.o. file describes a valid total quasi-order", true, io::ranks_json(qo));

  std::stringstream ss(axioms_csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    AxiomId ax = axiom_from_name(name);
    rep.add_check(check_axiom(qo, ax, common.exec()), carrier.get());
  }
  return finish(rep, common);
}

// ---- enumerate ------------------------------------------------------------

std::vector<AxiomId> filter_from_name(const std::string& name) {
  if (name == "C") return {AxiomId::C_AXIOMS};
  if (name == "Q1Q2") return {AxiomId::Q1, AxiomId::Q2};
  if (name == "STAR") return {AxiomId::STAR};
  if (name == "NONE" || name == "ALL") return {};
  throw Error(Errc::InvalidInput, "unknown filter (use C, Q1Q2, STAR, or NONE): " + name);
}

int run_enumerate(const Common& common, const std::string& filter) {
  io::Report rep;
  rep.command = "enumerate";
  rep.input_value("group", common.group);
  rep.input_value("filter", filter);
  CarrierPtr carrier = common.carrier();
  SurveyRow row = survey(carrier, filter_from_name(filter), common.exec());

  json detail;
  detail["group"] = row.group;
  detail["class"] = row.filter;
  detail["candidates"] = row.candidates;
  detail["passes"] = row.passes;
  if (!common.json_out.empty()) detail["witnesses_path"] = common.json_out + ".witnesses.json";
  rep.add("census: " + std::to_string(row.passes) + " of " + std::to_string(row.candidates) +
              " candidates pass " + row.filter,
          true, detail);

  std::cout << "group " << row.group << ": " << row.passes << " / " << row.candidates << " pass "
            << row.filter << "\n";
  if (!common.json_out.empty()) {
    json w = json::array();
    for (auto& sw : row.witnesses) {
      json e;
      e["mode"] = sw.mode;
      e["order_index"] = sw.order_index;
      e["ranks"] = sw.ranks;
      e["witness"] = io::witness_json(sw.witness, carrier.get());
      w.push_back(e);
    }
    std::ofstream out(common.json_out + ".witnesses.json");
    out << w.dump(2) << "\n";
  }
  return finish(rep, common);
}

// ---- induce ---------------------------------------------------------------

int run_induce(const Common& common, const std::string& qo_path, const std::string& mask,
               const std::string& gens) {
  io::Report rep;
  rep.command = "induce";
  rep.input_value("group", common.group);
  CarrierPtr carrier = common.carrier();
  QO qo = io::load_qo(load_file(rep, "qo", qo_path), carrier);

  SubgroupDesc H;
  if (!mask.empty()) {
    std::vector<int> coords;
    std::stringstream ss(mask);
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(std::stoi(part));
    H = mask_subgroup(carrier, coords);
    rep.input_value("mask", coords);
  } else if (!gens.empty()) {
    std::vector<ElemIdx> g;
    std::stringstream ss(gens);
    std::string part;
    while (std::getline(ss, part, ';')) g.push_back(io::parse_elem(json(part), *carrier));
    H = subgroup_closure(carrier, g);
    rep.input_value("gens", gens);
  } else {
    throw Error(Errc::InvalidInput, "induce needs --mask or --gens");
  }
  json hj = json::array();
  for (ElemIdx h : H.members) hj.push_back(carrier->name(h));
  rep.input_value("subgroup", hj);

  rep.add_check(check_axiom(qo, AxiomId::STAR, common.exec()), carrier.get());
  CheckResult convex = check_convex(qo, H.members);
  rep.add_check(convex, carrier.get());

  auto induced = induce_on_quotient(qo, H.members);
  if (!induced.ok()) {
    json detail;
    detail["error"] = errc_name(induced.failure().code);
    if (induced.failure().witness)
      detail["witness"] = io::witness_json(*induced.failure().witness, carrier.get());
    rep.add("induction on the quotient", false, detail);
  } else {
    rep.add("induction on the quotient", true, io::ranks_json(induced->qo));
  }
  return finish(rep, common);
}

// ---- lift -----------------------------------------------------------------

int run_lift(const Common& common, const std::string& family_path, bool via_omega) {
  io::Report rep;
  rep.command = "lift";
  rep.input_value("group", common.group);
  rep.input_value("via_omega", via_omega);
  CarrierPtr carrier = common.carrier();
  json fj = load_file(rep, "family", family_path);

  Valuation v = io::load_valuation(fj.at("valuation"), carrier);
  CheckResult vok = check_valuation(v, common.exec());
  rep.add_check(vok, carrier.get());
  if (!vok.pass) return finish(rep, common);

  if (via_omega) {
    const json& members = fj.at("members");
    auto res = lift_order_family(
        v,
        [&](const LevelScaffold& sc) -> OrFail<GroupOrder> {
          if (!members.contains(sc.label))
            return Failure{Errc::MissingFamilyEntry, "missing member for label " + sc.label};
          return io::load_order(members.at(sc.label), sc.qv.quotient);
        },
        common.exec());
    if (!res.ok()) {
      rep.add("order lift", false, json{{"error", res.failure().message}});
      return finish(rep, common);
    }
    for (auto& s : res->checks.steps)
      rep.add(s.name, s.pass, s.witness ? io::witness_json(*s.witness, carrier.get()) : json());
    if (res->checks.pass) rep.add("lifted order", true, io::ranks_json(res->order.qo_view));
    return finish(rep, common);
  }

  QOFamily fam = io::load_family_members(fj.at("members"), v);
  auto lifted = lift_family(fam);
  if (!lifted.ok()) {
    json detail;
    detail["error"] = errc_name(lifted.failure().code);
    detail["message"] = lifted.failure().message;
    rep.add("family lifts to a total q.o.", false, detail);
    return finish(rep, common);
  }
  rep.add("family lifts to a total q.o.", true, io::ranks_json(*lifted));
  rep.add_check(check_v_compatible(v, *lifted, common.exec()), carrier.get());

  // Inducing back must reproduce the members.
  auto back = induce_family(*lifted, v);
  if (!back.ok()) {
    rep.add("lift induces the family back", false, json{{"error", back.failure().message}});
    return finish(rep, common);
  }
  bool same = true;
  for (size_t i = 0; i < fam.levels.size(); ++i)
    same = same && fam.levels[i].member.same_relation(back->levels[i].member);
  rep.add("induced family equals the input family", same);
  return finish(rep, common);
}

// ---- bk-verify ------------------------------------------------------------

int run_bk_verify(const Common& common, const std::string& valuation_path,
                  const std::string& qo_path, bool all_families) {
  io::Report rep;
  rep.command = "bk-verify";
  rep.input_value("group", common.group);
  CarrierPtr carrier = common.carrier();
  Valuation v = io::load_valuation(load_file(rep, "valuation", valuation_path), carrier);
  rep.add_check(check_valuation(v, common.exec()), carrier.get());
  if (!rep.pass) return finish(rep, common);

  if (!qo_path.empty()) {
    QO qo = io::load_qo(load_file(rep, "qo", qo_path), carrier);
    RoundTripReport rt = bk_roundtrip_from_qo(qo, v, common.exec());
    for (auto& s : rt.steps)
      rep.add(s.name, s.pass, s.witness ? io::witness_json(*s.witness, carrier.get()) : json());
  }

  if (all_families || qo_path.empty()) {
    uint64_t families = 0, failures = 0;
    json family_reports = json::array();
    FamilyCensus census = for_each_c_family(v, [&](const QOFamily& fam) {
      ++families;
      RoundTripReport rt = bk_roundtrip_from_family(fam, common.exec());
      if (!rt.pass) ++failures;
      if (families <= 8) {  // echo per-level verdicts for small censuses
        json steps = json::array();
        for (auto& s : rt.steps) steps.push_back(json{{"name", s.name}, {"pass", s.pass}});
        family_reports.push_back(steps);
      }
    });
    json detail;
    detail["family_count"] = families;
    detail["per_level_counts"] = census.per_level;
    if (!family_reports.empty()) detail["family_round_trips"] = family_reports;
    rep.add("all " + std::to_string(families) + " C-q.o. families round-trip", failures == 0,
            detail);

    // Cross-check: the compatible C-q.o.'s on the base, counted directly,
    // must match the family count.
    if (carrier->size() <= 8) {
      uint64_t direct = 0, rt_failures = 0;
      for_each_passing(carrier, {AxiomId::C_AXIOMS}, [&](const QO& qo, uint64_t) {
        if (!check_v_compatible(v, qo, Exec::Serial).pass) return;
        ++direct;
        if (!bk_roundtrip_from_qo(qo, v, Exec::Serial).pass) ++rt_failures;
      });
      rep.add("compatible C-q.o. count (" + std::to_string(direct) +
                  ") equals the family count (" + std::to_string(families) + ")",
              direct == families && rt_failures == 0,
              json{{"compatible_cqos", direct}, {"families", families}});
    }
    std::cout << "families: " << families << "\n";
  }
  return finish(rep, common);
}

// ---- coarsen ---------------------------------------------------------------

int run_coarsen(const Common& common, const std::string& coarse_path,
                const std::string& fine_path) {
  io::Report rep;
  rep.command = "coarsen";
  rep.input_value("group", common.group);
  CarrierPtr carrier = common.carrier();
  Valuation v = io::load_valuation(load_file(rep, "coarse", coarse_path), carrier);
  Valuation w = io::load_valuation(load_file(rep, "fine", fine_path), carrier);
  rep.add_check(check_valuation(v, common.exec()), carrier.get());
  rep.add_check(check_valuation(w, common.exec()), carrier.get());
  if (!rep.pass) return finish(rep, common);

  CheckResult coarse = is_coarsening(v, w, common.exec());
  rep.add_check(coarse, carrier.get());
  if (!coarse.pass) return finish(rep, common);

  auto dec = coarsening_decompose(v, w, common.exec());
  if (!dec.ok()) {
    rep.add("coarsening decomposition", false, json{{"error", dec.failure().message}});
    return finish(rep, common);
  }
  for (auto& s : dec->steps) rep.add(s.name, s.pass);
  json qv = json::array();
  for (auto& lvl : dec->quotient_valuations) {
    json e;
    e["level"] = lvl.label;
    e["quotient"] = lvl.w_gamma.carrier()->label();
    json table;
    for (ElemIdx g = 0; g < lvl.w_gamma.carrier()->size(); ++g)
      table[lvl.w_gamma.carrier()->name(g)] = lvl.w_gamma.value_name(g);
    e["table"] = table;
    qv.push_back(e);
  }
  rep.add("quotient valuations", true, qv);
  return finish(rep, common);
}

// ---- omega ----------------------------------------------------------------

int run_omega(const Common& common, const std::string& qo_path, const std::string& order_path) {
  io::Report rep;
  rep.command = "omega";
  rep.input_value("group", common.group);
  CarrierPtr carrier = common.carrier();

  if (!order_path.empty()) {
    GroupOrder ord = io::load_order(load_file(rep, "order", order_path), carrier);
    rep.add_check(check_cone(carrier, ord.cone.members, common.exec()), carrier.get());
    QO pre = omega_preimage(ord);
    rep.add("omega-preimage built", true, io::ranks_json(pre));
    rep.add_check(check_axiom(pre, AxiomId::C_AXIOMS, common.exec()), carrier.get());
    QOType t = classify(pre, Exec::Serial);
    rep.add("omega-preimage is o-type", t.all_o);
    auto round = omega(pre, common.exec());
    if (!round.ok()) {
      rep.add("omega(preimage) recovers the order", false,
              json{{"error", round.failure().message}});
    } else {
      rep.add("omega(preimage) recovers the order", round->same_order(ord));
    }
    return finish(rep, common);
  }

  QO qo = io::load_qo(load_file(rep, "qo", qo_path), carrier);
  auto ord = omega(qo, common.exec());
  if (!ord.ok()) {
    json detail;
    detail["error"] = errc_name(ord.failure().code);
    detail["message"] = ord.failure().message;
    if (ord.failure().witness)
      detail["witness"] = io::witness_json(*ord.failure().witness, carrier.get());
    rep.add("omega(q.o.)", false, detail);
    return finish(rep, common);
  }
  json cone = json::array();
  for (ElemIdx g = 0; g < carrier->size(); ++g)
    if (ord->cone.members[g]) cone.push_back(carrier->name(g));
  rep.add("omega(q.o.) is a group order", true, json{{"positive_cone", cone}});
  return finish(rep, common);
}

// ---- field-demo -----------------------------------------------------------

int run_field_demo(const Common& common, uint64_t seed, int count,
                   const std::string& corpus_path) {
  io::Report rep;
  rep.command = "field-demo";
  rep.input_value("seed", seed);

  field::ClassicalBKReport bk;
  if (!corpus_path.empty()) {
    json lits = json::parse(slurp(corpus_path));
    rep.input_file("corpus", corpus_path, lits.dump());
    std::vector<field::RatFunc> corpus;
    for (auto& l : lits) corpus.push_back(field::parse_ratfunc(l.get<std::string>()));
    bk = field::classical_bk_on(corpus, seed);
  } else {
    rep.input_value("corpus_size", count);
    bk = field::classical_bk(seed, count);
  }
  rep.input_value("corpus", bk.corpus);  // echoed for reproducibility
  rep.add("q-section axioms hold", field::check_q_section(8).pass);
  for (auto& tag : bk.tags) {
    std::string nm = "tag eta=" + std::string(tag.eta > 0 ? "+1" : "-1");
    json detail;
    detail["oracle_agrees"] = tag.oracle_agrees;
    detail["order_valid"] = tag.order_valid;
    detail["recovered_eta"] = tag.recovered_eta;
    detail["residue_order_standard"] = tag.residue_order_standard;
    if (!tag.detail.empty()) detail["first_failure"] = tag.detail;
    rep.add(nm + " verified",
            tag.oracle_agrees && tag.order_valid && tag.recovered_eta == tag.eta &&
                tag.residue_order_standard,
            detail);
  }
  rep.add("the two orders are distinct (they disagree on t)", bk.tags_distinct);
  rep.add("compatible field order count = 2", bk.count == 2, json{{"count", bk.count}});
  std::cout << "count: " << bk.count << "\n";
  return finish(rep, common);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification workbench for quasi-ordered and valued abelian groups"};
  app.require_subcommand(1);

  Common common;
  std::string qo_path, axioms = "TOTAL,Q1,Q2,STAR,C", filter = "C";
  std::string mask, gens, family_path, valuation_path, order_path, coarse_path, fine_path;
  bool via_omega = false, all_families = false;
  std::string corpus_file;
  uint64_t seed = 1729;
  int corpus = 120;

  auto* check = app.add_subcommand("check", "validate a q.o. file and run axiom checks");
  add_common(check, common);
  check->add_option("--qo", qo_path, "q.o. spec file")->required();
  check->add_option("--axioms", axioms, "comma-separated: TOTAL,Q1,Q2,STAR,C");

  auto* enumerate = app.add_subcommand("enumerate", "census of all total q.o.'s on a small group");
  add_common(enumerate, common);
  enumerate->add_option("--filter", filter, "C, Q1Q2, STAR, or NONE");

  auto* induce = app.add_subcommand("induce", "induce a q.o. on a quotient");
  add_common(induce, common);
  induce->add_option("--qo", qo_path, "q.o. spec file")->required();
  induce->add_option("--mask", mask, "comma-separated coordinates (free-abelian carriers)");
  induce->add_option("--gens", gens, "semicolon-separated generators, e.g. \"(1,0);(0,1)\"");

  auto* lift = app.add_subcommand("lift", "lift a family of quotient q.o.'s");
  add_common(lift, common);
  lift->add_option("--family", family_path, "family file")->required();
  lift->add_flag("--via-omega", via_omega, "members are orders; lift through omega preimages");

  auto* bk = app.add_subcommand("bk-verify", "round-trip families against compatible C-q.o.'s");
  add_common(bk, common);
  bk->add_option("--valuation", valuation_path, "valuation file")->required();
  bk->add_option("--qo", qo_path, "verify one q.o. (FromQO direction)");
  bk->add_flag("--all-families", all_families, "enumerate and verify every C-q.o. family");

  auto* coarsen = app.add_subcommand("coarsen", "coarsening check and decomposition");
  add_common(coarsen, common);
  coarsen->add_option("--coarse", coarse_path, "the coarser valuation v")->required();
  coarsen->add_option("--fine", fine_path, "the finer valuation w")->required();

  auto* om = app.add_subcommand("omega", "positive-cone extraction / order preimages");
  add_common(om, common);
  om->add_option("--qo", qo_path, "o-type C-q.o. to map to an order");
  om->add_option("--order", order_path, "order to pull back through omega");

  auto* fd = app.add_subcommand("field-demo", "the classical correspondence on Q(t)");
  add_common(fd, common, /*with_group=*/false);
  fd->add_option("--seed", seed, "corpus seed");
  fd->add_option("--count", corpus, "corpus size (>= 100 for the full suite)");
  fd->add_option("--corpus-file", corpus_file, "JSON array of rational-function literals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help is 0, every usage error is 2
  }

  try {
    if (check->parsed()) return run_check(common, qo_path, axioms);
    if (enumerate->parsed()) return run_enumerate(common, filter);
    if (induce->parsed()) return run_induce(common, qo_path, mask, gens);
    if (lift->parsed()) return run_lift(common, family_path, via_omega);
    if (bk->parsed()) return run_bk_verify(common, valuation_path, qo_path, all_families);
    if (coarsen->parsed()) return run_coarsen(common, coarse_path, fine_path);
    if (om->parsed()) {
      if (qo_path.empty() == order_path.empty())
        throw Error(Errc::InvalidInput, "omega needs exactly one of --qo or --order");
      return run_omega(common, qo_path, order_path);
    }
    if (fd->parsed()) return run_field_demo(common, seed, corpus, corpus_file);
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
