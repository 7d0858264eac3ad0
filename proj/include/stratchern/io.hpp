// JSON ingestion and artifact emission.
//
// One bit-exact document format for embedded complexes (rational coordinate
// strings, explicit face lists, stratum table), plus emitters for the other
// pipeline artifacts: dual decompositions, audits, radial frames, class
// reports.  All emitters produce sorted keys and no timestamps, so reruns
// with the same configuration are byte-identical.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stratchern/obstruction.hpp"

namespace stratchern {

using Json = nlohmann::json;  // std::map storage: object keys stay sorted

// ---------------------------------------------------------------------------
// Rational <-> JSON (string emission lives in rational.hpp).

inline Rat rat_from_json(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw StratError("bad-config", e.what());
    }
  }
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw StratError("bad-config",
                   "rational entries must be strings or integers");
}

inline RatVec ratvec_from_json(const Json& j) {
  if (!j.is_array())
    throw StratError("bad-config", "coordinate entry must be an array");
  RatVec v;
  for (const auto& c : j) v.push_back(rat_from_json(c));
  return v;
}

inline Json ratvec_to_json(const RatVec& v) {
  Json out = Json::array();
  for (const Rat& c : v) out.push_back(rat_to_string(c));
  return out;
}

// ---------------------------------------------------------------------------
// Embedded complexes.

inline Json complex_to_json(const EmbeddedComplex& k) {
  Json j;
  j["ambient_dim"] = k.ambient_dim;
  if (k.complex_structure) j["complex_structure"] = true;
  Json verts = Json::array();
  for (const RatVec& v : k.vertices) verts.push_back(ratvec_to_json(v));
  j["vertices"] = std::move(verts);
  Json simps = Json::array();
  for (const Simplex& s : k.simplices)
    simps.push_back(Json{{"stratum", s.stratum}, {"verts", s.verts}});
  j["simplices"] = std::move(simps);
  Json strata = Json::array();
  for (const StratumInfo& st : k.strata) {
    Json e{{"id", st.id},
           {"in_closure_of", st.in_closure_of},
           {"real_dim", st.real_dim}};
    if (st.complex_dim) e["complex_dim"] = *st.complex_dim;
    strata.push_back(std::move(e));
  }
  j["strata"] = std::move(strata);
  return j;
}

inline EmbeddedComplex complex_from_json(const Json& j) {
  auto need = [&](const char* key) -> const Json& {
    auto it = j.find(key);
    if (it == j.end())
      throw StratError("bad-config",
                       std::string("complex document lacks '") + key + "'");
    return *it;
  };
  EmbeddedComplex k;
  k.ambient_dim = need("ambient_dim").get<int>();
  if (k.ambient_dim < 1)
    throw StratError("bad-config", "ambient dimension must be positive");
  k.complex_structure = j.value("complex_structure", false);
  for (const auto& v : need("vertices")) {
    RatVec coords = ratvec_from_json(v);
    if (static_cast<int>(coords.size()) != k.ambient_dim)
      throw StratError("bad-config", "vertex dimension mismatch");
    k.add_vertex(std::move(coords));
  }
  for (const auto& s : need("simplices")) {
    if (!s.contains("verts"))
      throw StratError("bad-config", "simplex entry lacks 'verts'");
    std::vector<int> verts = s["verts"].get<std::vector<int>>();
    for (int v : verts)
      if (v < 0 || v >= static_cast<int>(k.vertices.size()))
        throw StratError("bad-config", "simplex vertex index out of range");
    k.add_simplex(std::move(verts), s.value("stratum", 0));
  }
  for (const auto& st : need("strata")) {
    StratumInfo info;
    info.id = st.at("id").get<int>();
    info.real_dim = st.at("real_dim").get<int>();
    if (st.contains("complex_dim"))
      info.complex_dim = st["complex_dim"].get<int>();
    info.in_closure_of = st.value("in_closure_of", std::vector<int>{});
    k.strata.push_back(std::move(info));
  }
  return k;
}

// ---------------------------------------------------------------------------
// Configuration.

inline Json config_to_json(const StratConfig& cfg) {
  return Json{{"beta", rat_to_string(cfg.beta)},
              {"c_ratio", rat_to_string(cfg.c_ratio)},
              {"eps_nbhd", rat_to_string(cfg.eps_nbhd)},
              {"k_chain", rat_to_string(cfg.k_chain)},
              {"k_exp", cfg.k_exp},
              {"lambda", rat_to_string(cfg.lambda)},
              {"samples", cfg.samples},
              {"seed", cfg.seed}};
}

inline StratConfig config_from_json(const Json& j) {
  StratConfig cfg;
  if (j.contains("k_chain")) cfg.k_chain = rat_from_json(j["k_chain"]);
  if (j.contains("beta")) cfg.beta = rat_from_json(j["beta"]);
  if (j.contains("k_exp")) cfg.k_exp = j["k_exp"].get<int>();
  if (j.contains("eps_nbhd")) cfg.eps_nbhd = rat_from_json(j["eps_nbhd"]);
  if (j.contains("lambda")) cfg.lambda = rat_from_json(j["lambda"]);
  if (j.contains("c_ratio")) cfg.c_ratio = rat_from_json(j["c_ratio"]);
  if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  return cfg;
}

// ---------------------------------------------------------------------------
// Dual decomposition.

inline Json dual_to_json(const EmbeddedComplex& k,
                         const DualDecomposition& dd) {
  Json cells = Json::array();
  for (size_t s = 0; s < dd.cells.size(); ++s) {
    const DualCell& c = dd.cells[s];
    Json e;
    e["dual_to"] = static_cast<int>(s);
    e["dimension"] = c.dim;
    e["boundary_cell"] = static_cast<bool>(dd.boundary_simplex[s]);
    Json members = Json::array();
    for (const auto& flag : c.members) members.push_back(flag);
    e["members"] = std::move(members);
    Json bnd = Json::array();
    for (int t : k.cofaces(static_cast<int>(s), 1))
      bnd.push_back(Json{{"cell", t},
                         {"sign", dd.incidence(static_cast<int>(s), t)}});
    e["boundary"] = std::move(bnd);
    cells.push_back(std::move(e));
  }
  return Json{{"cells", std::move(cells)},
              {"region_dim", dd.region_dim}};
}

// ---------------------------------------------------------------------------
// Stratification audits.

inline Json audit_to_json(const StratAudit& a) {
  Json j;
  j["mode"] = a.mode;
  j["samples_requested"] = a.samples_requested;
  j["samples_used"] = a.samples_used;
  j["seed"] = a.seed;
  j["c_est"] = a.c_est;
  j["g_est"] = a.g_est;
  j["implication_checked"] = a.implication_checked;
  j["implication_failures"] = a.implication_failures;
  j["pass"] = a.pass;
  if (!a.note.empty()) j["note"] = a.note;
  Json wit = Json::array();
  for (const AuditWitness& w : a.witnesses)
    wit.push_back(Json{{"kind", w.kind},
                       {"stratum_x", w.stratum_x},
                       {"stratum_y", w.stratum_y},
                       {"value", w.value},
                       {"x", w.x},
                       {"y", w.y}});
  j["witnesses"] = std::move(wit);
  return j;
}

// ---------------------------------------------------------------------------
// Radial frames.

inline Json field_to_json(const RField& rf, const StratConfig& cfg) {
  Json j;
  j["r"] = rf.r;
  j["obstruction_dim"] = rf.obstruction_dim;
  j["seed_attempts"] = rf.seed_attempts;
  j["config"] = config_to_json(cfg);
  Json fields = Json::array();
  for (const PAField& f : rf.fields) {
    Json values;
    for (const auto& [v, vec] : f.values)
      values[std::to_string(v)] = ratvec_to_json(vec);
    fields.push_back(std::move(values));
  }
  j["fields"] = std::move(fields);
  Json sing = Json::array();
  for (const SingularPoint& sp : rf.singular)
    sing.push_back(Json{{"base_case", sp.base_case},
                        {"cell", sp.source_simplex},
                        {"outward_certified", sp.outward_certified},
                        {"stratum", sp.stratum},
                        {"stratum_dim", sp.stratum_dim},
                        {"vertex", sp.fine_vertex}});
  j["singular"] = std::move(sing);
  j["theorem"] = Json{
      {"none_on_region_boundary", rf.theorem.none_on_region_boundary},
      {"pass", rf.theorem.pass()},
      {"zeros_in_lowest_stratum", rf.theorem.zeros_in_lowest_stratum},
      {"zeros_only_at_barycenters", rf.theorem.zeros_only_at_barycenters},
      {"zeros_only_last_field", rf.theorem.zeros_only_last_field}};
  return j;
}

// ---------------------------------------------------------------------------
// Class reports (schema fixed: cells / cocycle_closed / total / dual_cycle /
// class_coords).

inline Json classes_to_json(const ObstructionCocycle& coc,
                            const CocycleCheck& chk, const ClassReport& rep) {
  Json j;
  Json cells = Json::array();
  for (const IndexRecord& rec : coc.records)
    cells.push_back(Json{{"id", rec.cell},
                         {"index", rec.index},
                         {"stratum", rec.stratum}});
  j["cells"] = std::move(cells);
  j["cocycle_closed"] = chk.closed;
  j["total"] = coc.total;
  Json cyc = Json::array();
  for (const auto& [s, c] : rep.cycle)
    cyc.push_back(Json{{"coeff", c}, {"simplex", s}});
  j["dual_cycle"] = std::move(cyc);
  Json coords = Json::array();
  for (size_t i = 0; i < rep.class_coords.size(); ++i)
    coords.push_back(Json{{"coord", rep.class_coords[i].str()},
                          {"order", rep.class_orders[i].str()}});
  j["class_coords"] = std::move(coords);
  return j;
}

inline std::string classes_to_text(const ObstructionCocycle& coc,
                                   const CocycleCheck& chk,
                                   const ClassReport& rep) {
  std::ostringstream os;
  os << "cells (dual to " << coc.zero_source_dim << "-simplices, index != 0 "
     << "or all listed):\n";
  for (const IndexRecord& rec : coc.records)
    os << "  cell " << rec.cell << "  stratum " << rec.stratum << "  index "
       << rec.index << "  [" << rec.method << "]\n";
  os << "cocycle closed: " << (chk.closed ? "yes" : "no") << "\n";
  os << "total: " << coc.total << "\n";
  os << "dual cycle:";
  for (const auto& [s, c] : rep.cycle) os << " " << c << "*[" << s << "]";
  os << "\nclass coordinates:";
  for (size_t i = 0; i < rep.class_coords.size(); ++i) {
    os << " " << rep.class_coords[i].str();
    if (rep.class_orders[i] != 0) os << " (mod " << rep.class_orders[i] << ")";
  }
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Files.

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw StratError("bad-config", "cannot open '" + path + "'");
  return Json::parse(in);  // parse_error carries the byte position
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out)
    throw StratError("bad-config", "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out)
    throw StratError("bad-config", "cannot write '" + path + "'");
  out << text;
}

}  // namespace stratchern
