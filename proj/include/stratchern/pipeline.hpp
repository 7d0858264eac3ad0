// Stage orchestration: refine, dualize, build the radial frame, assemble
// and verify the cocycle, and report classes, writing one JSON artifact per
// stage plus a reproducibility report.
#pragma once

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "stratchern/io.hpp"

namespace stratchern {

struct PipelineConfig {
  StratConfig strat;
  int r = 1;
  int refine = 0;
  std::vector<int> x_strata;    // restrict to these strata (closure); empty =
                                // the whole region (intrinsic run)
  std::string out_prefix;       // artifact path prefix; empty = no files
  std::string format = "json";  // classes rendering: json | text
};

inline void check_pipeline_config(const PipelineConfig& cfg) {
  check_config(cfg.strat);
  if (cfg.r < 1) throw StratError("bad-config", "r must be >= 1");
  if (cfg.refine < 0)
    throw StratError("bad-config", "refinement level must be >= 0");
  if (cfg.format != "json" && cfg.format != "text")
    throw StratError("bad-config", "format must be json or text");
}

// Subcomplex spanned by the closures of the named strata.
inline EmbeddedComplex restrict_to_strata(const EmbeddedComplex& k,
                                          const std::vector<int>& ids) {
  std::set<int> keep;
  for (int id : ids) {
    if (stratum_info(k, id) == nullptr)
      throw StratError("bad-config",
                       "unknown stratum id " + std::to_string(id));
    for (int c : closure_strata(k, id)) keep.insert(c);
  }
  EmbeddedComplex out;
  out.ambient_dim = k.ambient_dim;
  out.complex_structure = k.complex_structure;
  std::vector<int> vmap(k.vertices.size(), -1);
  for (const Simplex& s : k.simplices) {
    if (!keep.count(s.stratum)) continue;
    std::vector<int> verts;
    for (int v : s.verts) {
      if (vmap[v] < 0) vmap[v] = out.add_vertex(k.vertices[v]);
      verts.push_back(vmap[v]);
    }
    out.add_simplex(std::move(verts), s.stratum);
  }
  for (const StratumInfo& st : k.strata) {
    if (!keep.count(st.id)) continue;
    StratumInfo copy = st;
    std::vector<int> up;
    for (int u : copy.in_closure_of)
      if (keep.count(u)) up.push_back(u);
    copy.in_closure_of = std::move(up);
    out.strata.push_back(std::move(copy));
  }
  if (out.simplices.empty())
    throw StratError("bad-config", "stratum restriction left no simplices");
  return out;
}

struct StageRecord {
  std::string name;
  double ms = 0;
  bool ok = false;
  std::string error;
};

struct RunReport {
  bool ok = false;
  std::vector<StageRecord> stages;
  std::vector<std::string> manifest;  // files written
  Json config_echo;                   // full reproducibility record
};

struct PipelineResult {
  RunReport report;
  EmbeddedComplex complex_ready;  // after restriction + refinement
  DualDecomposition dual;
  RField field;
  ObstructionCocycle cocycle;
  CocycleCheck check;
  ClassReport classes;
};

inline Json report_to_json(const RunReport& rep) {
  Json stages = Json::array();
  for (const StageRecord& st : rep.stages)
    stages.push_back(Json{{"error", st.error},
                          {"ms", st.ms},
                          {"name", st.name},
                          {"ok", st.ok}});
  return Json{{"config", rep.config_echo},
              {"manifest", rep.manifest},
              {"ok", rep.ok},
              {"stages", std::move(stages)}};
}

// Runs every stage on the given complex.  A stage failure records the stage
// name and stops; the caller decides the exit path from report.ok plus the
// recorded error.  Artifacts go to out_prefix + stage name when a prefix is
// configured.
inline PipelineResult run_pipeline(const EmbeddedComplex& input,
                                   const PipelineConfig& cfg) {
  check_pipeline_config(cfg);
  PipelineResult res;
  res.report.config_echo = Json{{"format", cfg.format},
                                {"r", cfg.r},
                                {"refine", cfg.refine},
                                {"strat", config_to_json(cfg.strat)},
                                {"x_strata", cfg.x_strata}};
  auto stage = [&](const std::string& name, auto&& body) {
    if (!res.report.stages.empty() && !res.report.stages.back().ok)
      return;  // earlier stage failed
    StageRecord rec;
    rec.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      body();
      rec.ok = true;
    } catch (const StratError& e) {
      rec.error = e.code() + ": " + e.what();
    }
    rec.ms = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - t0)
                 .count();
    res.report.stages.push_back(std::move(rec));
  };
  auto emit = [&](const std::string& name, const Json& j) {
    if (cfg.out_prefix.empty()) return;
    std::string path = cfg.out_prefix + name;
    save_json(path, j);
    res.report.manifest.push_back(path);
  };

  stage("prepare", [&] {
    res.complex_ready =
        cfg.x_strata.empty() ? input : restrict_to_strata(input, cfg.x_strata);
    for (int i = 0; i < cfg.refine; ++i)
      res.complex_ready = barycentric_subdivide(res.complex_ready);
    ValidationReport vr = validate(res.complex_ready);
    if (!vr.ok)
      throw StratError("bad-config",
                       "input validation failed: " + vr.issues[0].kind + " (" +
                           vr.issues[0].detail + ")");
    ValidationReport sc = validate_compatibility(res.complex_ready);
    if (!sc.ok)
      throw StratError("bad-config", "stratum table inconsistent: " +
                                         sc.issues[0].kind + " (" +
                                         sc.issues[0].detail + ")");
    emit("complex.json", complex_to_json(res.complex_ready));
  });
  stage("dualize", [&] {
    res.dual = build_dual(res.complex_ready);
    if (!res.dual.ok)
      throw StratError("bad-config", "dual decomposition: " + res.dual.error);
    emit("dual.json", dual_to_json(res.complex_ready, res.dual));
  });
  stage("radial", [&] {
    res.field = radial_frame(res.complex_ready, res.dual, cfg.strat, cfg.r);
    Json j = field_to_json(res.field, cfg.strat);
    j["refine"] = cfg.refine;
    emit("field.json", j);
  });
  stage("classes", [&] {
    res.cocycle = assemble_cocycle(res.complex_ready, res.dual, res.field,
                                   cfg.strat.seed);
    res.check = verify_cocycle(res.complex_ready, res.dual, res.cocycle);
    if (!res.check.closed)
      throw StratError("index-placement",
                       "cocycle coboundary nonzero at the cell dual to "
                       "simplex " +
                           std::to_string(res.check.witness_cell));
    res.classes =
        dual_homology_cycle(res.complex_ready, res.dual, res.cocycle);
    emit("classes.json", classes_to_json(res.cocycle, res.check, res.classes));
  });

  res.report.ok = !res.report.stages.empty();
  for (const StageRecord& st : res.report.stages)
    if (!st.ok) res.report.ok = false;
  if (!cfg.out_prefix.empty()) {
    std::string path = cfg.out_prefix + "report.json";
    res.report.manifest.push_back(path);
    save_json(path, report_to_json(res.report));
  }
  return res;
}

}  // namespace stratchern
