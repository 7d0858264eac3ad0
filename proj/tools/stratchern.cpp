// Command-line entry point: ingestion, pipeline orchestration, reports,
// and SVG emission for 2-dimensional examples.
//
// Exit codes: 0 success, 1 validation/verification failure, 2 I/O or parse
// failure, 3 numerical degeneracy unresolved.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stratchern/pipeline.hpp"
#include "stratchern/svg.hpp"

namespace {

using namespace stratchern;

int exit_code_for(const StratError& e) {
  const std::string& c = e.code();
  if (c == "sampling-degenerate" || c == "degenerate-direction" ||
      c == "needs-refinement")
    return 3;
  if (c == "bad-config") return 2;
  return 1;
}

struct CommonArgs {
  std::string input;       // positional or --in
  std::string in_flag;
  std::string config_path;
  std::string out;
  int refine = 0;
  int r = 1;
  bool r_given = false;
  bool seed_given = false;
  uint64_t seed = 1;
  int samples = 0;
  std::vector<int> x_strata;

  std::string input_path() const {
    if (!in_flag.empty()) return in_flag;
    if (!input.empty()) return input;
    throw StratError("bad-config", "no input complex given");
  }

  StratConfig strat_config() const {
    StratConfig cfg;
    if (!config_path.empty()) cfg = config_from_json(load_json(config_path));
    if (seed_given) cfg.seed = seed;
    if (samples > 0) cfg.samples = samples;
    return cfg;
  }

  EmbeddedComplex load_complex() const {
    EmbeddedComplex k = complex_from_json(load_json(input_path()));
    EmbeddedComplex out =
        x_strata.empty() ? std::move(k) : restrict_to_strata(k, x_strata);
    for (int i = 0; i < refine; ++i) out = barycentric_subdivide(out);
    return out;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_field_flags) {
  cmd->add_option("input", args.input, "complex JSON document");
  cmd->add_option("--in", args.in_flag, "complex JSON document");
  cmd->add_option("--config", args.config_path, "configuration JSON");
  cmd->add_option("-o,--out", args.out, "output path");
  cmd->add_option("--refine", args.refine, "barycentric refinement level")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", args.seed, "random substream seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--x-strata", args.x_strata,
                  "strata ids spanning the embedded subcomplex X (default: "
                  "all strata)");
  if (with_field_flags) {
    cmd->add_option("--r", args.r, "frame rank r")
        ->check(CLI::PositiveNumber)
        ->each([&args](const std::string&) { args.r_given = true; });
  }
}

int print_validation(const ValidationReport& a, const ValidationReport& b) {
  for (const auto& rep : {a, b})
    for (const ValidationIssue& issue : rep.issues)
      std::printf("violation [%s] %s\n", issue.kind.c_str(),
                  issue.detail.c_str());
  if (a.ok && b.ok) {
    std::printf("ok\n");
    return 0;
  }
  return 1;
}

// Recompute the radial frame a stored field artifact describes, verifying
// exact agreement with the stored values.
RField field_from_artifact(const EmbeddedComplex& input, const Json& artifact,
                           EmbeddedComplex& ready, DualDecomposition& dd,
                           StratConfig& cfg, int& r) {
  cfg = config_from_json(artifact.at("config"));
  r = artifact.at("r").get<int>();
  int refine = artifact.value("refine", 0);
  ready = input;
  for (int i = 0; i < refine; ++i) ready = barycentric_subdivide(ready);
  dd = build_dual(ready);
  if (!dd.ok) throw StratError("bad-config", dd.error);
  RField rf = radial_frame(ready, dd, cfg, r);
  const Json& stored = artifact.at("fields");
  if (stored.size() != rf.fields.size())
    throw StratError("bad-config", "field artifact component count differs");
  for (size_t c = 0; c < rf.fields.size(); ++c) {
    const Json& values = stored[c];
    if (values.size() != rf.fields[c].values.size())
      throw StratError("bad-config",
                       "field artifact does not match a deterministic "
                       "recomputation (value count)");
    for (const auto& [v, vec] : rf.fields[c].values) {
      auto it = values.find(std::to_string(v));
      if (it == values.end() || ratvec_from_json(*it) != vec)
        throw StratError("bad-config",
                         "field artifact does not match a deterministic "
                         "recomputation at vertex " +
                             std::to_string(v));
    }
  }
  return rf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Characteristic classes of embedded stratified simplicial complexes"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string mode = "lipschitz";
  std::string field_path;
  std::string format = "json";
  bool svg_dual = false, svg_field = false, svg_classes = false;

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a complex document");
  add_common(validate_cmd, args, false);

  CLI::App* subdivide_cmd =
      app.add_subcommand("subdivide", "barycentric refinement");
  add_common(subdivide_cmd, args, false);

  CLI::App* dualize_cmd =
      app.add_subcommand("dualize", "dual cell decomposition");
  add_common(dualize_cmd, args, false);

  CLI::App* check_cmd =
      app.add_subcommand("check-strat", "stratification audits");
  add_common(check_cmd, args, false);
  check_cmd->add_option("--mode", mode,
                        "lipschitz | kuo-verdier | whitney-a | whitney-b");
  check_cmd->add_option("--samples", args.samples, "sample budget")
      ->check(CLI::PositiveNumber);

  CLI::App* radial_cmd =
      app.add_subcommand("radial", "construct the radial frame");
  add_common(radial_cmd, args, true);

  CLI::App* classes_cmd =
      app.add_subcommand("classes", "indices, cocycle, and class report");
  add_common(classes_cmd, args, true);
  classes_cmd->add_option("--field", field_path, "field artifact JSON");
  classes_cmd->add_option("--format", format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* pipeline_cmd =
      app.add_subcommand("pipeline", "all stages with artifacts");
  add_common(pipeline_cmd, args, true);
  pipeline_cmd->add_option("--format", format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* svg_cmd = app.add_subcommand("svg", "render a 2D example");
  add_common(svg_cmd, args, true);
  svg_cmd->add_flag("--dual", svg_dual, "draw dual cells");
  svg_cmd->add_flag("--arrows", svg_field, "draw the radial field");
  svg_cmd->add_flag("--indices", svg_classes, "label singular points");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      EmbeddedComplex k = args.load_complex();
      return print_validation(validate(k), validate_compatibility(k));
    }

    if (subdivide_cmd->parsed()) {
      EmbeddedComplex k = args.load_complex();
      if (args.refine == 0) k = barycentric_subdivide(k);  // default: one
      Json j = complex_to_json(k);
      if (args.out.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(args.out, j);
      return 0;
    }

    if (dualize_cmd->parsed()) {
      EmbeddedComplex k = args.load_complex();
      DualDecomposition dd = build_dual(k);
      if (!dd.ok) {
        std::fprintf(stderr, "dualize failed: %s\n", dd.error.c_str());
        return 1;
      }
      Json j = dual_to_json(k, dd);
      if (args.out.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(args.out, j);
      return 0;
    }

    if (check_cmd->parsed()) {
      EmbeddedComplex k = args.load_complex();
      StratConfig cfg = args.strat_config();
      StratAudit audit;
      if (mode == "lipschitz")
        audit = audit_lipschitz(k, cfg);
      else if (mode == "kuo-verdier")
        audit = audit_kuo_verdier(k, cfg);
      else if (mode == "whitney-a")
        audit = audit_whitney(k, cfg, 'a');
      else if (mode == "whitney-b")
        audit = audit_whitney(k, cfg, 'b');
      else
        throw StratError("bad-config", "unknown audit mode '" + mode + "'");
      Json j = audit_to_json(audit);
      if (args.out.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(args.out, j);
      return audit.pass ? 0 : 1;
    }

    if (radial_cmd->parsed()) {
      EmbeddedComplex k = args.load_complex();
      DualDecomposition dd = build_dual(k);
      if (!dd.ok) {
        std::fprintf(stderr, "dualize failed: %s\n", dd.error.c_str());
        return 1;
      }
      StratConfig cfg = args.strat_config();
      RField rf = radial_frame(k, dd, cfg, args.r);
      Json j = field_to_json(rf, cfg);
      j["refine"] = args.refine;
      if (args.out.empty())
        std::cout << j.dump(2) << "\n";
      else
        save_json(args.out, j);
      return rf.theorem.pass() ? 0 : 1;
    }

    if (classes_cmd->parsed()) {
      EmbeddedComplex input = complex_from_json(load_json(args.input_path()));
      if (!args.x_strata.empty())
        input = restrict_to_strata(input, args.x_strata);
      EmbeddedComplex ready;
      DualDecomposition dd;
      StratConfig cfg;
      RField rf;
      int r = args.r;
      if (!field_path.empty()) {
        rf = field_from_artifact(input, load_json(field_path), ready, dd, cfg,
                                 r);
        if (args.r_given && r != args.r)
          throw StratError("bad-config",
                           "--r disagrees with the field artifact");
      } else {
        ready = input;
        for (int i = 0; i < args.refine; ++i)
          ready = barycentric_subdivide(ready);
        dd = build_dual(ready);
        if (!dd.ok) throw StratError("bad-config", dd.error);
        cfg = args.strat_config();
        rf = radial_frame(ready, dd, cfg, r);
      }
      ObstructionCocycle coc = assemble_cocycle(ready, dd, rf, cfg.seed);
      CocycleCheck chk = verify_cocycle(ready, dd, coc);
      ClassReport rep = dual_homology_cycle(ready, dd, coc);
      if (format == "text") {
        std::string text = classes_to_text(coc, chk, rep);
        if (args.out.empty())
          std::cout << text;
        else
          save_text(args.out, text);
      } else {
        Json j = classes_to_json(coc, chk, rep);
        if (args.out.empty())
          std::cout << j.dump(2) << "\n";
        else
          save_json(args.out, j);
      }
      return chk.closed ? 0 : 1;
    }

    if (pipeline_cmd->parsed()) {
      EmbeddedComplex input = complex_from_json(load_json(args.input_path()));
      PipelineConfig pcfg;
      pcfg.strat = args.strat_config();
      pcfg.r = args.r;
      pcfg.refine = args.refine;
      pcfg.x_strata = args.x_strata;
      pcfg.format = format;
      pcfg.out_prefix = args.out;
      PipelineResult res = run_pipeline(input, pcfg);
      for (const StageRecord& st : res.report.stages)
        std::printf("stage %-8s %s (%.1f ms)%s%s\n", st.name.c_str(),
                    st.ok ? "ok" : "FAILED", st.ms, st.ok ? "" : ": ",
                    st.error.c_str());
      if (!res.report.ok) {
        for (const StageRecord& st : res.report.stages)
          if (!st.ok) {
            if (st.error.rfind("degenerate-direction", 0) == 0 ||
                st.error.rfind("sampling-degenerate", 0) == 0 ||
                st.error.rfind("needs-refinement", 0) == 0)
              return 3;
            return 1;
          }
      }
      if (format == "text")
        std::cout << classes_to_text(res.cocycle, res.check, res.classes);
      else if (args.out.empty())
        std::cout << classes_to_json(res.cocycle, res.check, res.classes)
                         .dump(2)
                  << "\n";
      return 0;
    }

    if (svg_cmd->parsed()) {
      EmbeddedComplex k = args.load_complex();
      DualDecomposition dd;
      SvgOptions opt;
      opt.show_dual = svg_dual;
      RField rf;
      ObstructionCocycle coc;
      if (svg_dual || svg_field || svg_classes) {
        dd = build_dual(k);
        if (!dd.ok) {
          std::fprintf(stderr, "dualize failed: %s\n", dd.error.c_str());
          return 1;
        }
      }
      if (svg_field || svg_classes) {
        StratConfig cfg = args.strat_config();
        rf = radial_frame(k, dd, cfg, args.r);
        if (svg_field) opt.field = &rf;
        if (svg_classes) {
          coc = assemble_cocycle(k, dd, rf, cfg.seed);
          opt.cocycle = &coc;
        }
      }
      std::string svg =
          render_svg(k, (svg_dual || svg_classes) ? &dd : nullptr, opt);
      if (args.out.empty())
        std::cout << svg;
      else
        save_text(args.out, svg);
      return 0;
    }
  } catch (const Json::parse_error& e) {
    std::fprintf(stderr, "parse failure: %s\n", e.what());
    return 2;
  } catch (const StratError& e) {
    std::fprintf(stderr, "error [%s] %s\n", e.code().c_str(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
