// armpose: command-line front end for the pose-estimation pipeline.
//
// Exit codes: 0 ok, 1 I/O or parse error, 2 unsupported design,
// 3 verification failure, 4 joint-limit violation, 5 shape mismatch.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "armpose/config.hpp"
#include "armpose/error.hpp"
#include "armpose/experiment.hpp"
#include "armpose/io.hpp"
#include "armpose/joint_design.hpp"
#include "armpose/kinematics.hpp"
#include "armpose/network.hpp"
#include "armpose/orthogonal_array.hpp"

namespace fs = std::filesystem;
using namespace armpose;

namespace {

enum Exit : int { kOk = 0, kIo = 1, kUnsupported = 2, kVerifyFailed = 3, kLimit = 4, kShape = 5 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedDesign: return kUnsupported;
    case ErrorKind::LimitViolation: return kLimit;
    case ErrorKind::ShapeMismatch:
    case ErrorKind::DimensionMismatch: return kShape;
    default: return kIo;
  }
}

CliConfig config_or_default(const std::string& path, bool paper) {
  CliConfig c = path.empty() ? CliConfig{} : load_config(path);
  if (paper) {
    const auto base = c.train;
    c.train = TrainConfig::paper();
    c.train.seed = base.seed;
    c.train.conv_activation = base.conv_activation;
    c.train.target_margin = base.target_margin;
  }
  return c;
}

// ---- oa ---------------------------------------------------------------------

struct OaArgs {
  int runs = 144, factors = 7, levels = 12, strength = 2;
  std::string out, file;
  int verify_levels = 0;
};

int cmd_oa_generate(const OaArgs& a) {
  const auto oa = construct_oa(DesignSpec::make(a.runs, a.factors, a.levels, a.strength));
  const auto report = verify_strength(oa, a.strength);
  if (!report.pass) {
    std::cerr << "constructed array failed verification: " << report.describe() << "\n";
    return kVerifyFailed;
  }
  write_file(a.out, oa_to_csv(oa));
  std::cout << "wrote OA(" << a.runs << "," << a.factors << "," << a.levels << "," << a.strength << ") to "
            << a.out << "\n";
  return kOk;
}

int cmd_oa_verify(const OaArgs& a) {
  const auto oa = oa_from_csv(read_file(a.file), a.verify_levels);
  const auto report = verify_strength(oa, a.strength);
  std::cout << report.describe() << "\n";
  return report.pass ? kOk : kVerifyFailed;
}

std::string format_step(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// ---- dataset ----------------------------------------------------------------

struct DatasetArgs {
  std::string design, out, config, id;
  int random = 0, validation = 0;
  std::uint64_t seed = 0;
  std::optional<double> step, offset;
};

int cmd_dataset(const DatasetArgs& a) {
  const auto cfg = config_or_default(a.config, false);
  const auto model = resolve_robot(cfg);
  const auto scene = resolve_scene(cfg, model);
  const int k = static_cast<int>(model.joint_count());

  JointDesign design;
  if (!a.design.empty()) {
    const auto text = read_file(a.design);
    if (text.rfind("f1", 0) == 0) {
      const auto oa = oa_from_csv(text);
      design = map_to_joint_angles(oa, a.step.value_or(cfg.design_step), a.offset.value_or(cfg.design_offset));
    } else {
      design = design_from_csv(text, cfg.joint_lower, cfg.joint_upper, Provenance::Orthogonal);
    }
  } else if (a.random > 0) {
    design = random_design(a.random, k, cfg.joint_lower, cfg.joint_upper, a.seed, Provenance::Random);
  } else {
    design = random_design(a.validation, k, cfg.joint_lower, cfg.joint_upper, a.seed, Provenance::Validation);
  }

  const auto m = generate_dataset(design, model, cfg.camera, scene, a.out, a.seed, a.id);
  std::cout << "wrote " << m.samples.size() << " " << to_string(m.provenance) << " samples ("
            << m.width << "x" << m.height << " RGBD) to " << a.out << "\n";
  if (m.provenance == Provenance::Orthogonal && cfg.design_step > 0) {
    const double steps = std::round((cfg.joint_upper - cfg.joint_lower) / cfg.design_step);
    std::cout << "exhaustive grid at " << format_step(cfg.design_step) << " deg steps: " << steps << "^" << k
              << " = " << static_cast<long long>(std::pow(steps, k)) << " poses\n";
  }
  return kOk;
}

// ---- train / eval / compare -------------------------------------------------

struct TrainArgs {
  std::string dataset, config, out, log;
  bool paper = false;
};

Dataset open_dataset(const std::string& dir, const TargetScaler& scaler) {
  return load_dataset(load_manifest(dir), dir, scaler);
}

int cmd_train(const TrainArgs& a) {
  const auto cfg = config_or_default(a.config, a.paper);
  const auto data = open_dataset(a.dataset, cfg.train.scaler());
  const auto spec = network_for(cfg.train, static_cast<int>(data.images.dim(1)), static_cast<int>(data.images.dim(2)),
                                static_cast<int>(data.targets.dim(1)));
  const auto result = train(data, spec, cfg.train);
  save_model(spec, result.params, a.out);
  if (!a.log.empty()) write_file(a.log, loss_csv(result.log));
  std::printf("trained %zu epochs on %zu samples: initial loss %.6g, final loss %.6g (%.1f s)\n",
              result.log.records.size(), data.size(), result.log.initial_loss, result.log.final_loss,
              result.log.wall_seconds);
  std::cout << "model " << model_id(spec, result.params) << " written to " << a.out << "\n";
  return kOk;
}

struct EvalArgs {
  std::string model, dataset, report, config;
};

int cmd_eval(const EvalArgs& a) {
  const auto cfg = config_or_default(a.config, false);
  const auto scaler = cfg.train.scaler();
  const auto loaded = load_model(a.model);
  const auto data = open_dataset(a.dataset, scaler);
  const auto report = evaluate(loaded.spec, loaded.params, data, scaler, model_id(loaded.spec, loaded.params));
  write_file(a.report, eval_csv({report}));
  std::cout << eval_table({report}, {report.dataset_id});
  return kOk;
}

struct CompareArgs {
  std::string orthogonal, random, validation, config, out;
  bool paper = false;
};

int cmd_compare(const CompareArgs& a) {
  const auto cfg = config_or_default(a.config, a.paper);
  const auto scaler = cfg.train.scaler();
  const auto orth = open_dataset(a.orthogonal, scaler);
  const auto rand = open_dataset(a.random, scaler);
  const auto val = open_dataset(a.validation, scaler);
  const auto report = compare_designs(orth, rand, val, cfg.train);

  export_report(report, ReportFormat::Csv, a.out);
  export_report(report, ReportFormat::Svg, a.out);
  write_file((fs::path(a.out) / "config_used.cfg").string(), config_to_text(cfg, "configuration used for this run"));
  save_model(report.orthogonal_model.spec, report.orthogonal_model.params,
             (fs::path(a.out) / "model_orthogonal.ann1").string());
  save_model(report.random_model.spec, report.random_model.params, (fs::path(a.out) / "model_random.ann1").string());

  std::printf("orthogonal: loss %.6g -> %.6g, train MAE %.2f deg, validation MAE %.2f deg (%.0f s)\n",
              report.orthogonal_log.initial_loss, report.orthogonal_log.final_loss,
              report.orthogonal_train.average_deg, report.orthogonal_validation.average_deg,
              report.orthogonal_log.wall_seconds);
  std::printf("random:     loss %.6g -> %.6g, train MAE %.2f deg, validation MAE %.2f deg (%.0f s)\n",
              report.random_log.initial_loss, report.random_log.final_loss, report.random_train.average_deg,
              report.random_validation.average_deg, report.random_log.wall_seconds);
  std::cout << "\nvalidation error (degrees)\n"
            << eval_table({report.random_validation, report.orthogonal_validation}, {"random", "orthogonal"})
            << "reports written to " << a.out << "\n";
  return kOk;
}

// ---- fk / config ------------------------------------------------------------

struct FkArgs {
  std::string joints, robot;
};

int cmd_fk(const FkArgs& a) {
  const auto model = a.robot.empty() ? sawyer_like_model() : load_robot_model(a.robot);
  std::vector<double> deg;
  std::string_view rest = a.joints;
  while (true) {
    const auto comma = rest.find(',');
    std::string field(rest.substr(0, comma));
    const auto b = field.find_first_not_of(" \t"), e = field.find_last_not_of(" \t");
    field = b == std::string::npos ? "" : field.substr(b, e - b + 1);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (field.empty() || used != field.size() || !std::isfinite(v)) {
      std::cerr << "error: malformed joint value '" << field << "'\n";
      return kIo;
    }
    deg.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (deg.size() != model.joint_count()) {
    std::cerr << "error: expected " << model.joint_count() << " joint values, got " << deg.size() << "\n";
    return kIo;
  }
  const auto q = JointVector::from_degrees(deg);
  const auto bad = check_limits(model, q);
  if (!bad.empty()) {
    std::cerr << "error: joint " << bad.front() << " outside its limits\n";
    return kLimit;
  }
  const Se3 t = poe_fk(model, q);
  std::printf("rotation\n");
  for (int r = 0; r < 3; ++r)
    std::printf("  % .9f % .9f % .9f\n", t.rotation(r, 0) + 0.0, t.rotation(r, 1) + 0.0, t.rotation(r, 2) + 0.0);
  std::printf("translation\n  % .9f % .9f % .9f\n", t.translation.x() + 0.0, t.translation.y() + 0.0,
              t.translation.z() + 0.0);
  return kOk;
}

int cmd_config(bool paper, const std::string& out) {
  CliConfig c;
  if (paper) c.train = TrainConfig::paper();
  write_file(out, config_to_text(c, paper ? "published hyperparameters" : "desk-scale hyperparameters"));
  std::cout << "wrote " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"armpose: orthogonal-array pose sampling, rendering and CNN joint regression"};
  app.require_subcommand(1);

  OaArgs oa;
  auto* oa_cmd = app.add_subcommand("oa", "Construct or verify orthogonal arrays");
  oa_cmd->require_subcommand(1);
  auto* oa_gen = oa_cmd->add_subcommand("generate", "Construct an orthogonal array and write it as CSV");
  oa_gen->add_option("--runs", oa.runs, "Number of runs")->default_val(144);
  oa_gen->add_option("--factors", oa.factors, "Number of columns")->default_val(7);
  oa_gen->add_option("--levels", oa.levels, "Levels per column")->default_val(12);
  oa_gen->add_option("--strength", oa.strength, "Strength")->default_val(2);
  oa_gen->add_option("--out", oa.out, "Output CSV")->required();
  auto* oa_ver = oa_cmd->add_subcommand("verify", "Check the strength of an array stored as CSV");
  oa_ver->add_option("file", oa.file, "Array CSV")->required();
  oa_ver->add_option("--strength", oa.strength, "Strength to verify")->default_val(2);
  oa_ver->add_option("--levels", oa.verify_levels, "Levels (default: largest symbol + 1)");

  DatasetArgs ds;
  auto* ds_cmd = app.add_subcommand("dataset", "Render RGBD datasets");
  ds_cmd->require_subcommand(1);
  auto* ds_gen = ds_cmd->add_subcommand("generate", "Render one RGBD image per pose plus a manifest");
  auto* src = ds_gen->add_option_group("source");
  src->add_option("--design", ds.design, "Orthogonal array (f1..) or joint design (j1..) CSV");
  src->add_option("--random", ds.random, "Number of uniform random training poses")->check(CLI::PositiveNumber);
  src->add_option("--validation", ds.validation, "Number of uniform random validation poses")
      ->check(CLI::PositiveNumber);
  src->require_option(1);
  ds_gen->add_option("--seed", ds.seed, "Seed for random poses")->default_val(0);
  ds_gen->add_option("--out", ds.out, "Output directory")->required();
  ds_gen->add_option("--config", ds.config, "Config file (design mapping, camera, robot)");
  ds_gen->add_option("--step", ds.step, "Degrees per array level");
  ds_gen->add_option("--offset", ds.offset, "Angle of level 0 in degrees");
  ds_gen->add_option("--id", ds.id, "Dataset id (default derived from provenance, size and seed)");

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "Train the regressor on one dataset");
  tr_cmd->add_option("--dataset", tr.dataset, "Dataset directory")->required();
  tr_cmd->add_option("--config", tr.config, "Config file");
  tr_cmd->add_option("--out", tr.out, "Model file to write")->required();
  tr_cmd->add_option("--log", tr.log, "Per-epoch loss CSV to write");
  tr_cmd->add_flag("--paper-config", tr.paper, "Use the published hyperparameters");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Per-joint mean absolute error of a model on a dataset");
  ev_cmd->add_option("--model", ev.model, "Model file")->required();
  ev_cmd->add_option("--dataset", ev.dataset, "Dataset directory")->required();
  ev_cmd->add_option("--report", ev.report, "CSV report to write")->required();
  ev_cmd->add_option("--config", ev.config, "Config file (target scaling)");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Train on orthogonal and random designs and compare");
  cmp_cmd->add_option("--orthogonal", cmp.orthogonal, "Orthogonal training dataset")->required();
  cmp_cmd->add_option("--random", cmp.random, "Random training dataset")->required();
  cmp_cmd->add_option("--validation", cmp.validation, "Validation dataset")->required();
  cmp_cmd->add_option("--config", cmp.config, "Config file");
  cmp_cmd->add_option("--out", cmp.out, "Report directory")->required();
  cmp_cmd->add_flag("--paper-config", cmp.paper, "Use the published hyperparameters");

  FkArgs fk;
  auto* fk_cmd = app.add_subcommand("fk", "End-effector pose for a joint vector in degrees");
  fk_cmd->add_option("--joints", fk.joints, "Comma-separated joint angles in degrees")->required();
  fk_cmd->add_option("--robot", fk.robot, "Robot model JSON (default: built-in model)");

  bool paper_cfg = false;
  std::string cfg_out;
  auto* cfg_cmd = app.add_subcommand("config", "Write a complete config file");
  cfg_cmd->add_flag("--paper-config", paper_cfg, "Published hyperparameters instead of desk-scale ones");
  cfg_cmd->add_option("--out", cfg_out, "Config file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIo;
  }

  try {
    if (oa_gen->parsed()) return cmd_oa_generate(oa);
    if (oa_ver->parsed()) return cmd_oa_verify(oa);
    if (ds_gen->parsed()) return cmd_dataset(ds);
    if (tr_cmd->parsed()) return cmd_train(tr);
    if (ev_cmd->parsed()) return cmd_eval(ev);
    if (cmp_cmd->parsed()) return cmd_compare(cmp);
    if (fk_cmd->parsed()) return cmd_fk(fk);
    if (cfg_cmd->parsed()) return cmd_config(paper_cfg, cfg_out);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kIo;
}
