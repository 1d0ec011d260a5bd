#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <doctest.h>

#include "armpose/config.hpp"
#include "armpose/error.hpp"
#include "armpose/experiment.hpp"
#include "armpose/io.hpp"
#include "armpose/joint_design.hpp"
#include "armpose/orthogonal_array.hpp"
#include "support.hpp"

using namespace armpose;
using test_support::error_kind_of;
using test_support::scratch_dir;
namespace fs = std::filesystem;

namespace {

CameraModel small_camera() {
  auto c = default_camera();
  c.width = c.height = 16;
  c.fx = c.fy = 16;
  c.cx = c.cy = 8;
  return c;
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_file(e.path().string());
  return out;
}

struct Fixture {
  RobotModel model = sawyer_like_model();
  CameraModel camera = small_camera();
  SceneConfig scene = default_scene(model, camera);

  Dataset make(const JointDesign& d, const std::string& name, std::uint64_t seed = 0) {
    const auto dir = scratch_dir(name);
    const auto m = generate_dataset(d, model, camera, scene, dir.string(), seed);
    return load_dataset(load_manifest(dir.string(), &model), dir.string(), TargetScaler());
  }
};

TrainConfig quick_config(int epochs, double lr = 1e-3, double p = 0.0) {
  TrainConfig c = TrainConfig::desk_scale();
  c.epochs = epochs;
  c.learning_rate = lr;
  c.dropout_p = p;
  c.batch_size = 24;
  return c;
}

}  // namespace

TEST_CASE("dataset generation") {
  Fixture fx;
  SUBCASE("flagship orthogonal design at full size") {
    const auto design = map_to_joint_angles(construct_oa(DesignSpec::make(144, 7, 12, 2)), 10, -55);
    const auto dir = scratch_dir("orthogonal");
    const auto m = generate_dataset(design, fx.model, default_camera(), default_scene(fx.model, default_camera()),
                                    dir.string(), 0);
    CHECK(m.samples.size() == 144);
    CHECK(m.provenance == Provenance::Orthogonal);
    CHECK(m.width == 64);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".rgbd";
    CHECK(files == 144);
    CHECK(fs::exists(dir / "manifest.json"));
    const auto loaded = load_manifest(dir.string(), &fx.model);
    CHECK(loaded == m);
    CHECK(loaded.samples[5].joints_deg == design.row(5));
    const auto img = decode_rgbd(read_file((dir / m.samples[0].file).string()));
    CHECK(img.width == 64);
    for (std::size_t i = 3; i < img.data.size(); i += 4) REQUIRE((img.data[i] >= 0.0f && img.data[i] <= 1.0f));
  }
  SUBCASE("validation design and byte-identical regeneration") {
    const auto design = random_design(32, 7, -55, 55, 4, Provenance::Validation);
    const auto a = scratch_dir("val_a"), b = scratch_dir("val_b");
    const auto ma = generate_dataset(design, fx.model, fx.camera, fx.scene, a.string(), 4);
    generate_dataset(design, fx.model, fx.camera, fx.scene, b.string(), 4);
    CHECK(ma.samples.size() == 32);
    CHECK(ma.provenance == Provenance::Validation);
    CHECK(dir_bytes(a) == dir_bytes(b));
    CHECK(dir_bytes(a).size() == 33);
  }
  SUBCASE("limit violations are caught before anything is written") {
    auto design = random_design(3, 7, -55, 55, 1);
    design.angles_deg[9] = 70;
    const auto dir = scratch_dir("bad") / "never";
    CHECK(error_kind_of([&] { generate_dataset(design, fx.model, fx.camera, fx.scene, dir.string(), 0); }) ==
          ErrorKind::LimitViolation);
    CHECK_FALSE(fs::exists(dir));
  }
  SUBCASE("manifest checks") {
    const auto dir = scratch_dir("manifest_checks");
    const auto m = generate_dataset(random_design(4, 7, -55, 55, 2), fx.model, fx.camera, fx.scene, dir.string(), 2);
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
    CHECK(m.digests.robot == hex64(crc64(robot_model_to_json(fx.model))));
    CHECK(error_kind_of([] { manifest_from_json("{}"); }) == ErrorKind::Parse);

    write_file((dir / m.samples[1].file).string(), encode_rgbd(RgbdImage(8, 8)));
    CHECK(error_kind_of([&] { load_manifest(dir.string()); }) == ErrorKind::ShapeMismatch);
    fs::remove(dir / m.samples[1].file);
    CHECK(error_kind_of([&] { load_manifest(dir.string()); }) == ErrorKind::Io);

    auto tampered = m;
    tampered.samples.erase(tampered.samples.begin() + 1);
    tampered.samples[0].joints_deg[0] = 80;
    write_file((dir / kManifestFile).string(), manifest_to_json(tampered));
    CHECK_NOTHROW(load_manifest(dir.string()));
    CHECK(error_kind_of([&] { load_manifest(dir.string(), &fx.model); }) == ErrorKind::LimitViolation);
    CHECK(error_kind_of([&] { load_dataset(tampered, dir.string(), TargetScaler()); }) == ErrorKind::OutOfBound);
  }
}

TEST_CASE("training") {
  Fixture fx;
  const auto data = fx.make(random_design(24, 7, -55, 55, 8), "train_set", 8);
  const auto spec = network_for(quick_config(1), 16, 16);
  CHECK(data.images.shape() == Shape{24, 16, 16, 4});
  CHECK(data.targets[0] == static_cast<float>(data.joints_deg[0][0] / 55.0));

  SUBCASE("one epoch gives one record") {
    const auto r = train(data, spec, quick_config(1));
    CHECK(r.log.records.size() == 1);
    CHECK(r.log.records[0].epoch == 1);
    CHECK(std::isfinite(r.log.final_loss));
  }
  SUBCASE("zero learning rate is a no-op") {
    const auto r = train(data, spec, quick_config(5, 0.0));
    CHECK(r.params == init_params<float>(spec, 0));
    for (const auto& rec : r.log.records) CHECK(rec.loss == r.log.records[0].loss);
    // Evaluation's per-sample forward agrees with the training forward pass.
    CHECK(std::abs(dataset_loss(spec, r.params, data) - r.log.records.back().loss) <= 1e-6);
    CHECK(r.log.initial_loss == r.log.final_loss);
  }
  SUBCASE("loss falls and the log is consistent") {
    auto cfg = quick_config(30, 1e-3);
    const auto r = train(data, spec, cfg);
    CHECK(r.log.records.size() == 30);
    for (std::size_t i = 0; i < r.log.records.size(); ++i) {
      CHECK(r.log.records[i].epoch == static_cast<int>(i + 1));
      CHECK(std::isfinite(r.log.records[i].loss));
    }
    CHECK(r.log.final_loss < r.log.initial_loss);
    CHECK(std::abs(dataset_loss(spec, r.params, data) - r.log.final_loss) <= 1e-6);
    CHECK_FALSE(r.log.stopped_early);
  }
  SUBCASE("deterministic given the seed, with dropout and mini-batches") {
    auto cfg = quick_config(4, 1e-3, 0.3);
    cfg.batch_size = 10;
    const auto a = train(data, spec, cfg);
    const auto b = train(data, spec, cfg);
    CHECK(a.params == b.params);
    CHECK(a.log.records == b.log.records);
    cfg.seed = 1;
    CHECK_FALSE(train(data, spec, cfg).params == a.params);
  }
  SUBCASE("stopping criterion") {
    auto cfg = quick_config(50, 1e-3);
    cfg.stopping_loss = 1e9;
    const auto r = train(data, spec, cfg);
    CHECK(r.log.records.size() == 1);
    CHECK(r.log.stopped_early);
  }
  SUBCASE("config errors") {
    auto cfg = quick_config(1);
    cfg.batch_size = 25;
    CHECK(error_kind_of([&] { train(data, spec, cfg); }) == ErrorKind::InvalidConfig);
    cfg = quick_config(0);
    CHECK(error_kind_of([&] { train(data, spec, cfg); }) == ErrorKind::InvalidConfig);
    cfg = quick_config(1, 1e-3, 1.0);
    CHECK(error_kind_of([&] { train(data, spec, cfg); }) == ErrorKind::InvalidProbability);
    cfg = quick_config(1);
    cfg.optimizer = "sgd";
    CHECK(error_kind_of([&] { train(data, spec, cfg); }) == ErrorKind::InvalidConfig);
    CHECK(error_kind_of([&] { train(data, network_for(quick_config(1), 20, 20), quick_config(1)); }) ==
          ErrorKind::ShapeMismatch);
  }
  SUBCASE("published and desk-scale presets") {
    const auto p = TrainConfig::paper();
    CHECK(p.learning_rate == 1e-6);
    CHECK(p.epochs == 20000);
    CHECK(p.batch_size == 144);
    CHECK(p.dropout_p == 0.05);
    CHECK(p.optimizer == "adam");
    const auto d = TrainConfig::desk_scale();
    CHECK(d.learning_rate == 1e-4);
    CHECK(d.epochs == 2000);
    CHECK(d.batch_size == 144);
  }
}

TEST_CASE("evaluation") {
  SUBCASE("perfect predictions score zero") {
    const auto design = random_design(20, 7, -55, 55, 3);
    const auto r = make_report(design.angles_deg, design.angles_deg, 7, "d", "m");
    for (double v : r.per_joint_mae_deg) CHECK(v == 0.0);
    CHECK(r.average_deg == 0.0);
  }
  SUBCASE("constant zero predictor on uniform poses") {
    const auto design = random_design(2000, 7, -55, 55, 10, Provenance::Validation);
    const auto r = make_report(std::vector<double>(design.angles_deg.size(), 0.0), design.angles_deg, 7, "v", "zero");
    for (double v : r.per_joint_mae_deg) CHECK(std::abs(v - 27.5) <= 1.5);
    CHECK(std::abs(r.average_deg - 27.5) <= 1.5);
  }
  SUBCASE("average is the mean of the joints and the report ignores sample order") {
    RngStream rng(5);
    std::vector<double> pred(7 * 40), truth(7 * 40);
    for (auto& v : pred) v = rng.uniform(-55, 55);
    for (auto& v : truth) v = rng.uniform(-55, 55);
    const auto r = make_report(pred, truth, 7, "d", "m");
    const double mean = std::accumulate(r.per_joint_mae_deg.begin(), r.per_joint_mae_deg.end(), 0.0) / 7.0;
    CHECK(std::abs(r.average_deg - mean) <= 1e-9);
    for (double v : r.per_joint_mae_deg) CHECK(v >= 0.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::size_t> perm(40);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = 39; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      std::vector<double> p2, t2;
      for (auto i : perm) {
        p2.insert(p2.end(), pred.begin() + 7 * i, pred.begin() + 7 * i + 7);
        t2.insert(t2.end(), truth.begin() + 7 * i, truth.begin() + 7 * i + 7);
      }
      CHECK(make_report(p2, t2, 7, "d", "m") == r);
    }
    CHECK(error_kind_of([&] { make_report(pred, std::vector<double>(7), 7, "", ""); }) == ErrorKind::ShapeMismatch);
  }
  SUBCASE("network evaluation is order invariant and uses the scaler") {
    Fixture fx;
    const auto data = fx.make(random_design(12, 7, -55, 55, 6), "eval_set", 6);
    const auto spec = network_for(quick_config(1), 16, 16);
    const auto params = init_params<float>(spec, 2);
    const auto r = evaluate(spec, params, data, TargetScaler(), model_id(spec, params));
    CHECK(r.model_id == model_id(spec, params));
    CHECK(r.dataset_id == data.id);

    Dataset rev = data;
    const std::size_t px = 16 * 16 * 4;
    for (std::size_t i = 0; i < 12; ++i) {
      std::copy_n(data.images.data() + (11 - i) * px, px, rev.images.data() + i * px);
      std::copy_n(data.targets.data() + (11 - i) * 7, 7, rev.targets.data() + i * 7);
      rev.joints_deg[i] = data.joints_deg[11 - i];
    }
    CHECK(evaluate(spec, params, rev, TargetScaler(), r.model_id) == r);

    const auto zero = evaluate(spec, zero_params<float>(spec), data, TargetScaler());
    for (std::size_t j = 0; j < 7; ++j) {
      double s = 0.0;
      for (const auto& row : data.joints_deg) s += std::abs(row[j]);
      CHECK(zero.per_joint_mae_deg[j] == doctest::Approx(s / 12).epsilon(1e-12));
    }
    CHECK(error_kind_of([&] {
            evaluate(network_for(quick_config(1), 20, 20), init_params<float>(network_for(quick_config(1), 20, 20), 0),
                     data, TargetScaler());
          }) == ErrorKind::ShapeMismatch);
  }
}

TEST_CASE("comparison and reports") {
  Fixture fx;
  const auto orth = fx.make(map_to_joint_angles(construct_oa(DesignSpec::make(49, 7, 7, 2)), 15, -45), "cmp_o");
  const auto rnd = fx.make(random_design(49, 7, -55, 55, 0), "cmp_r");
  const auto val = fx.make(random_design(8, 7, -55, 55, 0, Provenance::Validation), "cmp_v");
  auto cfg = quick_config(6, 1e-3, 0.05);
  cfg.batch_size = 49;

  SUBCASE("both arms start from the same weights") {
    auto frozen = cfg;
    frozen.learning_rate = 0.0;
    const auto c = compare_designs(orth, rnd, val, frozen);
    CHECK(c.orthogonal_model.params == c.random_model.params);
    CHECK(c.orthogonal_validation.per_joint_mae_deg == c.random_validation.per_joint_mae_deg);
  }

  const auto c = compare_designs(orth, rnd, val, cfg);
  CHECK(c.orthogonal_log.records.size() == 6);
  CHECK(c.random_log.records.size() == 6);
  CHECK(c.orthogonal_train.dataset_id == orth.id);
  CHECK(c.orthogonal_validation.dataset_id == val.id);
  CHECK(c.random_train.dataset_id == rnd.id);
  CHECK(c.random_validation.model_id == c.random_train.model_id);
  CHECK_FALSE(c.random_model.params == c.orthogonal_model.params);
  CHECK(c.orthogonal_log.records != c.random_log.records);
  CHECK(c.random_validation.model_id != c.orthogonal_validation.model_id);

  SUBCASE("rerun is identical") {
    const auto again = compare_designs(orth, rnd, val, cfg);
    CHECK(again.orthogonal_model.params == c.orthogonal_model.params);
    CHECK(loss_csv(again.random_log) == loss_csv(c.random_log));
    CHECK(comparison_svg(again) == comparison_svg(c));
  }
  SUBCASE("exported files") {
    const auto dir = scratch_dir("report");
    const auto csv = export_report(c, ReportFormat::Csv, dir.string());
    const auto svg = export_report(c, ReportFormat::Svg, dir.string());
    CHECK(csv.size() == 7);
    CHECK(svg.size() == 1);
    for (const char* f : {"loss_orthogonal.csv", "loss_random.csv", "eval_orthogonal_train.csv",
                          "eval_orthogonal_validation.csv", "eval_random_train.csv", "eval_random_validation.csv",
                          "table_validation.csv", "summary.svg"})
      CHECK(fs::exists(dir / f));

    const auto loss = read_file((dir / "loss_orthogonal.csv").string());
    CHECK(std::count(loss.begin(), loss.end(), '\n') == 7);
    CHECK(loss.rfind("epoch,loss\n1,", 0) == 0);

    const auto table = read_file((dir / "table_validation.csv").string());
    std::istringstream in(table);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "dataset,j1,j2,j3,j4,j5,j6,j7,average");
    CHECK(lines[1].rfind("random,", 0) == 0);
    CHECK(lines[2].rfind("orthogonal,", 0) == 0);
    for (const auto& l : lines) CHECK(std::count(l.begin(), l.end(), ',') == 8);

    boost::property_tree::ptree tree;
    std::istringstream svg_in(read_file((dir / "summary.svg").string()));
    CHECK_NOTHROW(boost::property_tree::read_xml(svg_in, tree));
    CHECK(tree.get_child_optional("svg").has_value());
  }
  SUBCASE("rendered table uses one decimal") {
    EvalReport r{"d", "m", {1.25, 2, 3, 4, 5, 6, 7.04}, 4.0414};
    const auto t = eval_table({r}, {"orthogonal"});
    CHECK(t.find("orthogonal") != std::string::npos);
    CHECK(t.find("7.0") != std::string::npos);
    CHECK(t.find("4.0\n") != std::string::npos);
    CHECK(t.find("7.04") == std::string::npos);
  }
  SUBCASE("mismatched training sets") {
    const auto small = fx.make(random_design(8, 7, -55, 55, 3), "cmp_small");
    CHECK(error_kind_of([&] { compare_designs(orth, small, val, cfg); }) == ErrorKind::ShapeMismatch);
  }
}

TEST_CASE("config files") {
  SUBCASE("round trip of every key") {
    CliConfig c;
    c.train.learning_rate = 3e-5;
    c.train.stopping_loss = 0.01;
    c.train.conv_activation = Activation::Relu;
    c.camera.width = 48;
    c.marker_radius = 0.05;
    const auto text = config_to_text(c, "test");
    const auto back = parse_config(text);
    CHECK(config_to_text(back, "test") == text);
    CHECK(back.train.learning_rate == 3e-5);
    CHECK(back.train.stopping_loss == 0.01);
    CHECK(back.camera.width == 48);
  }
  SUBCASE("comments, blanks and defaults") {
    const auto c = parse_config("# header\n\n  epochs = 7   # inline\nseed=3\n");
    CHECK(c.train.epochs == 7);
    CHECK(c.train.seed == 3);
    CHECK(c.train.learning_rate == 1e-4);
  }
  SUBCASE("rejections name the line") {
    auto line_of = [](const std::string& text) {
      try {
        parse_config(text);
      } catch (const ParseError& e) {
        return static_cast<int>(e.line());
      }
      return -1;
    };
    CHECK(line_of("epochs = 3\nlearning_rat = 1\n") == 2);
    CHECK(line_of("epochs = 3\nepochs = 4\n") == 2);
    CHECK(line_of("epochs = three\n") == 1);
    CHECK(line_of("\n\nepochs\n") == 3);
    CHECK(line_of("conv_activation = sigmoid\n") == 1);
    CHECK(error_kind_of([] { parse_config("dropout_p = 1.5\n"); }) == ErrorKind::InvalidProbability);
    CHECK(error_kind_of([] { parse_config("batch_size = 0\n"); }) == ErrorKind::InvalidConfig);
    CHECK(error_kind_of([] { parse_config("camera_near = 9\n"); }) == ErrorKind::InvalidRange);
  }
  SUBCASE("committed configs") {
    const std::string root = ARMPOSE_SOURCE_DIR;
    const auto desk = load_config(root + "/configs/desk_scale.cfg");
    CHECK(desk.train.learning_rate == 1e-4);
    CHECK(desk.train.epochs == 2000);
    CHECK(desk.train.batch_size == 144);
    CHECK(desk.train.dropout_p == 0.05);
    CHECK(desk.train.seed == 0);
    CHECK_FALSE(desk.train.stopping_loss);
    CHECK(desk.camera.width == 64);
    const auto paper = load_config(root + "/configs/paper.cfg");
    CHECK(paper.train.learning_rate == 1e-6);
    CHECK(paper.train.epochs == 20000);
    CHECK(paper.train.batch_size == 144);
    CHECK(paper.train.dropout_p == 0.05);
  }
}
