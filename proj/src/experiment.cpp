#include "armpose/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "armpose/error.hpp"
#include "armpose/io.hpp"
#include "text_util.hpp"

namespace armpose {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sample_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%04zu.rgbd", i);
  return buf;
}

json rgb_json(const Rgb& c) { return json::array({c[0], c[1], c[2]}); }

}  // namespace

std::string camera_to_json(const CameraModel& c) {
  json j;
  j["fx"] = c.fx;
  j["fy"] = c.fy;
  j["cx"] = c.cx;
  j["cy"] = c.cy;
  j["width"] = c.width;
  j["height"] = c.height;
  j["near"] = c.near;
  j["far"] = c.far;
  json rot = json::array();
  for (int r = 0; r < 3; ++r) rot.push_back(json::array({c.pose.rotation(r, 0), c.pose.rotation(r, 1), c.pose.rotation(r, 2)}));
  j["pose"] = {{"rotation", rot},
               {"translation", json::array({c.pose.translation.x(), c.pose.translation.y(), c.pose.translation.z()})}};
  return j.dump();
}

std::string scene_to_json(const SceneConfig& s) {
  json j;
  j["background_rgb"] = rgb_json(s.background_rgb);
  j["background_depth"] = s.background_depth;
  j["link_rgb"] = json::array();
  for (const auto& c : s.link_rgb) j["link_rgb"].push_back(rgb_json(c));
  j["marker_rgb"] = json::array();
  for (const auto& c : s.marker_rgb) j["marker_rgb"].push_back(rgb_json(c));
  j["marker_radius"] = s.marker_radius;
  return j.dump();
}

std::string manifest_to_json(const DatasetManifest& m) {
  json j;
  j["id"] = m.id;
  j["provenance"] = to_string(m.provenance);
  j["seed"] = m.seed;
  j["digests"] = {{"robot", m.digests.robot}, {"camera", m.digests.camera}, {"scene", m.digests.scene}};
  j["width"] = m.width;
  j["height"] = m.height;
  json samples = json::array();
  for (const auto& s : m.samples) samples.push_back({{"file", s.file}, {"joints_deg", s.joints_deg}});
  j["samples"] = samples;
  return j.dump(1) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
  DatasetManifest m;
  try {
    const json j = json::parse(text);
    m.id = j.at("id").get<std::string>();
    m.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& d = j.at("digests");
    m.digests = {d.at("robot").get<std::string>(), d.at("camera").get<std::string>(), d.at("scene").get<std::string>()};
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    for (const auto& s : j.at("samples"))
      m.samples.push_back({s.at("file").get<std::string>(), s.at("joints_deg").get<std::vector<double>>()});
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("manifest: ") + e.what());
  }
  if (m.width < 1 || m.height < 1) throw ParseError(0, "manifest: image size must be positive");
  if (m.samples.empty()) throw ParseError(0, "manifest lists no samples");
  return m;
}

DatasetManifest load_manifest(const std::string& dir, const RobotModel* model) {
  auto m = manifest_from_json(read_file((fs::path(dir) / kManifestFile).string()));
  for (const auto& s : m.samples) {
    const auto path = (fs::path(dir) / s.file).string();
    if (!fs::exists(path)) throw Error(ErrorKind::Io, "dataset sample '" + path + "' is missing");
    const auto img = decode_rgbd(read_file(path));
    if (img.width != m.width || img.height != m.height)
      throw Error(ErrorKind::ShapeMismatch, "sample '" + s.file + "' is not " + std::to_string(m.width) + "x" +
                                                std::to_string(m.height));
    if (model) {
      const auto bad = check_limits(*model, JointVector::from_degrees(s.joints_deg));
      if (!bad.empty()) throw Error(ErrorKind::LimitViolation, "sample '" + s.file + "' violates joint limits");
    }
  }
  return m;
}

DatasetManifest generate_dataset(const JointDesign& design, const RobotModel& model, const CameraModel& camera,
                                 const SceneConfig& scene, const std::string& out_dir, std::uint64_t seed,
                                 const std::string& id) {
  model.validate();
  camera.validate();
  scene.validate();
  if (static_cast<std::size_t>(design.joints) != model.joint_count())
    throw Error(ErrorKind::DimensionMismatch, "design has " + std::to_string(design.joints) +
                                                  " joints, robot has " + std::to_string(model.joint_count()));
  std::vector<JointVector> poses;
  for (int p = 0; p < design.poses; ++p) {
    poses.push_back(JointVector::from_degrees(design.row(p)));
    const auto bad = check_limits(model, poses.back());
    if (!bad.empty())
      throw Error(ErrorKind::LimitViolation, "pose " + std::to_string(p + 1) + " violates the limit of joint " +
                                                 std::to_string(bad.front()));
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());

  DatasetManifest m;
  m.provenance = design.provenance;
  m.id = id.empty() ? std::string(to_string(design.provenance)) + "-" + std::to_string(design.poses) + "-s" +
                          std::to_string(seed)
                    : id;
  m.seed = seed;
  m.digests = {hex64(crc64(robot_model_to_json(model))), hex64(crc64(camera_to_json(camera))),
               hex64(crc64(scene_to_json(scene)))};
  m.width = camera.width;
  m.height = camera.height;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto img = normalize(render_rgbd(model, poses[i], camera, scene), camera);
    const auto name = sample_name(i);
    write_file((fs::path(out_dir) / name).string(), encode_rgbd(img));
    m.samples.push_back({name, design.row(static_cast<int>(i))});
  }
  write_file((fs::path(out_dir) / kManifestFile).string(), manifest_to_json(m));
  return m;
}

Dataset load_dataset(const DatasetManifest& manifest, const std::string& dir, const TargetScaler& scaler) {
  Dataset d;
  d.id = manifest.id;
  const std::size_t n = manifest.samples.size();
  const std::size_t k = manifest.samples.front().joints_deg.size();
  const std::size_t px = static_cast<std::size_t>(manifest.width) * manifest.height * RgbdImage::channels;
  d.images = Tensor<float>({n, static_cast<std::size_t>(manifest.height), static_cast<std::size_t>(manifest.width),
                            static_cast<std::size_t>(RgbdImage::channels)});
  d.targets = Tensor<float>({n, k});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = manifest.samples[i];
    if (s.joints_deg.size() != k) throw Error(ErrorKind::ShapeMismatch, "samples disagree on joint count");
    const auto img = decode_rgbd(read_file((fs::path(dir) / s.file).string()));
    if (img.width != manifest.width || img.height != manifest.height)
      throw Error(ErrorKind::ShapeMismatch, "sample '" + s.file + "' has the wrong size");
    std::copy(img.data.begin(), img.data.end(), d.images.data() + i * px);
    for (std::size_t j = 0; j < k; ++j) d.targets[i * k + j] = static_cast<float>(scaler.scale(s.joints_deg[j]));
    d.joints_deg.push_back(s.joints_deg);
  }
  return d;
}

TrainConfig TrainConfig::paper() { return TrainConfig{}; }

TrainConfig TrainConfig::desk_scale() {
  TrainConfig c;
  c.learning_rate = 1e-4;
  c.epochs = 2000;
  return c;
}

void TrainConfig::validate(std::size_t dataset_size) const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, m); };
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) bad("learning_rate must be finite and >= 0");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (dataset_size > 0 && static_cast<std::size_t>(batch_size) > dataset_size)
    bad("batch_size " + std::to_string(batch_size) + " exceeds dataset size " + std::to_string(dataset_size));
  if (epochs < 1) bad("epochs must be >= 1");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0))
    throw Error(ErrorKind::InvalidProbability, "dropout_p must be in [0, 1)");
  if (optimizer != "adam") bad("only the adam optimizer is available");
  if (stopping_loss && !(*stopping_loss >= 0.0)) bad("stopping_loss must be >= 0");
  if (!(target_margin > 0.0) || !(target_bound_deg > 0.0)) bad("target bound and margin must be positive");
}

NetworkSpec network_for(const TrainConfig& config, int height, int width, int outputs) {
  return flagship_spec(height, width, config.dropout_p, config.conv_activation, outputs);
}

namespace {

Tensor<float> gather_rows(const Tensor<float>& src, const std::vector<std::size_t>& idx, std::size_t first,
                          std::size_t count) {
  Shape shape = src.shape();
  const std::size_t row = src.size() / shape[0];
  shape[0] = count;
  Tensor<float> out(shape);
  for (std::size_t i = 0; i < count; ++i)
    std::copy_n(src.data() + idx[first + i] * row, row, out.data() + i * row);
  return out;
}

}  // namespace

TrainResult train(const Dataset& data, const NetworkSpec& spec, const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = data.size();
  config.validate(n);
  spec.validate();
  if (data.images.rank() != 4 || data.images.dim(1) != static_cast<std::size_t>(spec.input_height) ||
      data.images.dim(2) != static_cast<std::size_t>(spec.input_width) ||
      data.images.dim(3) != static_cast<std::size_t>(spec.input_channels))
    throw Error(ErrorKind::ShapeMismatch, "dataset images " + shape_string(data.images.shape()) +
                                              " do not fit the network input " + shape_string(spec.input_shape()));
  if (data.targets.dim(1) != spec.output_size())
    throw Error(ErrorKind::ShapeMismatch, "dataset targets do not match the network output size");

  TrainResult res;
  res.spec = spec;
  res.params = init_params<float>(spec, config.seed);
  auto adam = make_adam<float>(spec, config.learning_rate);
  res.log.initial_loss = dataset_loss(spec, res.params, data);
  const RngStream root(config.seed);
  RngStream dropout_rng = root.fork(1);
  RngStream shuffle_rng = root.fork(2);

  const auto batch = static_cast<std::size_t>(config.batch_size);
  const bool full_batch = batch == n;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (!full_batch)
      for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[shuffle_rng.below(i + 1)]);
    double loss_sum = 0.0;
    for (std::size_t first = 0; first < n; first += batch) {
      const std::size_t count = std::min(batch, n - first);
      const Tensor<float> x = full_batch ? Tensor<float>() : gather_rows(data.images, order, first, count);
      const Tensor<float> y = full_batch ? Tensor<float>() : gather_rows(data.targets, order, first, count);
      const auto& xs = full_batch ? data.images : x;
      const auto& ys = full_batch ? data.targets : y;
      auto fwd = forward(spec, res.params, xs, Mode::Train, dropout_rng);
      const auto loss = mse_loss(fwd.output, ys);
      const auto grads = backward(spec, res.params, fwd.cache, loss.grad);
      adam_step(res.params, grads, adam);
      loss_sum += loss.loss * static_cast<double>(count);
    }
    const double epoch_loss = loss_sum / static_cast<double>(n);
    if (!std::isfinite(epoch_loss)) throw Error(ErrorKind::InvalidRange, "training loss became non-finite");
    res.log.records.push_back({epoch, epoch_loss});
    if (config.stopping_loss && epoch_loss <= *config.stopping_loss) {
      res.log.stopped_early = epoch < config.epochs;
      break;
    }
  }
  res.log.final_loss = dataset_loss(spec, res.params, data);
  res.log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

Tensor<float> predict_dataset(const NetworkSpec& spec, const NetworkParams<float>& params, const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t outputs = spec.output_size();
  const Shape one = spec.input_shape();
  const std::size_t px = shape_size(one);
  if (data.images.size() != n * px)
    throw Error(ErrorKind::ShapeMismatch, "dataset images " + shape_string(data.images.shape()) +
                                              " do not fit the network input " + shape_string(one));
  Tensor<float> out({n, outputs});
  for (std::size_t i = 0; i < n; ++i) {
    Tensor<float> x(one, std::vector<float>(data.images.data() + i * px, data.images.data() + (i + 1) * px));
    const auto y = predict(spec, params, x);
    std::copy_n(y.data(), outputs, out.data() + i * outputs);
  }
  return out;
}

double dataset_loss(const NetworkSpec& spec, const NetworkParams<float>& params, const Dataset& data) {
  return mse_loss(predict_dataset(spec, params, data), data.targets).loss;
}

EvalReport make_report(const std::vector<double>& predicted_deg, const std::vector<double>& true_deg,
                       std::size_t joints, std::string dataset_id, std::string model_id) {
  if (predicted_deg.size() != true_deg.size() || joints == 0 || true_deg.size() % joints != 0 || true_deg.empty())
    throw Error(ErrorKind::ShapeMismatch, "prediction and target sizes differ");
  const std::size_t n = true_deg.size() / joints;
  EvalReport r;
  r.dataset_id = std::move(dataset_id);
  r.model_id = std::move(model_id);
  std::vector<double> errs(n);
  for (std::size_t j = 0; j < joints; ++j) {
    for (std::size_t i = 0; i < n; ++i) errs[i] = std::abs(predicted_deg[i * joints + j] - true_deg[i * joints + j]);
    std::sort(errs.begin(), errs.end());
    double sum = 0.0;
    for (double e : errs) sum += e;
    r.per_joint_mae_deg.push_back(sum / static_cast<double>(n));
  }
  double total = 0.0;
  for (double m : r.per_joint_mae_deg) total += m;
  r.average_deg = total / static_cast<double>(joints);
  return r;
}

EvalReport evaluate(const NetworkSpec& spec, const NetworkParams<float>& params, const Dataset& data,
                    const TargetScaler& scaler, const std::string& model_id) {
  const auto pred = predict_dataset(spec, params, data);
  const std::size_t k = pred.dim(1);
  std::vector<double> p, t;
  p.reserve(pred.size());
  for (float y : pred.values()) p.push_back(scaler.unscale(static_cast<double>(y)));
  for (const auto& row : data.joints_deg) {
    if (row.size() != k) throw Error(ErrorKind::ShapeMismatch, "dataset joint count differs from network output");
    t.insert(t.end(), row.begin(), row.end());
  }
  return make_report(p, t, k, data.id, model_id);
}

std::string model_id(const NetworkSpec& spec, const NetworkParams<float>& params) {
  // Body only: the CRC of body plus trailer is the same for every model.
  const auto bytes = encode_model(spec, params);
  return hex64(crc64(std::string_view(bytes).substr(0, bytes.size() - 8)));
}

ComparisonReport compare_designs(const Dataset& orthogonal, const Dataset& random, const Dataset& validation,
                                 const TrainConfig& config) {
  if (orthogonal.size() != random.size() || orthogonal.images.shape() != random.images.shape())
    throw Error(ErrorKind::ShapeMismatch, "orthogonal and random training sets must match in size and image shape");
  if (validation.images.rank() != 4 || validation.images.dim(1) != orthogonal.images.dim(1) ||
      validation.images.dim(2) != orthogonal.images.dim(2))
    throw Error(ErrorKind::ShapeMismatch, "validation images differ in size from the training images");
  const auto spec = network_for(config, static_cast<int>(orthogonal.images.dim(1)),
                                static_cast<int>(orthogonal.images.dim(2)),
                                static_cast<int>(orthogonal.targets.dim(1)));
  const auto scaler = config.scaler();
  ComparisonReport r;
  r.orthogonal_model = train(orthogonal, spec, config);
  r.random_model = train(random, spec, config);
  r.orthogonal_log = r.orthogonal_model.log;
  r.random_log = r.random_model.log;
  const auto oid = model_id(spec, r.orthogonal_model.params);
  const auto rid = model_id(spec, r.random_model.params);
  r.orthogonal_train = evaluate(spec, r.orthogonal_model.params, orthogonal, scaler, oid);
  r.orthogonal_validation = evaluate(spec, r.orthogonal_model.params, validation, scaler, oid);
  r.random_train = evaluate(spec, r.random_model.params, random, scaler, rid);
  r.random_validation = evaluate(spec, r.random_model.params, validation, scaler, rid);
  return r;
}

std::string loss_csv(const TrainLog& log) {
  std::string out = "epoch,loss\n";
  for (const auto& r : log.records) out += std::to_string(r.epoch) + "," + detail::format_double(r.loss) + "\n";
  return out;
}

std::string eval_csv(const std::vector<EvalReport>& rows, const std::vector<std::string>& labels) {
  const std::size_t k = rows.empty() ? 7 : rows.front().per_joint_mae_deg.size();
  std::string out = "dataset";
  for (std::size_t j = 0; j < k; ++j) out += ",j" + std::to_string(j + 1);
  out += ",average\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += i < labels.size() ? labels[i] : rows[i].dataset_id;
    for (double v : rows[i].per_joint_mae_deg) out += "," + detail::format_double(v);
    out += "," + detail::format_double(rows[i].average_deg) + "\n";
  }
  return out;
}

std::string eval_table(const std::vector<EvalReport>& rows, const std::vector<std::string>& labels) {
  const std::size_t k = rows.empty() ? 7 : rows.front().per_joint_mae_deg.size();
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-24s", "dataset");
  os << buf;
  for (std::size_t j = 0; j < k; ++j) {
    std::snprintf(buf, sizeof buf, "%8s", ("joint " + std::to_string(j + 1)).c_str());
    os << buf;
  }
  os << "  average\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-24s", (i < labels.size() ? labels[i] : rows[i].dataset_id).c_str());
    os << buf;
    for (double v : rows[i].per_joint_mae_deg) {
      std::snprintf(buf, sizeof buf, "%8.1f", v);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%9.1f\n", rows[i].average_deg);
    os << buf;
  }
  return os.str();
}

namespace {

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string polyline(const TrainLog& log, double x0, double y0, double w, double h, int max_epoch, double lo,
                     double hi, const char* color) {
  std::string pts;
  // Thin long curves to at most ~1000 vertices.
  const std::size_t stride = std::max<std::size_t>(1, log.records.size() / 1000);
  for (std::size_t i = 0; i < log.records.size(); i += stride) {
    const auto& r = log.records[i];
    const double x = x0 + w * (max_epoch > 1 ? (r.epoch - 1.0) / (max_epoch - 1.0) : 0.0);
    const double ly = std::log10(std::max(r.loss, 1e-12));
    const double y = y0 + h * (1.0 - (ly - lo) / std::max(hi - lo, 1e-9));
    pts += svg_num(x) + "," + svg_num(y) + " ";
  }
  return "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
}

}  // namespace

std::string comparison_svg(const ComparisonReport& report) {
  const double width = 900, height = 360;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Left: log10 training loss per epoch.
  const double lx = 60, ly = 40, lw = 340, lh = 260;
  double lo = 1e300, hi = -1e300;
  int max_epoch = 1;
  for (const auto* log : {&report.orthogonal_log, &report.random_log})
    for (const auto& r : log->records) {
      const double v = std::log10(std::max(r.loss, 1e-12));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      max_epoch = std::max(max_epoch, r.epoch);
    }
  if (lo > hi) lo = hi = 0.0;
  os << "<text x=\"" << lx << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">Training loss (log10 MSE)</text>\n"
     << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"" << lw << "\" height=\"" << lh
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << lx - 8 << "\" y=\"" << ly + 10 << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
     << svg_num(hi) << "</text>\n"
     << "<text x=\"" << lx - 8 << "\" y=\"" << ly + lh << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
     << svg_num(lo) << "</text>\n"
     << "<text x=\"" << lx + lw << "\" y=\"" << ly + lh + 16
     << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">epoch " << max_epoch << "</text>\n";
  os << polyline(report.orthogonal_log, lx, ly, lw, lh, max_epoch, lo, hi, "#1f77b4");
  os << polyline(report.random_log, lx, ly, lw, lh, max_epoch, lo, hi, "#d62728");

  // Right: per-joint validation MAE, orthogonal vs random.
  const double bx = 500, by = 40, bw = 360, bh = 260;
  const auto& ov = report.orthogonal_validation.per_joint_mae_deg;
  const auto& rv = report.random_validation.per_joint_mae_deg;
  double vmax = 1.0;
  for (double v : ov) vmax = std::max(vmax, v);
  for (double v : rv) vmax = std::max(vmax, v);
  os << "<text x=\"" << bx << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">Validation MAE per joint (deg)</text>\n"
     << "<rect x=\"" << bx << "\" y=\"" << by << "\" width=\"" << bw << "\" height=\"" << bh
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::size_t k = std::max(ov.size(), rv.size());
  const double group = k ? bw / static_cast<double>(k) : bw;
  for (std::size_t j = 0; j < k; ++j) {
    const double gx = bx + j * group;
    auto bar = [&](double v, double offset, const char* color) {
      const double h = bh * v / vmax;
      os << "<rect x=\"" << svg_num(gx + offset) << "\" y=\"" << svg_num(by + bh - h) << "\" width=\""
         << svg_num(group * 0.35) << "\" height=\"" << svg_num(h) << "\" fill=\"" << color << "\"/>\n";
    };
    if (j < ov.size()) bar(ov[j], group * 0.12, "#1f77b4");
    if (j < rv.size()) bar(rv[j], group * 0.5, "#d62728");
    os << "<text x=\"" << svg_num(gx + group / 2) << "\" y=\"" << by + bh + 14
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">J" << j + 1 << "</text>\n";
  }
  os << "<text x=\"" << bx - 6 << "\" y=\"" << by + 10 << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
     << svg_num(vmax) << "</text>\n";
  os << "<rect x=\"60\" y=\"330\" width=\"12\" height=\"12\" fill=\"#1f77b4\"/>"
     << "<text x=\"78\" y=\"341\" font-family=\"sans-serif\" font-size=\"12\">orthogonal</text>\n"
     << "<rect x=\"170\" y=\"330\" width=\"12\" height=\"12\" fill=\"#d62728\"/>"
     << "<text x=\"188\" y=\"341\" font-family=\"sans-serif\" font-size=\"12\">random</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> export_report(const ComparisonReport& report, ReportFormat format, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& body) {
    const auto path = (fs::path(dir) / name).string();
    write_file(path, body);
    written.push_back(path);
  };
  if (format == ReportFormat::Svg) {
    put("summary.svg", comparison_svg(report));
    return written;
  }
  put("loss_orthogonal.csv", loss_csv(report.orthogonal_log));
  put("loss_random.csv", loss_csv(report.random_log));
  put("eval_orthogonal_train.csv", eval_csv({report.orthogonal_train}));
  put("eval_orthogonal_validation.csv", eval_csv({report.orthogonal_validation}));
  put("eval_random_train.csv", eval_csv({report.random_train}));
  put("eval_random_validation.csv", eval_csv({report.random_validation}));
  put("table_validation.csv", eval_csv({report.random_validation, report.orthogonal_validation}, {"random", "orthogonal"}));
  return written;
}

}  // namespace armpose
