#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "armpose/joint_design.hpp"
#include "armpose/kinematics.hpp"
#include "armpose/network.hpp"
#include "armpose/renderer.hpp"

namespace armpose {

struct ConfigDigests {
  std::string robot;
  std::string camera;
  std::string scene;
  bool operator==(const ConfigDigests&) const = default;
};

struct ManifestSample {
  std::string file;  // relative to the dataset directory
  std::vector<double> joints_deg;
  bool operator==(const ManifestSample&) const = default;
};

struct DatasetManifest {
  std::string id;
  Provenance provenance = Provenance::Orthogonal;
  std::uint64_t seed = 0;
  ConfigDigests digests;
  int width = 0;
  int height = 0;
  std::vector<ManifestSample> samples;
  bool operator==(const DatasetManifest&) const = default;
};

inline constexpr const char* kManifestFile = "manifest.json";

std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const std::string& text);

/// Reads `dir/manifest.json` and checks every sample file exists and parses
/// as an RGBD image of the declared size. With a model, joint vectors are
/// also checked against its limits (LimitViolation).
DatasetManifest load_manifest(const std::string& dir, const RobotModel* model = nullptr);

std::string camera_to_json(const CameraModel& camera);
std::string scene_to_json(const SceneConfig& scene);

/// Renders one normalized RGBD file per pose plus the manifest. Throws
/// LimitViolation (before writing anything) or Io.
DatasetManifest generate_dataset(const JointDesign& design, const RobotModel& model,
                                 const CameraModel& camera, const SceneConfig& scene,
                                 const std::string& out_dir, std::uint64_t seed,
                                 const std::string& id = "");

/// Images and scaled targets held in memory for training and evaluation.
struct Dataset {
  std::string id;
  Tensor<float> images;   // [N, H, W, 4]
  Tensor<float> targets;  // [N, joints], scaled
  std::vector<std::vector<double>> joints_deg;

  std::size_t size() const { return joints_deg.size(); }
};

/// Throws OutOfBound if an angle exceeds the scaler's bound.
Dataset load_dataset(const DatasetManifest& manifest, const std::string& dir, const TargetScaler& scaler);

struct TrainConfig {
  double learning_rate = 1e-6;
  int batch_size = 144;
  int epochs = 20000;
  double dropout_p = 0.05;
  std::string optimizer = "adam";
  std::uint64_t seed = 0;
  std::optional<double> stopping_loss;
  Activation conv_activation = Activation::Linear;
  double target_margin = 1.0;
  double target_bound_deg = 55.0;

  /// Hyperparameters as published: lr 1e-6, 20000 epochs, dropout 0.05, batch 144.
  static TrainConfig paper();
  /// Committed synthetic-data setting: lr 1e-4, 2000 epochs, otherwise as paper().
  static TrainConfig desk_scale();

  /// Throws InvalidConfig / InvalidProbability. `dataset_size` 0 skips the
  /// batch-size upper bound.
  void validate(std::size_t dataset_size = 0) const;
  TargetScaler scaler() const { return TargetScaler(target_bound_deg, target_margin); }
};

/// Flagship network sized for `height` x `width` inputs using the config's
/// dropout rate and conv activation.
NetworkSpec network_for(const TrainConfig& config, int height, int width, int outputs = 7);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  bool operator==(const EpochRecord&) const = default;
};

struct TrainLog {
  /// Mean training loss of each epoch, measured during that epoch's forward
  /// passes (before its updates).
  std::vector<EpochRecord> records;
  /// Eval-mode training-set MSE of the initial parameters.
  double initial_loss = 0.0;
  /// Eval-mode training-set MSE of the returned parameters.
  double final_loss = 0.0;
  double wall_seconds = 0.0;
  bool stopped_early = false;
};

struct TrainResult {
  NetworkSpec spec;
  NetworkParams<float> params;
  TrainLog log;
};

/// Adam on mini-batches of `batch_size` (one full batch per epoch when it
/// equals the dataset size; otherwise a seeded shuffle per epoch). Halts at
/// `epochs` or once an epoch loss is <= `stopping_loss`.
TrainResult train(const Dataset& data, const NetworkSpec& spec, const TrainConfig& config);

/// Eval-mode predictions [N, outputs], one sample at a time so each result is
/// independent of its neighbours.
Tensor<float> predict_dataset(const NetworkSpec& spec, const NetworkParams<float>& params, const Dataset& data);

/// Eval-mode MSE over the dataset in scaled target units.
double dataset_loss(const NetworkSpec& spec, const NetworkParams<float>& params, const Dataset& data);

struct EvalReport {
  std::string dataset_id;
  std::string model_id;
  std::vector<double> per_joint_mae_deg;
  double average_deg = 0.0;
  bool operator==(const EvalReport&) const = default;
};

/// Builds a report from predicted and true angles (degrees, row-major n x k).
/// Per-joint errors are summed in sorted order, so sample order never matters.
EvalReport make_report(const std::vector<double>& predicted_deg, const std::vector<double>& true_deg,
                       std::size_t joints, std::string dataset_id, std::string model_id);

EvalReport evaluate(const NetworkSpec& spec, const NetworkParams<float>& params, const Dataset& data,
                    const TargetScaler& scaler, const std::string& model_id = "");

/// Hex CRC-64 of the encoded model.
std::string model_id(const NetworkSpec& spec, const NetworkParams<float>& params);

struct ComparisonReport {
  TrainLog orthogonal_log;
  TrainLog random_log;
  EvalReport orthogonal_train;
  EvalReport orthogonal_validation;
  EvalReport random_train;
  EvalReport random_validation;
  TrainResult orthogonal_model;
  TrainResult random_model;
};

/// Trains one model per design with identical spec, config and seed, then
/// evaluates each on its own training set and on the validation set.
ComparisonReport compare_designs(const Dataset& orthogonal, const Dataset& random, const Dataset& validation,
                                 const TrainConfig& config);

/// `epoch,loss`, one row per recorded epoch.
std::string loss_csv(const TrainLog& log);
/// `dataset,j1..jk,average`; labels[i] names rows[i] (defaults to the dataset id).
std::string eval_csv(const std::vector<EvalReport>& rows, const std::vector<std::string>& labels = {});
/// Fixed-width table, one decimal place.
std::string eval_table(const std::vector<EvalReport>& rows, const std::vector<std::string>& labels);
/// Loss curves plus grouped per-joint validation bars.
std::string comparison_svg(const ComparisonReport& report);

enum class ReportFormat { Csv, Svg };

/// Writes one comparison artifact set into `dir`: loss_{orthogonal,random}.csv,
/// eval_{orthogonal,random}_{train,validation}.csv, table_validation.csv and
/// summary.svg. Returns the paths written.
std::vector<std::string> export_report(const ComparisonReport& report, ReportFormat format, const std::string& dir);

}  // namespace armpose
