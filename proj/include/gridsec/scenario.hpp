#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gridsec/adversary_channel.hpp"
#include "gridsec/fdi_attack.hpp"
#include "gridsec/forecasting.hpp"
#include "gridsec/grid_authority.hpp"
#include "gridsec/grid_model.hpp"
#include "gridsec/mtd_engine.hpp"
#include "gridsec/secure_channel.hpp"
#include "gridsec/state_estimation.hpp"

namespace gridsec {

/// Invalid or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Daily load shape: Gaussian bumps on a flat base, renormalised so the
/// noise-free mean over a period equals `base`.
struct LoadProfileConfig {
  double base = 0.8;
  std::vector<double> peak_hours{8.0, 18.0};
  std::vector<double> peak_amplitudes{0.25, 0.35};
  double peak_width = 2.5;
  double noise = 0.005;  // per-bus multiplicative, standard deviation

  void validate(int period) const;
};

/// Noise-free loading factor for `hour`.
double profile_factor(const LoadProfileConfig& profile, int hour, int period);

/// Per-bus loading factors for `hour`, with multiplicative noise drawn from `rng`.
Eigen::VectorXd synth_load_profile(const LoadProfileConfig& profile, int hour, int period, std::size_t buses,
                                   std::mt19937_64& rng);

struct AttackConfig {
  int start_hour = 240;
  std::optional<int> end_hour;  // exclusive; defaults to the end of the run
  int target_from = 1;
  int target_to = 5;
  double overload_fraction = 0.15;
  std::vector<double> bias_theta;  // fixed bias instead of an overload target, radians per bus
};

struct MtdSettings {
  bool enabled = false;
  MtdConfig config;
  std::vector<int> forced_trigger_hours;
};

struct EstimatorSettings {
  double confidence = 0.95;
  ThresholdRule threshold_rule = ThresholdRule::chi_squared_quantile;
  int max_iter = 20;
  double convergence_tol = 1e-9;
  FlowModel flow_model = FlowModel::ac;
};

struct TelemetrySettings {
  bool enabled = true;
  AuthorityConfig authority;
  ChannelScript script;
};

struct ScenarioConfig {
  std::string case_path;
  int total_hours = 400;
  int season_period = 24;
  std::uint64_t seed = 1;
  double noise_sigma = 0.01;
  double max_perturbation_fraction = 0.5;
  LoadProfileConfig load;
  std::optional<AttackConfig> attack;
  MtdSettings mtd;
  DetectorConfig detector;
  EstimatorSettings estimator;
  TelemetrySettings telemetry;
  bool record_meters = true;

  /// Relative paths (case file, channel script) resolve against `base_dir`.
  static ScenarioConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
  nlohmann::json to_json() const;
  void validate() const;
};

ScenarioConfig load_config(const std::filesystem::path& path);

struct HourRecord {
  int hour = 0;
  double residual_norm = 0.0;
  double eta = 0.0;
  bool bdd_alarm = false;
  bool converged = true;
  int iterations = 0;
  bool distributed_alarm = false;
  int alarmed_meters = 0;
  bool forced_trigger = false;
  bool attack_active = false;
  bool mtd_active = false;  // measurements taken under a perturbed grid
  int verified_reports = 0;
  int rejected_reports = 0;
  int missing_meters = 0;
  int node_alarms = 0;
  std::optional<MtdEvent> event;
};

struct RunTrace {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  double eta = 0.0;
  long training_length = 0;
  std::optional<std::size_t> target_meter;
  std::vector<std::string> meter_labels;
  std::vector<SampleScale> meter_scales;
  std::vector<HourRecord> hours;
  // hours x meters, filled when record_meters is set
  Eigen::MatrixXd true_flow;
  Eigen::MatrixXd reported;
  Eigen::MatrixXd forecast;
  Eigen::MatrixXd lower;
  Eigen::MatrixXd upper;
  Eigen::MatrixXi meter_alarm;
  Eigen::MatrixXi meter_present;
  std::vector<MtdEvent> events;
  std::vector<ProtocolEvent> protocol;
  std::vector<AdversaryLogEntry> adversary;
};

/// Full hour-stepped simulation. Deterministic for a given config and seed.
RunTrace run(const ScenarioConfig& config, std::optional<std::uint64_t> seed = std::nullopt);

/// Writes measurements.csv, residual.csv, events.csv, protocol.csv and
/// adversary.csv into `dir` (created if needed).
void emit_csv(const RunTrace& trace, const std::filesystem::path& dir);

/// Independent generator for one named stream of a run.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream);

/// Per-meter quantiser range: a power of two covering +-1.5x the peak
/// magnitude of the noise-free flows over one day (at least 2.0), centred on 0.
std::vector<SampleScale> meter_scales(const GridModel& model, const LoadProfileConfig& profile, int period);

std::string meter_label(const GridModel& model, std::size_t k);

}  // namespace gridsec
