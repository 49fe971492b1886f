#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid_model.hpp"
#include "gridsec/power_flow.hpp"

namespace gridsec {

class InsufficientHistoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero season mean, zero level or a non-positive seasonal index.
class DegenerateSeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SmoothingWeights {
  double alpha = 0.2;
  double beta = 0.05;
  double gamma = 0.2;

  bool operator==(const SmoothingWeights&) const = default;
};

/// Multiplicative-seasonal Holt-Winters state for one meter.
///
/// `seasonal[t % period]` holds S_{t-p} for the next sample index t =
/// `samples_seen`. While `warmup_remaining > 0` the verdicts are flagged as
/// training, alarms are suppressed and the variance is the running mean of
/// squared one-step errors; afterwards it is an exponentially weighted
/// average that is not updated on alarmed steps.
struct HoltWintersState {
  double level = 0.0;
  double trend = 0.0;
  std::vector<double> seasonal;
  SmoothingWeights weights;
  int period = 24;
  double variance = 0.0;
  long variance_samples = 0;
  long samples_seen = 0;
  double k_sigma = 3.0;
  double variance_decay = 0.99;
  long warmup_remaining = 0;
};

struct AnomalyVerdict {
  double forecast = 0.0;
  double error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool alarm = false;
  bool in_training = true;
};

/// Initial components from at least two full seasons, then a replay of the
/// recurrences over the rest of the history to position the state after the
/// last sample and to estimate the one-step error variance.
HoltWintersState hw_init(std::span<const double> history, int period, const SmoothingWeights& weights,
                         double k_sigma = 3.0, long warmup = 0);

/// Forecast for the next sample, then the level/trend/seasonal update with z.
std::pair<HoltWintersState, AnomalyVerdict> hw_step(HoltWintersState state, double z);

/// Verdict for z without touching the state.
AnomalyVerdict hw_peek(const HoltWintersState& state, double z);

/// Advances time by one sample without observing it (level follows the trend).
HoltWintersState hw_skip(HoltWintersState state);

/// Grid search over {0.05, 0.10, ..., 0.95}^3 minimising the in-sample
/// one-step RMSE; ties keep the smallest (alpha, beta, gamma).
SmoothingWeights fit_smoothing(std::span<const double> history, int period);

/// In-sample one-step RMSE of the replay used by hw_init.
double in_sample_rmse(std::span<const double> history, int period, const SmoothingWeights& weights);

/// True when z passes both the centralised residual limit and every
/// per-measurement forecast limit.
bool joint_stealth_check(const Eigen::VectorXd& z, const Eigen::VectorXd& z_hat, const StateVector& x_hat,
                         const GridModel& model, double r_c, const Eigen::VectorXd& r_d);

struct DetectorConfig {
  int period = 24;
  int init_seasons = 2;
  int warmup_seasons = 3;
  double k_sigma = 3.0;
  double variance_decay = 0.99;
  bool fit_weights = true;
  SmoothingWeights weights;           // used when fit_weights is false
  std::vector<double> k_sigma_override;  // optional, one per meter

  long training_length() const noexcept {
    return static_cast<long>(period) * (init_seasons + warmup_seasons);
  }
  void validate() const;
};

/// One Holt-Winters detector per meter. Collects history until
/// `init_seasons` full seasons are available, fits weights, and then steps
/// each meter independently.
class DistributedDetector {
 public:
  DistributedDetector(std::size_t meters, DetectorConfig config);

  /// Verdicts for the current sample vector. With `observe == false` the
  /// forecasters only advance time (used while the grid is perturbed).
  std::vector<AnomalyVerdict> step(const Eigen::VectorXd& z, bool observe = true);
  /// Per-meter variant; unobserved meters only advance time, or repeat their
  /// last sample while history is still being collected.
  std::vector<AnomalyVerdict> step(const Eigen::VectorXd& z, const std::vector<bool>& observe);

  bool initialised() const noexcept { return initialised_; }
  long samples_seen() const noexcept { return t_; }
  std::size_t meter_count() const noexcept { return meters_; }
  const HoltWintersState& state(std::size_t meter) const { return states_.at(meter); }
  const DetectorConfig& config() const noexcept { return config_; }

 private:
  std::size_t meters_;
  DetectorConfig config_;
  bool initialised_ = false;
  long t_ = 0;
  std::vector<std::vector<double>> history_;
  std::vector<HoltWintersState> states_;
};

}  // namespace gridsec
