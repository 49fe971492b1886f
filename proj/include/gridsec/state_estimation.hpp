#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "gridsec/grid_model.hpp"
#include "gridsec/power_flow.hpp"

namespace gridsec {

/// Gain matrix H'WH is singular: the measurement set cannot determine the state.
class UnobservableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ThresholdRule {
  chi_squared_quantile,  // eta^2 = chi2_inv(confidence, dof) / mean(w)
  mean_plus_two_sd,      // eta^2 = (dof + 2 sqrt(2 dof)) / mean(w)
};

struct EstimatorConfig {
  Eigen::VectorXd weights;  // 1/sigma^2 per measurement; 0 marks a missing entry
  int max_iter = 20;
  double convergence_tol = 1e-9;
  double residual_threshold_eta = 1.0;
  double confidence = 0.95;
  ThresholdRule threshold_rule = ThresholdRule::chi_squared_quantile;
  FlowModel flow_model = FlowModel::ac;

  static EstimatorConfig uniform(std::size_t m, double sigma);
  void validate(std::size_t measurement_count) const;
};

struct EstimationResult {
  StateVector x_hat;
  double residual_norm = 0.0;  // ||z - h(x_hat)||_2 over weighted entries
  double objective = 0.0;      // (z - h)' W (z - h)
  int iterations = 0;
  bool converged = false;
  bool bdd_alarm = false;
};

/// Weighted least squares by Gauss-Newton, warm started from the DC solution
/// and damped by backtracking on the objective.
EstimationResult wls_estimate(const GridModel& model, const Eigen::VectorXd& z, const EstimatorConfig& config);

/// residual_norm > eta (equality does not alarm).
bool bdd_check(const EstimationResult& result, const EstimatorConfig& config) noexcept;

/// WLS objective J(x) for an arbitrary state.
double wls_objective(const GridModel& model, const Eigen::VectorXd& z, const EstimatorConfig& config,
                     const StateVector& x);

/// Residual threshold for the configured rule and confidence, with
/// dof = (#weights > 0) - free states. Throws ValidationError when dof <= 0.
double default_eta(const GridModel& model, const EstimatorConfig& config);

}  // namespace gridsec
