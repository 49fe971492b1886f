#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid_model.hpp"
#include "gridsec/power_flow.hpp"

namespace gridsec {

/// The damped Newton solve for an overload bias did not reach the target.
class InfeasibleTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stealthy false-data-injection campaign built from the attacker's model
/// snapshot. When `target_branch` and `overload_fraction` are set, the bias is
/// re-solved every hour from the current state; otherwise `bias` is used as is.
struct AttackSpec {
  StateVector bias;  // additive offsets on theta / v; slack angle offset must be 0
  GridModel attacker_model;
  int start_hour = 0;
  int end_hour = 0;  // exclusive
  std::optional<std::size_t> target_branch;
  std::optional<double> overload_fraction;

  bool active_at(int hour) const noexcept { return hour >= start_hour && hour < end_hour; }
  void validate() const;
};

struct AttackedMeasurements {
  MeasurementVector z_a;
  std::vector<bool> applied;  // true where the forged value differs from the clean one
};

/// x + c, element-wise on angles and magnitudes.
StateVector biased_state(const StateVector& x, const StateVector& c);

/// h evaluated on the attacker's model at x + c.
Eigen::VectorXd forge(const GridModel& attacker_model, const StateVector& x, const StateVector& c);

/// Bias on a single endpoint angle of the target branch (the to-bus unless it
/// is the slack) such that the forged from-end P flow equals
/// (1 + fraction) times the flow at x.
StateVector solve_overload_bias(const GridModel& attacker_model, const StateVector& x, std::size_t target_branch,
                                double overload_fraction);

/// Bias for `hour`: re-solved for overload attacks, fixed otherwise.
StateVector bias_for(const AttackSpec& spec, const StateVector& x);

/// Substitutes the forged vector for the whole measurement vector inside
/// [start_hour, end_hour); outside the window returns `clean` untouched.
AttackedMeasurements apply_attack(const MeasurementVector& clean, const Eigen::VectorXd& forged,
                                  const AttackSpec& spec, int hour);

}  // namespace gridsec
