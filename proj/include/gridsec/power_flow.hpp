#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gridsec/grid_model.hpp"

namespace gridsec {

/// Bus voltage angles (rad, slack at 0) and magnitudes (p.u.).
struct StateVector {
  Eigen::VectorXd theta;
  Eigen::VectorXd v;

  static StateVector flat(std::size_t bus_count);
  /// The solved operating point stored in the case file.
  static StateVector base_case(const GridModel& model);

  std::size_t bus_count() const noexcept { return static_cast<std::size_t>(theta.size()); }
};

struct MeasurementVector {
  Eigen::VectorXd z;
  int hour = 0;
};

struct NoiseModel {
  Eigen::VectorXd sigma;
  std::uint64_t seed = 0;

  static NoiseModel uniform(std::size_t m, double sigma, std::uint64_t seed);
};

enum class FlowModel { ac, dc };

/// Active power leaving the given end of the branch (AC pi model, no taps).
double ac_p_flow(const Branch& branch, const StateVector& x, FlowEnd end = FlowEnd::from);
/// Reactive power leaving the given end of the branch.
double ac_q_flow(const Branch& branch, const StateVector& x, FlowEnd end = FlowEnd::from);
/// -b (theta_i - theta_j) for the given end.
double dc_p_flow(const Branch& branch, const StateVector& x, FlowEnd end = FlowEnd::from);

/// Noise-free measurement function h(x), ordered by the model's measurement map.
/// The DC model only accepts active-power measurements.
Eigen::VectorXd h_eval(const GridModel& model, const StateVector& x, FlowModel kind = FlowModel::ac);

/// Free states: angles of every non-slack bus, then (AC only) every magnitude.
std::size_t free_state_count(const GridModel& model, FlowModel kind = FlowModel::ac);
Eigen::VectorXd pack_state(const GridModel& model, const StateVector& x, FlowModel kind = FlowModel::ac);
/// Inverse of pack_state. In DC mode magnitudes are copied from `magnitudes_from`.
StateVector unpack_state(const GridModel& model, const Eigen::VectorXd& packed, const StateVector& magnitudes_from,
                         FlowModel kind = FlowModel::ac);

/// Analytic dh/dx over the free states (m x n).
Eigen::SparseMatrix<double> jacobian_sparse(const GridModel& model, const StateVector& x,
                                            FlowModel kind = FlowModel::ac);
Eigen::MatrixXd jacobian(const GridModel& model, const StateVector& x, FlowModel kind = FlowModel::ac);

/// h(x) plus seeded Gaussian noise.
MeasurementVector generate_measurements(const GridModel& model, const StateVector& x, const NoiseModel& noise,
                                        int hour = 0);
/// Same, drawing from a caller-owned generator (scenario streams).
MeasurementVector generate_measurements(const GridModel& model, const StateVector& x,
                                        const Eigen::VectorXd& sigma, std::mt19937_64& rng, int hour = 0);

/// DC bus injections B*theta using effective susceptances.
Eigen::VectorXd dc_injections(const GridModel& model, const StateVector& x);

/// Solves the DC power flow for the given bus injections (slack row dropped).
/// Magnitudes are taken from `magnitudes`.
StateVector solve_dc_state(const GridModel& model, const Eigen::VectorXd& injections,
                           const Eigen::VectorXd& magnitudes);

}  // namespace gridsec
