#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gridsec {

/// Raised when case-file text cannot be parsed. Carries the 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a structurally valid model breaks a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BusKind { slack, pv, pq };

struct Bus {
  int id = 0;  // 1-based, dense
  BusKind kind = BusKind::pq;
  double base_voltage_magnitude = 1.0;  // p.u., solved operating point of the case
  double base_voltage_angle = 0.0;      // rad, relative to the slack bus

  bool operator==(const Bus&) const = default;
};

/// Series admittance g + jb (per-unit) plus the per-end shunt susceptance of
/// the pi model. `b_perturbation` is the D-FACTS offset currently applied.
struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double g = 0.0;
  double b = 0.0;
  double b_sh = 0.0;
  bool dfacts = true;
  double b_perturbation = 0.0;

  bool operator==(const Branch&) const = default;
};

enum class FlowEnd { from, to };
enum class FlowKind { p, q };

/// Binds one entry of the measurement vector to a branch end and quantity.
struct MeasurementBinding {
  std::size_t branch = 0;  // 0-based index into GridModel::branches()
  FlowEnd end = FlowEnd::from;
  FlowKind kind = FlowKind::p;

  bool operator==(const MeasurementBinding&) const = default;
};

/// P and Q at both ends of every branch, grouped per branch as
/// [P_from, Q_from, P_to, Q_to].
std::vector<MeasurementBinding> default_measurements(std::size_t branch_count);

/// P at both ends of every branch (used with the DC flow model).
std::vector<MeasurementBinding> active_power_measurements(std::size_t branch_count);

/// Electrical network used by h(x): buses, branches and the measurement map.
///
/// Everything is fixed after construction except the per-branch susceptance
/// perturbation, which is only accepted on D-FACTS branches and is capped at
/// `max_perturbation_fraction() * |b|`.
class GridModel {
 public:
  GridModel() = default;
  GridModel(std::vector<Bus> buses, std::vector<Branch> branches,
            std::vector<MeasurementBinding> measurements, double max_perturbation_fraction = 0.5);

  const std::vector<Bus>& buses() const noexcept { return buses_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  const std::vector<MeasurementBinding>& measurements() const noexcept { return measurements_; }

  std::size_t bus_count() const noexcept { return buses_.size(); }
  std::size_t branch_count() const noexcept { return branches_.size(); }
  std::size_t measurement_count() const noexcept { return measurements_.size(); }

  /// 0-based index of the slack bus.
  std::size_t slack_index() const noexcept { return slack_; }
  double max_perturbation_fraction() const noexcept { return max_perturbation_fraction_; }

  /// First branch joining the two buses in either orientation.
  std::size_t find_branch(int bus_a, int bus_b) const;

  /// Index of the measurement bound to (branch, end, kind).
  std::size_t find_measurement(std::size_t branch, FlowEnd end, FlowKind kind) const;

  void set_perturbation(std::size_t branch, double delta_b);
  void clear_perturbations() noexcept;
  bool has_perturbation() const noexcept;

  /// Marks exactly the listed branches as D-FACTS equipped; clears
  /// perturbations on branches that lose the device.
  void set_dfacts(const std::vector<std::size_t>& branches);

  void set_measurements(std::vector<MeasurementBinding> measurements);

  bool operator==(const GridModel&) const = default;

 private:
  void validate() const;

  std::vector<Bus> buses_;
  std::vector<Branch> branches_;
  std::vector<MeasurementBinding> measurements_;
  std::size_t slack_ = 0;
  double max_perturbation_fraction_ = 0.5;
};

/// b + b_perturbation.
double effective_susceptance(const Branch& branch) noexcept;

/// Parses MATPOWER case text (mpc.bus / mpc.branch tables). Out-of-service
/// branches are skipped and the default measurement set is attached.
GridModel parse_case(std::string_view text);
GridModel load_case(const std::filesystem::path& path);

nlohmann::json model_to_json(const GridModel& model);
GridModel model_from_json(const nlohmann::json& j);

}  // namespace gridsec
