#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid_model.hpp"
#include "gridsec/state_estimation.hpp"

namespace gridsec {

/// No D-FACTS branch falls inside the perturbation scope.
class NoDfactsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MtdScope { all_dfacts, neighborhood_of_alarm };

struct MtdConfig {
  double perturbation_fraction = 0.20;
  double max_perturbation_fraction = 0.50;
  MtdScope scope = MtdScope::all_dfacts;
  int hold_cycles = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct Perturbation {
  std::size_t branch = 0;
  double delta_b = 0.0;

  bool operator==(const Perturbation&) const = default;
};

enum class MtdOutcome { confirmed_attack, false_trigger };

struct MtdEvent {
  int trigger_hour = 0;
  int verify_hour = 0;
  std::vector<std::size_t> alarmed_measurements;
  std::vector<Perturbation> perturbed_branches;
  double pre_residual = 0.0;
  double post_residual = 0.0;
  MtdOutcome outcome = MtdOutcome::false_trigger;
  bool deferred = false;  // verification waited one extra cycle for convergence
};

std::string to_string(MtdScope scope);
std::string to_string(MtdOutcome outcome);
MtdScope scope_from_string(const std::string& s);

/// Branches in scope: every D-FACTS branch, or the D-FACTS branches incident
/// to an endpoint of a branch carrying an alarmed measurement.
std::vector<std::size_t> perturbation_scope(const GridModel& model, MtdScope scope,
                                            std::span<const std::size_t> alarmed_measurements);

/// +-fraction * |b| on each in-scope branch, sign drawn from `rng`.
std::vector<Perturbation> select_perturbation(const GridModel& model, const MtdConfig& config,
                                              std::span<const std::size_t> alarmed_measurements, std::mt19937_64& rng);

/// Same, with a generator seeded from `config.rng_seed`.
std::vector<Perturbation> select_perturbation(const GridModel& model, const MtdConfig& config,
                                              std::span<const std::size_t> alarmed_measurements);

GridModel apply_mtd(GridModel model, std::span<const Perturbation> perturbations);
GridModel clear_mtd(GridModel model);

/// Event-triggered MTD loop for one defender. `model()` is the grid as it is
/// physically configured for the next measurement cycle; measurements for an
/// hour must be generated against it before calling `step`.
class MtdController {
 public:
  MtdController(GridModel base, MtdConfig config, EstimatorConfig estimator);

  struct StepResult {
    EstimationResult estimate;
    std::optional<MtdEvent> event;  // set when a verification completes
    bool perturbation_applied = false;
    bool perturbation_cleared = false;
  };

  /// Estimates with the current model, completes a pending verification, and
  /// on an alarm while idle applies a new perturbation for the next cycle.
  /// `estimator_override` replaces the configured estimator for this cycle
  /// only (e.g. zero weights for meters that did not report).
  StepResult step(int hour, const Eigen::VectorXd& z, bool alarm, std::span<const std::size_t> alarmed_measurements,
                  const EstimatorConfig* estimator_override = nullptr);

  const GridModel& model() const noexcept { return model_; }
  const GridModel& base_model() const noexcept { return base_; }
  bool perturbation_active() const noexcept { return pending_.has_value() || held_ > 0; }
  const MtdConfig& config() const noexcept { return config_; }
  const EstimatorConfig& estimator() const noexcept { return estimator_; }
  const std::vector<MtdEvent>& events() const noexcept { return events_; }

 private:
  GridModel base_;
  GridModel model_;
  MtdConfig config_;
  EstimatorConfig estimator_;
  std::mt19937_64 rng_;
  std::optional<MtdEvent> pending_;
  int held_ = 0;  // cycles the current perturbation has been measured under
  std::vector<MtdEvent> events_;
};

}  // namespace gridsec
