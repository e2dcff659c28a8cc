#pragma once

#include "motoclass/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace motoclass {

enum class Loss { kHinge, kSquaredHinge };
enum class Penalty { kL1, kL2 };
enum class MultiClass { kOvr, kCrammerSinger };

const char* to_string(Loss loss);
const char* to_string(Penalty penalty);
const char* to_string(MultiClass mc);
Loss loss_from_string(const std::string& s);
Penalty penalty_from_string(const std::string& s);
MultiClass multi_class_from_string(const std::string& s);

/// One solver configuration.
///
/// Valid combinations: penalty L1 requires squared hinge loss and dual=false;
/// hinge loss requires dual=true. With penalty L2 the dual flag is honored
/// semantically but both routes share the dual coordinate-descent solver
/// (the primal optimum is unique in w, so the flag cannot change the result).
struct SvmScenario {
  double C = 1.0;
  double tol = 1e-4;
  Loss loss = Loss::kSquaredHinge;
  Penalty penalty = Penalty::kL2;
  bool dual = true;
  MultiClass multi_class = MultiClass::kOvr;
  int max_iter = 1000;
  bool fit_intercept = true;
  double intercept_scaling = 1.0;
  /// Per-class cost multipliers aligned with LinearModel::classes order;
  /// empty means all ones.
  std::vector<double> class_weights;

  /// Throws ConfigError naming the violated rule.
  void validate() const;
};

/// Rows are examples. Binary labels are +1/-1; Crammer-Singer labels are
/// class indices 0..K-1.
struct TrainingSet {
  Eigen::MatrixXd features;
  Eigen::VectorXi labels;

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }

  /// Throws InvalidInputError on shape mismatch, empty data, non-finite
  /// values, or labels outside the expected domain.
  void validate(MultiClass mc) const;
};

struct Diagnostics {
  int iterations = 0;
  double final_objective = 0.0;
  double max_kkt_violation = 0.0;
  bool converged = false;
  std::uint64_t shuffle_seed = 0;
};

/// Trained linear classifier: one weight row and intercept per class
/// (a single row for binary models).
struct LinearModel {
  Eigen::MatrixXd weights;      // K x d
  Eigen::VectorXd intercepts;   // K
  std::vector<int> classes;     // binary: {-1, +1}; Crammer-Singer: 0..K-1
  SvmScenario scenario;
  Diagnostics diagnostics;

  Index dim() const { return weights.cols(); }
  bool is_multiclass() const { return scenario.multi_class == MultiClass::kCrammerSinger; }
};

struct TrainOptions {
  std::uint64_t seed = 0;
  /// When set, receives after every full coordinate pass the value the
  /// solver is descending: the dual objective for the dual routes, the
  /// primal objective for the l1 route (diagnostic hook for tests).
  std::vector<double>* objective_trace = nullptr;
};

/// Validates the scenario and dispatches to the matching solver.
/// With fit_intercept the design is augmented with a constant column equal
/// to intercept_scaling; the learned weight on it is regularized and the
/// reported intercept is that weight times intercept_scaling.
LinearModel train(const TrainingSet& data, const SvmScenario& scenario,
                  const TrainOptions& options = {});

/// Dual coordinate descent for L2-penalized hinge / squared-hinge loss.
/// Stops when the largest projected-gradient violation over a full pass,
/// re-evaluated against the frozen iterate, drops below tol.
LinearModel train_dual_cd(const TrainingSet& data, const SvmScenario& scenario,
                          const TrainOptions& options = {});

/// Cyclic coordinate Newton descent with line search for
/// L1-penalized squared-hinge loss. The solution may be exactly sparse.
LinearModel train_primal_l1(const TrainingSet& data, const SvmScenario& scenario,
                            const TrainOptions& options = {});

/// Dual coordinate descent for the Crammer-Singer multiclass formulation.
LinearModel train_crammer_singer(const TrainingSet& data, const SvmScenario& scenario,
                                 const TrainOptions& options = {});

/// Per-class scores w_k . x + intercept_k (one entry for binary models).
Eigen::VectorXd decision_function(const LinearModel& model, const Eigen::VectorXd& x);

/// Binary decision value. Throws DimensionError for multiclass models.
double decision_value(const LinearModel& model, const Eigen::VectorXd& x);

/// Binary: +1 iff decision > 0 (ties to the negative class).
/// Crammer-Singer: argmax score, ties to the lowest class index.
int predict(const LinearModel& model, const Eigen::VectorXd& x);

/// Exact primal objective of the model's scenario on the given data,
/// including the regularized intercept term.
double objective_value(const LinearModel& model, const TrainingSet& data);

}  // namespace motoclass
