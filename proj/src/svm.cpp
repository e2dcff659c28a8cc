#include "motoclass/svm.hpp"

#include "motoclass/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace motoclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(Loss loss) {
  return loss == Loss::kHinge ? "hinge" : "squared_hinge";
}

const char* to_string(Penalty penalty) {
  return penalty == Penalty::kL1 ? "l1" : "l2";
}

const char* to_string(MultiClass mc) {
  return mc == MultiClass::kOvr ? "ovr" : "crammer_singer";
}

Loss loss_from_string(const std::string& s) {
  if (s == "hinge") return Loss::kHinge;
  if (s == "squared_hinge") return Loss::kSquaredHinge;
  throw ConfigError("svm: unknown loss '" + s + "'");
}

Penalty penalty_from_string(const std::string& s) {
  if (s == "l1") return Penalty::kL1;
  if (s == "l2") return Penalty::kL2;
  throw ConfigError("svm: unknown penalty '" + s + "'");
}

MultiClass multi_class_from_string(const std::string& s) {
  if (s == "ovr") return MultiClass::kOvr;
  if (s == "crammer_singer") return MultiClass::kCrammerSinger;
  throw ConfigError("svm: unknown multi_class '" + s + "'");
}

void SvmScenario::validate() const {
  if (!(C > 0)) throw ConfigError("svm: C must be positive");
  if (!(tol > 0)) throw ConfigError("svm: tol must be positive");
  if (max_iter <= 0) throw ConfigError("svm: max_iter must be positive");
  if (fit_intercept && !(intercept_scaling > 0)) {
    throw ConfigError("svm: intercept_scaling must be positive");
  }
  for (double cw : class_weights) {
    if (!(cw > 0)) throw ConfigError("svm: class weights must be positive");
  }
  if (multi_class == MultiClass::kOvr) {
    if (penalty == Penalty::kL1) {
      if (loss != Loss::kSquaredHinge) {
        throw ConfigError("svm: l1 penalty requires squared_hinge loss");
      }
      if (dual) throw ConfigError("svm: l1 penalty requires dual=false");
    }
    if (loss == Loss::kHinge && !dual) {
      throw ConfigError("svm: hinge loss requires dual=true");
    }
  }
}

void TrainingSet::validate(MultiClass mc) const {
  if (features.rows() == 0) throw InvalidInputError("svm: empty training set");
  if (features.cols() == 0) throw InvalidInputError("svm: zero-dimensional features");
  if (labels.size() != features.rows()) {
    throw InvalidInputError("svm: " + std::to_string(labels.size()) + " labels for " +
                            std::to_string(features.rows()) + " rows");
  }
  if (!features.allFinite()) throw InvalidInputError("svm: non-finite feature value");
  if (mc == MultiClass::kOvr) {
    for (Index i = 0; i < labels.size(); ++i) {
      if (labels[i] != 1 && labels[i] != -1) {
        throw InvalidInputError("svm: binary labels must be +1/-1, got " +
                                std::to_string(labels[i]));
      }
    }
  } else {
    for (Index i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0) {
        throw InvalidInputError("svm: class indices must be non-negative, got " +
                                std::to_string(labels[i]));
      }
    }
    if (labels.maxCoeff() < 1) {
      throw InvalidInputError("svm: multiclass data must span at least 2 class indices");
    }
  }
}

namespace {

Eigen::MatrixXd augment(const Eigen::MatrixXd& x, const SvmScenario& sc) {
  if (!sc.fit_intercept) return x;
  Eigen::MatrixXd out(x.rows(), x.cols() + 1);
  out.leftCols(x.cols()) = x;
  out.col(x.cols()).setConstant(sc.intercept_scaling);
  return out;
}

/// Per-example cost C * class_weight(label). Binary weights are aligned
/// with classes {-1, +1}; multiclass weights with class indices.
Eigen::VectorXd example_costs(const Eigen::VectorXi& labels, const SvmScenario& sc,
                              int num_classes) {
  std::vector<double> per_class(static_cast<std::size_t>(num_classes), sc.C);
  if (!sc.class_weights.empty()) {
    if (static_cast<int>(sc.class_weights.size()) != num_classes) {
      throw ConfigError("svm: expected " + std::to_string(num_classes) +
                        " class weights, got " + std::to_string(sc.class_weights.size()));
    }
    for (int k = 0; k < num_classes; ++k) {
      per_class[static_cast<std::size_t>(k)] = sc.C * sc.class_weights[static_cast<std::size_t>(k)];
    }
  }
  Eigen::VectorXd c(labels.size());
  for (Index i = 0; i < labels.size(); ++i) {
    const int k = sc.multi_class == MultiClass::kCrammerSinger ? labels[i] : (labels[i] > 0);
    c[i] = per_class[static_cast<std::size_t>(k)];
  }
  return c;
}

double primal_objective_binary(const Eigen::MatrixXd& xaug, const Eigen::VectorXi& y,
                               const Eigen::VectorXd& costs, const Eigen::VectorXd& w,
                               Loss loss, Penalty penalty) {
  double obj = penalty == Penalty::kL2 ? 0.5 * w.squaredNorm() : w.lpNorm<1>();
  const Eigen::VectorXd scores = xaug * w;
  for (Index i = 0; i < y.size(); ++i) {
    const double margin = y[i] * scores[i];
    if (margin < 1) {
      const double h = 1 - margin;
      obj += costs[i] * (loss == Loss::kHinge ? h : h * h);
    }
  }
  return obj;
}

double primal_objective_cs(const Eigen::MatrixXd& xaug, const Eigen::VectorXi& y,
                           const Eigen::VectorXd& costs, const Eigen::MatrixXd& w) {
  double obj = 0.5 * w.squaredNorm();
  for (Index i = 0; i < y.size(); ++i) {
    const Eigen::VectorXd s = w * xaug.row(i).transpose();
    double worst = 0;
    for (Index m = 0; m < s.size(); ++m) {
      if (m == y[i]) continue;
      worst = std::max(worst, s[m] + 1 - s[y[i]]);
    }
    obj += costs[i] * worst;
  }
  return obj;
}

LinearModel finalize_binary(const Eigen::VectorXd& w_aug, const TrainingSet& data,
                            const SvmScenario& sc, Diagnostics diag) {
  LinearModel model;
  model.scenario = sc;
  model.classes = {-1, 1};
  const Index d = data.dim();
  model.weights = w_aug.head(d).transpose();
  model.intercepts.resize(1);
  model.intercepts[0] = sc.fit_intercept ? w_aug[d] * sc.intercept_scaling : 0.0;
  model.diagnostics = diag;
  model.diagnostics.final_objective = objective_value(model, data);
  return model;
}

}  // namespace

LinearModel train_dual_cd(const TrainingSet& data, const SvmScenario& scenario,
                          const TrainOptions& options) {
  scenario.validate();
  data.validate(MultiClass::kOvr);
  if (scenario.penalty != Penalty::kL2) {
    throw ConfigError("svm: dual coordinate descent requires the l2 penalty");
  }

  const Eigen::MatrixXd x = augment(data.features, scenario);
  const Index n = x.rows();
  const Eigen::VectorXd costs = example_costs(data.labels, scenario, 2);
  const bool hinge = scenario.loss == Loss::kHinge;

  Eigen::VectorXd diag_d(n), upper(n), qd(n);
  for (Index i = 0; i < n; ++i) {
    diag_d[i] = hinge ? 0.0 : 0.5 / costs[i];
    upper[i] = hinge ? costs[i] : kInf;
    qd[i] = diag_d[i] + x.row(i).squaredNorm();
  }

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(options.seed);

  const auto projected_gradient = [&](Index i) {
    const double g = data.labels[i] * w.dot(x.row(i)) - 1 + alpha[i] * diag_d[i];
    if (alpha[i] <= 0) return std::min(g, 0.0);
    if (alpha[i] >= upper[i]) return std::max(g, 0.0);
    return g;
  };

  Diagnostics diag;
  double violation = kInf;
  int pass = 0;
  while (pass < scenario.max_iter) {
    rng.shuffle(order);
    for (Index i : order) {
      const double g = data.labels[i] * w.dot(x.row(i)) - 1 + alpha[i] * diag_d[i];
      double pg = g;
      if (alpha[i] <= 0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] >= upper[i]) {
        pg = std::max(g, 0.0);
      }
      if (std::abs(pg) > 1e-12) {
        const double alpha_old = alpha[i];
        alpha[i] = std::min(std::max(alpha_old - g / qd[i], 0.0), upper[i]);
        w += (alpha[i] - alpha_old) * data.labels[i] * x.row(i).transpose();
      }
    }
    ++pass;

    // Rebuild w from alpha so the convergence scan (and the returned model)
    // are free of the drift the incremental updates accumulate.
    w.setZero();
    for (Index i = 0; i < n; ++i) {
      if (alpha[i] != 0) w += alpha[i] * data.labels[i] * x.row(i).transpose();
    }

    violation = 0;
    for (Index i = 0; i < n; ++i) {
      violation = std::max(violation, std::abs(projected_gradient(i)));
    }
    if (options.objective_trace) {
      options.objective_trace->push_back(0.5 * w.squaredNorm() +
                                         0.5 * (diag_d.array() * alpha.array().square()).sum() -
                                         alpha.sum());
    }
    if (violation < scenario.tol) {
      diag.converged = true;
      break;
    }
  }
  diag.iterations = pass;
  diag.max_kkt_violation = violation;
  diag.shuffle_seed = options.seed;
  return finalize_binary(w, data, scenario, diag);
}

LinearModel train_primal_l1(const TrainingSet& data, const SvmScenario& scenario,
                            const TrainOptions& options) {
  scenario.validate();
  data.validate(MultiClass::kOvr);
  if (scenario.penalty != Penalty::kL1) {
    throw ConfigError("svm: the primal coordinate solver requires the l1 penalty");
  }

  const Eigen::MatrixXd x = augment(data.features, scenario);
  const Index n = x.rows();
  const Index dim = x.cols();
  const Eigen::VectorXd costs = example_costs(data.labels, scenario, 2);

  // z_ij = y_i x_ij, so the slack vector is b = 1 - z w elementwise.
  const Eigen::MatrixXd z = data.labels.cast<double>().asDiagonal() * x;
  Eigen::VectorXd col_sq(dim);
  for (Index j = 0; j < dim; ++j) {
    col_sq[j] = (costs.array() * z.col(j).array().square()).sum();
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  std::vector<Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(options.seed);

  constexpr double kSigma = 0.01;
  constexpr int kMaxLineSearch = 20;

  const auto loss_gradient = [&](Index j, double* hessian) {
    double g = 0, h = 0;
    for (Index i = 0; i < n; ++i) {
      if (b[i] > 0) {
        const double tmp = costs[i] * z(i, j);
        g -= tmp * b[i];
        h += tmp * z(i, j);
      }
    }
    if (hessian) *hessian = std::max(2 * h, 1e-12);
    return 2 * g;
  };
  const auto optimality_violation = [&](Index j, double g_loss) {
    const double gp = g_loss + 1, gn = g_loss - 1;
    if (w[j] > 0) return std::abs(gp);
    if (w[j] < 0) return std::abs(gn);
    if (gp < 0) return -gp;
    if (gn > 0) return gn;
    return 0.0;
  };

  Diagnostics diag;
  double violation = kInf;
  int pass = 0;
  while (pass < scenario.max_iter) {
    rng.shuffle(order);
    for (Index j : order) {
      double h = 0;
      const double g_loss = loss_gradient(j, &h);
      const double gp = g_loss + 1, gn = g_loss - 1;

      double d;
      if (gp < h * w[j]) {
        d = -gp / h;
      } else if (gn > h * w[j]) {
        d = -gn / h;
      } else {
        d = -w[j];
      }
      if (std::abs(d) < 1e-12) continue;

      double delta = std::abs(w[j] + d) - std::abs(w[j]) + g_loss * d;
      double d_old = 0, loss_old = 0, loss_new = 0;
      int ls = 0;
      for (; ls < kMaxLineSearch; ++ls) {
        const double d_diff = d_old - d;
        double cond = std::abs(w[j] + d) - std::abs(w[j]) - kSigma * delta;
        const double appxcond = col_sq[j] * d * d + g_loss * d + cond;
        if (appxcond <= 0) {
          b += d_diff * z.col(j);
          break;
        }
        if (ls == 0) {
          loss_old = 0;
          loss_new = 0;
          for (Index i = 0; i < n; ++i) {
            if (b[i] > 0) loss_old += costs[i] * b[i] * b[i];
            b[i] += d_diff * z(i, j);
            if (b[i] > 0) loss_new += costs[i] * b[i] * b[i];
          }
        } else {
          loss_new = 0;
          for (Index i = 0; i < n; ++i) {
            b[i] += d_diff * z(i, j);
            if (b[i] > 0) loss_new += costs[i] * b[i] * b[i];
          }
        }
        cond += loss_new - loss_old;
        if (cond <= 0) break;
        d_old = d;
        d *= 0.5;
        delta *= 0.5;
      }

      w[j] += d;
      if (ls >= kMaxLineSearch) {
        b = Eigen::VectorXd::Ones(n) - z * w;
      }
    }
    ++pass;

    b = Eigen::VectorXd::Ones(n) - z * w;
    violation = 0;
    for (Index j = 0; j < dim; ++j) {
      violation = std::max(violation, optimality_violation(j, loss_gradient(j, nullptr)));
    }
    if (options.objective_trace) {
      options.objective_trace->push_back(
          primal_objective_binary(x, data.labels, costs, w, scenario.loss, scenario.penalty));
    }
    if (violation < scenario.tol) {
      diag.converged = true;
      break;
    }
  }
  diag.iterations = pass;
  diag.max_kkt_violation = violation;
  diag.shuffle_seed = options.seed;
  return finalize_binary(w, data, scenario, diag);
}

LinearModel train_crammer_singer(const TrainingSet& data, const SvmScenario& scenario,
                                 const TrainOptions& options) {
  scenario.validate();
  data.validate(MultiClass::kCrammerSinger);

  const Eigen::MatrixXd x = augment(data.features, scenario);
  const Index n = x.rows();
  const Index dim = x.cols();
  const int k = data.labels.maxCoeff() + 1;
  const Eigen::VectorXd costs = example_costs(data.labels, scenario, k);

  Eigen::VectorXd qd(n);
  for (Index i = 0; i < n; ++i) qd[i] = x.row(i).squaredNorm();

  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(n, k);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, dim);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(options.seed);

  Eigen::VectorXd g(k), bvec(k), alpha_new(k), sorted(k);

  const auto gradient = [&](Index i) {
    g = w * x.row(i).transpose();
    g.array() += 1;
    g[data.labels[i]] -= 1;
  };
  // KKT gap of example i's sub-problem: max gradient over all classes minus
  // min over classes whose alpha can still increase (alpha below its bound).
  const auto kkt_gap = [&](Index i) {
    const int yi = data.labels[i];
    double min_g = kInf, max_g = -kInf;
    for (Index m = 0; m < k; ++m) {
      const double bound = m == yi ? costs[i] : 0.0;
      if (alpha(i, m) < bound && g[m] < min_g) min_g = g[m];
      if (g[m] > max_g) max_g = g[m];
    }
    return max_g - min_g;
  };

  // Equality-constrained box QP over one example's alpha row, solved by the
  // sorted-threshold sweep.
  const auto solve_sub_problem = [&](Index i) {
    const int yi = data.labels[i];
    const double a = qd[i];
    const double c_yi = costs[i];
    sorted = bvec;
    sorted[yi] += a * c_yi;
    std::sort(sorted.data(), sorted.data() + k, std::greater<double>());
    double beta = sorted[0] - a * c_yi;
    Index r = 1;
    for (; r < k && beta < static_cast<double>(r) * sorted[r]; ++r) beta += sorted[r];
    beta /= static_cast<double>(r);
    for (Index m = 0; m < k; ++m) {
      const double cap = m == yi ? c_yi : 0.0;
      alpha_new[m] = std::min(cap, (beta - bvec[m]) / a);
    }
  };

  Diagnostics diag;
  double violation = kInf;
  int pass = 0;
  while (pass < scenario.max_iter) {
    rng.shuffle(order);
    for (Index i : order) {
      if (qd[i] <= 0) continue;
      gradient(i);
      if (kkt_gap(i) <= 1e-12) continue;
      bvec = g - qd[i] * alpha.row(i).transpose();
      solve_sub_problem(i);
      for (Index m = 0; m < k; ++m) {
        const double step = alpha_new[m] - alpha(i, m);
        alpha(i, m) = alpha_new[m];
        if (std::abs(step) >= 1e-12) {
          w.row(m) += step * x.row(i);
        }
      }
    }
    ++pass;

    w.setZero();
    for (Index i = 0; i < n; ++i) {
      for (Index m = 0; m < k; ++m) {
        if (alpha(i, m) != 0) w.row(m) += alpha(i, m) * x.row(i);
      }
    }

    violation = 0;
    for (Index i = 0; i < n; ++i) {
      if (qd[i] <= 0) continue;
      gradient(i);
      violation = std::max(violation, kkt_gap(i));
    }
    if (options.objective_trace) {
      double dual_obj = 0.5 * w.squaredNorm();
      for (Index i = 0; i < n; ++i) {
        for (Index m = 0; m < k; ++m) {
          if (m != data.labels[i]) dual_obj += alpha(i, m);
        }
      }
      options.objective_trace->push_back(dual_obj);
    }
    if (violation < scenario.tol) {
      diag.converged = true;
      break;
    }
  }
  diag.iterations = pass;
  diag.max_kkt_violation = violation;
  diag.shuffle_seed = options.seed;

  LinearModel model;
  model.scenario = scenario;
  model.classes.resize(static_cast<std::size_t>(k));
  std::iota(model.classes.begin(), model.classes.end(), 0);
  model.weights = w.leftCols(data.dim());
  model.intercepts = scenario.fit_intercept
                         ? Eigen::VectorXd(w.col(data.dim()) * scenario.intercept_scaling)
                         : Eigen::VectorXd(Eigen::VectorXd::Zero(k));
  model.diagnostics = diag;
  model.diagnostics.final_objective = objective_value(model, data);
  return model;
}

LinearModel train(const TrainingSet& data, const SvmScenario& scenario,
                  const TrainOptions& options) {
  scenario.validate();
  if (scenario.multi_class == MultiClass::kCrammerSinger) {
    return train_crammer_singer(data, scenario, options);
  }
  if (scenario.penalty == Penalty::kL1) {
    return train_primal_l1(data, scenario, options);
  }
  return train_dual_cd(data, scenario, options);
}

Eigen::VectorXd decision_function(const LinearModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) {
    throw DimensionError("svm: feature vector of size " + std::to_string(x.size()) +
                         " against model of dimension " + std::to_string(model.dim()));
  }
  return model.weights * x + model.intercepts;
}

double decision_value(const LinearModel& model, const Eigen::VectorXd& x) {
  if (model.is_multiclass()) {
    throw DimensionError("svm: decision_value is defined for binary models only");
  }
  return decision_function(model, x)[0];
}

int predict(const LinearModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd scores = decision_function(model, x);
  if (!model.is_multiclass()) {
    return scores[0] > 0 ? 1 : -1;
  }
  Index best = 0;
  for (Index m = 1; m < scores.size(); ++m) {
    if (scores[m] > scores[best]) best = m;
  }
  return model.classes[static_cast<std::size_t>(best)];
}

double objective_value(const LinearModel& model, const TrainingSet& data) {
  const SvmScenario& sc = model.scenario;
  data.validate(sc.multi_class);
  if (data.dim() != model.dim()) {
    throw DimensionError("svm: data dimension " + std::to_string(data.dim()) +
                         " against model dimension " + std::to_string(model.dim()));
  }

  const Eigen::MatrixXd xaug = augment(data.features, sc);
  Eigen::MatrixXd waug(model.weights.rows(), xaug.cols());
  waug.leftCols(model.dim()) = model.weights;
  if (sc.fit_intercept) {
    waug.col(model.dim()) = model.intercepts / sc.intercept_scaling;
  }

  if (sc.multi_class == MultiClass::kCrammerSinger) {
    const int k = static_cast<int>(model.weights.rows());
    if (data.labels.maxCoeff() >= k) {
      throw InvalidInputError("svm: class index beyond model classes");
    }
    return primal_objective_cs(xaug, data.labels, example_costs(data.labels, sc, k), waug);
  }
  return primal_objective_binary(xaug, data.labels, example_costs(data.labels, sc, 2),
                                 waug.row(0).transpose(), sc.loss, sc.penalty);
}

}  // namespace motoclass
