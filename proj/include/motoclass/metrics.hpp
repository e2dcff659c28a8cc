#pragma once

#include "motoclass/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace motoclass {

/// 2x2 confusion counts. Cells are reals so metric identities can be
/// evaluated on fractional tables (e.g. rate-derived cells); counting
/// predictions always yields integers.
struct ContingencyTable {
  double tp = 0;
  double fp = 0;
  double fn = 0;
  double tn = 0;

  double p() const { return tp + fn; }
  double n() const { return fp + tn; }
  double yes() const { return tp + fp; }
  double no() const { return fn + tn; }
  double total() const { return p() + n(); }
};

struct LabeledPrediction {
  bool predicted_positive = false;
  bool truth_positive = false;
};

struct ScoredPrediction {
  double score = 0;
  bool truth_positive = false;
};

struct Rates {
  double tpr = 0;
  double fpr = 0;
  double tnr = 0;
  std::optional<double> precision;  // undefined when no positive predictions
  double accuracy = 0;
};

/// Tallies the four cells. Throws InvalidInputError on an empty list.
ContingencyTable contingency(std::span<const LabeledPrediction> predictions);

/// tpr=TP/P, fpr=FP/N, tnr=TN/N, precision=TP/Yes, accuracy=(TP+TN)/(P+N).
/// Throws InvalidInputError when P=0 or N=0; precision is nullopt when
/// Yes=0.
Rates rates(const ContingencyTable& t);

/// Area under the ROC curve from decision scores: thresholds swept over the
/// sorted scores, tied scores collapsed into one ROC vertex, trapezoidal
/// area. Equals the Mann-Whitney statistic with ties counted 1/2, exactly
/// (the area is accumulated in integer units before the final division).
/// Throws InvalidInputError unless both classes are present.
double roc_auc(std::span<const ScoredPrediction> scored);

}  // namespace motoclass
