#include "motoclass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace motoclass {

ContingencyTable contingency(std::span<const LabeledPrediction> predictions) {
  if (predictions.empty()) {
    throw InvalidInputError("contingency: no predictions");
  }
  ContingencyTable t;
  for (const auto& p : predictions) {
    if (p.truth_positive) {
      (p.predicted_positive ? t.tp : t.fn) += 1;
    } else {
      (p.predicted_positive ? t.fp : t.tn) += 1;
    }
  }
  return t;
}

Rates rates(const ContingencyTable& t) {
  if (t.tp < 0 || t.fp < 0 || t.fn < 0 || t.tn < 0) {
    throw InvalidInputError("rates: negative cell count");
  }
  if (!(t.p() > 0) || !(t.n() > 0)) {
    throw InvalidInputError("rates: both classes must be present");
  }
  Rates r;
  r.tpr = t.tp / t.p();
  r.fpr = t.fp / t.n();
  r.tnr = t.tn / t.n();
  if (t.yes() > 0) {
    r.precision = t.tp / t.yes();
  }
  r.accuracy = (t.tp + t.tn) / t.total();
  return r;
}

double roc_auc(std::span<const ScoredPrediction> scored) {
  std::int64_t pos = 0, neg = 0;
  for (const auto& s : scored) {
    if (!std::isfinite(s.score)) {
      throw InvalidInputError("roc_auc: non-finite score");
    }
    (s.truth_positive ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) {
    throw InvalidInputError("roc_auc: both classes must be present");
  }

  std::vector<ScoredPrediction> v(scored.begin(), scored.end());
  std::sort(v.begin(), v.end(),
            [](const ScoredPrediction& a, const ScoredPrediction& b) { return a.score > b.score; });

  // Trapezoid area in integer units of (half) grid cells. Groups of tied
  // scores advance TP and FP together, which is what makes the result match
  // the rank statistic exactly.
  std::int64_t tp = 0, fp = 0, tp_prev = 0, fp_prev = 0, area2 = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    const double s = v[i].score;
    while (i < v.size() && v[i].score == s) {
      (v[i].truth_positive ? tp : fp) += 1;
      ++i;
    }
    area2 += (fp - fp_prev) * (tp + tp_prev);
    tp_prev = tp;
    fp_prev = fp;
  }
  return static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

}  // namespace motoclass
