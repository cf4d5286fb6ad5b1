#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace mtcnn {

// Confusion bookkeeping; rows = actual class, cols = predicted class.
// In binary problems class 1 is the positive (mental) class and class 0 the
// negative (baseline) class.
struct ConfusionCounts {
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts;

  long total() const { return counts.sum(); }
  long tp() const { return counts(1, 1); }
  long tn() const { return counts(0, 0); }
  long fp() const { return counts(0, 1); }
  long fn() const { return counts(1, 0); }
};

ConfusionCounts make_confusion(int classes);

// A metric with an undefined denominator is reported as an empty optional,
// never as NaN.
struct MetricSet {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

MetricSet binary_metrics(long tp, long tn, long fp, long fn);

struct EvalReport {
  ConfusionCounts confusion;
  // Binary: positive-class metrics. Multi-class: overall accuracy plus
  // macro-averaged one-vs-rest precision/recall/F1 (undefined if any class
  // metric is undefined).
  MetricSet overall;
  std::vector<MetricSet> per_class;  // one-vs-rest, indexed by class
};

EvalReport report_from_confusion(const ConfusionCounts& confusion);

}  // namespace mtcnn
