#include "mtcnn/metrics.hpp"

#include "mtcnn/errors.hpp"

namespace mtcnn {
namespace {

std::optional<double> ratio(long num, long den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts make_confusion(int classes) {
  if (classes < 2) throw InvalidArgumentError("confusion: need at least 2 classes");
  ConfusionCounts c;
  c.counts.setZero(classes, classes);
  return c;
}

MetricSet binary_metrics(long tp, long tn, long fp, long fn) {
  MetricSet m;
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  return m;
}

EvalReport report_from_confusion(const ConfusionCounts& confusion) {
  const Eigen::Index classes = confusion.counts.rows();
  if (classes != confusion.counts.cols() || classes < 2)
    throw ShapeError("confusion matrix must be square, >= 2x2");

  EvalReport report;
  report.confusion = confusion;
  const long total = confusion.total();

  for (Eigen::Index c = 0; c < classes; ++c) {
    const long tp = confusion.counts(c, c);
    const long fn = confusion.counts.row(c).sum() - tp;
    const long fp = confusion.counts.col(c).sum() - tp;
    const long tn = total - tp - fn - fp;
    report.per_class.push_back(binary_metrics(tp, tn, fp, fn));
  }

  if (classes == 2) {
    report.overall = binary_metrics(confusion.tp(), confusion.tn(), confusion.fp(),
                                    confusion.fn());
    return report;
  }

  report.overall.accuracy =
      total == 0 ? std::nullopt
                 : std::optional<double>(static_cast<double>(confusion.counts.trace()) /
                                         static_cast<double>(total));
  double prc = 0.0, rcl = 0.0, f1 = 0.0;
  bool all_defined = true;
  for (const auto& m : report.per_class) {
    if (!m.precision || !m.recall || !m.f1) {
      all_defined = false;
      break;
    }
    prc += *m.precision;
    rcl += *m.recall;
    f1 += *m.f1;
  }
  if (all_defined) {
    const auto n = static_cast<double>(classes);
    report.overall.precision = prc / n;
    report.overall.recall = rcl / n;
    report.overall.f1 = f1 / n;
  }
  return report;
}

}  // namespace mtcnn
