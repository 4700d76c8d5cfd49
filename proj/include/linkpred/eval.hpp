#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace linkpred::eval {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  /// Mann-Whitney rank statistic with mid-ranks for ties.
  double auc = 0.0;
  /// Threshold sweep over distinct scores, from (0,0) to (1,1).
  std::vector<RocPoint> points;
};

RocResult roc_auc(std::span<const double> pos, std::span<const double> neg);

/// Trapezoid integral of an ROC polyline.
double trapezoid_auc(std::span<const RocPoint> points);

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double threshold = 0.5;

  /// Rows are actual (positive, negative), columns predicted (positive, negative).
  std::array<std::array<double, 2>, 2> row_normalized() const;
};

/// score >= threshold is a positive prediction.
Confusion confusion(std::span<const double> pos, std::span<const double> neg, double threshold = 0.5);

struct EvalReport {
  std::string model;
  std::string dataset;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double auc = 0.0;
  std::vector<RocPoint> roc;
  Confusion confusion;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  double total_seconds() const { return fit_seconds + predict_seconds; }
};

/// Standalone SVG plot of one ROC curve, AUC in the title.
std::string roc_svg(const EvalReport& report);

}  // namespace linkpred::eval
