#include "linkpred/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "linkpred/error.hpp"

namespace linkpred::eval {

RocResult roc_auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw InputError("ROC needs at least one positive and one negative score");
  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });

  const auto np = static_cast<double>(pos.size());
  const auto nn = static_cast<double>(neg.size());

  // Rank sum of positives, ties sharing their mean rank.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t tied_pos = 0;
    while (j < all.size() && all[j].score == all[i].score) tied_pos += all[j++].positive;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += mid_rank * static_cast<double>(tied_pos);
    i = j;
  }

  RocResult r;
  r.auc = (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);

  // Descending sweep: each distinct score admits all of its ties at once.
  r.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = all.size(); i > 0;) {
    std::size_t j = i;
    while (j > 0 && all[j - 1].score == all[i - 1].score) {
      (all[j - 1].positive ? tp : fp) += 1;
      --j;
    }
    r.points.push_back({static_cast<double>(fp) / nn, static_cast<double>(tp) / np});
    i = j;
  }
  return r;
}

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    area += (points[i].fpr - points[i - 1].fpr) * 0.5 * (points[i].tpr + points[i - 1].tpr);
  return area;
}

std::array<std::array<double, 2>, 2> Confusion::row_normalized() const {
  const double p = static_cast<double>(tp + fn);
  const double n = static_cast<double>(tn + fp);
  return {{{p > 0 ? tp / p : 0.0, p > 0 ? fn / p : 0.0}, {n > 0 ? fp / n : 0.0, n > 0 ? tn / n : 0.0}}};
}

Confusion confusion(std::span<const double> pos, std::span<const double> neg, double threshold) {
  if (pos.empty() || neg.empty()) throw InputError("confusion matrix needs both classes");
  Confusion c;
  c.threshold = threshold;
  for (double s : pos) (s >= threshold ? c.tp : c.fn) += 1;
  for (double s : neg) (s >= threshold ? c.fp : c.tn) += 1;
  return c;
}

std::string roc_svg(const EvalReport& report) {
  constexpr double size = 400.0, margin = 50.0;
  auto x = [&](double fpr) { return margin + fpr * size; };
  auto y = [&](double tpr) { return margin + (1.0 - tpr) * size; };
  char buf[64];
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"520\" font-family=\"sans-serif\">\n";
  std::snprintf(buf, sizeof buf, "%.4f", report.auc);
  svg << "  <text x=\"250\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << report.model << " on "
      << report.dataset << " (AUC = " << buf << ")</text>\n";
  svg << "  <rect x=\"50\" y=\"50\" width=\"400\" height=\"400\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"50\" y1=\"450\" x2=\"450\" y2=\"50\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    std::snprintf(buf, sizeof buf, "%.2f", v);
    svg << "  <text x=\"" << x(v) << "\" y=\"468\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
    svg << "  <text x=\"42\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
  }
  svg << "  <text x=\"250\" y=\"495\" text-anchor=\"middle\" font-size=\"13\">FPR</text>\n";
  svg << "  <text x=\"15\" y=\"250\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 15 250)\">TPR</text>\n";
  svg << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const RocPoint& p : report.roc) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x(p.fpr), y(p.tpr));
    svg << buf;
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace linkpred::eval
