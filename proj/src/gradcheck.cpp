#include "fadjoint/gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fadjoint/fprop.hpp"

namespace fadjoint {

namespace {

double evaluate(const Network& net, const Vector& input, const Vector& target, LossKind loss) {
  return loss_value(loss, output(forward(net, input)), target);
}

}  // namespace

GradientSet numeric_gradient(const Network& net, const Vector& input, const Vector& target,
                             LossKind loss, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  GradientSet grads = GradientSet::zeros_like(net);
  Network probe = net;
  for (std::size_t h = 1; h <= net.depth(); ++h) {
    Matrix& g = grads.layer(h);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) {
        const double base = net.entry(h, i, j);
        probe.entry(h, i, j) = base + step;
        const double plus = evaluate(probe, input, target, loss);
        probe.entry(h, i, j) = base - step;
        const double minus = evaluate(probe, input, target, loss);
        probe.entry(h, i, j) = base;
        g(i, j) = (plus - minus) / (2.0 * step);
      }
    }
  }
  return grads;
}

GradientReport compare(const GradientSet& a, const GradientSet& b, double atol, double rtol) {
  if (!a.congruent_with(b)) throw ShapeError("compare: gradient sets are not congruent");
  GradientReport report;
  report.atol = atol;
  report.rtol = rtol;
  double worst_ratio = -1.0;
  for (std::size_t h = 1; h <= a.depth(); ++h) {
    const Matrix& ma = a.layer(h);
    const Matrix& mb = b.layer(h);
    for (std::size_t i = 0; i < ma.rows(); ++i) {
      for (std::size_t j = 0; j < ma.cols(); ++j) {
        const double diff = std::abs(ma(i, j) - mb(i, j));
        const double ref = std::abs(mb(i, j));
        const double bound = atol + rtol * ref;
        const double rel = ref > 0.0 ? diff / ref
                                     : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        report.max_abs_error = std::max(report.max_abs_error, diff);
        report.max_rel_error = std::max(report.max_rel_error, rel);
        if (diff > bound) report.pass = false;
        const double ratio = bound > 0.0 ? diff / bound
                                         : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          report.worst_layer = h;
          report.worst_row = i;
          report.worst_col = j;
        }
      }
    }
  }
  return report;
}

std::string describe(const GradientReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s  max_abs=%.3e  max_rel=%.3e  worst=W^%zu(%zu,%zu)  atol=%.1e rtol=%.1e",
                report.pass ? "PASS" : "FAIL", report.max_abs_error, report.max_rel_error,
                report.worst_layer, report.worst_row, report.worst_col, report.atol, report.rtol);
  return buf;
}

}  // namespace fadjoint
