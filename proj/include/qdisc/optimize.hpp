#ifndef QDISC_OPTIMIZE_HPP
#define QDISC_OPTIMIZE_HPP

#include <cmath>
#include <cstddef>
#include <functional>

namespace qdisc {

struct ScalarMax {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section search for a maximum of f on [lo, hi]; stops once the
// bracket is narrower than `tol`. Assumes f unimodal on the bracket.
inline ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                    double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return {mid, f(mid)};
}

// Global maximum of a continuous f on [lo, hi]: uniform scan over `points`
// samples, then golden-section refinement on the bracket around the best
// sample. Ties go to the lowest index.
inline ScalarMax scan_then_refine_max(const std::function<double(double)>& f, double lo, double hi,
                                      std::size_t points = 10001, double tol = 1e-12) {
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::size_t best_i = 0;
  double best_v = f(lo);
  for (std::size_t i = 1; i < points; ++i) {
    const double v = f(i + 1 == points ? hi : lo + step * static_cast<double>(i));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double best_x = best_i + 1 == points ? hi : lo + step * static_cast<double>(best_i);
  const double a = best_i == 0 ? lo : best_x - step;
  const double b = best_i + 1 == points ? hi : best_x + step;
  const ScalarMax refined = golden_section_max(f, a, b, tol);
  if (refined.value > best_v) return refined;
  return {best_x, best_v};
}

}  // namespace qdisc

#endif  // QDISC_OPTIMIZE_HPP
