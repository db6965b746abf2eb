#include "qdisc/discrim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qdisc/optimize.hpp"

namespace qdisc {

namespace {

constexpr std::size_t kScanPoints = 10001;
constexpr double kRefineTol = 1e-12;

void require_unit_interval(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream os;
    os << "s = " << s << " is outside [0, 1]";
    throw std::invalid_argument(os.str());
  }
}

double linear_part(const DiscrimParams& p, double s) { return (1.0 - s) * p.alpha() + s * p.beta(); }
double skew_part(const DiscrimParams& p, double s) { return (1.0 - s) * p.alpha() - s * p.beta(); }

double radical(const DiscrimParams& p, double s, double gamma) {
  const double y = skew_part(p, s);
  return std::sqrt(y * y + 4.0 * s * (1.0 - s) * gamma * gamma);
}

DistanceResult endpoint_result(const DiscrimParams& p, Branch branch) {
  DistanceResult r;
  r.value = 2.0 * std::abs(p.dominant());
  r.arg = std::abs(p.alpha()) >= std::abs(p.beta()) ? 0.0 : 1.0;
  r.branch = branch;
  return r;
}

// Records every test the tree evaluates, in order.
class TreeWalk {
 public:
  bool holds(std::string test, double slack) {
    record(std::move(test), slack);
    return slack > 0.0;
  }
  bool holds_or_equal(std::string test, double slack) {
    record(std::move(test), slack);
    return slack >= 0.0;
  }
  bool equal(std::string test, double diff) {
    record(std::move(test), diff);
    return std::abs(diff) <= kBoundaryEps;
  }

  Classification leaf(bool useful, std::string node) {
    Classification c;
    c.useful = useful;
    c.node = std::move(node);
    c.margins = std::move(margins_);
    c.boundary = std::any_of(c.margins.begin(), c.margins.end(),
                             [](const Margin& m) { return std::abs(m.slack) < kBoundaryEps; });
    return c;
  }

 private:
  void record(std::string test, double slack) { margins_.push_back({std::move(test), slack}); }
  std::vector<Margin> margins_;
};

}  // namespace

DiscrimParams::DiscrimParams(double alpha, double beta, double gamma1, double gamma2)
    : alpha_(alpha), beta_(beta), gamma1_(gamma1), gamma2_(gamma2) {
  for (double v : {alpha, beta, gamma1, gamma2}) {
    if (!std::isfinite(v) || std::abs(v) > 2.0) {
      throw std::invalid_argument("discrimination parameters must be finite and within [-2, 2]");
    }
  }
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::SingleStationary: return "single_stationary";
    case Branch::SingleEndpoint: return "single_endpoint";
    case Branch::EntangledLinear: return "entangled_linear";
    case Branch::EntangledMixed: return "entangled_mixed";
    case Branch::EntangledScan: return "entangled_scan";
    case Branch::BruteForce: return "brute_force";
  }
  return "unknown";
}

DiscrimParams compute_params(const QubitChannel& c1, const QubitChannel& c2) {
  struct Moments {
    double cos2_theta = 0, cos2_phi = 0, cos_cos = 0, sin_sin = 0;
  };
  auto moments = [](const QubitChannel& c) {
    Moments m;
    const std::array<std::pair<double, const ExtremalChannel*>, 2> parts{
        {{c.lambda(), &c.first()}, {1.0 - c.lambda(), &c.second()}}};
    for (const auto& [w, e] : parts) {
      const double ct = e->cos_theta(), cp = e->cos_phi();
      m.cos2_theta += w * ct * ct;
      m.cos2_phi += w * cp * cp;
      m.cos_cos += w * cp * ct;
      m.sin_sin += w * e->sin_phi() * e->sin_theta();
    }
    return m;
  };
  const Moments a = moments(c1);
  const Moments b = moments(c2);
  return DiscrimParams(a.cos2_theta - b.cos2_theta, a.cos2_phi - b.cos2_phi, a.cos_cos - b.cos_cos,
                       a.sin_sin - b.sin_sin);
}

double single_objective(const DiscrimParams& p, double s) {
  require_unit_interval(s);
  return 2.0 * radical(p, s, 0.5 * p.gamma_abs_sum());
}

double entangled_objective(const DiscrimParams& p, double s) {
  require_unit_interval(s);
  return radical(p, s, p.gamma1()) + radical(p, s, p.gamma2());
}

double restricted_entangled_objective(const DiscrimParams& p, double s) {
  require_unit_interval(s);
  const double x = std::abs(linear_part(p, s));
  return std::max(x, radical(p, s, p.gamma1())) + std::max(x, radical(p, s, p.gamma2()));
}

double mixed_regime_objective(const DiscrimParams& p, double s) {
  require_unit_interval(s);
  const double x = linear_part(p, s);
  const double k = p.gamma_max() * p.gamma_max() - p.alpha() * p.beta();
  return std::abs(x) + std::sqrt(std::max(0.0, x * x + 4.0 * s * (1.0 - s) * k));
}

double mixed_regime_stationary_point(const DiscrimParams& p) {
  const double gm = p.gamma_max();
  const double sum = p.alpha() + p.beta();
  if (std::abs(gm * sum) <= kBoundaryEps) {
    throw std::domain_error("stationary point undefined: gamma_max*(alpha+beta) = 0");
  }
  if (gm * sum > 0.0) return (gm - p.alpha()) / (2.0 * gm - sum);
  return (gm + p.alpha()) / (2.0 * gm + sum);
}

double extremal_gain_polynomial(const DiscrimParams& p, double s) {
  const double a = p.alpha(), b = p.beta(), P = p.dominant();
  const double g1s = p.gamma1() * p.gamma1(), g2s = p.gamma2() * p.gamma2();
  const double P2 = P * P;
  const double sum2 = g1s + g2s;
  const double d2 = (g1s - g2s) * (g1s - g2s);
  return P2 * (P2 - b * b) + 2.0 * P2 * (b * (a + b) - sum2) * s +
         (P2 * (2.0 * sum2 - (a + b) * (a + b)) + d2) * s * s - 2.0 * d2 * s * s * s + d2 * s * s * s * s;
}

double mixed_gain_polynomial(const DiscrimParams& p, double s) {
  const double a = p.alpha(), b = p.beta(), P = p.dominant();
  const double gM2 = p.gamma_max() * p.gamma_max();
  const double P2 = P * P;
  const double k2 = (gM2 - a * b) * (gM2 - a * b);
  return P2 * (P2 - a * a) + 2.0 * P2 * (a * a - gM2) * s + (k2 - P2 * (a * a + b * b - 2.0 * gM2)) * s * s -
         2.0 * k2 * s * s * s + k2 * s * s * s * s;
}

double single_stationary_point(const DiscrimParams& p) {
  const double c = p.gamma_abs_sum();
  const double sum = p.alpha() + p.beta();
  if (!(std::abs(sum) < c)) return std::numeric_limits<double>::quiet_NaN();
  return (2.0 * p.alpha() * sum - c * c) / (2.0 * sum * sum - 2.0 * c * c);
}

DistanceResult max_distance_single(const DiscrimParams& p) {
  const double s_star = single_stationary_point(p);
  // The closed form is the vertex value of a concave quadratic in s; it is
  // the maximum only when the vertex lies inside [0, 1].
  if (std::isnan(s_star) || s_star < 0.0 || s_star > 1.0) return endpoint_result(p, Branch::SingleEndpoint);

  const double c = p.gamma_abs_sum();
  const double sum = p.alpha() + p.beta();
  DistanceResult r;
  r.value = c * std::sqrt(std::max(0.0, c * c - 4.0 * p.alpha() * p.beta())) / std::sqrt(c * c - sum * sum);
  r.arg = s_star;
  r.branch = Branch::SingleStationary;
  return r;
}

DistanceResult max_distance_entangled(const DiscrimParams& p) {
  const double ab = p.alpha() * p.beta();
  const double gM = p.gamma_max();
  const double gm = p.gamma_min();

  if (gM * gM <= ab) {
    DistanceResult r = endpoint_result(p, Branch::EntangledLinear);
    return r;
  }

  if (gm * gm < ab) {
    // The objective is smooth with one sign of (1-s)a + s b on [0, 1]; its
    // maximum sits at an endpoint or at one of the two stationary points
    // (gamma_max -/+ alpha) / (2 gamma_max -/+ (alpha + beta)).
    const double sum = p.alpha() + p.beta();
    std::vector<double> candidates{0.0, 1.0};
    for (double sign : {1.0, -1.0}) {
      const double den = 2.0 * gM - sign * sum;
      if (den == 0.0) continue;
      const double s = (gM - sign * p.alpha()) / den;
      if (s >= 0.0 && s <= 1.0) candidates.push_back(s);
    }
    DistanceResult r;
    r.branch = Branch::EntangledMixed;
    r.value = -1.0;
    for (double s : candidates) {
      const double v = mixed_regime_objective(p, s);
      if (v > r.value) {
        r.value = v;
        r.arg = s;
      }
    }
    return r;
  }

  const ScalarMax m = scan_then_refine_max([&](double s) { return entangled_objective(p, std::clamp(s, 0.0, 1.0)); },
                                           0.0, 1.0, kScanPoints, kRefineTol);
  DistanceResult r;
  r.value = m.value;
  r.arg = std::clamp(m.arg, 0.0, 1.0);
  r.branch = Branch::EntangledScan;
  r.scan_resolution = static_cast<int>(kScanPoints);
  return r;
}

Classification classify(const DiscrimParams& p) {
  const double a = p.alpha(), b = p.beta();
  const double ab = a * b;
  const double gM = p.gamma_max(), gm = p.gamma_min(), P = p.dominant();
  const double c = p.gamma_abs_sum();
  const double sum = a + b;
  const double g1s = p.gamma1() * p.gamma1(), g2s = p.gamma2() * p.gamma2();

  TreeWalk t;
  if (t.holds_or_equal("gamma_M^2 <= alpha*beta", ab - gM * gM)) return t.leaf(false, "T3/root");

  // Does the single-probe optimum sit strictly inside (0, 1)?
  auto interior_single_optimum = [&] {
    const double s_star = single_stationary_point(p);
    return t.holds("0 < s_single < 1", std::min(s_star, 1.0 - s_star));
  };

  if (t.holds("gamma_m^2 < alpha*beta", ab - gm * gm)) {
    if (t.holds("|gamma_1|+|gamma_2| > |alpha+beta|", c - std::abs(sum)) && interior_single_optimum()) {
      if (t.equal("alpha = beta", a - b)) {
        if (t.equal("|gamma_m| = |alpha|", std::abs(gm) - std::abs(a))) return t.leaf(false, "T3/A.1");
        return t.leaf(true, "T3/B.1");
      }
      if (!t.equal("2*gamma_M*(alpha+beta) = (|gamma_1|+|gamma_2|)^2", 2.0 * gM * sum - c * c)) {
        return t.leaf(true, "T3/B.2");
      }
      const double disc = (a * a - 1.0) * (b * b - 1.0);
      if (!t.holds_or_equal("(alpha^2-1)(beta^2-1) >= 0", disc)) return t.leaf(true, "T3/B.3");
      const double root = std::sqrt(disc);
      const double d_plus = gM - (1.0 + ab + root) / sum;
      const double d_minus = gM - (1.0 + ab - root) / sum;
      const double diff = std::abs(d_plus) <= std::abs(d_minus) ? d_plus : d_minus;
      if (t.equal("gamma_M = (1+alpha*beta +- sqrt((alpha^2-1)(beta^2-1)))/(alpha+beta)", diff)) {
        return t.leaf(false, "T3/A.2");
      }
      return t.leaf(true, "T3/B.3");
    }
    if (t.holds_or_equal("|gamma_M| <= |P|", std::abs(P) - std::abs(gM))) return t.leaf(false, "T3/A.3");
    return t.leaf(true, "T3/B.4");
  }

  if (t.equal("|gamma_1| = |gamma_2|", std::abs(p.gamma1()) - std::abs(p.gamma2()))) {
    return t.leaf(false, "T2/O1");
  }
  if (t.holds("|gamma_1|+|gamma_2| > |alpha+beta|", c - std::abs(sum))) {
    if (interior_single_optimum()) {
      const double s_star = single_stationary_point(p);
      const double dg = std::abs(p.gamma1()) - std::abs(p.gamma2());
      if (!t.equal("((1-s)alpha - s*beta)(|gamma_1|-|gamma_2|)^2 = 0 at s_single",
                   skew_part(p, s_star) * dg * dg)) {
        return t.leaf(true, "T2/B.3");
      }
      if (t.holds("|gamma_1||gamma_2| < alpha^2", a * a - std::abs(p.gamma1() * p.gamma2()))) {
        return t.leaf(true, "T2/B.2");
      }
      return t.leaf(false, "T2/A.4");
    }
    if (t.holds("gamma_1^2+gamma_2^2 > P(alpha+beta)", g1s + g2s - P * sum)) return t.leaf(true, "T2/B.1");
    return t.leaf(false, "T2/A.3");
  }
  if (!t.holds("2|gamma_M| > |alpha+beta|", 2.0 * std::abs(gM) - std::abs(sum))) return t.leaf(false, "T2/A.1");
  if (t.holds("gamma_1^2+gamma_2^2 > P(alpha+beta)", g1s + g2s - P * sum)) return t.leaf(true, "T2/B.1");
  return t.leaf(false, "T2/A.2");
}

Classification classify(const QubitChannel& c1, const QubitChannel& c2) {
  const auto e1 = as_extremal(c1);
  const auto e2 = as_extremal(c2);
  if (e1 && e2 && is_quasi_extreme(*e1) && is_quasi_extreme(*e2)) {
    TreeWalk t;
    t.equal("sin(theta_1) = sin(phi_1)", e1->sin_theta() - e1->sin_phi());
    t.equal("sin(theta_2) = sin(phi_2)", e2->sin_theta() - e2->sin_phi());
    return t.leaf(false, "T1");
  }
  return classify(compute_params(c1, c2));
}

double success_probability(double distance) {
  constexpr double slack = 1e-9;
  if (!(distance >= -slack && distance <= 2.0 + slack)) {
    std::ostringstream os;
    os << "trace distance " << distance << " is outside [0, 2]";
    throw std::invalid_argument(os.str());
  }
  return 0.5 * (1.0 + std::clamp(distance, 0.0, 2.0) / 2.0);
}

}  // namespace qdisc
