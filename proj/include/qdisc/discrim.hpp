#ifndef QDISC_DISCRIM_HPP
#define QDISC_DISCRIM_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qdisc/channels.hpp"

namespace qdisc {

// Tolerance for the equality tests of the decision tree and for flagging a
// classification as lying on a region boundary.
inline constexpr double kBoundaryEps = 1e-9;

// Differences of the diagonal-frame Kraus data of two channels:
//   alpha  = <cos^2 theta>_1 - <cos^2 theta>_2
//   beta   = <cos^2 phi>_1   - <cos^2 phi>_2
//   gamma1 = <cos phi cos theta>_1 - <cos phi cos theta>_2
//   gamma2 = <sin phi sin theta>_1 - <sin phi sin theta>_2
// where <.> averages over the mixture components.
class DiscrimParams {
 public:
  DiscrimParams() = default;
  // Throws std::invalid_argument for non-finite values or values outside [-2, 2].
  DiscrimParams(double alpha, double beta, double gamma1, double gamma2);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }

  // gamma of smaller / larger magnitude; gamma1 wins ties for both.
  double gamma_min() const { return std::abs(gamma1_) <= std::abs(gamma2_) ? gamma1_ : gamma2_; }
  double gamma_max() const { return std::abs(gamma1_) >= std::abs(gamma2_) ? gamma1_ : gamma2_; }
  // alpha or beta, whichever has the larger magnitude (alpha on ties).
  double dominant() const { return std::abs(alpha_) >= std::abs(beta_) ? alpha_ : beta_; }

  double gamma_abs_sum() const { return std::abs(gamma1_) + std::abs(gamma2_); }

 private:
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double gamma1_ = 0.0;
  double gamma2_ = 0.0;
};

enum class Branch {
  SingleStationary,     // interior maximizer of the single-probe quadratic
  SingleEndpoint,       // maximizer at s = 0 or s = 1
  EntangledLinear,      // both gammas below alpha*beta: |(1-s)alpha + s beta| terms only
  EntangledMixed,       // one gamma below alpha*beta: stationary points of the mixed objective
  EntangledScan,        // numeric maximization of the two-radical sum
  BruteForce,           // probe-state search from channel actions
};

std::string_view to_string(Branch b);

struct DistanceResult {
  double value = 0.0;
  double arg = 0.0;  // maximizing s = |a1|^2
  Branch branch = Branch::BruteForce;
  int scan_resolution = 0;  // samples used by a numeric scan, 0 for closed forms
};

struct Margin {
  std::string test;
  double slack = 0.0;
};

// Verdict of the side-entanglement decision tree. `node` names the leaf, e.g.
// "T2/B.2". Each margin records one tested condition; its slack is positive
// when a strict or non-strict inequality holds, and lhs - rhs for equalities.
struct Classification {
  bool useful = false;
  std::string node;
  bool boundary = false;
  std::vector<Margin> margins;
};

DiscrimParams compute_params(const QubitChannel& c1, const QubitChannel& c2);

// Single-probe trace distance along the optimal phase, as a function of
// s = |a1|^2:  2 sqrt(((1-s)a - s b)^2 + 4 s(1-s) ((|g1|+|g2|)/2)^2).
double single_objective(const DiscrimParams& p, double s);
// Entangled trace distance when both gamma_j^2 >= alpha*beta:
//   sum_j sqrt(((1-s)a - s b)^2 + 4 s(1-s) g_j^2).
double entangled_objective(const DiscrimParams& p, double s);
// Entangled trace distance on span{|00>,|11>} for arbitrary parameters:
//   sum_j max(|(1-s)a + s b|, sqrt(((1-s)a - s b)^2 + 4 s(1-s) g_j^2)).
double restricted_entangled_objective(const DiscrimParams& p, double s);
// |x| + sqrt(x^2 + 4 s(1-s)(gamma_max^2 - alpha*beta)), x = (1-s)a + s b.
double mixed_regime_objective(const DiscrimParams& p, double s);

// Stationary point of mixed_regime_objective selected by the sign of
// gamma_max*(alpha+beta). Throws std::domain_error when that product
// vanishes within kBoundaryEps.
double mixed_regime_stationary_point(const DiscrimParams& p);

// Quartics whose sign decides whether the entangled objective beats the
// single-probe endpoint value 2|P| (extremal and mixed regimes respectively).
double extremal_gain_polynomial(const DiscrimParams& p, double s);
double mixed_gain_polynomial(const DiscrimParams& p, double s);

// Unconstrained maximizer of the single-probe quadratic, or NaN when the
// quadratic is not strictly concave (|alpha+beta| >= |g1|+|g2|).
double single_stationary_point(const DiscrimParams& p);

DistanceResult max_distance_single(const DiscrimParams& p);
DistanceResult max_distance_entangled(const DiscrimParams& p);

Classification classify(const DiscrimParams& p);
// As above, but pairs of quasi-extreme channels are settled before any
// parameter-level test (node "T1").
Classification classify(const QubitChannel& c1, const QubitChannel& c2);

// Helstrom success probability for two equiprobable hypotheses at the given
// trace distance. Throws std::invalid_argument outside [0, 2].
double success_probability(double distance);

}  // namespace qdisc

#endif  // QDISC_DISCRIM_HPP
