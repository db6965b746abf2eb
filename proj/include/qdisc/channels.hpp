#ifndef QDISC_CHANNELS_HPP
#define QDISC_CHANNELS_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdisc/smallmat.hpp"

namespace qdisc {

// Extremal qubit channel in the diagonal frame, Kraus operators
//   K0 = diag(cos theta, cos phi),  K1 = [[0, sin phi], [sin theta, 0]]
// with both angles in [0, pi].
class ExtremalChannel {
 public:
  ExtremalChannel() = default;
  // Throws std::invalid_argument when an angle is outside [0, pi].
  ExtremalChannel(double phi, double theta);

  double phi() const { return phi_; }
  double theta() const { return theta_; }
  // The doubles nearest pi/2 and pi give exact 0 and +-1 here.
  double cos_phi() const { return cos_phi_; }
  double sin_phi() const { return sin_phi_; }
  double cos_theta() const { return cos_theta_; }
  double sin_theta() const { return sin_theta_; }

  friend bool operator==(const ExtremalChannel&, const ExtremalChannel&) = default;

 private:
  double phi_ = 0.0;
  double theta_ = 0.0;
  double cos_phi_ = 1.0, sin_phi_ = 0.0;
  double cos_theta_ = 1.0, sin_theta_ = 0.0;
};

// lambda * first + (1 - lambda) * second. lambda = 1 is the pure extremal
// channel `first`; `second` is still stored.
class QubitChannel {
 public:
  QubitChannel() = default;
  QubitChannel(double lambda, ExtremalChannel first, ExtremalChannel second);
  static QubitChannel extremal(ExtremalChannel c) { return QubitChannel(1.0, c, c); }

  double lambda() const { return lambda_; }
  const ExtremalChannel& first() const { return first_; }
  const ExtremalChannel& second() const { return second_; }

  friend bool operator==(const QubitChannel&, const QubitChannel&) = default;

 private:
  double lambda_ = 1.0;
  ExtremalChannel first_;
  ExtremalChannel second_;
};

// Flat Kraus list. Mixture weights are already folded into the operators as
// sqrt(weight) factors; `weights` keeps the component weights for reference.
struct KrausSet {
  std::vector<Matrix> operators;
  std::vector<double> weights;
};

// Bloch-ball action r -> diag(lambdas) r + t.
struct AffineMap {
  std::array<double, 3> lambdas{};
  std::array<double, 3> t{};
};

struct CptpReport {
  bool trace_preserving = false;
  bool completely_positive = false;
  double max_violation = 0.0;
};

KrausSet kraus_of(const ExtremalChannel& c);
KrausSet kraus_of_mixture(const QubitChannel& c);

// sum_k K rho K^dagger with no input validation; works for any 2x2 operator.
Matrix apply_kraus(const KrausSet& k, const Matrix& rho);
// Same for id (x) N on a 4x4 operator.
Matrix apply_kraus_extended(const KrausSet& k, const Matrix& rho4);

// Throw std::invalid_argument unless rho is a density matrix of the right
// size (Hermitian, unit trace and PSD within 1e-10).
Matrix apply(const QubitChannel& c, const Matrix& rho);
Matrix apply_extended(const QubitChannel& c, const Matrix& rho4);

void require_density_matrix(const Matrix& rho, std::size_t dim);

AffineMap affine_map(const ExtremalChannel& c);
AffineMap affine_map(const QubitChannel& c);

// Choi matrix sum_ij |i><j| (x) N(|i><j|).
Matrix choi_matrix(const KrausSet& k);
CptpReport validate_cptp(const KrausSet& k);

bool is_quasi_extreme(const ExtremalChannel& c);
// The channel as a single extremal map, if it is one (lambda in {0, 1} or
// identical components).
std::optional<ExtremalChannel> as_extremal(const QubitChannel& c);

// Channel literals:
//   extremal(phi,theta)  mix(lambda;phi,theta;phi2,theta2)
//   identity  ad(phi)  pauli(lambda,theta,theta2)
// Angles are radians.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

QubitChannel parse_channel(std::string_view literal);
std::string format_channel(const QubitChannel& c);

}  // namespace qdisc

#endif  // QDISC_CHANNELS_HPP
