#ifndef QDISC_ORACLE_HPP
#define QDISC_ORACLE_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>

#include "qdisc/channels.hpp"
#include "qdisc/discrim.hpp"

namespace qdisc {

// Normalized single-qubit pure state a0|0> + a1|1>.
class PureState2 {
 public:
  PureState2() = default;
  // Throws std::invalid_argument unless |a0|^2 + |a1|^2 = 1 within 1e-12.
  PureState2(Complex a0, Complex a1);

  Complex a0() const { return a_[0]; }
  Complex a1() const { return a_[1]; }
  Matrix density() const;

 private:
  std::array<Complex, 2> a_{1.0, 0.0};
};

// Normalized two-qubit pure state, amplitudes ordered |00>, |01>, |10>, |11>.
// The second qubit is the one sent through the channel.
class PureState4 {
 public:
  PureState4() = default;
  explicit PureState4(const std::array<Complex, 4>& a);

  static PureState4 schmidt(Complex a0, Complex a1) { return PureState4({a0, 0.0, 0.0, a1}); }
  static PureState4 product(const PureState2& ref, const PureState2& sys);

  const std::array<Complex, 4>& amplitudes() const { return a_; }
  Matrix density() const;

 private:
  std::array<Complex, 4> a_{1.0, 0.0, 0.0, 0.0};
};

using Probe = std::variant<PureState2, PureState4>;

// Two-outcome projective measurement; outcome "plus" means "guess channel 1".
struct Measurement {
  Matrix plus_projector;
  Matrix minus_projector;
  std::size_t dim() const { return plus_projector.dim(); }
};

struct SearchConfig {
  int grid_points = 256;
  int multistarts = 64;
  double refine_tol = 1e-10;
  std::uint64_t rng_seed = 42;

  // Throws std::invalid_argument when grid_points < 64, multistarts < 16 or
  // refine_tol <= 0.
  void validate() const;
};

enum class EntangledSearch { Restricted, Full };

struct SingleOracleResult {
  DistanceResult distance;
  PureState2 probe;
};

struct EntangledOracleResult {
  DistanceResult distance;
  PureState4 probe;
};

inline constexpr std::string_view kRngName = "mt19937_64";

Matrix delta_single(const QubitChannel& c1, const QubitChannel& c2, const PureState2& psi);
Matrix delta_entangled(const QubitChannel& c1, const QubitChannel& c2, const PureState4& psi);

// Maximum of ||N1(psi) - N2(psi)||_1 over the Bloch sphere: uniform grid in
// (polar, azimuth) followed by coordinate-wise golden-section ascent.
SingleOracleResult brute_max_single(const QubitChannel& c1, const QubitChannel& c2,
                                    const SearchConfig& cfg = {});

// Restricted: a0|00> + a1|11> with a0 >= 0 real, gridded then refined.
// Full: multistart local ascent over all two-qubit pure states, starts drawn
// from cfg.rng_seed. The reported arg is the population of |1> on the
// channel input.
EntangledOracleResult brute_max_entangled(const QubitChannel& c1, const QubitChannel& c2,
                                          const SearchConfig& cfg = {},
                                          EntangledSearch mode = EntangledSearch::Restricted);

// Projectors onto the positive eigenspace of `delta` and its complement
// (null space included in the minus projector).
Measurement helstrom(const Matrix& delta);

// Monte-Carlo discrimination: each trial picks a channel uniformly, samples
// the measurement outcome on the channel output and guesses channel 1 on
// "plus". Returns the success fraction.
double simulate(const QubitChannel& c1, const QubitChannel& c2, const Probe& probe, const Measurement& m,
                long long trials, std::uint64_t rng_seed);

}  // namespace qdisc

#endif  // QDISC_ORACLE_HPP
