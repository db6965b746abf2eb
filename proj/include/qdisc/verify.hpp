#ifndef QDISC_VERIFY_HPP
#define QDISC_VERIFY_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qdisc/channels.hpp"
#include "qdisc/discrim.hpp"
#include "qdisc/oracle.hpp"

namespace qdisc {

using ChannelPair = std::pair<QubitChannel, QubitChannel>;

// Seeded channel-pair generator. Uniforms are taken from the top 53 bits of
// mt19937_64 so streams are identical across standard libraries.
class PairSampler {
 public:
  explicit PairSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform();
  double angle();  // uniform in [0, pi]
  ExtremalChannel extremal();
  // sin(theta) = sin(phi); `reflected` selects theta = pi - phi.
  ExtremalChannel quasi_extreme(bool reflected);
  QubitChannel mixture();

  ChannelPair extremal_pair();
  ChannelPair mixture_pair();
  ChannelPair quasi_extreme_pair(bool reflected);

 private:
  std::mt19937_64 rng_;
};

struct SampleRecord {
  std::string channel1;
  std::string channel2;
  std::vector<std::pair<std::string, double>> values;
};

struct VerifyReport {
  std::string mode;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  int checked = 0;
  int skipped = 0;
  std::vector<SampleRecord> failures;
  bool passed() const { return failures.empty() && checked > 0; }
};

// |closed-form single maximum - brute-force single maximum| <= 1e-6 on
// random extremal pairs.
VerifyReport verify_lemma1(int samples, std::uint64_t seed, const SearchConfig& cfg);

// Closed-form entangled maximum against the restricted search, and full
// search not exceeding the restricted one, both within 1e-6.
VerifyReport verify_lemma2(int samples, std::uint64_t seed, const SearchConfig& cfg);

// Entangled minus single oracle maxima <= 1e-6 on quasi-extreme pairs,
// alternating the theta = phi and theta = pi - phi families.
VerifyReport verify_quasi_extreme(int samples, std::uint64_t seed, const SearchConfig& cfg);

// Classifier verdict against the oracle gap (> 1e-6 means useful). Even
// samples are extremal pairs, odd samples mixtures; samples with any
// classification slack below `min_slack` in magnitude are skipped.
VerifyReport verify_tree(int samples, std::uint64_t seed, const SearchConfig& cfg, double min_slack = 1e-3);

// Helstrom experiments on the optimal entangled probe: the first three samples
// are identity vs full damping, (pi/3,0) vs (pi/6,0) and `find_useful_pair()`;
// later ones are random extremal pairs. Passes when every empirical frequency
// lies within 4 binomial standard deviations of the closed-form value.
VerifyReport verify_montecarlo(int samples, std::uint64_t seed, long long trials, const SearchConfig& cfg);

// First extremal pair on a fixed angle grid that the classifier reports as
// useful, off every boundary (slacks >= 1e-2), with a closed-form gain of at
// least 0.05 and an entangled distance of at most 1.8 (so its success
// probability is below 1).
ChannelPair find_useful_pair();

// Binomial standard deviation of a success frequency.
double binomial_sigma(double p, long long trials);

}  // namespace qdisc

#endif  // QDISC_VERIFY_HPP
