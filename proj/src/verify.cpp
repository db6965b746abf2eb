#include "qdisc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdisc {

namespace {

constexpr double kOracleTol = 1e-6;
constexpr double kSigmaBand = 4.0;
constexpr int kTreeFullStarts = 16;

void require_samples(int samples) {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
}

SampleRecord record(const ChannelPair& pair, std::vector<std::pair<std::string, double>> values) {
  return SampleRecord{format_channel(pair.first), format_channel(pair.second), std::move(values)};
}

VerifyReport new_report(std::string mode, int samples, std::uint64_t seed, double tolerance) {
  VerifyReport rep;
  rep.mode = std::move(mode);
  rep.samples = samples;
  rep.seed = seed;
  rep.tolerance = tolerance;
  return rep;
}

double min_abs_slack(const Classification& c) {
  double m = INFINITY;
  for (const Margin& g : c.margins) m = std::min(m, std::abs(g.slack));
  return m;
}

// Best entangled oracle value: restricted search, then full search.
double entangled_truth(const ChannelPair& pair, const SearchConfig& cfg, int full_starts) {
  SearchConfig full = cfg;
  full.multistarts = full_starts;
  const double restricted = brute_max_entangled(pair.first, pair.second, cfg, EntangledSearch::Restricted).distance.value;
  const double unrestricted = brute_max_entangled(pair.first, pair.second, full, EntangledSearch::Full).distance.value;
  return std::max(restricted, unrestricted);
}

}  // namespace

double PairSampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double PairSampler::angle() { return std::numbers::pi * uniform(); }

ExtremalChannel PairSampler::extremal() {
  const double phi = angle();
  const double theta = angle();
  return ExtremalChannel(phi, theta);
}

ExtremalChannel PairSampler::quasi_extreme(bool reflected) {
  const double phi = angle();
  return ExtremalChannel(phi, reflected ? std::numbers::pi - phi : phi);
}

QubitChannel PairSampler::mixture() {
  const double lambda = uniform();
  const ExtremalChannel first = extremal();
  const ExtremalChannel second = extremal();
  return QubitChannel(lambda, first, second);
}

ChannelPair PairSampler::extremal_pair() {
  const ExtremalChannel a = extremal();
  const ExtremalChannel b = extremal();
  return {QubitChannel::extremal(a), QubitChannel::extremal(b)};
}

ChannelPair PairSampler::mixture_pair() {
  QubitChannel a = mixture();
  QubitChannel b = mixture();
  return {a, b};
}

ChannelPair PairSampler::quasi_extreme_pair(bool reflected) {
  const ExtremalChannel a = quasi_extreme(reflected);
  const ExtremalChannel b = quasi_extreme(reflected);
  return {QubitChannel::extremal(a), QubitChannel::extremal(b)};
}

double binomial_sigma(double p, long long trials) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

VerifyReport verify_lemma1(int samples, std::uint64_t seed, const SearchConfig& cfg) {
  require_samples(samples);
  VerifyReport rep = new_report("lemma1", samples, seed, kOracleTol);
  PairSampler sampler(seed);
  for (int i = 0; i < samples; ++i) {
    const ChannelPair pair = sampler.extremal_pair();
    const double closed = max_distance_single(compute_params(pair.first, pair.second)).value;
    const double oracle = brute_max_single(pair.first, pair.second, cfg).distance.value;
    const double dev = std::abs(closed - oracle);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    ++rep.checked;
    if (!(dev <= kOracleTol)) rep.failures.push_back(record(pair, {{"closed", closed}, {"oracle", oracle}}));
  }
  return rep;
}

VerifyReport verify_lemma2(int samples, std::uint64_t seed, const SearchConfig& cfg) {
  require_samples(samples);
  VerifyReport rep = new_report("lemma2", samples, seed, kOracleTol);
  PairSampler sampler(seed);
  for (int i = 0; i < samples; ++i) {
    const ChannelPair pair = sampler.extremal_pair();
    const double closed = max_distance_entangled(compute_params(pair.first, pair.second)).value;
    const double restricted =
        brute_max_entangled(pair.first, pair.second, cfg, EntangledSearch::Restricted).distance.value;
    const double full = brute_max_entangled(pair.first, pair.second, cfg, EntangledSearch::Full).distance.value;
    const double dev = std::max(std::abs(closed - restricted), full - restricted);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    ++rep.checked;
    if (!(dev <= kOracleTol)) {
      rep.failures.push_back(record(pair, {{"closed", closed}, {"restricted", restricted}, {"full", full}}));
    }
  }
  return rep;
}

VerifyReport verify_quasi_extreme(int samples, std::uint64_t seed, const SearchConfig& cfg) {
  require_samples(samples);
  VerifyReport rep = new_report("quasi_extreme", samples, seed, kOracleTol);
  PairSampler sampler(seed);
  for (int i = 0; i < samples; ++i) {
    const ChannelPair pair = sampler.quasi_extreme_pair(i % 2 == 1);
    const double single = brute_max_single(pair.first, pair.second, cfg).distance.value;
    const double entangled = entangled_truth(pair, cfg, kTreeFullStarts);
    const double dev = entangled - single;
    rep.max_deviation = std::max(rep.max_deviation, dev);
    ++rep.checked;
    if (!(dev <= kOracleTol)) rep.failures.push_back(record(pair, {{"single", single}, {"entangled", entangled}}));
  }
  return rep;
}

VerifyReport verify_tree(int samples, std::uint64_t seed, const SearchConfig& cfg, double min_slack) {
  require_samples(samples);
  VerifyReport rep = new_report("tree", samples, seed, kOracleTol);
  PairSampler sampler(seed);
  for (int i = 0; i < samples; ++i) {
    const ChannelPair pair = i % 2 == 0 ? sampler.extremal_pair() : sampler.mixture_pair();
    const Classification cls = classify(pair.first, pair.second);
    if (min_abs_slack(cls) < min_slack) {
      ++rep.skipped;
      continue;
    }
    const double single = brute_max_single(pair.first, pair.second, cfg).distance.value;
    const double entangled = entangled_truth(pair, cfg, kTreeFullStarts);
    const double gain = entangled - single;
    const bool oracle_useful = gain > kOracleTol;
    ++rep.checked;
    if (oracle_useful != cls.useful) {
      rep.max_deviation = std::max(rep.max_deviation, std::abs(gain));
      rep.failures.push_back(record(pair, {{"single", single},
                                           {"entangled", entangled},
                                           {"gain", gain},
                                           {"classified_useful", cls.useful ? 1.0 : 0.0}}));
    }
  }
  return rep;
}

ChannelPair find_useful_pair() {
  constexpr int kSteps = 12;
  const double h = std::numbers::pi / kSteps;
  for (int a = 0; a <= kSteps; ++a) {
    for (int b = 0; b <= kSteps; ++b) {
      for (int c = 0; c <= kSteps; ++c) {
        for (int d = 0; d <= kSteps; ++d) {
          const ChannelPair pair{QubitChannel::extremal(ExtremalChannel(a * h, b * h)),
                                 QubitChannel::extremal(ExtremalChannel(c * h, d * h))};
          const Classification cls = classify(pair.first, pair.second);
          if (!cls.useful || min_abs_slack(cls) < 1e-2) continue;
          const DiscrimParams p = compute_params(pair.first, pair.second);
          const double entangled = max_distance_entangled(p).value;
          if (entangled - max_distance_single(p).value >= 0.05 && entangled <= 1.8) return pair;
        }
      }
    }
  }
  throw std::logic_error("no useful pair on the search grid");
}

VerifyReport verify_montecarlo(int samples, std::uint64_t seed, long long trials, const SearchConfig& cfg) {
  require_samples(samples);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  VerifyReport rep = new_report("montecarlo", samples, seed, kSigmaBand);
  PairSampler sampler(seed);
  for (int i = 0; i < samples; ++i) {
    ChannelPair pair;
    if (i == 0) {
      pair = {QubitChannel::extremal(ExtremalChannel(0.0, 0.0)),
              QubitChannel::extremal(ExtremalChannel(std::numbers::pi / 2, 0.0))};
    } else if (i == 1) {
      pair = {QubitChannel::extremal(ExtremalChannel(std::numbers::pi / 3, 0.0)),
              QubitChannel::extremal(ExtremalChannel(std::numbers::pi / 6, 0.0))};
    } else if (i == 2) {
      pair = find_useful_pair();
    } else {
      pair = sampler.extremal_pair();
    }
    const double distance = max_distance_entangled(compute_params(pair.first, pair.second)).value;
    const double expected = success_probability(distance);
    const PureState4 probe = brute_max_entangled(pair.first, pair.second, cfg).probe;
    const Measurement m = helstrom(delta_entangled(pair.first, pair.second, probe));
    const double empirical = simulate(pair.first, pair.second, probe, m, trials, seed + static_cast<std::uint64_t>(i));
    const double sigma = binomial_sigma(expected, trials);
    const double z = sigma > 0.0 ? (empirical - expected) / sigma : (empirical == expected ? 0.0 : INFINITY);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(z));
    ++rep.checked;
    if (!(std::abs(empirical - expected) <= kSigmaBand * sigma + 1e-12)) {
      rep.failures.push_back(
          record(pair, {{"expected", expected}, {"empirical", empirical}, {"sigma", sigma}, {"trials", double(trials)}}));
    }
  }
  return rep;
}

}  // namespace qdisc
