#include "qdisc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qdisc/optimize.hpp"

namespace qdisc {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kNullEigen = 1e-13;
constexpr double kMinStep = 1e-7;
constexpr double kCoarseStep = 1e-3;
constexpr double kCoarseGain = 1e-7;
constexpr int kMaxSweeps = 400;
// Full-mode starts that survive the coarse ascent into fine refinement.
constexpr std::size_t kRefinedStarts = 2;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Evaluates output differences for pure probes without re-deriving Kraus data.
class DeltaEvaluator {
 public:
  DeltaEvaluator(const QubitChannel& c1, const QubitChannel& c2)
      : k1_(kraus_of_mixture(c1).operators), k2_(kraus_of_mixture(c2).operators) {}

  Matrix single(const std::array<Complex, 2>& psi) const {
    Matrix out1(2), out2(2);
    accumulate2(k1_, psi, out1);
    accumulate2(k2_, psi, out2);
    return out1 - out2;
  }

  // id (x) K acts on the second tensor factor: (I (x) K)|i j> = |i> K|j>.
  Matrix entangled(const std::array<Complex, 4>& psi) const {
    Matrix out1(4), out2(4);
    accumulate4(k1_, psi, out1);
    accumulate4(k2_, psi, out2);
    return out1 - out2;
  }

 private:
  static void accumulate2(const std::vector<Matrix>& ks, const std::array<Complex, 2>& psi, Matrix& out) {
    for (const Matrix& k : ks) {
      const Complex w0 = k(0, 0) * psi[0] + k(0, 1) * psi[1];
      const Complex w1 = k(1, 0) * psi[0] + k(1, 1) * psi[1];
      const std::array<Complex, 2> w{w0, w1};
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) out(r, c) += w[r] * std::conj(w[c]);
      }
    }
  }

  static void accumulate4(const std::vector<Matrix>& ks, const std::array<Complex, 4>& psi, Matrix& out) {
    for (const Matrix& k : ks) {
      std::array<Complex, 4> w{};
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          w[2 * i + j] = k(j, 0) * psi[2 * i] + k(j, 1) * psi[2 * i + 1];
        }
      }
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) out(r, c) += w[r] * std::conj(w[c]);
      }
    }
  }

  std::vector<Matrix> k1_;
  std::vector<Matrix> k2_;
};

// Coordinate-wise golden-section ascent. Each coordinate is searched on
// [x - step, x + step]. The step shrinks after a sweep whose moves all stayed
// well inside the bracket or whose gain fell below `refine_tol`; the search
// ends once the step is below `min_step` and a sweep gains less than
// `refine_tol`.
double coordinate_ascent(const std::function<double(const std::vector<double>&)>& f, std::vector<double>& x,
                         double step, double refine_tol, double min_step = kMinStep) {
  double fx = f(x);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double gain = 0.0;
    double largest_move = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      std::vector<double> trial = x;
      const double centre = x[k];
      const ScalarMax m = golden_section_max(
          [&](double v) {
            trial[k] = v;
            return f(trial);
          },
          centre - step, centre + step, step * 1e-4);
      if (m.value > fx) {
        gain += m.value - fx;
        fx = m.value;
        largest_move = std::max(largest_move, std::abs(m.arg - centre));
        x[k] = m.arg;
      }
    }
    if (gain < refine_tol && step <= min_step) break;
    if (gain < refine_tol || largest_move < 0.25 * step) step = std::max(0.25 * step, 0.5 * min_step);
  }
  return fx;
}

std::array<Complex, 2> bloch_state(double polar, double azimuth) {
  return {std::cos(0.5 * polar), std::polar(1.0, azimuth) * std::sin(0.5 * polar)};
}

std::array<Complex, 4> schmidt_state(double chi, double eta) {
  return {std::cos(chi), 0.0, 0.0, std::polar(1.0, eta) * std::sin(chi)};
}

// Chart on two-qubit pure states with the pivot amplitude real: three
// hyperspherical angles for the magnitudes (pivot first) and three relative
// phases for the remaining amplitudes.
struct FullChart {
  std::size_t pivot = 0;

  std::array<std::size_t, 4> order() const {
    std::array<std::size_t, 4> o{pivot, 0, 0, 0};
    std::size_t n = 1;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i != pivot) o[n++] = i;
    }
    return o;
  }

  std::array<Complex, 4> state(const std::vector<double>& x) const {
    const auto o = order();
    const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
    std::array<Complex, 4> a{};
    a[o[0]] = std::cos(x[0]);
    a[o[1]] = std::polar(s1 * std::cos(x[1]), x[3]);
    a[o[2]] = std::polar(s1 * s2 * std::cos(x[2]), x[4]);
    a[o[3]] = std::polar(s1 * s2 * std::sin(x[2]), x[5]);
    return a;
  }

  // Chart coordinates of a normalized state whose pivot is its largest amplitude.
  static std::pair<FullChart, std::vector<double>> from_state(const std::array<Complex, 4>& a) {
    FullChart chart;
    for (std::size_t i = 1; i < 4; ++i) {
      if (std::abs(a[i]) > std::abs(a[chart.pivot])) chart.pivot = i;
    }
    const auto o = chart.order();
    const double ref_phase = std::arg(a[o[0]]);
    std::array<double, 4> m{};
    for (std::size_t k = 0; k < 4; ++k) m[k] = std::abs(a[o[k]]);
    std::vector<double> x(6);
    x[0] = std::acos(std::clamp(m[0], -1.0, 1.0));
    x[1] = std::atan2(std::hypot(m[2], m[3]), m[1]);
    x[2] = std::atan2(m[3], m[2]);
    for (std::size_t k = 1; k < 4; ++k) x[2 + k] = std::arg(a[o[k]]) - ref_phase;
    return {chart, x};
  }
};

double input_excitation(const std::array<Complex, 4>& a) { return std::norm(a[1]) + std::norm(a[3]); }

}  // namespace

PureState2::PureState2(Complex a0, Complex a1) : a_{a0, a1} {
  if (std::abs(std::norm(a0) + std::norm(a1) - 1.0) > kNormTol) {
    throw std::invalid_argument("single-qubit state is not normalized");
  }
}

Matrix PureState2::density() const { return outer({a_[0], a_[1]}); }

PureState4::PureState4(const std::array<Complex, 4>& a) : a_(a) {
  double n = 0.0;
  for (const Complex& v : a) n += std::norm(v);
  if (std::abs(n - 1.0) > kNormTol) throw std::invalid_argument("two-qubit state is not normalized");
}

PureState4 PureState4::product(const PureState2& ref, const PureState2& sys) {
  return PureState4({ref.a0() * sys.a0(), ref.a0() * sys.a1(), ref.a1() * sys.a0(), ref.a1() * sys.a1()});
}

Matrix PureState4::density() const { return outer({a_[0], a_[1], a_[2], a_[3]}); }

void SearchConfig::validate() const {
  if (grid_points < 64) throw std::invalid_argument("grid_points must be >= 64");
  if (multistarts < 16) throw std::invalid_argument("multistarts must be >= 16");
  if (!(refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be > 0");
}

Matrix delta_single(const QubitChannel& c1, const QubitChannel& c2, const PureState2& psi) {
  return DeltaEvaluator(c1, c2).single({psi.a0(), psi.a1()});
}

Matrix delta_entangled(const QubitChannel& c1, const QubitChannel& c2, const PureState4& psi) {
  return DeltaEvaluator(c1, c2).entangled(psi.amplitudes());
}

SingleOracleResult brute_max_single(const QubitChannel& c1, const QubitChannel& c2, const SearchConfig& cfg) {
  cfg.validate();
  const DeltaEvaluator eval(c1, c2);
  auto objective = [&](const std::vector<double>& x) { return trace_norm(eval.single(bloch_state(x[0], x[1]))); };

  const int n = cfg.grid_points;
  const double d_polar = std::numbers::pi / (n - 1);
  const double d_azimuth = 2.0 * std::numbers::pi / n;
  std::vector<double> best{0.0, 0.0};
  double best_v = -1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::vector<double> x{i * d_polar, j * d_azimuth};
      const double v = objective(x);
      if (v > best_v) {
        best_v = v;
        best = x;
      }
    }
  }
  const double value = coordinate_ascent(objective, best, d_azimuth, cfg.refine_tol);
  const auto psi = bloch_state(best[0], best[1]);

  SingleOracleResult r;
  r.distance.value = value;
  r.distance.arg = std::norm(psi[1]);
  r.distance.branch = Branch::BruteForce;
  r.distance.scan_resolution = n;
  r.probe = PureState2(psi[0], psi[1]);
  return r;
}

EntangledOracleResult brute_max_entangled(const QubitChannel& c1, const QubitChannel& c2, const SearchConfig& cfg,
                                          EntangledSearch mode) {
  cfg.validate();
  const DeltaEvaluator eval(c1, c2);
  EntangledOracleResult r;
  r.distance.branch = Branch::BruteForce;
  r.distance.scan_resolution = cfg.grid_points;

  if (mode == EntangledSearch::Restricted) {
    auto objective = [&](const std::vector<double>& x) { return trace_norm(eval.entangled(schmidt_state(x[0], x[1]))); };
    const int n = cfg.grid_points;
    const double d_chi = 0.5 * std::numbers::pi / (n - 1);
    const double d_eta = 2.0 * std::numbers::pi / n;
    std::vector<double> best{0.0, 0.0};
    double best_v = -1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::vector<double> x{i * d_chi, j * d_eta};
        const double v = objective(x);
        if (v > best_v) {
          best_v = v;
          best = x;
        }
      }
    }
    r.distance.value = coordinate_ascent(objective, best, d_eta, cfg.refine_tol);
    const auto a = schmidt_state(best[0], best[1]);
    r.distance.arg = input_excitation(a);
    r.probe = PureState4(a);
    return r;
  }

  std::mt19937_64 rng(cfg.rng_seed);
  auto gaussian = [&] {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };

  struct Start {
    FullChart chart;
    std::vector<double> x;
    double value;
  };
  std::vector<Start> starts;
  for (int start = 0; start < cfg.multistarts; ++start) {
    std::array<Complex, 4> a{};
    double norm = 0.0;
    for (auto& v : a) {
      const double re = gaussian();
      const double im = gaussian();
      v = Complex(re, im);
      norm += std::norm(v);
    }
    for (auto& v : a) v /= std::sqrt(norm);

    auto [chart, x] = FullChart::from_state(a);
    auto objective = [&, chart = chart](const std::vector<double>& y) { return trace_norm(eval.entangled(chart.state(y))); };
    const double v = coordinate_ascent(objective, x, std::numbers::pi / 8.0, std::max(cfg.refine_tol, kCoarseGain), kCoarseStep);
    starts.push_back({chart, x, v});
  }
  // Stable sort keeps the lowest start index first among equal values.
  std::stable_sort(starts.begin(), starts.end(), [](const Start& l, const Start& r) { return l.value > r.value; });
  starts.resize(std::min(starts.size(), kRefinedStarts));

  double best_v = -1.0;
  std::array<Complex, 4> best_state{};
  for (Start& st : starts) {
    auto objective = [&](const std::vector<double>& y) { return trace_norm(eval.entangled(st.chart.state(y))); };
    const double v = coordinate_ascent(objective, st.x, kCoarseStep, cfg.refine_tol);
    if (v > best_v) {
      best_v = v;
      best_state = st.chart.state(st.x);
    }
  }
  double norm = 0.0;
  for (const auto& v : best_state) norm += std::norm(v);
  for (auto& v : best_state) v /= std::sqrt(norm);

  r.distance.value = best_v;
  r.distance.arg = input_excitation(best_state);
  r.probe = PureState4(best_state);
  return r;
}

Measurement helstrom(const Matrix& delta) {
  const EigenSystem es = hermitian_eigensystem(delta);
  const std::size_t n = delta.dim();
  Matrix plus(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (es.values[k] > kNullEigen) plus += outer(es.vectors[k]);
  }
  return Measurement{plus, Matrix::identity(n) - plus};
}

double simulate(const QubitChannel& c1, const QubitChannel& c2, const Probe& probe, const Measurement& m,
                long long trials, std::uint64_t rng_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const Matrix rho = std::visit([](const auto& p) { return p.density(); }, probe);
  if (rho.dim() != m.dim()) throw std::invalid_argument("measurement dimension does not match the probe");

  auto output = [&](const QubitChannel& c) {
    const KrausSet k = kraus_of_mixture(c);
    return rho.dim() == 2 ? apply_kraus(k, rho) : apply_kraus_extended(k, rho);
  };
  auto plus_probability = [&](const Matrix& out) {
    return std::clamp((out * m.plus_projector).trace().real(), 0.0, 1.0);
  };
  const double p_plus_1 = plus_probability(output(c1));
  const double p_plus_2 = plus_probability(output(c2));

  std::mt19937_64 rng(rng_seed);
  long long successes = 0;
  for (long long t = 0; t < trials; ++t) {
    const bool first = uniform01(rng) < 0.5;
    const bool plus = uniform01(rng) < (first ? p_plus_1 : p_plus_2);
    if (plus == first) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(trials);
}

}  // namespace qdisc
