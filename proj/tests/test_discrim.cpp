#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "qdisc/discrim.hpp"
#include "testutil.hpp"

using namespace qdisc;

namespace {

constexpr double kPi = std::numbers::pi;

QubitChannel ext(double phi, double theta) { return QubitChannel::extremal(ExtremalChannel(phi, theta)); }

DiscrimParams random_params(std::mt19937_64& rng, double span = 1.0) {
  const double a = testutil::uniform(rng, -span, span);
  const double b = testutil::uniform(rng, -span, span);
  const double g1 = testutil::uniform(rng, -span, span);
  const double g2 = testutil::uniform(rng, -span, span);
  return DiscrimParams(a, b, g1, g2);
}

DiscrimParams random_channel_params(std::mt19937_64& rng) {
  auto channel = [&] {
    const double lambda = testutil::uniform(rng) < 0.5 ? 1.0 : testutil::uniform(rng);
    const double p1 = testutil::uniform(rng, 0.0, kPi), t1 = testutil::uniform(rng, 0.0, kPi);
    const double p2 = testutil::uniform(rng, 0.0, kPi), t2 = testutil::uniform(rng, 0.0, kPi);
    return QubitChannel(lambda, ExtremalChannel(p1, t1), ExtremalChannel(p2, t2));
  };
  const QubitChannel c1 = channel();
  const QubitChannel c2 = channel();
  return compute_params(c1, c2);
}

// Dense-grid maximum of a function of s on [0, 1].
template <class F>
double grid_max(F f, int n = 100000) {
  double best = -INFINITY;
  for (int i = 0; i <= n; ++i) best = std::max(best, f(static_cast<double>(i) / n));
  return best;
}

double min_abs_slack(const Classification& c) {
  double m = INFINITY;
  for (const Margin& g : c.margins) m = std::min(m, std::abs(g.slack));
  return m;
}

}  // namespace

TEST_CASE("DiscrimParams validation and derived values") {
  CHECK_THROWS_AS(DiscrimParams(2.5, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(DiscrimParams(0, NAN, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(DiscrimParams(0, 0, INFINITY, 0), std::invalid_argument);

  const DiscrimParams tie(0.2, -0.2, 0.3, -0.3);
  CHECK(tie.gamma_min() == 0.3);
  CHECK(tie.gamma_max() == 0.3);
  CHECK(tie.dominant() == 0.2);

  const DiscrimParams p(0.1, -0.4, -0.05, 0.6);
  CHECK(p.gamma_min() == -0.05);
  CHECK(p.gamma_max() == 0.6);
  CHECK(p.dominant() == -0.4);
  CHECK(p.gamma_abs_sum() == doctest::Approx(0.65));
}

TEST_CASE("compute_params examples") {
  const DiscrimParams p = compute_params(ext(kPi / 2, 0.0), ext(0.0, 0.0));
  CHECK(p.alpha() == 0.0);
  CHECK(std::abs(p.beta() + 1.0) < 1e-15);
  CHECK(std::abs(p.gamma1() + 1.0) < 1e-15);
  CHECK(std::abs(p.gamma2()) < 1e-15);

  const DiscrimParams z = compute_params(ext(0.3, 1.1), ext(0.3, 1.1));
  CHECK(z.alpha() == 0.0);
  CHECK(z.beta() == 0.0);
  CHECK(z.gamma1() == 0.0);
  CHECK(z.gamma2() == 0.0);

  const DiscrimParams q = compute_params(ext(kPi / 3, 0.0), ext(kPi / 6, 0.0));
  CHECK(std::abs(q.alpha()) < 1e-15);
  CHECK(std::abs(q.beta() + 0.5) < 1e-15);
  CHECK(std::abs(q.gamma1() - (0.5 - std::sqrt(3.0) / 2.0)) < 1e-15);
  CHECK(std::abs(q.gamma2()) < 1e-15);
}

TEST_CASE("compute_params averages mixture components") {
  const ExtremalChannel a(0.4, 1.2), b(2.0, 0.3), c(1.0, 1.0);
  const double lambda = 0.3;
  const DiscrimParams p = compute_params(QubitChannel(lambda, a, b), QubitChannel::extremal(c));
  auto avg = [&](auto f) { return lambda * f(a) + (1 - lambda) * f(b) - f(c); };
  CHECK(std::abs(p.alpha() - avg([](const ExtremalChannel& e) { return std::pow(std::cos(e.theta()), 2); })) < 1e-15);
  CHECK(std::abs(p.beta() - avg([](const ExtremalChannel& e) { return std::pow(std::cos(e.phi()), 2); })) < 1e-15);
  CHECK(std::abs(p.gamma1() - avg([](const ExtremalChannel& e) { return std::cos(e.phi()) * std::cos(e.theta()); })) <
        1e-15);
  CHECK(std::abs(p.gamma2() - avg([](const ExtremalChannel& e) { return std::sin(e.phi()) * std::sin(e.theta()); })) <
        1e-15);
}

TEST_CASE("single_objective") {
  const DiscrimParams p(0.3, -0.7, 0.2, -0.1);
  CHECK(single_objective(p, 0.0) == doctest::Approx(0.6));
  CHECK(single_objective(p, 1.0) == doctest::Approx(1.4));
  CHECK(single_objective(DiscrimParams(0, -1, -1, 0), 0.5) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(single_objective(p, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(single_objective(p, 1.1), std::invalid_argument);
}

TEST_CASE("entangled_objective") {
  const DiscrimParams p(0.3, -0.7, 0.2, -0.1);
  CHECK(entangled_objective(p, 0.0) == doctest::Approx(0.6));
  CHECK(entangled_objective(DiscrimParams(0, -1, -1, 0), 1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(entangled_objective(p, 2.0), std::invalid_argument);

  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const double a = testutil::uniform(rng, -1, 1), b = testutil::uniform(rng, -1, 1);
    const double g = testutil::uniform(rng, -1, 1);
    const DiscrimParams q(a, b, g, i % 2 == 0 ? g : -g);
    for (int k = 0; k <= 100; ++k) {
      const double s = k / 100.0;
      CHECK(std::abs(entangled_objective(q, s) - single_objective(q, s)) <= 1e-12);
    }
  }
}

TEST_CASE("mixed_regime_objective") {
  const DiscrimParams p(0.4, 0.2, 0.5, 0.1);
  CHECK(mixed_regime_objective(p, 0.0) == doctest::Approx(0.8));
  CHECK(mixed_regime_objective(p, 1.0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(mixed_regime_objective(p, -1e-3), std::invalid_argument);
  // gamma_M^2 = alpha*beta collapses the radical.
  const DiscrimParams flat(0.5, 0.5, 0.5, 0.1);
  for (int k = 0; k <= 10; ++k) {
    const double s = k / 10.0;
    CHECK(mixed_regime_objective(flat, s) == doctest::Approx(2.0 * std::abs((1 - s) * 0.5 + s * 0.5)));
  }
}

TEST_CASE("restricted objective reduces to the regime formulas") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 2000; ++i) {
    const DiscrimParams p = random_params(rng);
    const double ab = p.alpha() * p.beta();
    const double gm2 = p.gamma_min() * p.gamma_min(), gM2 = p.gamma_max() * p.gamma_max();
    const double s = testutil::uniform(rng);
    const double r = restricted_entangled_objective(p, s);
    if (gm2 >= ab) CHECK(std::abs(r - entangled_objective(p, s)) < 1e-12);
    if (gm2 < ab && ab < gM2) CHECK(std::abs(r - mixed_regime_objective(p, s)) < 1e-12);
    if (gM2 <= ab) CHECK(std::abs(r - 2.0 * std::abs((1 - s) * p.alpha() + s * p.beta())) < 1e-12);
  }
}

TEST_CASE("max_distance_single examples") {
  const DistanceResult a = max_distance_single(DiscrimParams(0, -1, -1, 0));
  CHECK(a.value == doctest::Approx(2.0));
  CHECK(a.arg == 1.0);
  CHECK(a.branch == Branch::SingleEndpoint);

  const DistanceResult b = max_distance_single(DiscrimParams(0.1, 0.1, 0.5, 0.3));
  CHECK(std::abs(b.value - 0.8) < 1e-12);
  CHECK(b.branch == Branch::SingleStationary);
  CHECK(b.arg == doctest::Approx(0.5));

  const DistanceResult c = max_distance_single(DiscrimParams(0, -0.5, 0.5 - std::sqrt(3.0) / 2.0, 0));
  CHECK(std::abs(c.value - 1.0) < 1e-12);
  CHECK(c.arg == 1.0);
}

TEST_CASE("max_distance_single matches a dense scan of the objective") {
  std::mt19937_64 rng(23);
  int vertex_outside = 0;
  for (int i = 0; i < 400; ++i) {
    const DiscrimParams p = random_params(rng);
    const DistanceResult r = max_distance_single(p);
    const double scan = grid_max([&](double s) { return single_objective(p, s); });
    CHECK(r.value >= scan - 1e-12);
    CHECK(r.value <= scan + 1e-8);
    CHECK(std::abs(single_objective(p, r.arg) - r.value) < 1e-12);
    const double v = single_stationary_point(p);
    if (!std::isnan(v) && (v < 0 || v > 1)) ++vertex_outside;
  }
  // Regression guard: the concave branch with an out-of-range vertex occurs.
  CHECK(vertex_outside > 0);
}

TEST_CASE("max_distance_entangled examples") {
  const DistanceResult a = max_distance_entangled(DiscrimParams(0, -1, -1, 0));
  CHECK(std::abs(a.value - 2.0) < 1e-12);
  CHECK(std::abs(a.arg - 1.0) < 1e-9);

  const DiscrimParams linear(0.8, 0.5, 0.6, 0.3);
  const DistanceResult b = max_distance_entangled(linear);
  CHECK(b.branch == Branch::EntangledLinear);
  CHECK(std::abs(b.value - 1.6) < 1e-12);
  CHECK(b.arg == 0.0);
  CHECK(b.value >= max_distance_single(linear).value - 1e-12);

  std::mt19937_64 rng(24);
  for (int i = 0; i < 100; ++i) {
    const double a0 = testutil::uniform(rng, -1, 1), b0 = testutil::uniform(rng, -1, 1);
    const double g = testutil::uniform(rng, -1, 1);
    const DiscrimParams p(a0, b0, g, -g);
    CHECK(std::abs(max_distance_entangled(p).value - max_distance_single(p).value) < 1e-9);
  }
}

TEST_CASE("max_distance_entangled matches a dense scan of the restricted objective") {
  std::mt19937_64 rng(25);
  std::set<Branch> seen;
  for (int i = 0; i < 400; ++i) {
    const DiscrimParams p = random_params(rng);
    const DistanceResult r = max_distance_entangled(p);
    seen.insert(r.branch);
    const double scan = grid_max([&](double s) { return restricted_entangled_objective(p, s); });
    CHECK(r.value >= scan - 1e-12);
    CHECK(r.value <= scan + 1e-8);
    CHECK(r.arg >= 0.0);
    CHECK(r.arg <= 1.0);
    CHECK(std::abs(restricted_entangled_objective(p, r.arg) - r.value) < 1e-9);
  }
  CHECK(seen.count(Branch::EntangledLinear) == 1);
  CHECK(seen.count(Branch::EntangledMixed) == 1);
  CHECK(seen.count(Branch::EntangledScan) == 1);
}

TEST_CASE("mixed_regime_stationary_point") {
  CHECK(mixed_regime_stationary_point(DiscrimParams(0.3, 0.3, 0.5, 0.1)) == doctest::Approx(0.5));
  CHECK(mixed_regime_stationary_point(DiscrimParams(0.4, 0.2, 0.5, 0.1)) == doctest::Approx(0.25));
  CHECK(mixed_regime_stationary_point(DiscrimParams(0.4, 0.2, -0.5, 0.1)) == doctest::Approx(0.25));
  CHECK_THROWS_AS(mixed_regime_stationary_point(DiscrimParams(0.4, -0.4, 0.5, 0.1)), std::domain_error);
  CHECK_THROWS_AS(mixed_regime_stationary_point(DiscrimParams(0.0, 0.0, 0.0, 0.0)), std::domain_error);
}

TEST_CASE("extremal_gain_polynomial") {
  std::mt19937_64 rng(26);
  {
    const DiscrimParams p(0.3, -0.6, 0.5, 0.2);
    const double P = p.dominant();
    CHECK(extremal_gain_polynomial(p, 0.0) == doctest::Approx(P * P * (P * P - 0.36)));
  }
  // Sign agreement with the direct two-radical inequality in its branch.
  int compared = 0, negative = 0;
  while (compared < 1000) {
    const DiscrimParams p = random_params(rng);
    const double a = p.alpha(), b = p.beta(), sum = std::abs(a + b);
    const double gM = p.gamma_max();
    if (!(p.gamma_abs_sum() <= sum && sum < 2.0 * std::abs(gM))) continue;
    const double s = testutil::uniform(rng);
    double lhs = 0.0;
    for (double g : {p.gamma1(), p.gamma2()}) lhs += std::sqrt(std::pow(s * a - (1 - s) * b, 2) + 4 * s * (1 - s) * g * g);
    const double rhs = 2.0 * std::abs(p.dominant());
    const double F = extremal_gain_polynomial(p, s);
    if (std::abs(lhs - rhs) < 1e-9 || std::abs(F) < 1e-12) continue;
    ++compared;
    if (F < 0) ++negative;
    CHECK((F < 0) == (lhs > rhs));
  }
  CHECK(negative > 0);

  int checked = 0;
  while (checked < 200) {
    const DiscrimParams p = random_params(rng);
    const double a = p.alpha(), b = p.beta();
    const double g2 = p.gamma1() * p.gamma1() + p.gamma2() * p.gamma2();
    if (!(p.dominant() == a && a * (a + b) >= g2 && p.gamma_abs_sum() <= std::abs(a + b))) continue;
    ++checked;
    for (int k = 0; k <= 1000; ++k) CHECK(extremal_gain_polynomial(p, k / 1000.0) >= -1e-12);
  }
}

TEST_CASE("mixed_gain_polynomial") {
  std::mt19937_64 rng(27);
  {
    const DiscrimParams p(0.3, -0.6, 0.5, 0.2);
    const double P = p.dominant();
    CHECK(mixed_gain_polynomial(p, 0.0) == doctest::Approx(P * P * (P * P - 0.09)));
  }
  auto in_branch = [](const DiscrimParams& p) {
    const double ab = p.alpha() * p.beta();
    const double gm = p.gamma_min(), gM = p.gamma_max();
    return gm * gm < ab && ab < gM * gM && p.gamma_abs_sum() <= std::abs(p.alpha() + p.beta());
  };
  int compared = 0, negative = 0;
  while (compared < 1000) {
    const DiscrimParams p = random_params(rng);
    if (!in_branch(p)) continue;
    const double a = p.alpha(), b = p.beta(), gM = p.gamma_max();
    const double s = testutil::uniform(rng);
    const double lhs = std::abs((1 - s) * a + s * b) + std::sqrt(std::pow((1 - s) * a - s * b, 2) + 4 * (s - s * s) * gM * gM);
    const double rhs = 2.0 * std::abs(p.dominant());
    const double R = mixed_gain_polynomial(p, s);
    if (std::abs(lhs - rhs) < 1e-9 || std::abs(R) < 1e-12) continue;
    ++compared;
    if (R < 0) ++negative;
    CHECK((R < 0) == (lhs > rhs));
  }
  CHECK(negative > 0);

  int checked = 0;
  while (checked < 200) {
    const DiscrimParams p = random_params(rng);
    if (!in_branch(p) || std::abs(p.gamma_max()) > std::abs(p.dominant())) continue;
    ++checked;
    for (int k = 0; k <= 1000; ++k) CHECK(mixed_gain_polynomial(p, k / 1000.0) >= -1e-12);
  }
}

TEST_CASE("classify examples") {
  const Classification q = classify(ext(0.7, 0.7), ext(2.0, kPi - 2.0));
  CHECK_FALSE(q.useful);
  CHECK(q.node.find("T1") != std::string::npos);

  // alpha = beta with alpha^2 > |gamma1 gamma2|; gamma_m^2 < alpha*beta puts it
  // in the mixture subtree.
  const Classification b2 = classify(DiscrimParams(0.25, 0.25, 0.5, 0.1));
  CHECK(b2.useful);
  CHECK(b2.node == "T3/B.1");

  const Classification root = classify(DiscrimParams(0.8, 0.5, 0.6, 0.3));
  CHECK_FALSE(root.useful);
  CHECK(root.node == "T3/root");

  const Classification same = classify(DiscrimParams(0, 0, 0, 0));
  CHECK_FALSE(same.useful);
  CHECK(same.node == "T3/root");
  CHECK(same.boundary);

  const Classification worked = classify(DiscrimParams(0, -1, -1, 0));
  CHECK_FALSE(worked.useful);

  const Classification obs = classify(DiscrimParams(0.1, 0.6, 0.4, -0.4));
  CHECK_FALSE(obs.useful);
  CHECK(obs.node == "T2/O1");
}

TEST_CASE("extremal pairs satisfy gamma_m^2 >= alpha*beta") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 20000; ++i) {
    const double p1 = testutil::uniform(rng, 0, kPi), t1 = testutil::uniform(rng, 0, kPi);
    const double p2 = testutil::uniform(rng, 0, kPi), t2 = testutil::uniform(rng, 0, kPi);
    const DiscrimParams p = compute_params(ext(p1, t1), ext(p2, t2));
    CHECK(p.gamma_min() * p.gamma_min() >= p.alpha() * p.beta() - 1e-12);
  }
}

TEST_CASE("quasi-extreme pairs are never useful") {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 300; ++i) {
    const double p1 = testutil::uniform(rng, 0, kPi), p2 = testutil::uniform(rng, 0, kPi);
    const ExtremalChannel c1(p1, i % 2 ? kPi - p1 : p1);
    const ExtremalChannel c2(p2, i % 3 ? kPi - p2 : p2);
    const Classification c = classify(QubitChannel::extremal(c1), QubitChannel::extremal(c2));
    CHECK_FALSE(c.useful);
    CHECK(c.node == "T1");
    const DiscrimParams p = compute_params(QubitChannel::extremal(c1), QubitChannel::extremal(c2));
    CHECK(max_distance_entangled(p).value - max_distance_single(p).value <= 1e-9);
  }
}

TEST_CASE("classification structure") {
  const std::set<std::string> leaves = {"T1",     "T2/O1",  "T2/A.1", "T2/A.2", "T2/A.3", "T2/A.4", "T2/B.1",
                                        "T2/B.2", "T2/B.3", "T3/root", "T3/A.1", "T3/A.2", "T3/A.3", "T3/B.1",
                                        "T3/B.2", "T3/B.3", "T3/B.4"};
  std::mt19937_64 rng(29);
  std::set<std::string> reached;
  for (int i = 0; i < 20000; ++i) {
    const DiscrimParams p = i % 2 ? random_params(rng) : random_channel_params(rng);
    const Classification c = classify(p);
    CHECK(leaves.count(c.node) == 1);
    CHECK_FALSE(c.margins.empty());
    CHECK(c.boundary == (min_abs_slack(c) < kBoundaryEps));
    reached.insert(c.node);
  }
  for (const char* n : {"T2/A.1", "T2/A.2", "T2/A.3", "T2/B.1", "T2/B.3", "T3/root", "T3/A.3", "T3/B.2", "T3/B.4"}) {
    CHECK_MESSAGE(reached.count(n) == 1, n);
  }
}

TEST_CASE("classify agrees with the closed-form gap away from boundaries") {
  std::mt19937_64 rng(30);
  int checked = 0;
  for (int i = 0; i < 6000; ++i) {
    const DiscrimParams p = i % 2 ? random_params(rng) : random_channel_params(rng);
    const Classification c = classify(p);
    if (min_abs_slack(c) <= 1e-3) continue;
    ++checked;
    const double gap = max_distance_entangled(p).value - max_distance_single(p).value;
    CHECK_MESSAGE(c.useful == (gap > 1e-6), c.node, " gap=", gap);
  }
  CHECK(checked > 1000);
}

TEST_CASE("observation: equal gamma magnitudes are never useful") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const double a = testutil::uniform(rng, -1, 1), b = testutil::uniform(rng, -1, 1);
    const double g = testutil::uniform(rng, -1, 1);
    CHECK_FALSE(classify(DiscrimParams(a, b, g, i % 2 ? g : -g)).useful);
  }
}

TEST_CASE("distance relations") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 2000; ++i) {
    const DiscrimParams p = i % 2 ? random_params(rng) : random_channel_params(rng);
    CHECK(max_distance_entangled(p).value >= max_distance_single(p).value - 1e-9);
    const double s = testutil::uniform(rng);
    const double gM = p.gamma_max();
    const double bound = 2.0 * std::sqrt(std::pow((1 - s) * p.alpha() - s * p.beta(), 2) + 4 * s * (1 - s) * gM * gM);
    CHECK(entangled_objective(p, s) <= bound + 1e-12);
  }
}

TEST_CASE("algebraic identity") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 10000; ++i) {
    const double a = testutil::uniform(rng, -2, 2), b = testutil::uniform(rng, -2, 2), s = testutil::uniform(rng);
    const double lhs = std::pow((1 - s) * a + s * b, 2) - 4 * s * (1 - s) * a * b;
    const double rhs = std::pow((1 - s) * a - s * b, 2);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("success_probability") {
  CHECK(success_probability(0.0) == 0.5);
  CHECK(success_probability(2.0) == 1.0);
  CHECK(success_probability(1.0) == 0.75);
  CHECK_THROWS_AS(success_probability(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(success_probability(2.1), std::invalid_argument);
  CHECK_THROWS_AS(success_probability(NAN), std::invalid_argument);
}

TEST_CASE("branch names") {
  CHECK(to_string(Branch::SingleStationary) == "single_stationary");
  CHECK(to_string(Branch::BruteForce) == "brute_force");
}
