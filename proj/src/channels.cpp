#include "qdisc/channels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>
#include <utility>

namespace qdisc {

namespace {

constexpr double kDensityTol = 1e-10;
constexpr double kAngleSlack = 1e-12;

// Libm gives cos(pi/2) ~ 6e-17; quarter turns are common enough to special-case.
std::pair<double, double> exact_cos_sin(double x) {
  if (x == 0.0) return {1.0, 0.0};
  if (x == std::numbers::pi / 2) return {0.0, 1.0};
  if (x == std::numbers::pi) return {-1.0, 0.0};
  return {std::cos(x), std::sin(x)};
}

void require_angle(double v, const char* name) {
  if (!std::isfinite(v) || v < -kAngleSlack || v > std::numbers::pi + kAngleSlack) {
    std::ostringstream os;
    os << name << " = " << v << " is outside [0, pi]";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

ExtremalChannel::ExtremalChannel(double phi, double theta) : phi_(phi), theta_(theta) {
  require_angle(phi, "phi");
  require_angle(theta, "theta");
  std::tie(cos_phi_, sin_phi_) = exact_cos_sin(phi);
  std::tie(cos_theta_, sin_theta_) = exact_cos_sin(theta);
}

QubitChannel::QubitChannel(double lambda, ExtremalChannel first, ExtremalChannel second)
    : lambda_(lambda), first_(first), second_(second) {
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is outside [0, 1]";
    throw std::invalid_argument(os.str());
  }
}

KrausSet kraus_of(const ExtremalChannel& c) {
  const double cp = c.cos_phi(), sp = c.sin_phi();
  const double ct = c.cos_theta(), st = c.sin_theta();
  return KrausSet{{Matrix::diagonal({ct, cp}), Matrix{0.0, sp, st, 0.0}}, {1.0}};
}

KrausSet kraus_of_mixture(const QubitChannel& c) {
  const double l = c.lambda();
  KrausSet out;
  out.weights = {l, 1.0 - l};
  for (const Matrix& k : kraus_of(c.first()).operators) out.operators.push_back(std::sqrt(l) * k);
  for (const Matrix& k : kraus_of(c.second()).operators) out.operators.push_back(std::sqrt(1.0 - l) * k);
  return out;
}

Matrix apply_kraus(const KrausSet& k, const Matrix& rho) {
  Matrix out(rho.dim());
  for (const Matrix& op : k.operators) out += op * rho * dagger(op);
  return out;
}

Matrix apply_kraus_extended(const KrausSet& k, const Matrix& rho4) {
  Matrix out(4);
  const Matrix id = Matrix::identity(2);
  for (const Matrix& op : k.operators) {
    const Matrix big = kron(id, op);
    out += big * rho4 * dagger(big);
  }
  return out;
}

void require_density_matrix(const Matrix& rho, std::size_t dim) {
  if (rho.dim() != dim) {
    throw std::invalid_argument("expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                                " density matrix");
  }
  if (!rho.is_hermitian(kDensityTol)) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kDensityTol) throw std::invalid_argument("density matrix trace != 1");
  if (hermitian_eigenvalues(rho).front() < -kDensityTol) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
}

Matrix apply(const QubitChannel& c, const Matrix& rho) {
  require_density_matrix(rho, 2);
  return apply_kraus(kraus_of_mixture(c), rho);
}

Matrix apply_extended(const QubitChannel& c, const Matrix& rho4) {
  require_density_matrix(rho4, 4);
  return apply_kraus_extended(kraus_of_mixture(c), rho4);
}

AffineMap affine_map(const ExtremalChannel& c) {
  const double d = c.phi() - c.theta();
  const double s = c.phi() + c.theta();
  AffineMap m;
  m.lambdas = {std::cos(d), std::cos(s), std::cos(d) * std::cos(s)};
  m.t = {0.0, 0.0, std::sin(d) * std::sin(s)};
  return m;
}

AffineMap affine_map(const QubitChannel& c) {
  const AffineMap a = affine_map(c.first());
  const AffineMap b = affine_map(c.second());
  const double l = c.lambda();
  AffineMap m;
  for (std::size_t k = 0; k < 3; ++k) {
    m.lambdas[k] = l * a.lambdas[k] + (1.0 - l) * b.lambdas[k];
    m.t[k] = l * a.t[k] + (1.0 - l) * b.t[k];
  }
  return m;
}

Matrix choi_matrix(const KrausSet& k) {
  Matrix choi(4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix eij(2);
      eij(i, j) = 1.0;
      const Matrix img = apply_kraus(k, eij);
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) choi(2 * i + r, 2 * j + c) = img(r, c);
      }
    }
  }
  return choi;
}

CptpReport validate_cptp(const KrausSet& k) {
  Matrix completeness(2);
  for (const Matrix& op : k.operators) completeness += dagger(op) * op;
  const double tp_dev = completeness.max_abs_diff(Matrix::identity(2));
  const double min_eig = hermitian_eigenvalues(choi_matrix(k)).front();

  CptpReport r;
  r.trace_preserving = tp_dev <= kDensityTol;
  r.completely_positive = min_eig >= -kDensityTol;
  r.max_violation = std::max(tp_dev, std::max(0.0, -min_eig));
  return r;
}

bool is_quasi_extreme(const ExtremalChannel& c) {
  return std::abs(c.sin_theta() - c.sin_phi()) <= tol::equality;
}

std::optional<ExtremalChannel> as_extremal(const QubitChannel& c) {
  if (c.lambda() == 1.0 || c.first() == c.second()) return c.first();
  if (c.lambda() == 0.0) return c.second();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Literal parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_number(std::string_view tok, std::string_view literal) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (tok.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError("invalid number '" + std::string(tok) + "' in channel literal '" + std::string(literal) + "'");
  }
  return v;
}

std::vector<double> parse_numbers(std::string_view group, std::size_t expected, std::string_view literal) {
  const auto toks = split(group, ',');
  if (toks.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " comma-separated values in '" +
                     std::string(group) + "' of channel literal '" + std::string(literal) + "'");
  }
  std::vector<double> out;
  for (auto t : toks) out.push_back(parse_number(t, literal));
  return out;
}

// Rewrites range errors from the constructors so the message names the token.
template <typename F>
auto with_token(std::string_view token, std::string_view literal, F&& make) {
  try {
    return make();
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError("'" + std::string(token) + "' in channel literal '" + std::string(literal) + "': " + e.what());
  }
}

}  // namespace

QubitChannel parse_channel(std::string_view literal) {
  const std::string_view s = trim(literal);
  if (s == "identity") return QubitChannel::extremal(ExtremalChannel(0.0, 0.0));

  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    throw ParseError("unrecognized channel literal '" + std::string(s) + "'");
  }
  const std::string_view head = trim(s.substr(0, open));
  const std::string_view body = s.substr(open + 1, s.size() - open - 2);

  if (head == "extremal") {
    const auto v = parse_numbers(body, 2, s);
    return with_token(body, s, [&] { return QubitChannel::extremal(ExtremalChannel(v[0], v[1])); });
  }
  if (head == "ad") {
    const auto v = parse_numbers(body, 1, s);
    return with_token(body, s, [&] { return QubitChannel::extremal(ExtremalChannel(v[0], 0.0)); });
  }
  if (head == "mix") {
    const auto groups = split(body, ';');
    if (groups.size() != 3) {
      throw ParseError("mix literal needs 'lambda;phi,theta;phi2,theta2', got '" + std::string(s) + "'");
    }
    const auto l = parse_numbers(groups[0], 1, s);
    const auto a = parse_numbers(groups[1], 2, s);
    const auto b = parse_numbers(groups[2], 2, s);
    const ExtremalChannel first = with_token(groups[1], s, [&] { return ExtremalChannel(a[0], a[1]); });
    const ExtremalChannel second = with_token(groups[2], s, [&] { return ExtremalChannel(b[0], b[1]); });
    return with_token(groups[0], s, [&] { return QubitChannel(l[0], first, second); });
  }
  if (head == "pauli") {
    // lambda N(theta, theta) + (1 - lambda) N(theta2, pi - theta2)
    const auto v = parse_numbers(body, 3, s);
    return with_token(body, s, [&] {
      return QubitChannel(v[0], ExtremalChannel(v[1], v[1]), ExtremalChannel(v[2], std::numbers::pi - v[2]));
    });
  }
  throw ParseError("unknown channel kind '" + std::string(head) + "' in '" + std::string(s) + "'");
}

std::string format_channel(const QubitChannel& c) {
  std::ostringstream os;
  os.precision(17);
  if (as_extremal(c) && c.lambda() == 1.0) {
    os << "extremal(" << c.first().phi() << "," << c.first().theta() << ")";
  } else {
    os << "mix(" << c.lambda() << ";" << c.first().phi() << "," << c.first().theta() << ";" << c.second().phi()
       << "," << c.second().theta() << ")";
  }
  return os.str();
}

}  // namespace qdisc
