#include "qdisc/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qdisc {

namespace {

void require_valid_dim(std::size_t dim) {
  if (dim != 2 && dim != 4) {
    throw std::invalid_argument("matrix dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

void require_hermitian(const Matrix& h) {
  if (!h.is_hermitian()) {
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  }
}

double off_diagonal_norm2(const Matrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      if (r != c) s += std::norm(a(r, c));
    }
  }
  return s;
}

double frobenius_norm2(const Matrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < a.dim(); ++c) s += std::norm(a(r, c));
  }
  return s;
}

// Cyclic complex Jacobi; rotations are accumulated into `v` when it is given.
Matrix jacobi_diagonalize(const Matrix& h, Matrix* v) {
  const std::size_t n = h.dim();
  Matrix a = h;
  const double scale2 = frobenius_norm2(a);
  const double target = std::max(scale2, 1e-300) * 1e-32;
  for (int sweep = 0; sweep < 64 && off_diagonal_norm2(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex z = a(p, q);
        const double r = std::abs(z);
        if (r == 0.0) continue;
        const Complex phase = z / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex kp = a(k, p);
          const Complex kq = a(k, q);
          a(k, p) = kp * upp + kq * uqp;
          a(k, q) = kp * upq + kq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex pk = a(p, k);
          const Complex qk = a(q, k);
          a(p, k) = std::conj(upp) * pk + std::conj(uqp) * qk;
          a(q, k) = std::conj(upq) * pk + std::conj(uqq) * qk;
        }
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex kp = (*v)(k, p);
            const Complex kq = (*v)(k, q);
            (*v)(k, p) = kp * upp + kq * uqp;
            (*v)(k, q) = kp * upq + kq * uqq;
          }
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (off_diagonal_norm2(a) > std::pow(tol::eigen_residual, 2) * std::max(1.0, scale2)) {
    throw std::runtime_error("Jacobi eigensolver did not converge");
  }
  return a;
}

}  // namespace

Matrix::Matrix(std::size_t dim) : dim_(dim) { require_valid_dim(dim); }

Matrix::Matrix(std::initializer_list<Complex> entries) {
  if (entries.size() == 4) {
    dim_ = 2;
  } else if (entries.size() == 16) {
    dim_ = 4;
  } else {
    throw std::invalid_argument("matrix literal needs 4 or 16 entries");
  }
  std::size_t i = 0;
  for (const Complex& v : entries) {
    (*this)(i / dim_, i % dim_) = v;
    ++i;
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<Complex> diag) {
  Matrix m(diag.size());
  std::size_t i = 0;
  for (const Complex& v : diag) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

Complex Matrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::is_hermitian(double tolerance) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tolerance) return false;
    }
  }
  return true;
}

double Matrix::max_abs_diff(const Matrix& other) const {
  require_same_dim(other);
  double m = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      m = std::max(m, std::abs((*this)(r, c) - other(r, c)));
    }
  }
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_dim(o);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) += o(r, c);
  }
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_dim(o);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) -= o(r, c);
  }
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& v : a_) v *= s;
  return *this;
}

void Matrix::require_same_dim(const Matrix& o) const {
  if (o.dim_ != dim_) {
    throw std::invalid_argument("matrix dimension mismatch: " + std::to_string(dim_) + " vs " +
                                std::to_string(o.dim_));
  }
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("matrix dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
  const std::size_t n = a.dim();
  Matrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex(0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) { return a * b; }

Matrix dagger(const Matrix& a) {
  Matrix out(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < a.dim(); ++c) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw std::invalid_argument("kron is defined for two 2x2 factors");
  }
  Matrix out(4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
      }
    }
  }
  return out;
}

Matrix outer(const std::vector<Complex>& v) {
  Matrix out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) out(r, c) = v[r] * std::conj(v[c]);
  }
  return out;
}

namespace pauli {
Matrix I() { return Matrix::identity(2); }
Matrix X() { return Matrix{0.0, 1.0, 1.0, 0.0}; }
Matrix Y() { return Matrix{0.0, Complex(0, -1), Complex(0, 1), 0.0}; }
Matrix Z() { return Matrix::diagonal({1.0, -1.0}); }
}  // namespace pauli

std::vector<double> hermitian_eigenvalues(const Matrix& h) {
  require_hermitian(h);
  if (h.dim() == 2) {
    const double a = h(0, 0).real();
    const double b = h(1, 1).real();
    const double mean = 0.5 * (a + b);
    const double radius = std::hypot(0.5 * (a - b), std::abs(h(0, 1)));
    return {mean - radius, mean + radius};
  }
  const Matrix a = jacobi_diagonalize(h, nullptr);
  std::vector<double> values(h.dim());
  for (std::size_t k = 0; k < h.dim(); ++k) values[k] = a(k, k).real();
  std::sort(values.begin(), values.end());
  return values;
}

EigenSystem hermitian_eigensystem(const Matrix& h) {
  require_hermitian(h);
  const std::size_t n = h.dim();
  Matrix v = Matrix::identity(n);
  const Matrix a = jacobi_diagonalize(h, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem es;
  for (std::size_t k : order) {
    es.values.push_back(a(k, k).real());
    std::vector<Complex> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v(r, k);
    es.vectors.push_back(std::move(col));
  }
  return es;
}

double trace_norm(const Matrix& h) {
  double s = 0.0;
  for (double e : hermitian_eigenvalues(h)) s += std::abs(e);
  return s;
}

}  // namespace qdisc
