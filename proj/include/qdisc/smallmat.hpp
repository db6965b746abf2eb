#ifndef QDISC_SMALLMAT_HPP
#define QDISC_SMALLMAT_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qdisc {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double eigen_residual = 1e-12;
inline constexpr double equality = 1e-10;
}  // namespace tol

// Square complex matrix of dimension 2 or 4, stored row-major. The two-qubit
// basis order is |00>, |01>, |10>, |11>.
class Matrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  Matrix() = default;
  explicit Matrix(std::size_t dim);
  // Row-major entries; the count must be 4 or 16.
  Matrix(std::initializer_list<Complex> entries);

  static Matrix zero(std::size_t dim) { return Matrix(dim); }
  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::initializer_list<Complex> diag);

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * kMaxDim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a_[r * kMaxDim + c]; }

  Complex trace() const;
  bool is_hermitian(double tolerance = tol::hermiticity) const;
  // Largest absolute entry-wise deviation from `other`.
  double max_abs_diff(const Matrix& other) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(Complex s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  void require_same_dim(const Matrix& o) const;

  std::size_t dim_ = 2;
  std::array<Complex, kMaxDim * kMaxDim> a_{};
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix dagger(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);
// |v><v| for a column vector of length 2 or 4.
Matrix outer(const std::vector<Complex>& v);

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
}  // namespace pauli

struct EigenSystem {
  std::vector<double> values;                // ascending
  std::vector<std::vector<Complex>> vectors;  // vectors[k] pairs with values[k]
};

// Eigenvalues with multiplicity, ascending. Throws std::invalid_argument when
// `h` is not Hermitian within tol::hermiticity.
std::vector<double> hermitian_eigenvalues(const Matrix& h);
// Eigenvalues and orthonormal eigenvectors by cyclic complex Jacobi rotations.
EigenSystem hermitian_eigensystem(const Matrix& h);
double trace_norm(const Matrix& h);

}  // namespace qdisc

#endif  // QDISC_SMALLMAT_HPP
