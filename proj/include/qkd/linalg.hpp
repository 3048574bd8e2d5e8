#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qkd {

using complexd = std::complex<double>;

// Dense row-major complex matrix. Everything in this toolkit lives in
// dimension <= 32, so no attempt is made to be clever about storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, complexd(0.0, 0.0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  complexd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const complexd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix adjoint() const;
  complexd trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_hermitian(double tol) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(complexd s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(complexd s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, complexd s) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complexd> data_;
};

Matrix kron(const Matrix& a, const Matrix& b);

// Eigensystem of a Hermitian matrix: a = vectors * diag(values) * vectors†,
// eigenvalues ascending, eigenvectors in the columns.
struct EigenSystem {
  std::vector<double> values;
  Matrix vectors;
};

// Cyclic Jacobi with unitary plane rotations; robust for the tiny
// dimensions used here.
EigenSystem hermitian_eigensystem(const Matrix& a);

// vectors * diag(f(values)) * vectors† for a Hermitian input.
template <typename F>
Matrix hermitian_function(const Matrix& a, F f) {
  EigenSystem es = hermitian_eigensystem(a);
  const std::size_t n = a.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fv = f(es.values[k]);
    if (fv == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fv * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  return out;
}

Matrix matrix_sqrt_psd(const Matrix& a);

// Sum of singular values (via the Gram matrix a†a).
double trace_norm(const Matrix& a);
// Largest singular value.
double operator_norm(const Matrix& a);

// Trace out one subsystem of a (dim_a*dim_b) x (dim_a*dim_b) operator,
// index convention (a,b) -> a*dim_b + b.
enum class Subsystem { First, Second };
Matrix partial_trace(const Matrix& m, std::size_t dim_a, std::size_t dim_b, Subsystem traced_out);

}  // namespace qkd
