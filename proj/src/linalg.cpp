#include "qkd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qkd {

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

complexd Matrix::trace() const {
  complexd t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool Matrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(complexd s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const complexd aik = a(i, k);
      if (aik == complexd(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

EigenSystem hermitian_eigensystem(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("eigensystem: matrix not square");

  Matrix m = a;
  Matrix v = Matrix::identity(n);

  // Symmetrize once so tiny Hermitian violations cannot bias the sweep.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const complexd avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }

  const double scale = std::max(m.max_abs(), 1e-300);
  const double stop = 1e-15 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
    if (off <= stop) break;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const complexd apq = m(p, q);
        const double mag = std::abs(apq);
        if (mag <= stop * 1e-2) continue;

        // Phase factor turning the (p,q) block real, then a classic
        // symmetric Jacobi rotation on the realified block. The combined
        // plane unitary is U = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]].
        const complexd phase = apq / mag;  // e^{i φ}
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const complexd uqp = -s * std::conj(phase);
        const complexd uqq = c * std::conj(phase);

        // m <- m U (columns p,q)
        for (std::size_t k = 0; k < n; ++k) {
          const complexd mkp = m(k, p);
          const complexd mkq = m(k, q);
          m(k, p) = c * mkp + uqp * mkq;
          m(k, q) = s * mkp + uqq * mkq;
        }
        // m <- U† m (rows p,q)
        for (std::size_t k = 0; k < n; ++k) {
          const complexd mpk = m(p, k);
          const complexd mqk = m(q, k);
          m(p, k) = c * mpk + std::conj(uqp) * mqk;
          m(q, k) = s * mpk + std::conj(uqq) * mqk;
        }
        // v <- v U
        for (std::size_t k = 0; k < n; ++k) {
          const complexd vkp = v(k, p);
          const complexd vkq = v(k, q);
          v(k, p) = c * vkp + uqp * vkq;
          v(k, q) = s * vkp + uqq * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m(i, i).real() < m(j, j).real(); });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = m(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

Matrix matrix_sqrt_psd(const Matrix& a) {
  return hermitian_function(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

double trace_norm(const Matrix& a) {
  const Matrix gram = a.adjoint() * a;
  EigenSystem es = hermitian_eigensystem(gram);
  double sum = 0.0;
  for (double w : es.values) sum += std::sqrt(std::max(w, 0.0));
  return sum;
}

double operator_norm(const Matrix& a) {
  const Matrix gram = a.adjoint() * a;
  EigenSystem es = hermitian_eigensystem(gram);
  return std::sqrt(std::max(es.values.back(), 0.0));
}

Matrix partial_trace(const Matrix& m, std::size_t dim_a, std::size_t dim_b, Subsystem traced_out) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (traced_out == Subsystem::First) {
    Matrix out(dim_b, dim_b);
    for (std::size_t a = 0; a < dim_a; ++a)
      for (std::size_t i = 0; i < dim_b; ++i)
        for (std::size_t j = 0; j < dim_b; ++j)
          out(i, j) += m(a * dim_b + i, a * dim_b + j);
    return out;
  }
  Matrix out(dim_a, dim_a);
  for (std::size_t b = 0; b < dim_b; ++b)
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        out(i, j) += m(i * dim_b + b, j * dim_b + b);
  return out;
}

}  // namespace qkd
