#include "qkd/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

namespace {

void require_equal_dims(const DensityMatrix& rho, const DensityMatrix& tau) {
  if (rho.dim() != tau.dim()) throw std::invalid_argument("state dimensions differ");
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("density matrix: not square");
  if (!m.is_hermitian(1e-12)) throw std::invalid_argument("density matrix: not Hermitian");
  const double tr = m.trace().real();
  if (tr < -1e-12 || tr > 1.0 + 1e-12)
    throw std::invalid_argument("density matrix: trace outside [0,1]");
  EigenSystem es = hermitian_eigensystem(m);
  if (es.values.front() < -1e-10)
    throw std::invalid_argument("density matrix: not positive semi-definite");
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::trusted(Matrix m) { return DensityMatrix(std::move(m)); }

bool DensityMatrix::is_normalized(double tol) const { return std::abs(trace() - 1.0) <= tol; }

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probs) {
  Matrix m(probs.size(), probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
  return from_matrix(std::move(m));
}

double PureState::squared_norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

DensityMatrix PureState::to_density() const {
  const std::size_t n = dim();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = amplitudes[i] * std::conj(amplitudes[j]);
  return DensityMatrix::trusted(std::move(m));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  PureState s;
  s.amplitudes.assign(dim, complexd(0.0, 0.0));
  s.amplitudes[index] = 1.0;
  return s;
}

KrausChannel::KrausChannel(std::size_t in_dim, std::size_t out_dim, std::vector<Matrix> ops)
    : in_dim_(in_dim), out_dim_(out_dim), ops_(std::move(ops)) {
  if (ops_.empty()) throw std::invalid_argument("channel: no Kraus operators");
  Matrix sum(in_dim_, in_dim_);
  for (const auto& e : ops_) {
    if (e.rows() != out_dim_ || e.cols() != in_dim_)
      throw std::invalid_argument("channel: Kraus operator shape mismatch");
    sum += e.adjoint() * e;
  }
  sum -= Matrix::identity(in_dim_);
  if (sum.max_abs() > 1e-10) throw std::invalid_argument("channel: not trace preserving");
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  return KrausChannel(dim, dim, {Matrix::identity(dim)});
}

KrausChannel KrausChannel::amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("amplitude damping: gamma outside [0,1]");
  Matrix e0(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix e1(2, 2);
  e1(0, 1) = std::sqrt(gamma);
  return KrausChannel(2, 2, {std::move(e0), std::move(e1)});
}

KrausChannel KrausChannel::depolarizing(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing: p outside [0,1]");
  Matrix id = Matrix::identity(2);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  y(0, 1) = complexd(0.0, -1.0);
  y(1, 0) = complexd(0.0, 1.0);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const double a = std::sqrt(1.0 - 3.0 * p / 4.0);
  const double b = std::sqrt(p / 4.0);
  return KrausChannel(2, 2, {a * id, b * x, b * y, b * z});
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& tau) {
  require_equal_dims(rho, tau);
  const Matrix diff = rho.matrix() - tau.matrix();
  EigenSystem es = hermitian_eigensystem(diff);
  double pos = 0.0, neg = 0.0;
  for (double w : es.values) {
    if (w > 0.0) pos += w;
    else neg -= w;
  }
  return std::max(pos, neg);
}

double generalized_fidelity(const DensityMatrix& rho, const DensityMatrix& tau) {
  require_equal_dims(rho, tau);
  const double overlap = root_fidelity_with_operator(rho, tau.matrix());
  const double dr = std::max(1.0 - rho.trace(), 0.0);
  const double dt = std::max(1.0 - tau.trace(), 0.0);
  return std::min(overlap + std::sqrt(dr * dt), 1.0);
}

double root_fidelity_with_operator(const DensityMatrix& rho, const Matrix& op) {
  // ||sqrt(rho) sqrt(op)||_1 via the Gram matrix sqrt(op) rho sqrt(op):
  // singular values come out as square roots of its eigenvalues, which
  // avoids forming sqrt(rho) for near-singular states.
  const Matrix sq_op = matrix_sqrt_psd(op);
  const Matrix gram = sq_op * rho.matrix() * sq_op;
  EigenSystem es = hermitian_eigensystem(gram);
  double sum = 0.0;
  for (double w : es.values) sum += std::sqrt(std::max(w, 0.0));
  return sum;
}

double purified_distance(const DensityMatrix& rho, const DensityMatrix& tau) {
  const double f = generalized_fidelity(rho, tau);
  return std::sqrt(std::max(1.0 - f * f, 0.0));
}

PureState purify(const DensityMatrix& rho) {
  if (!rho.is_normalized()) throw std::invalid_argument("purify: input not normalised");
  const std::size_t d = rho.dim();
  EigenSystem es = hermitian_eigensystem(rho.matrix());
  PureState psi;
  psi.amplitudes.assign(d * d, complexd(0.0, 0.0));
  // |psi> = sum_k sqrt(w_k) |k>^R |v_k>^A, reference first.
  for (std::size_t k = 0; k < d; ++k) {
    const double w = std::max(es.values[k], 0.0);
    if (w == 0.0) continue;
    const double root = std::sqrt(w);
    for (std::size_t i = 0; i < d; ++i) psi.amplitudes[k * d + i] = root * es.vectors(i, k);
  }
  return psi;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.in_dim() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  Matrix out(ch.out_dim(), ch.out_dim());
  for (const auto& e : ch.kraus_ops()) out += e * rho.matrix() * e.adjoint();
  return DensityMatrix::trusted(std::move(out));
}

Matrix isometric_extension(const KrausChannel& ch) {
  const std::size_t env = ch.env_dim();
  Matrix u(ch.out_dim() * env, ch.in_dim());
  for (std::size_t j = 0; j < env; ++j) {
    const Matrix& e = ch.kraus_ops()[j];
    for (std::size_t b = 0; b < ch.out_dim(); ++b)
      for (std::size_t a = 0; a < ch.in_dim(); ++a) u(b * env + j, a) = e(b, a);
  }
  return u;
}

DensityMatrix complementary_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.in_dim() != rho.dim())
    throw std::invalid_argument("complementary_channel: dimension mismatch");
  const Matrix u = isometric_extension(ch);
  const Matrix lifted = u * rho.matrix() * u.adjoint();
  return DensityMatrix::trusted(partial_trace(lifted, ch.out_dim(), ch.env_dim(), Subsystem::First));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (!rho.is_normalized()) throw std::invalid_argument("entropy: input not normalised");
  EigenSystem es = hermitian_eigensystem(rho.matrix());
  double h = 0.0;
  for (double w : es.values) {
    const double p = std::min(std::max(w, 0.0), 1.0);
    if (p > 1e-12) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

DensityMatrix partial_trace_state(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                                  Subsystem traced_out) {
  return DensityMatrix::trusted(partial_trace(rho.matrix(), dim_a, dim_b, traced_out));
}

}  // namespace qkd
