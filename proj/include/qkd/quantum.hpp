#pragma once

#include <vector>

#include "qkd/linalg.hpp"

namespace qkd {

// Hermitian, positive semi-definite, trace in [0,1]. Sub-normalised
// operators are first-class citizens: every distance measure below is
// defined on them.
class DensityMatrix {
 public:
  // Validates Hermiticity (1e-12), PSD (eigenvalues >= -1e-10) and
  // trace in [0, 1+1e-12]; throws std::invalid_argument otherwise.
  static DensityMatrix from_matrix(Matrix m);
  // Skips validation; for internal use where the invariant is known.
  static DensityMatrix trusted(Matrix m);

  std::size_t dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }
  bool is_normalized(double tol = 1e-9) const;

  static DensityMatrix diagonal(const std::vector<double>& probs);

 private:
  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

struct PureState {
  std::vector<complexd> amplitudes;

  std::size_t dim() const { return amplitudes.size(); }
  double squared_norm() const;
  DensityMatrix to_density() const;

  static PureState basis(std::size_t dim, std::size_t index);
};

// CPTP map given by Kraus operators E_j (out_dim x in_dim each);
// completeness sum_j E_j† E_j = 1 checked to 1e-10.
class KrausChannel {
 public:
  KrausChannel(std::size_t in_dim, std::size_t out_dim, std::vector<Matrix> ops);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  std::size_t env_dim() const { return ops_.size(); }
  const std::vector<Matrix>& kraus_ops() const { return ops_; }

  static KrausChannel identity(std::size_t dim);
  // |1> decays to |0> with probability gamma.
  static KrausChannel amplitude_damping(double gamma);
  // rho -> (1-p) rho + p I/2 on a qubit.
  static KrausChannel depolarizing(double p);

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<Matrix> ops_;
};

// max{Tr{rho-tau}_+, Tr{tau-rho}_+} with {.}_+ the projection onto the
// positive eigenspace; reduces to the usual (1/2)||rho-tau||_1 for
// trace-equal states.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& tau);

// ||sqrt(rho) sqrt(tau)||_1 + sqrt((1-Tr rho)(1-Tr tau)).
double generalized_fidelity(const DensityMatrix& rho, const DensityMatrix& tau);

// ||sqrt(rho) sqrt(op)||_1 for an arbitrary PSD operator (no trace-deficit
// term); used where the second argument is not sub-normalised.
double root_fidelity_with_operator(const DensityMatrix& rho, const Matrix& op);

// sqrt(1 - F(rho,tau)^2); a metric on sub-normalised states.
double purified_distance(const DensityMatrix& rho, const DensityMatrix& tau);

// Purification on reference ⊗ system, built from the spectral
// decomposition; requires a normalised input.
PureState purify(const DensityMatrix& rho);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

// U = sum_j E_j ⊗ |j>^E, shape (out_dim*env_dim) x in_dim, row index
// b*env_dim + j; satisfies U†U = 1.
Matrix isometric_extension(const KrausChannel& ch);

// Tr_B(U rho U†) on the environment space.
DensityMatrix complementary_channel(const KrausChannel& ch, const DensityMatrix& rho);

// -Tr(rho log2 rho) for a normalised state; eigenvalues clamped to [0,1].
double von_neumann_entropy(const DensityMatrix& rho);

DensityMatrix partial_trace_state(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                                  Subsystem traced_out);

}  // namespace qkd
