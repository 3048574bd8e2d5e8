#pragma once

#include <cstdint>
#include <vector>

#include "qkd/quantum.hpp"

namespace qkd {

// Probability mass function over a finite alphabet. The normalised
// invariant (sum = 1 to 1e-12) is checked on construction; smoothing
// intermediates may use the sub-normalised factory.
class DiscreteDistribution {
 public:
  static DiscreteDistribution normalized(std::vector<double> probs);
  static DiscreteDistribution subnormalized(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }
  double total() const;
  bool is_normalized(double tol = 1e-12) const;

 private:
  explicit DiscreteDistribution(std::vector<double> p) : probs_(std::move(p)) {}
  std::vector<double> probs_;
};

// Joint pmf P(x,y), rows indexed by x.
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<std::vector<double>> probs);

  std::size_t nx() const { return probs_.size(); }
  std::size_t ny() const { return probs_.front().size(); }
  double operator()(std::size_t x, std::size_t y) const { return probs_[x][y]; }

  DiscreteDistribution marginal_x() const;
  DiscreteDistribution marginal_y() const;

  // Diagonal classical-classical embedding on dim nx*ny.
  DensityMatrix to_cc_state() const;

 private:
  std::vector<std::vector<double>> probs_;
};

// Indexed set of generalized measurements {F^{p,x}}_x, one complete
// family per setting p.
class MeasurementFamily {
 public:
  explicit MeasurementFamily(std::vector<std::vector<Matrix>> settings);
  std::size_t num_settings() const { return settings_.size(); }
  const std::vector<Matrix>& setting(std::size_t p) const { return settings_[p]; }

  static MeasurementFamily bb84();

 private:
  std::vector<std::vector<Matrix>> settings_;
};

double surprisal(double p);

double shannon_entropy(const DiscreteDistribution& p);
double joint_entropy(const JointDistribution& pxy);
// H(X|Y).
double conditional_entropy(const JointDistribution& pxy);
// D(p||q); +infinity (not an error) when supp(p) is not inside supp(q).
double relative_entropy(const DiscreteDistribution& p, const DiscreteDistribution& q);
double mutual_information(const JointDistribution& pxy);

double min_entropy(const DiscreteDistribution& p);
double max_entropy(const DiscreteDistribution& p);

// Smoothing over normalised distributions within statistical distance
// eps. Min-entropy: largest atoms trimmed to a common cap spending
// exactly eps; max-entropy: smallest atoms removed, mass moved to the
// largest one.
double smooth_min_entropy(const DiscreteDistribution& p, double eps);
double smooth_max_entropy(const DiscreteDistribution& p, double eps);

// -log2 sum_y P_Y(y) max_x P_{X|Y}(x|y); equals -log2 of the optimal
// guessing probability.
double conditional_min_entropy(const JointDistribution& pxy);

struct SigmaSearchOptions {
  int grid_points = 32;        // per Bloch coordinate
  double refine_tol = 1e-6;    // Nelder-Mead convergence
  std::uint64_t seed = 1;      // deterministic perturbed-restart stream
};

// H_min(A|B) = max_sigma -log2 || (1 ⊗ sigma^{-1/2}) rho (1 ⊗ sigma^{-1/2}) ||_inf,
// search over normalised sigma_B in the Bloch ball (dim_b <= 2).
double quantum_conditional_min_entropy(const DensityMatrix& rho_ab, std::size_t dim_a,
                                       std::size_t dim_b, const SigmaSearchOptions& opts = {});

// H_max(A|C) = 2 log2 max_sigma ||sqrt(rho_AC) sqrt(1_A ⊗ sigma_C)||_1,
// same parameterized search; used for the min/max duality check.
double quantum_conditional_max_entropy(const DensityMatrix& rho_ac, std::size_t dim_a,
                                       std::size_t dim_c, const SigmaSearchOptions& opts = {});

// H_max^{eps1}(X) + log2(1/eps2) + 1: bound on the minimum code length
// achieving failure probability eps1 + eps2.
double gallagher_bound(const DiscreteDistribution& p, double eps1, double eps2);

struct OverlapResult {
  double c_q;
  double entropy_bound;  // log2(1/c_q)
};

// c_q = max_p max_{x,z} ||F^{q(p),x} (F^{p,z})†||_inf^2 for a setting
// symmetry q given as a permutation of the settings.
OverlapResult eur_overlap(const MeasurementFamily& mf, const std::vector<std::size_t>& symmetry);

}  // namespace qkd
