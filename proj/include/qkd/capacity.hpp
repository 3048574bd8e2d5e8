#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qkd/quantum.hpp"

namespace qkd {

// Amplitude damping with decay probability gamma.
struct ADChannel {
  double gamma = 0.0;

  explicit ADChannel(double g);
  KrausChannel to_kraus() const { return KrausChannel::amplitude_damping(gamma); }
};

// Input state rho = [[1-a, conj(b)], [b, a]]: a is the excited-state
// population, b the coherence, |b|^2 <= a(1-a). Note the opposite corner
// convention from the channel-action form [[a, b], [conj(b), 1-a]],
// where a is the ground-state population.
struct InputParams {
  double a = 0.0;
  complexd b = 0.0;

  InputParams(double a_, complexd b_);
  DensityMatrix to_density() const;
};

struct CapacityPoint {
  double gamma = 0.0;
  double q = 0.0;          // clamped at 0
  double a_star = 0.0;
  bool degradable = false;
  double raw_max_i = 0.0;  // unclamped maximum of the coherent information
};

// Eigenvalues {lambda_+, lambda_-} of the channel output and of the
// environment output, in closed form.
std::pair<double, double> output_eigenvalues(double gamma, double a, complexd b);
std::pair<double, double> environment_eigenvalues(double gamma, double a, complexd b);

// I(A>B) = H(output) - H(environment).
double coherent_information(double gamma, double a, complexd b = 0.0);

// Golden-section maximization over diagonal inputs for gamma < 1/2;
// q = 0 (trivial input) for gamma >= 1/2, where the single-letter
// formula is no longer backed by degradability.
CapacityPoint maximize_coherent_information(double gamma);

struct DiagonalOptimalityReport {
  int trials = 0;
  int violations = 0;
  double max_violation = 0.0;  // max over trials of I(a,b) - I(a,0)
};

// Samples random non-diagonal inputs and checks they never beat the
// diagonal input with the same population.
DiagonalOptimalityReport verify_diagonal_optimality(double gamma, int trials, std::uint64_t seed);

struct DegradabilityResult {
  bool degradable = false;
  double gamma_prime = 0.0;  // parameter of the degrading map (if degradable)
  double residual = 0.0;     // max composition residual over the witness inputs
};

// gamma <= 1/2 iff a degrading map exists; for those gammas the map is
// amplitude damping with gamma' = (1-2 gamma)/(1-gamma), verified on
// seeded random inputs.
DegradabilityResult is_degradable_ad(double gamma, std::uint64_t seed = 7);

std::vector<CapacityPoint> capacity_sweep(const std::vector<double>& gammas);

// (a, I(a)) samples of the diagonal-input coherent information.
std::vector<std::pair<double, double>> coherent_info_curve(double gamma,
                                                           const std::vector<double>& a_grid);

}  // namespace qkd
