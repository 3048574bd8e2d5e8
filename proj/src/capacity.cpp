#include "qkd/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qkd/optimize.hpp"
#include "qkd/rng.hpp"
#include "qkd/security.hpp"

namespace qkd {

namespace {

double entropy_of_pair(std::pair<double, double> lambdas) {
  const double p = std::clamp(lambdas.first, 0.0, 1.0);
  return binary_entropy(p);
}

void check_gamma(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma outside [0,1]");
}

// Diagonal-input coherent information h((1-gamma) a) - h(gamma a).
double diagonal_ci(double gamma, double a) {
  return binary_entropy((1.0 - gamma) * a) - binary_entropy(gamma * a);
}

}  // namespace

ADChannel::ADChannel(double g) : gamma(g) { check_gamma(g); }

InputParams::InputParams(double a_, complexd b_) : a(a_), b(b_) {
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("input state: a outside [0,1]");
  if (std::norm(b) > a * (1.0 - a) + 1e-12)
    throw std::invalid_argument("input state: |b|^2 above a(1-a)");
}

DensityMatrix InputParams::to_density() const {
  Matrix m(2, 2);
  m(0, 0) = 1.0 - a;
  m(0, 1) = std::conj(b);
  m(1, 0) = b;
  m(1, 1) = a;
  return DensityMatrix::from_matrix(std::move(m));
}

std::pair<double, double> output_eigenvalues(double gamma, double a, complexd b) {
  const double inner = (1.0 + 2.0 * a * (gamma - 1.0)) * (1.0 + 2.0 * a * (gamma - 1.0)) -
                       4.0 * std::norm(b) * (gamma - 1.0);
  const double root = std::sqrt(std::max(inner, 0.0));
  return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

std::pair<double, double> environment_eigenvalues(double gamma, double a, complexd b) {
  const double inner =
      (1.0 - 2.0 * a * gamma) * (1.0 - 2.0 * a * gamma) + 4.0 * std::norm(b) * gamma;
  const double root = std::sqrt(std::max(inner, 0.0));
  return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

double coherent_information(double gamma, double a, complexd b) {
  check_gamma(gamma);
  InputParams params(a, b);  // validates (a, b)
  return entropy_of_pair(output_eigenvalues(gamma, params.a, params.b)) -
         entropy_of_pair(environment_eigenvalues(gamma, params.a, params.b));
}

CapacityPoint maximize_coherent_information(double gamma) {
  check_gamma(gamma);
  CapacityPoint point;
  point.gamma = gamma;
  point.degradable = gamma <= 0.5;

  auto f = [gamma](double a) { return diagonal_ci(gamma, a); };
  const double a_interior = golden_section_maximize(f, 0.0, 1.0, 1e-10);
  double raw = f(a_interior);
  double a_best = a_interior;
  // The endpoints have infinite-slope entropy terms; compare explicitly.
  for (double a : {0.0, 1.0}) {
    if (f(a) > raw) {
      raw = f(a);
      a_best = a;
    }
  }
  point.raw_max_i = raw;

  if (gamma < 0.5) {
    point.q = std::max(raw, 0.0);
    point.a_star = a_best;
  } else {
    point.q = 0.0;
    point.a_star = 0.0;
  }
  return point;
}

DiagonalOptimalityReport verify_diagonal_optimality(double gamma, int trials, std::uint64_t seed) {
  if (gamma < 0.0 || gamma >= 0.5)
    throw std::invalid_argument("diagonal optimality: gamma must lie in [0, 0.5)");
  Rng rng(seed);
  DiagonalOptimalityReport report;
  report.trials = trials;
  for (int i = 0; i < trials; ++i) {
    const double a = rng.uniform01();
    const double radius = std::sqrt(a * (1.0 - a));
    const double mag = radius * rng.uniform01();
    const double phase = 2.0 * M_PI * rng.uniform01();
    const complexd b(mag * std::cos(phase), mag * std::sin(phase));
    const double gap = coherent_information(gamma, a, b) - coherent_information(gamma, a, 0.0);
    report.max_violation = std::max(report.max_violation, gap);
    if (gap > 1e-9) ++report.violations;
  }
  return report;
}

DegradabilityResult is_degradable_ad(double gamma, std::uint64_t seed) {
  check_gamma(gamma);
  DegradabilityResult res;
  res.degradable = gamma <= 0.5;
  if (!res.degradable) {
    res.gamma_prime = std::numeric_limits<double>::quiet_NaN();
    res.residual = std::numeric_limits<double>::quiet_NaN();
    return res;
  }

  res.gamma_prime = (1.0 - 2.0 * gamma) / (1.0 - gamma);
  const KrausChannel forward = KrausChannel::amplitude_damping(gamma);
  const KrausChannel degrade = KrausChannel::amplitude_damping(res.gamma_prime);

  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = rng.uniform01();
    const double mag = std::sqrt(a * (1.0 - a)) * rng.uniform01();
    const double phase = 2.0 * M_PI * rng.uniform01();
    const DensityMatrix rho =
        InputParams(a, complexd(mag * std::cos(phase), mag * std::sin(phase))).to_density();
    const DensityMatrix via_degrade = apply_channel(degrade, apply_channel(forward, rho));
    const DensityMatrix complementary = complementary_channel(forward, rho);
    worst = std::max(worst, (via_degrade.matrix() - complementary.matrix()).max_abs());
  }
  res.residual = worst;
  return res;
}

std::vector<CapacityPoint> capacity_sweep(const std::vector<double>& gammas) {
  std::vector<CapacityPoint> out;
  out.reserve(gammas.size());
  for (double g : gammas) out.push_back(maximize_coherent_information(g));
  return out;
}

std::vector<std::pair<double, double>> coherent_info_curve(double gamma,
                                                           const std::vector<double>& a_grid) {
  check_gamma(gamma);
  std::vector<std::pair<double, double>> out;
  out.reserve(a_grid.size());
  for (double a : a_grid) out.emplace_back(a, diagonal_ci(gamma, a));
  return out;
}

}  // namespace qkd
