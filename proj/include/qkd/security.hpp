#pragma once

#include <cstdint>
#include <string>

#include "qkd/quantum.hpp"

namespace qkd {

// Failure-probability budget. eps bounds the distance of the final key
// from an ideal one, eps_ec the correctness failure (2^-t for a t-bit
// verification hash), eps_bar the min-entropy smoothing parameter and
// eps_bar_prime the statistics-compatibility failure.
struct SecurityBudget {
  double eps = 1e-9;
  double eps_ec = 1e-10;
  double eps_bar = 1e-10;
  double eps_bar_prime = 1e-11;
  double eps_pa = 0.0;  // filled in by the analysis

  // eps - eps_bar - eps_ec, the slack entering the key-length bound.
  double slack() const { return eps - eps_bar - eps_ec; }
  void validate() const;
};

struct RateParams {
  std::int64_t big_m = 0;  // signals sent
  std::int64_t n = 0;      // raw key length
  std::int64_t k = 0;      // parameter-estimation sample
  std::int64_t m = 0;      // sifted length (n + k <= m <= M)
  std::int64_t l = 0;      // final key length
  std::int64_t s = 0;      // syndrome length
  std::int64_t t = 0;      // verification-hash length
  double delta = 0.0;      // estimation abort threshold
  double c_bar = 0.5;      // measurement overlap (1/2 for BB84)
  double leak_ec = 0.0;    // reconciliation leakage in bits
};

enum class DeltaTerm {
  Inverse,   // 7 / sqrt(n log2(2/(eps_bar - eps_bar')))
  Standard,  // 7 * sqrt(log2(2/eps_bar) / n)
};

struct RateReport {
  bool feasible = false;
  bool pa_condition_ok = false;  // eps_pa(nu*) <= 1/4
  double r_sifted = 0.0;
  double r_per_signal = 0.0;
  std::int64_t l_max = 0;
  double nu_star = 0.0;
  double log2_eps_pa = 0.0;  // log2 eps_pa(nu*)
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t m = 0;
  double eps_bar = 0.0;
  double eps_bar_prime = 0.0;
};

// -x log2 x - (1-x) log2(1-x), endpoints mapping to 0.
double binary_entropy(double x);

// log2 of eps_pa(nu) = 2^{-(1/5)(n log2(1/c_bar) - n h(delta+nu) - s - t - l)}.
double log2_epsilon_pa(double nu, const RateParams& p);
double epsilon_pa(double nu, const RateParams& p);

struct NuStarResult {
  bool found = false;
  double nu_star = 0.0;
  double log2_eps_pa = 0.0;
  bool pa_le_quarter = false;
};

// Unique crossing of eps_pa(nu) = exp(-n k^2 nu^2 / (2(n+k)(k+1))),
// located in log2 domain by a sign-change scan plus bisection. Requires
// eps_pa(0) < 1; otherwise found = false.
NuStarResult solve_nu_star(const RateParams& p);

// floor(hmin_bound - leak_ec - 2 log2(1/(2(eps - eps_bar - eps_ec)))),
// clamped at zero.
std::int64_t max_key_length(double hmin_bound, double leak_ec, const SecurityBudget& b);

// H(X|E) - H(X|Y); may be negative, callers decide what to do with it.
double asymptotic_rate(double h_x_given_e, double h_x_given_y);

// The finite-size correction Delta of the sifted-rate formula.
double delta_correction(const RateParams& p, const SecurityBudget& b, DeltaTerm term);

// r' = h_xi - (leak_EC + Delta)/n.
double sifted_key_rate_finite(const RateParams& p, const SecurityBudget& b, double h_xi,
                              DeltaTerm term = DeltaTerm::Inverse);

// Largest l consistent with both the key-length bound evaluated at
// H_xi = 1 - h(min(delta + nu*, 1/2)) per raw bit and the nu* equation
// (which itself depends on l); monotone bisection.
std::int64_t choose_key_length(RateParams p, const SecurityBudget& b);

struct OptimizeOptions {
  double f_ec = 1.1;            // leak_EC = f_ec * n * h(qber)
  double c_bar = 0.5;
  double delta = -1.0;          // < 0: use the channel qber
  double sift_fraction = 0.5;   // expected sifted yield m/M
  DeltaTerm delta_term = DeltaTerm::Inverse;
};

// Grid search over the raw-key/sample split of the sifted material and
// a log grid over (eps_bar, eps_bar_prime), one refinement round;
// maximizes r_per_signal = (n/M) r'.
RateReport optimize_rate(std::int64_t big_m, double channel_qber, const SecurityBudget& b,
                         const OptimizeOptions& opts = {});

// eps_ec + eps_pa.
double security_parameter_bound(const SecurityBudget& b);

// Exact (1/2)||rho_KE - tau_K ⊗ rho_E||_1 for a key register of 2^l
// dimensions against ideal uniform-and-independent; total dim <= 32.
double secrecy_distance_toy(const DensityMatrix& joint_ke, int l);

}  // namespace qkd
