#include "qkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qkd {

namespace {

double budget_term(const SecurityBudget& b) {
  // 2 log2(1/(2(eps - eps_bar - eps_ec))).
  return 2.0 * std::log2(1.0 / (2.0 * b.slack()));
}

// The crossing equation subtracts O(n)-sized terms down to order-one
// exponents, so the root is located in extended precision; plain double
// would leave O(n * eps_machine) noise in the log-domain residual.
long double binary_entropy_ld(long double x) {
  if (x <= 0.0L || x >= 1.0L) return 0.0L;
  return -x * std::log2(x) - (1.0L - x) * std::log2(1.0L - x);
}

long double log2_eps_pa_ld(long double nu, const RateParams& p) {
  const long double n = static_cast<long double>(p.n);
  const long double exponent =
      n * std::log2(1.0L / static_cast<long double>(p.c_bar)) -
      n * binary_entropy_ld(static_cast<long double>(p.delta) + nu) -
      static_cast<long double>(p.s) - static_cast<long double>(p.t) -
      static_cast<long double>(p.l);
  return -exponent / 5.0L;
}

// log2 of the statistics tail exp(-n k^2 nu^2 / (2(n+k)(k+1))).
long double log2_statistics_rhs_ld(long double nu, const RateParams& p) {
  const long double n = static_cast<long double>(p.n);
  const long double k = static_cast<long double>(p.k);
  const long double x = n * k * k * nu * nu / (2.0L * (n + k) * (k + 1.0L));
  return -x * 1.442695040888963407359924681001892137L;  // log2(e)
}

}  // namespace

void SecurityBudget::validate() const {
  auto in01 = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in01(eps) || !in01(eps_ec) || !in01(eps_bar) || !in01(eps_bar_prime))
    throw std::invalid_argument("budget: all failure probabilities must lie in (0,1)");
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double log2_epsilon_pa(double nu, const RateParams& p) {
  if (p.delta + nu > 1.0) throw std::invalid_argument("eps_pa: delta + nu above 1");
  if (p.c_bar <= 0.0 || p.c_bar > 1.0) throw std::invalid_argument("eps_pa: c_bar outside (0,1]");
  return static_cast<double>(log2_eps_pa_ld(static_cast<long double>(nu), p));
}

double epsilon_pa(double nu, const RateParams& p) { return std::exp2(log2_epsilon_pa(nu, p)); }

NuStarResult solve_nu_star(const RateParams& p) {
  if (p.delta < 0.0 || p.delta > 1.0) throw std::invalid_argument("nu*: delta outside [0,1]");
  if (p.c_bar <= 0.0 || p.c_bar > 1.0) throw std::invalid_argument("nu*: c_bar outside (0,1]");
  NuStarResult res;
  if (log2_eps_pa_ld(0.0L, p) >= 0.0L) return res;  // eps_pa(0) >= 1: no solution

  auto f = [&](long double nu) { return log2_eps_pa_ld(nu, p) - log2_statistics_rhs_ld(nu, p); };

  // f(0) < 0. Scan for the first sign change; the two sides are
  // monotone in opposite directions while delta + nu <= 1/2, so the
  // first crossing is the unique one in that regime.
  const long double hi = 1.0L - static_cast<long double>(p.delta);
  const int scan = 4096;
  long double lo_nu = 0.0L;
  long double hi_nu = -1.0L;
  long double prev = f(0.0L);
  for (int i = 1; i <= scan; ++i) {
    const long double nu = hi * static_cast<long double>(i) / scan;
    const long double cur = f(nu);
    if (prev < 0.0L && cur >= 0.0L) {
      lo_nu = hi * static_cast<long double>(i - 1) / scan;
      hi_nu = nu;
      break;
    }
    prev = cur;
  }
  if (hi_nu < 0.0L) return res;

  for (int iter = 0; iter < 200; ++iter) {
    const long double mid = 0.5L * (lo_nu + hi_nu);
    if (mid == lo_nu || mid == hi_nu) break;
    if (f(mid) < 0.0L) lo_nu = mid;
    else hi_nu = mid;
  }

  res.found = true;
  res.nu_star = static_cast<double>(0.5L * (lo_nu + hi_nu));
  res.log2_eps_pa = log2_epsilon_pa(res.nu_star, p);
  res.pa_le_quarter = res.log2_eps_pa <= -2.0;
  return res;
}

std::int64_t max_key_length(double hmin_bound, double leak_ec, const SecurityBudget& b) {
  if (b.slack() <= 0.0)
    throw std::invalid_argument("key length: eps - eps_bar - eps_ec must be positive");
  const double value = hmin_bound - leak_ec - budget_term(b);
  if (value <= 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(value));
}

double asymptotic_rate(double h_x_given_e, double h_x_given_y) {
  return h_x_given_e - h_x_given_y;
}

double delta_correction(const RateParams& p, const SecurityBudget& b, DeltaTerm term) {
  if (b.slack() <= 0.0)
    throw std::invalid_argument("rate: eps - eps_bar - eps_ec must be positive");
  if (b.eps_bar <= b.eps_bar_prime)
    throw std::invalid_argument("rate: eps_bar must exceed eps_bar_prime");
  const double n = static_cast<double>(p.n);
  double second;
  if (term == DeltaTerm::Inverse) {
    second = 7.0 / std::sqrt(n * std::log2(2.0 / (b.eps_bar - b.eps_bar_prime)));
  } else {
    second = 7.0 * std::sqrt(std::log2(2.0 / b.eps_bar) / n);
  }
  return budget_term(b) + second;
}

double sifted_key_rate_finite(const RateParams& p, const SecurityBudget& b, double h_xi,
                              DeltaTerm term) {
  const double delta_corr = delta_correction(p, b, term);
  return h_xi - (p.leak_ec + delta_corr) / static_cast<double>(p.n);
}

std::int64_t choose_key_length(RateParams p, const SecurityBudget& b) {
  if (b.slack() <= 0.0)
    throw std::invalid_argument("key length: eps - eps_bar - eps_ec must be positive");

  auto feasible = [&](std::int64_t l) {
    p.l = l;
    const NuStarResult nu = solve_nu_star(p);
    if (!nu.found || !nu.pa_le_quarter) return false;
    const double h_xi = 1.0 - binary_entropy(std::min(p.delta + nu.nu_star, 0.5));
    return l <= max_key_length(static_cast<double>(p.n) * h_xi, p.leak_ec, b);
  };

  if (!feasible(0)) return 0;
  std::int64_t lo = 0, hi = p.n;
  if (feasible(hi)) return hi;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

RateReport optimize_rate(std::int64_t big_m, double channel_qber, const SecurityBudget& b,
                         const OptimizeOptions& opts) {
  if (big_m < 100) throw std::invalid_argument("optimize: M below 100");
  if (channel_qber < 0.0 || channel_qber >= 0.5)
    throw std::invalid_argument("optimize: qber outside [0, 0.5)");

  const double delta = opts.delta >= 0.0 ? opts.delta : channel_qber;
  const std::int64_t sifted = static_cast<std::int64_t>(std::floor(opts.sift_fraction * big_m));
  const std::int64_t t = static_cast<std::int64_t>(std::ceil(-std::log2(b.eps_ec)));

  RateReport best;  // zero-rate unless something feasible shows up

  auto evaluate = [&](double frac, double eps_bar, double eps_bar_prime) {
    if (eps_bar_prime >= eps_bar) return;
    if (eps_bar >= b.eps - b.eps_ec) return;  // constraint eps - eps_ec > eps_bar
    const std::int64_t n = static_cast<std::int64_t>(std::floor(frac * sifted));
    const std::int64_t k = sifted - n;
    if (n < 1 || k < 1) return;
    if (n + sifted > big_m) return;  // n + m <= M

    SecurityBudget budget = b;
    budget.eps_bar = eps_bar;
    budget.eps_bar_prime = eps_bar_prime;
    if (budget.slack() <= 0.0) return;

    RateParams params;
    params.big_m = big_m;
    params.n = n;
    params.k = k;
    params.m = sifted;
    params.t = t;
    params.delta = delta;
    params.c_bar = opts.c_bar;
    params.leak_ec = opts.f_ec * static_cast<double>(n) * binary_entropy(channel_qber);
    params.s = static_cast<std::int64_t>(std::llround(params.leak_ec));

    const std::int64_t l = choose_key_length(params, budget);
    if (l < 1) return;
    params.l = l;
    const NuStarResult nu = solve_nu_star(params);
    if (!nu.found) return;
    const double h_xi = 1.0 - binary_entropy(std::min(delta + nu.nu_star, 0.5));
    const double r_sifted = sifted_key_rate_finite(params, budget, h_xi, opts.delta_term);
    if (r_sifted <= 0.0) return;
    const double r_signal = (static_cast<double>(n) / static_cast<double>(big_m)) * r_sifted;

    if (!best.feasible || r_signal > best.r_per_signal) {
      best.feasible = true;
      best.pa_condition_ok = nu.pa_le_quarter;
      best.r_sifted = r_sifted;
      best.r_per_signal = r_signal;
      best.l_max = l;
      best.nu_star = nu.nu_star;
      best.log2_eps_pa = nu.log2_eps_pa;
      best.n = n;
      best.k = k;
      best.m = sifted;
      best.eps_bar = eps_bar;
      best.eps_bar_prime = eps_bar_prime;
    }
  };

  std::vector<double> eps_grid;
  for (int j = 0; j <= 6; ++j) eps_grid.push_back(b.eps / 2.0 * std::pow(10.0, -j));

  std::vector<double> fracs;
  for (int i = 0; i <= 9; ++i) fracs.push_back(0.50 + 0.05 * i);

  for (double f : fracs)
    for (double eb : eps_grid)
      for (double ebp : eps_grid) evaluate(f, eb, ebp);

  if (best.feasible) {
    // One refinement round: half-steps around the incumbent.
    const double f0 = static_cast<double>(best.n) / std::max<double>(1.0, double(sifted));
    const double eb0 = best.eps_bar;
    const double ebp0 = best.eps_bar_prime;
    const double half = std::sqrt(10.0);
    for (double df : {-0.025, 0.0, 0.025})
      for (double mb : {1.0 / half, 1.0, half})
        for (double mp : {1.0 / half, 1.0, half}) {
          const double f = std::clamp(f0 + df, 0.5, 0.95);
          evaluate(f, eb0 * mb, ebp0 * mp);
        }
  }
  return best;
}

double security_parameter_bound(const SecurityBudget& b) { return b.eps_ec + b.eps_pa; }

double secrecy_distance_toy(const DensityMatrix& joint_ke, int l) {
  if (joint_ke.dim() > 32) throw std::invalid_argument("secrecy distance: dimension above 32");
  const std::size_t dim_k = std::size_t{1} << l;
  if (joint_ke.dim() % dim_k != 0)
    throw std::invalid_argument("secrecy distance: key register does not divide the state");
  const std::size_t dim_e = joint_ke.dim() / dim_k;

  const Matrix rho_e = partial_trace(joint_ke.matrix(), dim_k, dim_e, Subsystem::First);
  Matrix ideal_k(dim_k, dim_k);
  for (std::size_t i = 0; i < dim_k; ++i) ideal_k(i, i) = 1.0 / static_cast<double>(dim_k);
  const Matrix diff = joint_ke.matrix() - kron(ideal_k, rho_e);

  EigenSystem es = hermitian_eigensystem(diff);
  double sum = 0.0;
  for (double w : es.values) sum += std::abs(w);
  return 0.5 * sum;
}

}  // namespace qkd
