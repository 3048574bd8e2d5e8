#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qkd/entropy.hpp"
#include "qkd/security.hpp"
#include "qkd/toeplitz.hpp"
#include "support.hpp"

using namespace qkd;

namespace {

RateParams sample_params() {
  RateParams p;
  p.n = 10000;
  p.k = 10000;
  p.m = 20000;
  p.s = 2000;
  p.t = 50;
  p.l = 1000;
  p.delta = 0.05;
  p.c_bar = 0.5;
  p.leak_ec = 2000.0;
  return p;
}

double log2_rhs(double nu, const RateParams& p) {
  const double n = double(p.n), k = double(p.k);
  return -(n * k * k * nu * nu / (2.0 * (n + k) * (k + 1.0))) * std::log2(std::exp(1.0));
}

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("secrecy failure exponent") {
  RateParams p = sample_params();
  p.n = 10000;
  p.k = 0;  // unused here
  SUBCASE("direct substitution") {
    p.s = 2000;
    p.t = 50;
    p.l = 1000;
    const double nu = 0.01;
    // Exponent (1/5)(n(1 - h(0.06)) - 3050) in log2 domain.
    const double expected = -(10000.0 * (1.0 - binary_entropy(0.06)) - 3050.0) / 5.0;
    CHECK(log2_epsilon_pa(nu, p) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("zero exponent at the balancing key length") {
    const double nu = 0.01;
    const double l_balance = 10000.0 * (1.0 - binary_entropy(p.delta + nu)) - p.s - p.t;
    p.l = static_cast<std::int64_t>(std::llround(l_balance));
    // Integer rounding leaves at most 1/5 bit in the exponent.
    CHECK(std::abs(log2_epsilon_pa(nu, p)) < 0.2);
  }
  SUBCASE("exponent is linear in l") {
    const double base = log2_epsilon_pa(0.01, p);
    p.l += 5;
    CHECK(log2_epsilon_pa(0.01, p) == doctest::Approx(base + 1.0).epsilon(1e-12));
    p.l -= 4;  // net +1
    CHECK(log2_epsilon_pa(0.01, p) == doctest::Approx(base + 0.2).epsilon(1e-12));
  }
  SUBCASE("domain violations") {
    CHECK_THROWS_AS(log2_epsilon_pa(0.97, p), std::invalid_argument);  // delta + nu > 1
    p.c_bar = 0.0;
    CHECK_THROWS_AS(log2_epsilon_pa(0.01, p), std::invalid_argument);
  }
}

TEST_CASE("nu* solves the crossing equation") {
  const RateParams p = sample_params();
  const NuStarResult res = solve_nu_star(p);
  REQUIRE(res.found);
  // Both sides agree to 1e-12 relative in the log domain.
  const double lhs = log2_epsilon_pa(res.nu_star, p);
  const double rhs = log2_rhs(res.nu_star, p);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0}));
  CHECK(res.log2_eps_pa == doctest::Approx(lhs));

  // Uniqueness: the sign of lhs - rhs changes exactly once on a scan.
  int sign_changes = 0;
  double prev = log2_epsilon_pa(0.0, p) - log2_rhs(0.0, p);
  for (int i = 1; i <= 1000; ++i) {
    const double nu = (1.0 - p.delta) * i / 1000.0;
    const double cur = log2_epsilon_pa(nu, p) - log2_rhs(nu, p);
    if ((prev < 0.0) != (cur < 0.0)) ++sign_changes;
    prev = cur;
  }
  CHECK(sign_changes == 1);
}

TEST_CASE("nu* precondition gate") {
  RateParams p = sample_params();
  p.l = p.n;  // forces eps_pa(0) >= 1
  const NuStarResult res = solve_nu_star(p);
  CHECK_FALSE(res.found);
}

TEST_CASE("nu* shrinks as the sample grows") {
  RateParams p = sample_params();
  double prev = 1.0;
  for (std::int64_t k : {1000, 10000, 100000, 1000000}) {
    p.k = k;
    const NuStarResult res = solve_nu_star(p);
    REQUIRE(res.found);
    CHECK(res.nu_star < prev);
    prev = res.nu_star;
  }
}

TEST_CASE("maximum key length") {
  SecurityBudget b;
  b.eps = std::exp2(-30.0);
  b.eps_bar = std::exp2(-32.0);
  b.eps_ec = std::exp2(-32.0);
  // eps - eps_bar - eps_ec = 2^-31: the budget term is exactly 60.
  CHECK(b.slack() == doctest::Approx(std::exp2(-31.0)).epsilon(1e-12));
  CHECK(max_key_length(8000.0, 3000.0, b) == 4940);
  CHECK(max_key_length(3000.0, 3000.0, b) == 0);
  CHECK(max_key_length(0.0, 10.0, b) == 0);

  SecurityBudget bad = b;
  bad.eps = bad.eps_bar + bad.eps_ec;  // slack exactly zero
  CHECK_THROWS_AS(max_key_length(100.0, 0.0, bad), std::invalid_argument);

  // Monotonicity.
  CHECK(max_key_length(9000.0, 3000.0, b) >= max_key_length(8000.0, 3000.0, b));
  CHECK(max_key_length(8000.0, 4000.0, b) <= max_key_length(8000.0, 3000.0, b));
  SecurityBudget tighter = b;
  tighter.eps = std::exp2(-40.0);
  tighter.eps_bar = std::exp2(-44.0);
  tighter.eps_ec = std::exp2(-44.0);
  CHECK(max_key_length(8000.0, 3000.0, tighter) <= max_key_length(8000.0, 3000.0, b));
}

TEST_CASE("asymptotic rate") {
  CHECK(asymptotic_rate(1.0, 0.0) == doctest::Approx(1.0));
  const double q11 = 1.0 - 2.0 * binary_entropy(0.11);
  CHECK(asymptotic_rate(1.0 - binary_entropy(0.11), binary_entropy(0.11)) ==
        doctest::Approx(q11).epsilon(1e-10));
  CHECK(q11 == doctest::Approx(0.0001680836709440081).epsilon(1e-6));
  CHECK(asymptotic_rate(1.0 - binary_entropy(0.25), binary_entropy(0.25)) < 0.0);
}

TEST_CASE("finite sifted key rate") {
  SecurityBudget b;
  b.eps = 1e-9;
  b.eps_ec = 1e-10;
  b.eps_bar = 1e-10;
  b.eps_bar_prime = 1e-11;

  RateParams p;
  p.n = 100000;
  p.k = 100000;
  p.delta = 0.03;
  p.leak_ec = 1.1 * double(p.n) * binary_entropy(0.03);
  p.s = static_cast<std::int64_t>(p.leak_ec);
  p.t = 34;

  SUBCASE("negative when reconciliation eats everything") {
    RateParams worst = p;
    worst.leak_ec = double(worst.n);
    CHECK(sifted_key_rate_finite(worst, b, 1.0) < 0.0);
  }

  SUBCASE("independent spreadsheet-style evaluation") {
    const double h_xi = 1.0 - binary_entropy(0.05);
    // Reference arithmetic spelled out term by term.
    const double slack = 1e-9 - 1e-10 - 1e-10;
    const double term1 = 2.0 * std::log2(1.0 / (2.0 * slack));
    const double term2_inverse = 7.0 / std::sqrt(double(p.n) * std::log2(2.0 / (1e-10 - 1e-11)));
    const double expect_inverse = h_xi - (p.leak_ec + term1 + term2_inverse) / double(p.n);
    CHECK(sifted_key_rate_finite(p, b, h_xi, DeltaTerm::Inverse) ==
          doctest::Approx(expect_inverse).epsilon(1e-12));

    const double term2_lit = 7.0 * std::sqrt(std::log2(2.0 / 1e-10) / double(p.n));
    const double expect_lit = h_xi - (p.leak_ec + term1 + term2_lit) / double(p.n);
    CHECK(sifted_key_rate_finite(p, b, h_xi, DeltaTerm::Standard) ==
          doctest::Approx(expect_lit).epsilon(1e-12));
  }

  SUBCASE("converges to the asymptotic value as n grows") {
    // Pure formula evaluation at n = 1e9 with leak_EC/n held fixed.
    RateParams big = p;
    big.n = 1000000000;
    big.k = big.n;
    const double hq = binary_entropy(0.03);
    big.leak_ec = 1.1 * double(big.n) * hq;
    const double h_xi = 1.0 - hq;
    const double finite = sifted_key_rate_finite(big, b, h_xi);
    const double asym = asymptotic_rate(h_xi, 1.1 * hq);
    CHECK(std::abs(finite - asym) < 1e-3);
  }

  SUBCASE("budget ordering is enforced") {
    SecurityBudget bad = b;
    bad.eps_bar_prime = bad.eps_bar;
    CHECK_THROWS_AS(sifted_key_rate_finite(p, bad, 1.0), std::invalid_argument);
    SecurityBudget bad2 = b;
    bad2.eps = bad2.eps_bar + bad2.eps_ec;
    CHECK_THROWS_AS(sifted_key_rate_finite(p, bad2, 1.0), std::invalid_argument);
  }
}

TEST_CASE("self-consistent key length") {
  SecurityBudget b;
  b.eps = 1e-9;
  b.eps_ec = 1e-10;
  b.eps_bar = 1e-10;
  b.eps_bar_prime = 1e-11;

  RateParams p;
  p.n = 100000;
  p.k = 25000;
  p.m = p.n + p.k;
  p.delta = 0.03;
  p.c_bar = 0.5;
  p.leak_ec = 1.1 * double(p.n) * binary_entropy(0.03);
  p.s = static_cast<std::int64_t>(p.leak_ec);
  p.t = 34;

  const std::int64_t l = choose_key_length(p, b);
  REQUIRE(l > 0);

  // Feasibility at l and infeasibility at l+1.
  auto feasible = [&](std::int64_t candidate) {
    RateParams q = p;
    q.l = candidate;
    const NuStarResult nu = solve_nu_star(q);
    if (!nu.found || !nu.pa_le_quarter) return false;
    const double h_xi = 1.0 - binary_entropy(std::min(q.delta + nu.nu_star, 0.5));
    const double bound =
        double(q.n) * h_xi - q.leak_ec - 2.0 * std::log2(1.0 / (2.0 * b.slack()));
    return double(candidate) <= bound;
  };
  CHECK(feasible(l));
  CHECK_FALSE(feasible(l + 1));
}

TEST_CASE("rate optimizer") {
  SecurityBudget b;
  b.eps = 1e-9;
  b.eps_ec = 1e-10;

  SUBCASE("tiny M is infeasible") {
    const RateReport rep = optimize_rate(1000, 0.05, b);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.r_per_signal == 0.0);
    CHECK(rep.l_max == 0);
  }

  SUBCASE("exhaustive check at small M") {
    // Independent direct scan over the same candidate family.
    const std::int64_t m_val = 2000;
    const double q = 0.05;
    RateReport rep = optimize_rate(m_val, q, b);
    bool any_feasible = false;
    const std::int64_t sifted = m_val / 2;
    for (int i = 0; i <= 9 && !any_feasible; ++i) {
      const double f = 0.5 + 0.05 * i;
      const auto n = static_cast<std::int64_t>(std::floor(f * sifted));
      const std::int64_t k = sifted - n;
      if (n < 1 || k < 1) continue;
      for (int jb = 0; jb <= 6 && !any_feasible; ++jb) {
        for (int jp = 0; jp <= 6 && !any_feasible; ++jp) {
          const double eb = b.eps / 2.0 * std::pow(10.0, -jb);
          const double ebp = b.eps / 2.0 * std::pow(10.0, -jp);
          if (ebp >= eb || eb >= b.eps - b.eps_ec) continue;
          SecurityBudget bb = b;
          bb.eps_bar = eb;
          bb.eps_bar_prime = ebp;
          RateParams pp;
          pp.big_m = m_val;
          pp.n = n;
          pp.k = k;
          pp.m = sifted;
          pp.t = 34;
          pp.delta = q;
          pp.c_bar = 0.5;
          pp.leak_ec = 1.1 * double(n) * binary_entropy(q);
          pp.s = static_cast<std::int64_t>(std::llround(pp.leak_ec));
          if (choose_key_length(pp, bb) > 0) any_feasible = true;
        }
      }
    }
    CHECK(rep.feasible == any_feasible);
  }

  SUBCASE("rate grows with M and respects the constraints") {
    double prev = -1.0;
    for (std::int64_t m_val : {10000, 100000, 1000000, 10000000}) {
      const RateReport rep = optimize_rate(m_val, 0.01, b);
      CHECK(rep.r_per_signal >= prev - 1e-12);
      prev = rep.r_per_signal;
      if (rep.feasible) {
        CHECK(rep.n + rep.m <= m_val);
        CHECK(rep.n + rep.k <= rep.m);
        CHECK(b.eps - b.eps_ec > rep.eps_bar);
        CHECK(rep.eps_bar > rep.eps_bar_prime);
        CHECK(rep.r_per_signal <= rep.r_sifted);
        CHECK(rep.pa_condition_ok);
      }
    }
  }

  SUBCASE("approaches the asymptotic benchmark at M = 1e7") {
    const RateReport rep = optimize_rate(10000000, 0.01, b);
    REQUIRE(rep.feasible);
    const double benchmark = 1.0 - 2.1 * binary_entropy(0.01);
    CHECK(rep.r_sifted >= 0.85 * benchmark);
    CHECK(rep.r_sifted <= benchmark);
  }
}

TEST_CASE("security parameter bound") {
  SecurityBudget b;
  b.eps_ec = std::exp2(-50.0);
  b.eps_pa = std::exp2(-50.0);
  CHECK(security_parameter_bound(b) == doctest::Approx(std::exp2(-49.0)).epsilon(1e-12));
  b.eps_pa = 0.0;
  CHECK(security_parameter_bound(b) == doctest::Approx(b.eps_ec));

  // Pipeline consistency: eps_pa taken from the nu* solution.
  RateParams p = sample_params();
  const NuStarResult nu = solve_nu_star(p);
  REQUIRE(nu.found);
  b.eps_pa = std::exp2(nu.log2_eps_pa);
  CHECK(security_parameter_bound(b) ==
        doctest::Approx(b.eps_ec + std::exp2(nu.log2_eps_pa)).epsilon(1e-12));
}

TEST_CASE("toy secrecy distance") {
  // Uniform independent key: distance zero.
  const std::size_t dim_e = 2;
  Matrix ideal = kron(DensityMatrix::diagonal({0.25, 0.25, 0.25, 0.25}).matrix(),
                      DensityMatrix::diagonal({0.5, 0.5}).matrix());
  CHECK(secrecy_distance_toy(DensityMatrix::trusted(ideal), 2) ==
        doctest::Approx(0.0).epsilon(1e-12));
  (void)dim_e;

  // Key fully copied into E: distance 1 - 2^-l.
  for (int l : {1, 2}) {
    const std::size_t dk = std::size_t{1} << l;
    Matrix copied(dk * dk, dk * dk);
    for (std::size_t key = 0; key < dk; ++key)
      copied(key * dk + key, key * dk + key) = 1.0 / double(dk);
    CHECK(secrecy_distance_toy(DensityMatrix::trusted(copied), l) ==
          doctest::Approx(1.0 - 1.0 / double(dk)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(secrecy_distance_toy(DensityMatrix::diagonal({0.5, 0.5}), 2),
                  std::invalid_argument);
}

TEST_CASE("toy secrecy never exceeds the leftover-hash bound") {
  // 100 random classical scenarios: X on 4 bits with a random joint
  // distribution with a 1-bit side register E, keys of 1 or 2 bits from
  // the full Toeplitz family, seed register averaged explicitly.
  Rng rng(21);
  for (int scenario = 0; scenario < 100; ++scenario) {
    const int nx = 4;
    const int l = 1 + (scenario % 2);
    const std::size_t inputs = std::size_t{1} << nx;
    const std::size_t dk = std::size_t{1} << l;

    // Random joint p(x, e).
    std::vector<double> pxe(inputs * 2);
    double sum = 0.0;
    for (double& v : pxe) {
      v = rng.uniform01();
      sum += v;
    }
    for (double& v : pxe) v /= sum;

    // H_min(X|E) via the guessing probability.
    double guess = 0.0;
    for (int e = 0; e < 2; ++e) {
      double best = 0.0;
      for (std::size_t x = 0; x < inputs; ++x) best = std::max(best, pxe[x * 2 + e]);
      guess += best;
    }
    const double hmin = -std::log2(guess);

    const std::size_t seeds = std::size_t{1} << (nx + l - 1);
    double avg_distance = 0.0;
    for (std::size_t seed_bits = 0; seed_bits < seeds; ++seed_bits) {
      Bits seed(nx + l - 1);
      for (std::size_t b = 0; b < seed.size(); ++b)
        seed[b] = static_cast<std::uint8_t>((seed_bits >> b) & 1);
      const ToeplitzHash hash(nx, l, seed);

      Matrix joint(dk * 2, dk * 2);
      for (std::size_t x = 0; x < inputs; ++x) {
        Bits in(nx);
        for (int b = 0; b < nx; ++b) in[b] = static_cast<std::uint8_t>((x >> b) & 1);
        const Bits key = hash.apply(in);
        std::size_t key_index = 0;
        for (int b = 0; b < l; ++b) key_index = (key_index << 1) | key[b];
        for (std::size_t e = 0; e < 2; ++e) {
          const std::size_t idx = key_index * 2 + e;
          joint(idx, idx) += pxe[x * 2 + e];
        }
      }
      avg_distance += secrecy_distance_toy(DensityMatrix::trusted(joint), l);
    }
    avg_distance /= double(seeds);

    // ||omega - chi ⊗ omega||_1 averaged over the seed register equals
    // twice the mean per-seed trace distance.
    const double lhs = 2.0 * avg_distance;
    const double bound = std::exp2(-0.5 * (hmin - double(l)));
    CHECK(lhs <= bound + 1e-12);
  }
}
