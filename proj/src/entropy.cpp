#include "qkd/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qkd/optimize.hpp"
#include "qkd/rng.hpp"

namespace qkd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probs(const std::vector<double>& p) {
  if (p.empty()) throw std::invalid_argument("distribution: empty alphabet");
  for (double x : p)
    if (x < -1e-15 || x > 1.0 + 1e-12) throw std::invalid_argument("distribution: entry outside [0,1]");
}

void require_normalized(const DiscreteDistribution& p) {
  if (!p.is_normalized()) throw std::invalid_argument("distribution: not normalised");
}

double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// sigma(r, theta, phi) = (1/2)(I + r n·pauli); eigenvalues (1±r)/2 with
// eigenvectors known in closed form.
Matrix bloch_inverse_sqrt(double r, double theta, double phi) {
  r = std::clamp(r, 0.0, 1.0 - 1e-9);
  const complexd e_phi(std::cos(phi), std::sin(phi));
  // Eigenvector for +r: (cos(t/2), sin(t/2) e^{i phi}).
  const double c2 = std::cos(theta / 2.0), s2 = std::sin(theta / 2.0);
  const complexd vp0 = c2, vp1 = s2 * e_phi;
  const complexd vm0 = -s2, vm1 = c2 * e_phi;
  const double lp = (1.0 + r) / 2.0, lm = (1.0 - r) / 2.0;
  const double ip = 1.0 / std::sqrt(lp), im = 1.0 / std::sqrt(lm);
  Matrix out(2, 2);
  out(0, 0) = ip * vp0 * std::conj(vp0) + im * vm0 * std::conj(vm0);
  out(0, 1) = ip * vp0 * std::conj(vp1) + im * vm0 * std::conj(vm1);
  out(1, 0) = std::conj(out(0, 1));
  out(1, 1) = ip * vp1 * std::conj(vp1) + im * vm1 * std::conj(vm1);
  return out;
}

Matrix bloch_sqrt(double r, double theta, double phi) {
  r = std::clamp(r, 0.0, 1.0);
  const complexd e_phi(std::cos(phi), std::sin(phi));
  const double c2 = std::cos(theta / 2.0), s2 = std::sin(theta / 2.0);
  const complexd vp0 = c2, vp1 = s2 * e_phi;
  const complexd vm0 = -s2, vm1 = c2 * e_phi;
  const double sp = std::sqrt((1.0 + r) / 2.0), sm = std::sqrt((1.0 - r) / 2.0);
  Matrix out(2, 2);
  out(0, 0) = sp * vp0 * std::conj(vp0) + sm * vm0 * std::conj(vm0);
  out(0, 1) = sp * vp0 * std::conj(vp1) + sm * vm0 * std::conj(vm1);
  out(1, 0) = std::conj(out(0, 1));
  out(1, 1) = sp * vp1 * std::conj(vp1) + sm * vm1 * std::conj(vm1);
  return out;
}

double largest_eigenvalue(const Matrix& m) {
  EigenSystem es = hermitian_eigensystem(m);
  return es.values.back();
}

// Shared scaffold for the two Bloch-ball searches: coarse grid, then
// Nelder-Mead refinement from the best grid point plus one seeded
// perturbed restart.
template <typename Objective>
double bloch_search(Objective obj, const SigmaSearchOptions& opts) {
  const int g = std::max(opts.grid_points, 4);
  double best = -kInf;
  std::vector<double> best_x = {0.0, 0.0, 0.0};
  for (int ir = 0; ir < g; ++ir) {
    const double r = (1.0 - 1e-6) * double(ir) / double(g - 1);
    for (int it = 0; it < g; ++it) {
      const double theta = M_PI * double(it) / double(g - 1);
      // At r = 0 the direction is irrelevant; keep the scan anyway,
      // duplicates are harmless.
      for (int ip = 0; ip < g; ++ip) {
        const double phi = 2.0 * M_PI * double(ip) / double(g);
        const double val = obj(r, theta, phi);
        if (val > best) {
          best = val;
          best_x = {r, theta, phi};
        }
      }
    }
  }
  auto wrapped = [&](const std::vector<double>& x) {
    return obj(std::clamp(x[0], 0.0, 1.0 - 1e-9), x[1], x[2]);
  };
  const std::vector<double> refined =
      nelder_mead_maximize(wrapped, best_x, 0.5 / double(g), opts.refine_tol);
  best = std::max(best, wrapped(refined));

  Rng rng(opts.seed);
  std::vector<double> jittered = best_x;
  jittered[0] = std::clamp(jittered[0] + 0.2 * (rng.uniform01() - 0.5), 0.0, 1.0 - 1e-9);
  jittered[1] += 0.3 * (rng.uniform01() - 0.5);
  jittered[2] += 0.3 * (rng.uniform01() - 0.5);
  const std::vector<double> restart =
      nelder_mead_maximize(wrapped, jittered, 1.0 / double(g), opts.refine_tol);
  return std::max(best, wrapped(restart));
}

}  // namespace

DiscreteDistribution DiscreteDistribution::normalized(std::vector<double> probs) {
  check_probs(probs);
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("distribution: does not sum to 1");
  return DiscreteDistribution(std::move(probs));
}

DiscreteDistribution DiscreteDistribution::subnormalized(std::vector<double> probs) {
  check_probs(probs);
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (sum > 1.0 + 1e-12) throw std::invalid_argument("distribution: sums above 1");
  return DiscreteDistribution(std::move(probs));
}

double DiscreteDistribution::total() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

bool DiscreteDistribution::is_normalized(double tol) const {
  return std::abs(total() - 1.0) <= tol;
}

JointDistribution::JointDistribution(std::vector<std::vector<double>> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty() || probs_.front().empty())
    throw std::invalid_argument("joint distribution: empty");
  double sum = 0.0;
  for (const auto& row : probs_) {
    if (row.size() != probs_.front().size())
      throw std::invalid_argument("joint distribution: ragged rows");
    for (double x : row) {
      if (x < -1e-15 || x > 1.0 + 1e-12)
        throw std::invalid_argument("joint distribution: entry outside [0,1]");
      sum += x;
    }
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("joint distribution: does not sum to 1");
}

DiscreteDistribution JointDistribution::marginal_x() const {
  std::vector<double> m(nx(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) m[x] += probs_[x][y];
  return DiscreteDistribution::subnormalized(std::move(m));
}

DiscreteDistribution JointDistribution::marginal_y() const {
  std::vector<double> m(ny(), 0.0);
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) m[y] += probs_[x][y];
  return DiscreteDistribution::subnormalized(std::move(m));
}

DensityMatrix JointDistribution::to_cc_state() const {
  std::vector<double> diag;
  diag.reserve(nx() * ny());
  for (std::size_t x = 0; x < nx(); ++x)
    for (std::size_t y = 0; y < ny(); ++y) diag.push_back(probs_[x][y]);
  return DensityMatrix::diagonal(diag);
}

MeasurementFamily::MeasurementFamily(std::vector<std::vector<Matrix>> settings)
    : settings_(std::move(settings)) {
  if (settings_.empty()) throw std::invalid_argument("measurement family: no settings");
  for (const auto& ops : settings_) {
    if (ops.empty()) throw std::invalid_argument("measurement family: empty setting");
    const std::size_t d = ops.front().cols();
    Matrix sum(d, d);
    for (const auto& f : ops) sum += f.adjoint() * f;
    sum -= Matrix::identity(d);
    if (sum.max_abs() > 1e-10)
      throw std::invalid_argument("measurement family: setting not complete");
  }
}

MeasurementFamily MeasurementFamily::bb84() {
  Matrix p0(2, 2), p1(2, 2), pp(2, 2), pm(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  pp(0, 0) = pp(0, 1) = pp(1, 0) = pp(1, 1) = 0.5;
  pm(0, 0) = pm(1, 1) = 0.5;
  pm(0, 1) = pm(1, 0) = -0.5;
  return MeasurementFamily({{p0, p1}, {pp, pm}});
}

double surprisal(double p) {
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("surprisal: p outside (0,1]");
  return -std::log2(p);
}

double shannon_entropy(const DiscreteDistribution& p) {
  require_normalized(p);
  double h = 0.0;
  for (double x : p.probs()) h -= plog2p(x);
  return std::max(h, 0.0);
}

double joint_entropy(const JointDistribution& pxy) {
  double h = 0.0;
  for (std::size_t x = 0; x < pxy.nx(); ++x)
    for (std::size_t y = 0; y < pxy.ny(); ++y) h -= plog2p(pxy(x, y));
  return std::max(h, 0.0);
}

double conditional_entropy(const JointDistribution& pxy) {
  const DiscreteDistribution py = pxy.marginal_y();
  double h = 0.0;
  for (std::size_t y = 0; y < pxy.ny(); ++y) {
    if (py[y] <= 0.0) continue;
    for (std::size_t x = 0; x < pxy.nx(); ++x) {
      const double pj = pxy(x, y);
      if (pj > 0.0) h -= pj * std::log2(pj / py[y]);
    }
  }
  return std::max(h, 0.0);
}

double relative_entropy(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("relative entropy: alphabet mismatch");
  require_normalized(p);
  require_normalized(q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double mutual_information(const JointDistribution& pxy) {
  const DiscreteDistribution px = pxy.marginal_x();
  const DiscreteDistribution py = pxy.marginal_y();
  double info = 0.0;
  for (std::size_t x = 0; x < pxy.nx(); ++x)
    for (std::size_t y = 0; y < pxy.ny(); ++y) {
      const double pj = pxy(x, y);
      if (pj > 0.0) info += pj * std::log2(pj / (px[x] * py[y]));
    }
  return std::max(info, 0.0);
}

double min_entropy(const DiscreteDistribution& p) {
  require_normalized(p);
  const double pmax = *std::max_element(p.probs().begin(), p.probs().end());
  return -std::log2(pmax);
}

double max_entropy(const DiscreteDistribution& p) {
  require_normalized(p);
  double s = 0.0;
  for (double x : p.probs()) s += std::sqrt(std::max(x, 0.0));
  return std::log2(s * s);
}

double smooth_min_entropy(const DiscreteDistribution& p, double eps) {
  require_normalized(p);
  if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("smoothing: eps outside [0,1)");
  if (eps == 0.0) return min_entropy(p);

  std::vector<double> sorted = p.probs();
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t d = sorted.size();

  // Mass above the uniform level is the most smoothing can ever use.
  double above_uniform = 0.0;
  for (double x : sorted) above_uniform += std::max(x - 1.0 / double(d), 0.0);
  if (eps >= above_uniform) return std::log2(double(d));

  // Water-filling: cap the largest atoms at the level where exactly eps
  // mass has been shaved off.
  double prefix = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    prefix += sorted[k];
    const double cap = (prefix - eps) / double(k + 1);
    const double next = (k + 1 < d) ? sorted[k + 1] : 0.0;
    if (cap >= next - 1e-15 && cap <= sorted[k] + 1e-15) return -std::log2(cap);
  }
  return std::log2(double(d));
}

double smooth_max_entropy(const DiscreteDistribution& p, double eps) {
  require_normalized(p);
  if (eps < 0.0 || eps >= 1.0) throw std::invalid_argument("smoothing: eps outside [0,1)");
  if (eps == 0.0) return max_entropy(p);

  std::vector<double> sorted = p.probs();
  std::sort(sorted.begin(), sorted.end());
  double budget = eps;
  double moved = 0.0;
  for (std::size_t i = 0; i + 1 < sorted.size() && budget > 0.0; ++i) {
    const double take = std::min(sorted[i], budget);
    sorted[i] -= take;
    moved += take;
    budget -= take;
  }
  sorted.back() += moved;
  double s = 0.0;
  for (double x : sorted) s += std::sqrt(std::max(x, 0.0));
  return std::log2(s * s);
}

double conditional_min_entropy(const JointDistribution& pxy) {
  double guess = 0.0;
  for (std::size_t y = 0; y < pxy.ny(); ++y) {
    double best = 0.0;
    for (std::size_t x = 0; x < pxy.nx(); ++x) best = std::max(best, pxy(x, y));
    guess += best;
  }
  return -std::log2(guess);
}

double quantum_conditional_min_entropy(const DensityMatrix& rho_ab, std::size_t dim_a,
                                       std::size_t dim_b, const SigmaSearchOptions& opts) {
  if (dim_a * dim_b != rho_ab.dim())
    throw std::invalid_argument("conditional min-entropy: dimension mismatch");
  if (dim_b > 2) throw std::invalid_argument("conditional min-entropy: dim_b above 2 unsupported");

  if (dim_b == 1) return -std::log2(largest_eigenvalue(rho_ab.matrix()));

  const Matrix id_a = Matrix::identity(dim_a);
  auto objective = [&](double r, double theta, double phi) {
    const Matrix w = kron(id_a, bloch_inverse_sqrt(r, theta, phi));
    const Matrix conjugated = w * rho_ab.matrix() * w;
    return -std::log2(std::max(largest_eigenvalue(conjugated), 1e-300));
  };
  return bloch_search(objective, opts);
}

double quantum_conditional_max_entropy(const DensityMatrix& rho_ac, std::size_t dim_a,
                                       std::size_t dim_c, const SigmaSearchOptions& opts) {
  if (dim_a * dim_c != rho_ac.dim())
    throw std::invalid_argument("conditional max-entropy: dimension mismatch");
  if (dim_c > 2) throw std::invalid_argument("conditional max-entropy: dim_c above 2 unsupported");

  const Matrix id_a = Matrix::identity(dim_a);
  const Matrix sqrt_rho = matrix_sqrt_psd(rho_ac.matrix());
  auto objective = [&](double r, double theta, double phi) {
    const Matrix root = kron(id_a, bloch_sqrt(r, theta, phi));
    return std::log2(std::max(trace_norm(sqrt_rho * root), 1e-300));
  };
  return 2.0 * bloch_search(objective, opts);
}

double gallagher_bound(const DiscreteDistribution& p, double eps1, double eps2) {
  if (eps1 < 0.0 || eps2 <= 0.0)
    throw std::invalid_argument("code-length bound: eps1 must be >= 0 and eps2 > 0");
  return smooth_max_entropy(p, eps1) + std::log2(1.0 / eps2) + 1.0;
}

OverlapResult eur_overlap(const MeasurementFamily& mf, const std::vector<std::size_t>& symmetry) {
  if (symmetry.size() != mf.num_settings())
    throw std::invalid_argument("overlap: symmetry size mismatch");
  std::vector<bool> seen(symmetry.size(), false);
  for (std::size_t s : symmetry) {
    if (s >= symmetry.size() || seen[s]) throw std::invalid_argument("overlap: not a bijection");
    seen[s] = true;
  }
  double c_q = 0.0;
  for (std::size_t p = 0; p < mf.num_settings(); ++p) {
    const auto& fam_q = mf.setting(symmetry[p]);
    const auto& fam_p = mf.setting(p);
    for (const auto& fx : fam_q)
      for (const auto& fz : fam_p) {
        const double nrm = operator_norm(fx * fz.adjoint());
        c_q = std::max(c_q, nrm * nrm);
      }
  }
  return {c_q, std::log2(1.0 / c_q)};
}

}  // namespace qkd
