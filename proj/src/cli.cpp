#include "qkd/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "qkd/capacity.hpp"
#include "qkd/entropy.hpp"
#include "qkd/protocol.hpp"
#include "qkd/security.hpp"
#include "qkd/serialize.hpp"

namespace qkd {

namespace {

constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal form, so CSV doubles are bit-exact.
std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out << content;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

int cmd_simulate(const std::string& config_path, std::string output_path) {
  const nlohmann::json doc = load_json(config_path);
  const SimulationInput input = parse_simulation_config(doc);
  if (output_path.empty() && doc.contains("output"))
    output_path = doc.at("output").get<std::string>();

  const ProtocolRun run = run_protocol(input.config, input.channel, input.budget);
  std::cout << summary_line(run) << "\n";
  write_text(output_path, to_json(run).dump(2) + "\n");
  return 0;
}

struct RateArgs {
  std::int64_t signals = 1000000;
  double qber = 0.01;
  double eps = 1e-9;
  double eps_ec = 1e-10;
  double f_ec = 1.1;
  double c_bar = 0.5;
  double delta = -1.0;
  std::string delta_term = "inverse";
  std::string sweep;
  std::string output;
};

std::string rate_csv_row(const RateReport& rep, std::int64_t signals) {
  std::ostringstream os;
  os << signals << ',' << rep.n << ',' << rep.k << ',' << format_double(rep.eps_bar) << ','
     << format_double(rep.eps_bar_prime) << ',' << format_double(rep.nu_star) << ','
     << format_double(std::exp2(rep.log2_eps_pa)) << ',' << rep.l_max << ','
     << format_double(rep.r_sifted) << ',' << format_double(rep.r_per_signal) << '\n';
  return os.str();
}

int cmd_rate(const RateArgs& args) {
  if (args.eps <= 0.0 || args.eps >= 1.0 || args.eps_ec <= 0.0 || args.eps_ec >= 1.0)
    throw CLI::ValidationError("--eps and --eps-ec must lie in (0, 1)");
  SecurityBudget budget;
  budget.eps = args.eps;
  budget.eps_ec = args.eps_ec;

  OptimizeOptions opts;
  opts.f_ec = args.f_ec;
  opts.c_bar = args.c_bar;
  opts.delta = args.delta;
  if (args.delta_term == "inverse") opts.delta_term = DeltaTerm::Inverse;
  else if (args.delta_term == "standard") opts.delta_term = DeltaTerm::Standard;
  else throw CLI::ValidationError("--delta-term must be 'inverse' or 'standard'");

  if (budget.eps <= budget.eps_ec) {
    // Infeasible budget: still a report, not a usage error.
    nlohmann::json j = to_json(RateReport{});
    j["infeasible_reason"] = "eps must exceed eps_ec";
    write_text(args.output, j.dump(2) + "\n");
    return 0;
  }

  if (!args.sweep.empty()) {
    // --sweep M=a:b:steps
    std::int64_t lo = 0, hi = 0, steps = 0;
    const auto parse_spec = [&]() {
      std::string_view s(args.sweep);
      if (!s.starts_with("M=")) return false;
      s.remove_prefix(2);
      for (std::int64_t* out : {&lo, &hi, &steps}) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
        if (ec != std::errc{}) return false;
        s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
        if (out != &steps) {
          if (!s.starts_with(':')) return false;
          s.remove_prefix(1);
        }
      }
      return s.empty();
    };
    if (!parse_spec() || steps < 1 || lo < 100 || hi < lo)
      throw CLI::ValidationError("--sweep expects M=a:b:steps with 100 <= a <= b, steps >= 1");
    std::ostringstream csv;
    csv << "M,n,k,eps_bar,eps_bar_prime,nu_star,eps_pa,l,r_sifted,r_per_signal\n";
    for (std::int64_t i = 0; i < steps; ++i) {
      const double frac = steps == 1 ? 0.0 : double(i) / double(steps - 1);
      const auto m = static_cast<std::int64_t>(std::llround(lo + frac * double(hi - lo)));
      csv << rate_csv_row(optimize_rate(m, args.qber, budget, opts), m);
    }
    write_text(args.output, csv.str());
    return 0;
  }

  const RateReport rep = optimize_rate(args.signals, args.qber, budget, opts);
  std::cout << "r_per_signal=" << format_double(rep.r_per_signal)
            << " r_sifted=" << format_double(rep.r_sifted) << " l=" << rep.l_max
            << " n=" << rep.n << " feasible=" << (rep.feasible ? "true" : "false") << "\n";
  write_text(args.output, to_json(rep).dump(2) + "\n");
  return 0;
}

int cmd_capacity(double gamma_min, double gamma_max, int steps, double curve_gamma,
                 int curve_points, bool curve_set, const std::string& output) {
  std::ostringstream csv;
  if (curve_set) {
    csv << "a,I\n";
    std::vector<double> grid;
    for (int i = 0; i < curve_points; ++i)
      grid.push_back(double(i) / double(curve_points - 1));
    for (const auto& [a, info] : coherent_info_curve(curve_gamma, grid))
      csv << format_double(a) << ',' << format_double(info) << '\n';
  } else {
    if (steps < 1 || gamma_min < 0.0 || gamma_max > 1.0 || gamma_min > gamma_max)
      throw CLI::ValidationError("need 0 <= gamma-min <= gamma-max <= 1 and steps >= 1");
    std::vector<double> grid;
    for (int i = 0; i < steps; ++i) {
      const double frac = steps == 1 ? 0.0 : double(i) / double(steps - 1);
      grid.push_back(gamma_min + frac * (gamma_max - gamma_min));
    }
    csv << "gamma,q,a_star,degradable,raw_max_i\n";
    for (const CapacityPoint& p : capacity_sweep(grid))
      csv << format_double(p.gamma) << ',' << format_double(p.q) << ','
          << format_double(p.a_star) << ',' << (p.degradable ? 1 : 0) << ','
          << format_double(p.raw_max_i) << '\n';
  }
  write_text(output, csv.str());
  return 0;
}

int cmd_entropy(const std::string& path, double eps) {
  const nlohmann::json doc = load_json(path);
  std::ostringstream table;
  auto row = [&table](const std::string& name, double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    table << name << " = " << buf << "\n";
  };

  bool seen = false;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "dist" && it.key() != "dist2" && it.key() != "joint" &&
        it.key() != "matrix" && it.key() != "eps")
      throw std::invalid_argument("entropy: unknown field '" + it.key() + "'");
  }
  if (doc.contains("eps")) eps = doc.at("eps").get<double>();

  if (doc.contains("dist")) {
    seen = true;
    const auto p = DiscreteDistribution::normalized(doc.at("dist").get<std::vector<double>>());
    row("H", shannon_entropy(p));
    row("H_min", min_entropy(p));
    row("H_max", max_entropy(p));
    if (eps > 0.0) {
      row("H_min_smooth", smooth_min_entropy(p, eps));
      row("H_max_smooth", smooth_max_entropy(p, eps));
    }
    if (doc.contains("dist2")) {
      const auto q =
          DiscreteDistribution::normalized(doc.at("dist2").get<std::vector<double>>());
      const double d = relative_entropy(p, q);
      table << "D(dist||dist2) = " << (std::isinf(d) ? "inf" : format_double(d)) << "\n";
    }
  }
  if (doc.contains("joint")) {
    seen = true;
    const JointDistribution pxy(doc.at("joint").get<std::vector<std::vector<double>>>());
    row("H_XY", joint_entropy(pxy));
    row("H_X_given_Y", conditional_entropy(pxy));
    row("I_X_Y", mutual_information(pxy));
    row("H_min_X_given_Y", conditional_min_entropy(pxy));
  }
  if (doc.contains("matrix")) {
    seen = true;
    const DensityMatrix rho = DensityMatrix::from_matrix(matrix_from_json(doc.at("matrix")));
    table << "dim = " << rho.dim() << "\n";
    row("trace", rho.trace());
    row("H_vn", von_neumann_entropy(rho));
  }
  if (!seen)
    throw std::invalid_argument("entropy: expected at least one of dist/joint/matrix");
  std::cout << table.str();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"BB84 simulation, finite-key analysis and channel-capacity toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the prepare-and-measure protocol from a JSON config");
  std::string sim_config, sim_output;
  sim->add_option("config", sim_config, "JSON run configuration")->required();
  sim->add_option("-o,--output", sim_output, "output path for the run record (default: stdout)");

  // rate
  auto* rate = app.add_subcommand("rate", "finite-key rate optimization");
  RateArgs rate_args;
  rate->add_option("-M,--signals", rate_args.signals, "number of transmitted signals");
  rate->add_option("-q,--qber", rate_args.qber, "channel error rate");
  rate->add_option("--eps", rate_args.eps, "target key security");
  rate->add_option("--eps-ec", rate_args.eps_ec, "correctness failure bound");
  rate->add_option("--f-ec", rate_args.f_ec, "reconciliation inefficiency factor");
  rate->add_option("--c-bar", rate_args.c_bar, "measurement overlap parameter");
  rate->add_option("--delta", rate_args.delta, "estimation threshold (default: qber)");
  rate->add_option("--delta-term", rate_args.delta_term, "finite-size term form: inverse|standard");
  rate->add_option("--sweep", rate_args.sweep, "emit CSV over M=a:b:steps");
  rate->add_option("-o,--output", rate_args.output, "output path (default: stdout)");

  // capacity
  auto* cap = app.add_subcommand("capacity", "amplitude-damping channel capacity");
  double gamma_min = 0.0, gamma_max = 0.5, curve_gamma = 0.0;
  int steps = 21, curve_points = 101;
  cap->add_option("--gamma-min", gamma_min, "sweep start");
  cap->add_option("--gamma-max", gamma_max, "sweep end");
  cap->add_option("--steps", steps, "sweep points");
  auto* curve_opt = cap->add_option("--curve", curve_gamma, "emit the I(a) curve for one gamma");
  cap->add_option("--points", curve_points, "curve sample count");
  std::string cap_output;
  cap->add_option("-o,--output", cap_output, "output path (default: stdout)");

  // entropy
  auto* ent = app.add_subcommand("entropy", "entropy measures of a distribution or state file");
  std::string ent_file;
  double ent_eps = 0.0;
  ent->add_option("file", ent_file, "JSON input")->required();
  ent->add_option("--eps", ent_eps, "smoothing parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_config, sim_output);
    if (rate->parsed()) return cmd_rate(rate_args);
    if (cap->parsed())
      return cmd_capacity(gamma_min, gamma_max, steps, curve_gamma, curve_points,
                          curve_opt->count() > 0, cap_output);
    if (ent->parsed()) return cmd_entropy(ent_file, ent_eps);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qkd
