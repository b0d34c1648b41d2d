//! delaycert command-line interface.
//!
//! Subcommands:
//!   region      trace a stability-region boundary polyline as CSV
//!   stability   membership verdict cross-checked against the root counter
//!   cost        the quadratic cost by any (or all) of the three routes
//!   admissible  certify a truncated diagonal system from a JSON spec
//!   simulate    integrate one component or a truncated system
//!   verify      simulate and compare against the certificate energy bound
//!
//! Exit codes: 0 success (verdicts are data, not exit codes), 2 usage or
//! validation problems, 3 mathematical hypothesis failures (NotInRegion,
//! NoRoot, DegenerateRegion), 4 numerical failures (ContourTooClose,
//! NoConvergence, DenominatorNearZero, NearDegenerate, ToleranceNotMet).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "delaycert/delaycert.hpp"

namespace {

using namespace delaycert;

[[nodiscard]] std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::validation_error, "cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) raise(Errc::validation_error, "cannot open output file '" + out_path + "'");
  out << text;
}

[[nodiscard]] std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
}

[[nodiscard]] double parse_real(const std::string& tok, const std::string& whole) {
  const Complex z = parse_complex(tok);
  if (z.imag() != 0.0)
    raise(Errc::parse_error, "expected a real number in '" + whole + "', got '" + tok + "'");
  return z.real();
}

/// Input-signal mini-language:
///   zero
///   indicator:<t0>:<t1>:<amp>
///   sinusoids:<amp>:<decay>:<freq>:<phase>[;<amp>:<decay>:<freq>:<phase>...]
///   sampled:<dt>:<v0>,<v1>,...
/// Amplitudes and samples are complex scalars ("1.5", "2i", "1-0.5i").
[[nodiscard]] InputSignal parse_input_spec(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);

  if (kind == "zero") {
    if (!rest.empty()) raise(Errc::parse_error, "'zero' takes no arguments: '" + spec + "'");
    return InputSignal::zero();
  }
  if (kind == "indicator") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3)
      raise(Errc::parse_error, "indicator needs t0:t1:amp, got '" + spec + "'");
    Indicator ind;
    ind.t0 = parse_real(parts[0], spec);
    ind.t1 = parse_real(parts[1], spec);
    ind.amplitude = parse_complex(parts[2]);
    return InputSignal(ind);
  }
  if (kind == "sinusoids") {
    SinusoidSum sum;
    for (const auto& term_text : split(rest, ';')) {
      const auto parts = split(term_text, ':');
      if (parts.size() != 4)
        raise(Errc::parse_error,
              "each sinusoid needs amp:decay:freq:phase, got '" + term_text + "'");
      DampedSinusoid term;
      term.amplitude = parse_complex(parts[0]);
      term.decay = parse_real(parts[1], spec);
      term.freq = parse_real(parts[2], spec);
      term.phase = parse_real(parts[3], spec);
      sum.terms.push_back(term);
    }
    return InputSignal(sum);
  }
  if (kind == "sampled") {
    const auto parts = split(rest, ':');
    if (parts.size() != 2)
      raise(Errc::parse_error, "sampled needs dt:v0,v1,..., got '" + spec + "'");
    SampledGrid grid;
    grid.dt = parse_real(parts[0], spec);
    for (const auto& tok : split(parts[1], ',')) grid.values.push_back(parse_complex(tok));
    return InputSignal(grid);
  }
  raise(Errc::parse_error, "unknown input kind '" + kind +
                               "' (expected zero | indicator | sinusoids | sampled)");
}

// ---------------------------------------------------------------------------
// Subcommand payloads
// ---------------------------------------------------------------------------

struct RegionArgs {
  double tau = 1.0;
  double a = 0.0;
  std::size_t n = 256;
  std::string out;
};

void run_region(const RegionArgs& args) {
  const auto b = boundary(RegionParams{args.tau, args.a}, args.n);
  std::string csv = "u,v\n";
  for (const Complex p : b.points)
    csv += format_g17(p.real()) + "," + format_g17(p.imag()) + "\n";
  write_output(csv, args.out);
}

struct StabilityArgs {
  double tau = 1.0;
  std::string lambda;
  std::string gamma;
};

void run_stability(const StabilityArgs& args) {
  ComponentParams p;
  p.lambda = parse_complex(args.lambda);
  p.gamma = parse_complex(args.gamma);
  p.tau = args.tau;
  const auto red = reduce_params(p);
  const auto verdict = contains(RegionParams{p.tau, red.a}, red.gamma_rot);
  const auto rc = count_unstable_roots(CharacteristicFn{p});

  std::printf("%s region=%s roots_in_C+=%d\n", verdict.member ? "STABLE" : "UNSTABLE",
              verdict.member ? "member" : "non-member", rc.count);
  std::printf("branch=%s via_disc=%d distance_hint=%s min_modulus=%s\n",
              branch_name(verdict.branch), verdict.via_disc ? 1 : 0,
              format_g17(verdict.distance_hint).c_str(),
              format_g17(rc.min_modulus_on_contour).c_str());
  if (verdict.member != (rc.count == 0))
    raise(Errc::tolerance_not_met,
          "membership and root count disagree (likely a near-boundary point)");
}

struct CostArgs {
  double tau = 1.0;
  std::string lambda;
  std::string gamma;
  std::string method = "all";
};

void run_cost(const CostArgs& args) {
  ComponentParams p;
  p.lambda = parse_complex(args.lambda);
  p.gamma = parse_complex(args.gamma);
  p.tau = args.tau;

  const bool all = args.method == "all";
  std::optional<CostResult> closed, residue, quad;
  if (all || args.method == "closed") closed = j_closed(p);
  if (all || args.method == "residue") residue = j_residue(p);
  if (all || args.method == "quadrature") quad = j_quadrature(p);
  if (!closed && !residue && !quad)
    raise(Errc::invalid_argument, "--method must be closed | residue | quadrature | all");

  if (closed)
    std::printf("closed %s branch=%s\n", format_g17(closed->value).c_str(),
                branch_name(closed->branch));
  if (residue)
    std::printf("residue %s branch=%s\n", format_g17(residue->value).c_str(),
                branch_name(residue->branch));
  if (quad)
    std::printf("quadrature %s branch=%s est_error=%s\n", format_g17(quad->value).c_str(),
                branch_name(quad->branch), format_g17(quad->est_error).c_str());
  if (all) {
    std::printf("delta closed-residue=%s\n",
                format_g17(std::abs(closed->value - residue->value)).c_str());
    std::printf("delta closed-quadrature=%s\n",
                format_g17(std::abs(closed->value - quad->value)).c_str());
  }
}

struct AdmissibleArgs {
  std::string spec_path;
  std::size_t N = 0;
  std::size_t K = 0;
  double q_cap = 0.95;
  std::string format = "report";
  std::string out;
  bool paranoid = false;
  unsigned long seed = 12345;
};

/// Re-derives a sample of certified coefficients through the independent
/// quadrature route; any mismatch beyond 1e-6 (1 + J) fails the run.
int paranoid_recheck(const DiagonalDelaySystem& sys, const SystemReport& rep,
                     unsigned long seed) {
  if (rep.verdict != Verdict::certified_admissible) return 0;
  const std::size_t want = (rep.N + 19) / 20;  // ceil(5%)
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(1, rep.N);
  std::set<std::size_t> ks;
  while (ks.size() < want) ks.insert(pick(rng));
  for (const std::size_t k : ks) {
    const auto p = sys.component(k);
    const double jq = j_quadrature(p).value;
    const double jc = rep.certificates[k - 1].J;
    if (std::abs(jq - jc) > 1e-6 * (1.0 + std::abs(jc)))
      raise(Errc::tolerance_not_met,
            "paranoid re-check failed at k=" + std::to_string(k) + ": closed " + format_g17(jc) +
                " vs quadrature " + format_g17(jq));
  }
  return static_cast<int>(want);
}

void run_admissible(const AdmissibleArgs& args) {
  const auto sys = parse_system_spec(read_file(args.spec_path));
  const auto rep = system_check(sys, args.N, args.K, args.q_cap);
  const int checked = args.paranoid ? paranoid_recheck(sys, rep, args.seed) : -1;

  if (args.format == "report") {
    write_output(to_json(rep, checked) + "\n", args.out);
    return;
  }
  if (args.format == "csv") {
    std::string csv =
        "k,re_lambda,im_lambda,re_gamma,im_gamma,re_b,im_b,member,hypothesis_boundary,J,C,"
        "bound\n";
    for (const auto& c : rep.certificates) {
      csv += std::to_string(c.k) + "," + format_g17(c.lambda.real()) + "," +
             format_g17(c.lambda.imag()) + "," + format_g17(c.gamma.real()) + "," +
             format_g17(c.gamma.imag()) + "," + format_g17(c.b.real()) + "," +
             format_g17(c.b.imag()) + "," + (c.member ? "1" : "0") + "," +
             (c.hypothesis_boundary ? "1" : "0") + "," + format_g17(c.J) + "," +
             format_g17(c.C) + "," + format_g17(c.bound) + "\n";
    }
    write_output(csv, args.out);
    return;
  }
  raise(Errc::invalid_argument, "--format must be report | csv");
}

struct SimulateArgs {
  std::string spec_path;
  std::size_t N = 0;
  std::string lambda, gamma, b;
  double tau = 1.0;
  std::string input = "zero";
  double t_end = 0.0;
  std::size_t m = 64;
  std::string out;
};

void run_simulate(const SimulateArgs& args) {
  const InputSignal u = parse_input_spec(args.input);
  if (!args.spec_path.empty()) {
    if (!args.lambda.empty() || !args.gamma.empty() || !args.b.empty())
      raise(Errc::invalid_argument, "--spec and component parameters are mutually exclusive");
    if (args.N == 0) raise(Errc::invalid_argument, "--spec mode needs --N");
    const auto sys = parse_system_spec(read_file(args.spec_path));
    const auto st = simulate_system(sys, u, args.N, args.t_end, args.m);
    std::string csv = "t,aggregate_norm2\n";
    for (std::size_t i = 0; i <= st.n; ++i)
      csv += format_g17(st.dt * static_cast<double>(i)) + "," + format_g17(st.aggregate[i]) +
             "\n";
    write_output(csv, args.out);
    return;
  }
  if (args.lambda.empty() || args.gamma.empty() || args.b.empty())
    raise(Errc::invalid_argument, "component mode needs --lambda, --gamma and --b");
  ComponentParams p;
  p.lambda = parse_complex(args.lambda);
  p.gamma = parse_complex(args.gamma);
  p.b = parse_complex(args.b);
  p.tau = args.tau;
  const auto tr = simulate_component(p, u, zero_init(), args.t_end, args.m);
  std::string csv = "t,re_z,im_z,extended_norm2\n";
  for (std::size_t i = 0; i <= tr.n; ++i) {
    const double t = tr.dt * static_cast<double>(i);
    const Complex z = tr.at_node(static_cast<long>(i));
    csv += format_g17(t) + "," + format_g17(z.real()) + "," + format_g17(z.imag()) + "," +
           format_g17(extended_norm(tr, t)) + "\n";
  }
  write_output(csv, args.out);
}

struct VerifyArgs {
  std::string lambda, gamma, b;
  double tau = 1.0;
  std::string input;
  double t_end = 0.0;
  std::size_t m = 64;
};

void run_verify(const VerifyArgs& args) {
  ComponentParams p;
  p.lambda = parse_complex(args.lambda);
  p.gamma = parse_complex(args.gamma);
  p.b = parse_complex(args.b);
  p.tau = args.tau;
  const auto rep = verify_bound(p, parse_input_spec(args.input), args.t_end, args.m);
  std::fputs((to_json(rep) + "\n").c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "delaycert: stability regions, quadratic costs and admissibility certificates\n"
      "for retarded diagonal delay systems dz/dt = lambda z(t) + gamma z(t-tau) + b u(t)"};
  app.require_subcommand(1);

  RegionArgs region_args;
  auto* region_cmd =
      app.add_subcommand("region", "Trace a stability-region boundary polyline as CSV");
  region_cmd->add_option("--tau", region_args.tau, "delay tau > 0")->required();
  region_cmd->add_option("--a", region_args.a, "drift real part a <= 1/tau")->required();
  region_cmd->add_option("--n", region_args.n, "upper-half sample count (>= 16)");
  region_cmd->add_option("--out", region_args.out, "output file (default stdout)");

  StabilityArgs stability_args;
  auto* stability_cmd = app.add_subcommand(
      "stability", "Membership verdict cross-checked against the unstable-root count");
  stability_cmd->add_option("--tau", stability_args.tau, "delay tau > 0")->required();
  stability_cmd->add_option("--lambda", stability_args.lambda, "drift coefficient (complex)")
      ->required();
  stability_cmd->add_option("--gamma", stability_args.gamma, "delayed gain (complex)")
      ->required();

  CostArgs cost_args;
  auto* cost_cmd = app.add_subcommand("cost", "Quadratic cost of one certified component");
  cost_cmd->add_option("--tau", cost_args.tau, "delay tau > 0")->required();
  cost_cmd->add_option("--lambda", cost_args.lambda, "drift coefficient (complex)")->required();
  cost_cmd->add_option("--gamma", cost_args.gamma, "delayed gain (complex)")->required();
  cost_cmd->add_option("--method", cost_args.method, "closed | residue | quadrature | all");

  AdmissibleArgs adm_args;
  auto* adm_cmd =
      app.add_subcommand("admissible", "Certify a truncated diagonal system from a JSON spec");
  adm_cmd->add_option("--spec", adm_args.spec_path, "system spec JSON file")->required();
  adm_cmd->add_option("--N", adm_args.N, "truncation length")->required();
  adm_cmd->add_option("--K", adm_args.K, "ratio window start (1 <= K < N)")->required();
  adm_cmd->add_option("--q-cap", adm_args.q_cap, "tail ratio cap in (0,1), default 0.95");
  adm_cmd->add_option("--format", adm_args.format, "report (JSON) | csv");
  adm_cmd->add_option("--out", adm_args.out, "output file (default stdout)");
  adm_cmd->add_flag("--paranoid", adm_args.paranoid,
                    "re-check 5% of certified coefficients by quadrature");
  adm_cmd->add_option("--seed", adm_args.seed, "paranoid sampling seed (default 12345)");

  SimulateArgs sim_args;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Integrate one component or a truncated system as CSV");
  sim_cmd->add_option("--spec", sim_args.spec_path, "system spec JSON file (system mode)");
  sim_cmd->add_option("--N", sim_args.N, "component count (system mode)");
  sim_cmd->add_option("--lambda", sim_args.lambda, "drift coefficient (component mode)");
  sim_cmd->add_option("--gamma", sim_args.gamma, "delayed gain (component mode)");
  sim_cmd->add_option("--b", sim_args.b, "input weight (component mode)");
  sim_cmd->add_option("--tau", sim_args.tau, "delay tau > 0 (component mode)");
  sim_cmd->add_option("--input", sim_args.input,
                      "input signal: zero | indicator:t0:t1:amp | "
                      "sinusoids:amp:decay:freq:phase[;...] | sampled:dt:v0,v1,...")
      ->required();
  sim_cmd->add_option("--t-end", sim_args.t_end, "simulation horizon > 0")->required();
  sim_cmd->add_option("--m", sim_args.m, "subdivisions per delay (>= 8, default 64)");
  sim_cmd->add_option("--out", sim_args.out, "output file (default stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Simulate one component and compare against the certificate energy bound");
  verify_cmd->add_option("--lambda", verify_args.lambda, "drift coefficient (complex)")
      ->required();
  verify_cmd->add_option("--gamma", verify_args.gamma, "delayed gain (complex)")->required();
  verify_cmd->add_option("--b", verify_args.b, "input weight (complex)")->required();
  verify_cmd->add_option("--tau", verify_args.tau, "delay tau > 0")->required();
  verify_cmd->add_option("--input", verify_args.input, "input signal (see simulate)")
      ->required();
  verify_cmd->add_option("--t-end", verify_args.t_end, "simulation horizon > 0")->required();
  verify_cmd->add_option("--m", verify_args.m, "subdivisions per delay (>= 8, default 64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (region_cmd->parsed()) run_region(region_args);
    if (stability_cmd->parsed()) run_stability(stability_args);
    if (cost_cmd->parsed()) run_cost(cost_args);
    if (adm_cmd->parsed()) run_admissible(adm_args);
    if (sim_cmd->parsed()) run_simulate(sim_args);
    if (verify_cmd->parsed()) run_verify(verify_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.failure_class()) {
      case FailureClass::usage: return 2;
      case FailureClass::hypothesis: return 3;
      case FailureClass::numerical: return 4;
    }
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
