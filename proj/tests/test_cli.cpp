// End-to-end checks for the delaycert CLI. Spawns the real binary (path in
// argv[1]), captures stdout/stderr through temp files and verifies exit
// codes, output shapes and determinism. Exit status = number of failures.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path g_tmp;
std::string g_bin;
int g_checks = 0;
int g_failures = 0;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const fs::path out_file = g_tmp / "stdout.txt";
  const fs::path err_file = g_tmp / "stderr.txt";
  const std::string cmd =
      "\"" + g_bin + "\" " + args + " >" + out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  if (status == -1)
    r.exit_code = -1;
  else if (WIFEXITED(status))
    r.exit_code = WEXITSTATUS(status);
  else
    r.exit_code = 128;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

void check(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::cout << "FAIL: " << what << "\n";
  }
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

/// Value of the first `"key":` occurrence in a JSON-ish text, parsed as a
/// double ("null" and absent keys give NaN).
double json_number(const std::string& text, const std::string& key) {
  const std::string marker = "\"" + key + "\":";
  const std::size_t pos = text.find(marker);
  if (pos == std::string::npos) return std::nan("");
  const char* p = text.c_str() + pos + marker.size();
  while (*p == ' ') ++p;
  if (std::string(p).rfind("null", 0) == 0) return std::nan("");
  return std::strtod(p, nullptr);
}

/// First whitespace-separated token following `prefix` on any stdout line.
std::string token_after(const std::string& text, const std::string& prefix) {
  const std::size_t pos = text.find(prefix);
  if (pos == std::string::npos) return {};
  std::istringstream ss(text.substr(pos + prefix.size()));
  std::string tok;
  ss >> tok;
  return tok;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// ---------------------------------------------------------------------------

void check_help_and_usage() {
  const auto help = run("--help");
  check(help.exit_code == 0, "--help exits 0");
  for (const char* sub : {"region", "stability", "cost", "admissible", "simulate", "verify"})
    check(contains(help.out, sub), std::string("--help lists ") + sub);

  check(run("").exit_code == 2, "no subcommand exits 2");
  check(run("bogus").exit_code == 2, "unknown subcommand exits 2");
  check(run("cost --tau 1 --lambda -1").exit_code == 2, "missing required option exits 2");
  check(run("cost --tau 1 --lambda abc --gamma 0").exit_code == 2, "bad complex literal exits 2");
}

void check_cost() {
  const auto all = run("cost --tau 1 --lambda -1 --gamma 0.3");
  check(all.exit_code == 0, "cost (all) exits 0");
  const double closed = std::strtod(token_after(all.out, "closed ").c_str(), nullptr);
  const double residue = std::strtod(token_after(all.out, "residue ").c_str(), nullptr);
  const double quad = std::strtod(token_after(all.out, "quadrature ").c_str(), nullptr);
  check(std::abs(closed - 0.590041048544156099) < 1e-14, "cost closed value");
  check(std::abs(residue - closed) < 1e-11, "cost residue agrees with closed");
  check(std::abs(quad - closed) < 1e-7, "cost quadrature agrees with closed");
  check(contains(all.out, "branch=overdamped"), "cost reports the branch");
  check(contains(all.out, "est_error="), "cost quadrature reports est_error");
  check(contains(all.out, "delta closed-residue="), "cost all reports deltas");

  const auto one = run("cost --tau 1 --lambda -1 --gamma 0.3 --method residue");
  check(one.exit_code == 0 && contains(one.out, "residue ") && !contains(one.out, "closed "),
        "cost --method residue prints only that route");
  check(run("cost --tau 1 --lambda -1 --gamma 0.3 --method nonsense").exit_code == 2,
        "cost bad method exits 2");
  check(run("cost --tau 1 --lambda 1.5 --gamma 0.1").exit_code == 2,
        "cost drift beyond 1/tau exits 2");
  const auto outside = run("cost --tau 1 --lambda 0 --gamma=-1.6");
  check(outside.exit_code == 3, "cost outside the stability set exits 3");
  check(contains(outside.err, "NotInRegion"), "cost outside names NotInRegion on stderr");
}

void check_stability() {
  const auto stable = run("stability --tau 1 --lambda -1 --gamma 0.3");
  check(stable.exit_code == 0, "stability stable exits 0");
  check(contains(stable.out, "STABLE region=member roots_in_C+=0"), "stability stable verdict");
  check(contains(stable.out, "branch=negative_re"), "stability reports branch");

  const auto unstable = run("stability --tau 1 --lambda 0 --gamma=-1.6");
  check(unstable.exit_code == 0, "stability unstable exits 0 (verdict is data)");
  check(contains(unstable.out, "UNSTABLE region=non-member roots_in_C+=2"),
        "stability unstable verdict with two roots");

  check(run("stability --tau 1 --lambda 0 --gamma=-1.5707963267948966").exit_code == 4,
        "stability with a root on the contour exits 4");
  check(run("stability --tau 0 --lambda 0 --gamma 0.1").exit_code == 2,
        "stability with tau=0 exits 2");
}

void check_region() {
  const auto r = run("region --tau 1 --a -1.5 --n 64");
  check(r.exit_code == 0, "region exits 0");
  check(r.out.rfind("u,v\n", 0) == 0, "region CSV header");
  check(count_lines(r.out) == 1 + 2 * 64 - 2, "region polyline has 2n-2 points");
  // Every data line must parse as two finite doubles.
  {
    std::istringstream ss(r.out);
    std::string line;
    std::getline(ss, line);  // header
    bool parsed = true;
    while (std::getline(ss, line)) {
      double u = 0.0, v = 0.0;
      if (std::sscanf(line.c_str(), "%lf,%lf", &u, &v) != 2 || !std::isfinite(u) ||
          !std::isfinite(v))
        parsed = false;
    }
    check(parsed, "region CSV rows parse as u,v doubles");
  }

  const fs::path out_file = g_tmp / "region.csv";
  const auto r2 = run("region --tau 1 --a -1.5 --n 64 --out " + out_file.string());
  check(r2.exit_code == 0 && r2.out.empty(), "region --out leaves stdout empty");
  check(slurp(out_file) == r.out, "region --out file matches stdout run");

  check(run("region --tau 1 --a 1.0").exit_code == 3, "region at a=1/tau exits 3");
  check(run("region --tau 1 --a -1 --n 8").exit_code == 2, "region n too small exits 2");
  check(run("region --tau 1 --a 1.5").exit_code == 2, "region a beyond 1/tau exits 2");
}

void check_admissible() {
  const fs::path spec = g_tmp / "heat.json";
  write_file(spec,
             "{\n"
             "  \"tau\": 1.0,\n"
             "  \"preset\": \"heat\",\n"
             "  \"N\": 100,\n"
             "  \"gamma_rule\": {\"kind\": \"power\", \"coeff\": [0.1, 0], \"exponent\": 0},\n"
             "  \"b_rule\": {\"kind\": \"geometric\", \"coeff\": [1, 0], \"ratio\": [0.5, 0]}\n"
             "}\n");
  const std::string base = "admissible --spec " + spec.string() + " --N 40 --K 10 --q-cap 0.5";

  const auto rep = run(base);
  check(rep.exit_code == 0, "admissible exits 0");
  check(contains(rep.out, "\"verdict\": \"CertifiedAdmissible\""), "admissible verdict");
  check(std::abs(json_number(rep.out, "partial_sum") - 0.139206613923046475) < 1e-13,
        "admissible partial_sum");
  check(std::abs(json_number(rep.out, "global_bound") - 0.278413227846092951) < 1e-13,
        "admissible global_bound");
  check(std::abs(json_number(rep.out, "empirical_ratio") - 0.237656249950530) < 1e-12,
        "admissible empirical_ratio");
  check(!contains(rep.out, "\"paranoid_checked\""),
        "admissible without --paranoid omits paranoid_checked");

  const auto rep2 = run(base);
  check(rep2.out == rep.out, "admissible output is deterministic across reruns");

  const auto paranoid = run(base + " --paranoid");
  check(paranoid.exit_code == 0, "admissible --paranoid exits 0");
  check(std::abs(json_number(paranoid.out, "paranoid_checked") - 2.0) < 0.5,
        "admissible --paranoid re-checks ceil(5% of N) coefficients");

  const auto csv = run(base + " --format csv");
  check(csv.exit_code == 0, "admissible --format csv exits 0");
  check(csv.out.rfind("k,re_lambda,im_lambda,re_gamma,im_gamma,re_b,im_b,member,"
                      "hypothesis_boundary,J,C,bound\n",
                      0) == 0,
        "admissible CSV header");
  check(count_lines(csv.out) == 41, "admissible CSV has N data rows");

  // Flat weights: inconclusive at a ratio cap below (39/40)^2; exit stays 0.
  const fs::path flat = g_tmp / "flat.json";
  write_file(flat,
             "{\"tau\": 1.0, \"preset\": \"heat\", \"N\": 60,\n"
             " \"gamma_rule\": {\"kind\": \"power\", \"coeff\": 0, \"exponent\": 0},\n"
             " \"b_rule\": {\"kind\": \"power\", \"coeff\": 1, \"exponent\": 0}}\n");
  const auto inc = run("admissible --spec " + flat.string() + " --N 40 --K 10 --q-cap 0.9");
  check(inc.exit_code == 0, "admissible inconclusive exits 0");
  check(contains(inc.out, "\"verdict\": \"Inconclusive\""), "admissible inconclusive verdict");
  check(contains(inc.out, "\"tail_bound\": null"), "inconclusive tail_bound renders as null");

  check(run("admissible --spec " + spec.string() + " --N 40 --K 40 --q-cap 0.5").exit_code == 2,
        "admissible K >= N exits 2");
  check(run("admissible --spec " + spec.string() + " --N 200 --K 10").exit_code == 2,
        "admissible N beyond the declared size exits 2");
  check(run("admissible --spec /nonexistent.json --N 4 --K 2").exit_code == 2,
        "admissible missing spec file exits 2");
  const fs::path broken = g_tmp / "broken.json";
  write_file(broken, "{\"tau\": 1.0, \"bogus\": 3}");
  check(run("admissible --spec " + broken.string() + " --N 4 --K 2").exit_code == 2,
        "admissible malformed spec exits 2");
  check(run(base + " --format yaml").exit_code == 2, "admissible unknown format exits 2");
}

void check_simulate() {
  const auto comp = run(
      "simulate --lambda -1 --gamma 0.3 --b 1 --tau 1 --input indicator:0:2:1 --t-end 3 --m 16");
  check(comp.exit_code == 0, "simulate component exits 0");
  check(comp.out.rfind("t,re_z,im_z,extended_norm2\n", 0) == 0, "simulate component CSV header");
  check(count_lines(comp.out) == 1 + 48 + 1, "simulate component row count (n+1 nodes)");
  check(comp.out.find("\n0,0,0,0\n") != std::string::npos,
        "simulate from rest starts at the origin");

  const fs::path spec = g_tmp / "heat.json";  // written by check_admissible
  const auto sys = run("simulate --spec " + spec.string() +
                       " --N 5 --input sinusoids:1:0.2:1.1:0 --t-end 2 --m 16");
  check(sys.exit_code == 0, "simulate system exits 0");
  check(sys.out.rfind("t,aggregate_norm2\n", 0) == 0, "simulate system CSV header");
  check(count_lines(sys.out) == 1 + 32 + 1, "simulate system row count");

  const auto sampled = run(
      "simulate --lambda -1 --gamma 0.3 --b 1 --tau 1 --input sampled:0.5:1,0.5,0.25,0 "
      "--t-end 2 --m 16");
  check(sampled.exit_code == 0, "simulate with sampled input exits 0");

  check(run("simulate --spec " + spec.string() +
            " --N 5 --lambda -1 --gamma 0 --b 1 --input zero --t-end 1")
                .exit_code == 2,
        "simulate --spec plus component params exits 2");
  check(run("simulate --lambda -1 --gamma 0 --input zero --t-end 1").exit_code == 2,
        "simulate component mode without --b exits 2");
  check(run("simulate --spec " + spec.string() + " --input zero --t-end 1").exit_code == 2,
        "simulate --spec without --N exits 2");
  check(run("simulate --lambda -1 --gamma 0 --b 1 --input zero --t-end 1 --m 4").exit_code == 2,
        "simulate m < 8 exits 2");
  check(run("simulate --lambda -400 --gamma 0 --b 1 --input zero --t-end 1 --m 16").exit_code ==
            2,
        "simulate step too coarse exits 2");
  check(run("simulate --lambda -1 --gamma 0 --b 1 --input wiggle:1 --t-end 1").exit_code == 2,
        "simulate unknown input kind exits 2");
  check(run("simulate --lambda -1 --gamma 0 --b 1 --input indicator:0:1 --t-end 1").exit_code ==
            2,
        "simulate indicator with missing field exits 2");
}

void check_verify() {
  const auto ok = run(
      "verify --lambda -1 --gamma 0.3 --b 1 --tau 1 --input indicator:0:2:1 --t-end 8 --m 32");
  check(ok.exit_code == 0, "verify exits 0");
  check(contains(ok.out, "\"passed\": true"), "verify reports passed");
  check(std::abs(json_number(ok.out, "J_used") - 0.590041048544156099) < 1e-14,
        "verify J_used matches the closed form");
  const double sup = json_number(ok.out, "sup_ratio");
  check(sup > 0.0 && sup <= 1.001, "verify sup_ratio within the certified bound");

  check(run("verify --lambda 0 --gamma=-1.6 --b 1 --tau 1 --input zero --t-end 2").exit_code ==
            3,
        "verify outside the stability set exits 3");
  check(run("verify --lambda -1 --gamma 0.3 --b 1 --tau 1 --input zero --t-end 0").exit_code ==
            2,
        "verify t-end 0 exits 2");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_checks <path-to-delaycert-binary>\n";
    return 99;
  }
  g_bin = argv[1];
  g_tmp = fs::temp_directory_path() /
          ("delaycert_cli_checks_" + std::to_string(static_cast<long>(::getpid())));
  fs::create_directories(g_tmp);

  check_help_and_usage();
  check_cost();
  check_stability();
  check_region();
  check_admissible();
  check_simulate();
  check_verify();

  std::cout << g_checks << " checks, " << g_failures << " failures\n";
  std::error_code ec;
  fs::remove_all(g_tmp, ec);
  return g_failures == 0 ? 0 : 1;
}
