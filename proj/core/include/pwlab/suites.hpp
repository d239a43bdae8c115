#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwlab/curves.hpp"
#include "pwlab/exact.hpp"
#include "pwlab/lorentz_waves.hpp"
#include "pwlab/metric_family.hpp"
#include "pwlab/report.hpp"

namespace pwlab {

struct SuiteConfig {
  std::string spec_path;
  std::vector<std::string> suites;  // empty selects every suite of the command
  int samples = 100;
  std::uint64_t seed = 1;
  double tol_scale = 1.0;  // multiplies every threshold
  std::string out_dir = ".";
  int threads = 1;

  bool selected(const std::string& suite) const;
  double tol(double base) const { return base * tol_scale; }
};

// PWLAB_THREADS if set and positive, else 1.
int threads_from_env();

// Deterministic base points with rho in [lo, hi] and fiber coordinates in [-2, 2].
std::vector<Point> sample_points(int dim, int count, std::uint64_t seed, double lo = 0.5, double hi = 3.0);

// A file the command wants written next to report.json.
struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  ReportDoc report;
  std::vector<TimingEntry> timing;
  std::vector<OutputFile> files;
};

// Suites: metric, curvature, kahler, ambrose_singer, vsi, osserman, walker, symmetric.
// Checks that need holomorphic couplings are skipped when Cauchy-Riemann fails.
RunResult run_verify(const MetricSpec& spec, const SuiteConfig& cfg);

struct GeodesicRequest {
  std::optional<Point> x0;  // default: the radial geodesic from (1, 0, ...)
  std::optional<Vec> v0;
  double t_end = 2.0;
};
// Emits trajectory.csv; checks incompleteness and the parallel-frame blow-up on
// singular profiles, completeness to |t| = 100 otherwise.
RunResult run_geodesic(const MetricSpec& spec, const GeodesicRequest& req, const SuiteConfig& cfg);

// Emits the su(1,1) normal form at (1, 0, ...) as an artifact.
RunResult run_holonomy(const MetricSpec& spec, const SuiteConfig& cfg);

struct LieRequest {
  int n = 1;
  Rational b_p = 1;
  Rational b0 = 4;
  std::vector<int> epsilons;
  bool flip_z1w2 = false;  // negative control
  double u0 = 1.0, v0 = 0.0, t0 = 0.0, t_end = -2.0;
};
// Emits algebra.json and the K-geodesic fit; structure checks are skipped
// when Jacobi fails.
RunResult run_liealg(const LieRequest& req, const SuiteConfig& cfg);

RunResult run_wave(const PlaneWaveSpec& spec, const SuiteConfig& cfg);

struct QuaternionRequest {
  int p = 1, q = 1;
  RVec xi;  // empty: e_1 + f_1
};
RunResult run_quaternion(const QuaternionRequest& req, const SuiteConfig& cfg);

// Every check name each command can emit; used by the coverage audit.
std::vector<std::string> command_checks(const std::string& command);

// t,value,predicted rows of the parallel-frame curvature on [0, t_max].
std::string blowup_csv(const MetricSpec& spec, double t_max = 0.9, double dt = 0.05);
// t,<coords>,rho,flag from a trajectory CSV; header only if it has no rows.
// Throws ConfigError on a malformed header.
std::string trace_csv(const std::string& trajectory_csv);

// Sets coupling 0 to the raw pair r = w1, s = w1 (needs n >= 1).
MetricSpec break_cauchy_riemann(MetricSpec spec);

}  // namespace pwlab
