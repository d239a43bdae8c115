#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwlab/report.hpp"
#include "pwlab/spec_io.hpp"
#include "pwlab/suites.hpp"

namespace fs = std::filesystem;
using namespace pwlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_double(t));
  return out;
}

Vec parse_vec(const std::string& s) {
  const auto d = parse_doubles(s);
  Vec v(Eigen::Index(d.size()));
  for (size_t i = 0; i < d.size(); ++i) v[Eigen::Index(i)] = d[i];
  return v;
}

std::vector<int> parse_signs(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) {
    if (t == "1" || t == "+1")
      out.push_back(1);
    else if (t == "-1")
      out.push_back(-1);
    else
      throw ConfigError("signs must be 1 or -1, got " + t);
  }
  return out;
}

RVec parse_rvec(const std::string& s) {
  RVec out;
  for (const auto& t : split(s, ',')) out.push_back(parse_rational(t));
  return out;
}

// Rows separated by ';' or '/', entries by ','.
Mat parse_matrix(std::string s) {
  std::replace(s.begin(), s.end(), '/', ';');
  const auto rows = split(s, ';');
  if (rows.empty()) throw ConfigError("empty matrix");
  const int n = int(rows.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto r = parse_doubles(rows[size_t(i)]);
    if (int(r.size()) != n) throw ConfigError("matrix must be square");
    for (int j = 0; j < n; ++j) m(i, j) = r[size_t(j)];
  }
  return m;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

int finish(const RunResult& r, const SuiteConfig& cfg, bool quiet) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", to_json(r.report));
  write_file(dir / "timing.json", timing_json(r.report.command, r.timing));
  for (const auto& f : r.files) write_file(dir / f.name, f.content);
  if (!quiet) {
    for (const auto& c : r.report.checks) {
      std::cout << (c.failed() ? "FAIL" : c.status == CheckStatus::Pass ? "PASS" : c.status == CheckStatus::Info ? "INFO" : "SKIP")
                << "  " << c.name;
      if (c.status != CheckStatus::Skipped)
        std::cout << "  residual=" << format_double(c.max_residual) << "  threshold=" << format_double(c.threshold);
      if (!c.note.empty()) std::cout << "  (" << c.note << ")";
      std::cout << "\n";
    }
  }
  const auto failures = r.report.failures();
  if (failures.empty()) {
    std::cout << r.report.command << ": all checks pass\n";
    return kExitPass;
  }
  std::cout << r.report.command << ": " << failures.size() << " failing\n";
  std::cerr << "failed:";
  for (const auto& f : failures) std::cerr << ' ' << f;
  std::cerr << "\n";
  return kExitFail;
}

MetricSpec spec_or_default(const std::string& path) { return path.empty() ? singular_spec(4.0) : load_spec(path); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for complex plane-wave pseudo-Kahler metrics"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SuiteConfig cfg;
  cfg.out_dir = "pwlab-out";
  std::string suites;
  bool quiet = false;
  auto common = [&](CLI::App* sub, bool with_spec) {
    if (with_spec) sub->add_option("--spec", cfg.spec_path, "spec file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--suite", suites, "comma-separated suite names");
    sub->add_option("--samples", cfg.samples, "sample count")->check(CLI::Range(1, 100000));
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--tol", cfg.tol_scale, "multiplier applied to every threshold")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--quiet", quiet, "only print the summary line");
  };

  auto* verify = app.add_subcommand("verify", "metric, Kahler, canonical-connection, VSI, Osserman and Walker suites");
  common(verify, true);
  std::string mutate;
  verify->add_option("--mutate", mutate, "negative control")->check(CLI::IsMember({"break-cr"}));

  auto* geodesic = app.add_subcommand("geodesic", "trajectory CSV and singularity checks");
  common(geodesic, true);
  std::string x0, v0;
  double t_end = 2.0;
  geodesic->add_option("--x0", x0, "initial point, comma-separated");
  geodesic->add_option("--v0", v0, "initial velocity, comma-separated");
  geodesic->add_option("--t-end", t_end, "final parameter");

  auto* holonomy = app.add_subcommand("holonomy", "holonomy dimension and su(1,1) normal form");
  common(holonomy, true);

  auto* liealg = app.add_subcommand("liealg", "transvection algebra export and structure checks");
  common(liealg, false);
  LieRequest lie;
  std::string bp = "1", b0 = "4", lie_eps, lie_mutate;
  liealg->add_option("--n", lie.n, "number of transverse complex pairs")->check(CLI::Range(0, 16));
  liealg->add_option("--bp", bp, "b at the reference point (rational)");
  liealg->add_option("--b0", b0, "profile constant (rational)");
  liealg->add_option("--eps", lie_eps, "transverse signs, comma-separated");
  liealg->add_option("--mutate", lie_mutate, "negative control")->check(CLI::IsMember({"flip-bracket-z1w2"}));
  liealg->add_option("--k-u0", lie.u0, "K-geodesic initial u");
  liealg->add_option("--k-v0", lie.v0, "K-geodesic initial v");
  liealg->add_option("--k-t0", lie.t0, "K-geodesic initial parameter");
  liealg->add_option("--k-t-end", lie.t_end, "K-geodesic final parameter");

  auto* wave = app.add_subcommand("wave", "real plane-wave suites");
  common(wave, false);
  std::string kind = "constant", matrix = "1,0.3;0.3,-2", wave_eps;
  wave->add_option("--kind", kind, "profile kind")->check(CLI::IsMember({"constant", "scale_invariant"}));
  wave->add_option("--matrix", matrix, "profile matrix, rows separated by ';' or '/'");
  wave->add_option("--eps", wave_eps, "transverse signs, comma-separated");

  auto* quaternion = app.add_subcommand("quaternion", "flat quaternionic model and wedge-kernel report");
  common(quaternion, false);
  QuaternionRequest qr;
  std::string xi;
  quaternion->add_option("--p", qr.p, "positive quaternionic blocks")->check(CLI::Range(0, 8));
  quaternion->add_option("--q", qr.q, "negative quaternionic blocks")->check(CLI::Range(0, 8));
  quaternion->add_option("--xi", xi, "isotropic vector (rationals), comma-separated");

  auto* plot = app.add_subcommand("plotdata", "curvature blow-up and geodesic trace CSVs");
  std::string plot_spec, plot_input, plot_out = "pwlab-out";
  plot->add_option("--spec", plot_spec, "spec file for the blow-up samples")->check(CLI::ExistingFile);
  plot->add_option("--input", plot_input, "trajectory CSV written by geodesic");
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  cfg.suites = split(suites, ',');
  cfg.threads = threads_from_env();
  try {
    if (*plot) {
      if (plot_spec.empty() && plot_input.empty()) throw ConfigError("plotdata needs --spec or --input");
      const fs::path dir(plot_out);
      fs::create_directories(dir);
      if (!plot_spec.empty()) {
        const MetricSpec s = load_spec(plot_spec);
        if (s.profile.kind != ProfileKind::SingularScaleInvariant)
          throw ConfigError("blow-up samples need the singular profile");
        write_file(dir / "blowup.csv", blowup_csv(s));
      }
      if (!plot_input.empty()) {
        std::ifstream in(plot_input, std::ios::binary);
        if (!in) throw ConfigError("missing input file " + plot_input);
        std::stringstream buf;
        buf << in.rdbuf();
        write_file(dir / "trace.csv", trace_csv(buf.str()));
      }
      std::cout << "plotdata: written to " << dir.string() << "\n";
      return kExitPass;
    }
    if (*verify) {
      const std::vector<std::string> known = {"metric", "curvature", "kahler", "ambrose_singer",
                                              "vsi",    "osserman",  "walker", "symmetric"};
      for (const auto& s : cfg.suites)
        if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite " + s);
      MetricSpec spec = spec_or_default(cfg.spec_path);
      if (mutate == "break-cr") spec = break_cauchy_riemann(spec);
      return finish(run_verify(spec, cfg), cfg, quiet);
    }
    if (!cfg.suites.empty()) throw ConfigError("--suite only applies to verify");
    if (*geodesic) {
      GeodesicRequest req;
      if (!x0.empty()) req.x0 = parse_vec(x0);
      if (!v0.empty()) req.v0 = parse_vec(v0);
      req.t_end = t_end;
      return finish(run_geodesic(spec_or_default(cfg.spec_path), req, cfg), cfg, quiet);
    }
    if (*holonomy) return finish(run_holonomy(spec_or_default(cfg.spec_path), cfg), cfg, quiet);
    if (*liealg) {
      lie.b_p = parse_rational(bp);
      lie.b0 = parse_rational(b0);
      if (!lie_eps.empty()) lie.epsilons = parse_signs(lie_eps);
      lie.flip_z1w2 = lie_mutate == "flip-bracket-z1w2";
      return finish(run_liealg(lie, cfg), cfg, quiet);
    }
    if (*wave) {
      const Mat a = parse_matrix(matrix);
      const std::vector<int> eps = wave_eps.empty() ? std::vector<int>{} : parse_signs(wave_eps);
      const PlaneWaveSpec ws = kind == "constant" ? constant_wave(a, eps) : scale_invariant_wave(a, eps);
      return finish(run_wave(ws, cfg), cfg, quiet);
    }
    if (*quaternion) {
      if (!xi.empty()) qr.xi = parse_rvec(xi);
      return finish(run_quaternion(qr, cfg), cfg, quiet);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
