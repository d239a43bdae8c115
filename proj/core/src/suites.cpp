#include "pwlab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pwlab/geometry.hpp"
#include "pwlab/holonomy.hpp"
#include "pwlab/kahler.hpp"
#include "pwlab/lie_model.hpp"
#include "pwlab/quaternionic.hpp"
#include "pwlab/spec_io.hpp"

namespace pwlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs f(i) for i in [0, count) on up to `threads` workers; rethrows the first
// exception after joining.
void parallel_for(int count, int threads, const std::function<void(int)>& f) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Max that keeps NaN once seen.
void fold_max(double& acc, double v) {
  if (std::isnan(acc)) return;
  if (std::isnan(v) || v > acc) acc = v;
}

std::string fmt(double x) { return format_double(x); }

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

void base_config(ReportDoc& doc, const SuiteConfig& cfg) {
  doc.config = {{"samples", std::to_string(cfg.samples)},
                {"seed", std::to_string(cfg.seed)},
                {"tol_scale", fmt(cfg.tol_scale)},
                {"suites", cfg.suites.empty() ? std::string("all") : join(cfg.suites, ",")}};
}

Point base_point(int dim) {
  Point p = Point::Zero(dim);
  p[0] = 1.0;
  return p;
}

// ---------------------------------------------------------------- verify

enum class Applies { All, Singular, CahenWallach };

struct VerifyEntry {
  const char* suite;
  const char* name;
  double threshold;
  Applies applies;
  bool gated;  // needs holomorphic couplings
  bool info;
};

const std::vector<VerifyEntry>& verify_table() {
  static const std::vector<VerifyEntry> t = {
      {"metric", "metric.inverse", 1e-12, Applies::All, false, false},
      {"metric", "metric.cauchy_riemann", 1e-12, Applies::All, false, false},
      {"metric", "metric.riemann_symmetries", 1e-9, Applies::All, true, false},
      {"metric", "metric.second_bianchi", 1e-9, Applies::All, true, false},
      {"metric", "metric.ricci_flat", 1e-9, Applies::All, true, false},
      {"curvature", "curvature.formula", 1e-10, Applies::All, true, false},
      {"curvature", "curvature.reference_point", 1e-12, Applies::All, true, false},
      {"curvature", "curvature.effective_formula", 1e-10, Applies::All, true, true},
      {"kahler", "kahler.square", 1e-10, Applies::All, true, false},
      {"kahler", "kahler.hermitian", 1e-10, Applies::All, true, false},
      {"kahler", "kahler.parallel", 1e-10, Applies::All, true, false},
      {"kahler", "kahler.linear_class", 1e-10, Applies::Singular, true, false},
      {"kahler", "kahler.trace_form_matches_theta", 1e-10, Applies::Singular, true, false},
      {"kahler", "kahler.xi_isotropic", 1e-10, Applies::Singular, true, false},
      {"kahler", "kahler.theta_of_xi", 1e-10, Applies::Singular, true, false},
      {"kahler", "kahler.jtheta_of_xi", 1e-10, Applies::Singular, true, false},
      {"ambrose_singer", "ambrose_singer.metric", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "ambrose_singer.curvature", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "ambrose_singer.structure", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "ambrose_singer.complex_structure", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "ambrose_singer.xi", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "ambrose_singer.theta", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "lemma.nabla_theta", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "lemma.theta_wedge_riemann", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "lemma.jtheta_wedge_riemann", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "lemma.recurrence", 1e-9, Applies::Singular, true, false},
      {"ambrose_singer", "lemma.closed_theta", 1e-9, Applies::Singular, true, false},
      {"vsi", "vsi.kretschmann", 1e-9, Applies::All, true, false},
      {"vsi", "vsi.ricci_squared", 1e-9, Applies::All, true, false},
      {"vsi", "vsi.scalar_curvature", 1e-9, Applies::All, true, false},
      {"vsi", "vsi.nabla_riemann_squared", 1e-9, Applies::All, true, false},
      {"vsi", "vsi.riemann_dot_nabla_riemann_squared", 1e-9, Applies::All, true, false},
      {"vsi", "vsi.divergence_riemann_squared", 1e-9, Applies::All, true, false},
      {"osserman", "osserman.nilpotent", 1e-10, Applies::All, true, false},
      {"osserman", "osserman.jacobi_entry", 1e-10, Applies::All, true, false},
      {"walker", "walker.parallel_null_distribution", 1e-11, Applies::All, true, false},
      {"symmetric", "symmetric.nabla_riemann", 1e-10, Applies::CahenWallach, true, false},
  };
  return t;
}

bool applies(Applies a, ProfileKind k) {
  switch (a) {
    case Applies::All: return true;
    case Applies::Singular: return k == ProfileKind::SingularScaleInvariant;
    case Applies::CahenWallach: return k == ProfileKind::CahenWallachAnalog;
  }
  return false;
}

const char* applies_reason(Applies a) {
  return a == Applies::Singular ? "needs the singular scale-invariant profile" : "needs the Cahen-Wallach profile";
}

using Residuals = std::map<std::string, double>;

double metric_inverse_defect(const MetricSpec& spec, const Point& p) {
  const Mat g = metric_components(spec, p).as_matrix();
  const Mat gi = inverse_metric(spec, p).as_matrix();
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff() * gi.cwiseAbs().maxCoeff());
  return (g * gi - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() / scale;
}

// -1/2 Lap B with B = -b + sum eps (r^2 + s^2): the component the geometry
// actually produces for holomorphic couplings.
double effective_curvature(const MetricSpec& spec, const Point& p) {
  Jet2 B = -metric_b(spec, p);
  const auto cj = eval_couplings(spec, p);
  for (int a = 0; a < spec.n; ++a) {
    const double e = spec.epsilons.empty() ? 1.0 : spec.epsilons[size_t(a)];
    B += e * (cj[size_t(a)].r * cj[size_t(a)].r + cj[size_t(a)].s * cj[size_t(a)].s);
  }
  return -0.5 * B.laplacian();
}

Residuals verify_point(const MetricSpec& spec, const ComplexWaveMetric& model, const Point& p, const Vec& x,
                       const SuiteConfig& cfg) {
  Residuals r;
  const ProfileKind kind = spec.profile.kind;
  const LocalGeometry geo(model, p, GeometryLevel::CurvatureDerivative);
  const double R1212 = geo.riemann()(coord::w1, coord::w2, coord::w1, coord::w2);
  const double target = profile_laplacian_target(spec, p);

  if (cfg.selected("metric")) {
    r["metric.riemann_symmetries"] = riemann_symmetry_defect(geo);
    r["metric.second_bianchi"] = second_bianchi_defect(geo);
    r["metric.ricci_flat"] = ricci(geo).max_abs();
  }
  if (cfg.selected("curvature")) {
    r["curvature.formula"] = std::abs(R1212 - 0.5 * target);
    r["curvature.effective_formula"] = std::abs(R1212 - effective_curvature(spec, p));
  }
  if (cfg.selected("kahler")) {
    for (const auto& [name, v] : complex_structure_residuals(spec, p)) r["kahler." + name] = v;
  }
  const bool singular = kind == ProfileKind::SingularScaleInvariant;
  if (singular && (cfg.selected("kahler") || cfg.selected("ambrose_singer"))) {
    const HomogeneousStructure h(spec, p);
    if (cfg.selected("kahler"))
      for (const auto& [name, v] : h.linear_type_residuals()) r["kahler." + name] = v;
    if (cfg.selected("ambrose_singer")) {
      for (const auto& [name, v] : h.ambrose_singer_residuals()) r["ambrose_singer." + name] = v;
      for (const auto& [name, v] : h.lemma_identities()) r["lemma." + name] = v;
    }
  }
  if (cfg.selected("vsi"))
    for (const auto& inv : scalar_invariants(geo, 1)) r["vsi." + inv.name] = std::abs(inv.value);
  if (cfg.selected("osserman")) {
    const Mat j = jacobi_operator(geo, x);
    const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
    r["osserman.nilpotent"] = (j * j).cwiseAbs().maxCoeff() / scale;
    const Mat j1 = jacobi_operator(geo, Vec::Unit(spec.dim(), coord::w1));
    r["osserman.jacobi_entry"] = std::abs(j1(coord::z2, coord::w2) + 0.5 * target);
  }
  if (cfg.selected("symmetric") && kind == ProfileKind::CahenWallachAnalog)
    r["symmetric.nabla_riemann"] = geo.nabla_riemann().max_abs();
  return r;
}

}  // namespace

bool SuiteConfig::selected(const std::string& suite) const {
  return suites.empty() || std::find(suites.begin(), suites.end(), suite) != suites.end();
}

int threads_from_env() {
  const char* v = std::getenv("PWLAB_THREADS");
  if (!v) return 1;
  try {
    const int n = std::stoi(v);
    return n > 0 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

std::vector<Point> sample_points(int dim, int count, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(lo, hi), ang(0.0, 6.283185307179586), u(-2.0, 2.0);
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point p(dim);
    const double r = rad(rng), a = ang(rng);
    p[0] = r * std::cos(a);
    p[1] = r * std::sin(a);
    for (int i = 2; i < dim; ++i) p[i] = u(rng);
    out.push_back(p);
  }
  return out;
}

MetricSpec break_cauchy_riemann(MetricSpec spec) {
  if (spec.n < 1) throw std::invalid_argument("breaking Cauchy-Riemann needs at least one coupling");
  spec.couplings.resize(size_t(spec.n));
  Coupling& c = spec.couplings[0];
  c = Coupling{};
  c.raw = true;
  c.r_terms = {Monomial{1.0, 1, 0}};
  c.s_terms = {Monomial{1.0, 1, 0}};
  return spec;
}

RunResult run_verify(const MetricSpec& spec, const SuiteConfig& cfg) {
  spec.validate();
  RunResult out;
  ReportDoc& doc = out.report;
  doc.command = "verify";
  doc.spec_echo = serialize_spec(spec);
  base_config(doc, cfg);

  const auto points = sample_points(spec.dim(), cfg.samples, cfg.seed);
  std::vector<Vec> dirs;
  {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> nd;
    for (size_t k = 0; k < points.size(); ++k) {
      Vec x(spec.dim());
      for (int i = 0; i < spec.dim(); ++i) x[i] = nd(rng);
      dirs.push_back(x);
    }
  }
  const ComplexWaveMetric model(spec);

  Residuals total;
  auto t0 = Clock::now();
  double inv = 0.0, cr = 0.0;
  for (const Point& p : points) {
    fold_max(inv, metric_inverse_defect(spec, p));
    fold_max(cr, cauchy_riemann_defect(spec, p));
  }
  total["metric.inverse"] = inv;
  total["metric.cauchy_riemann"] = cr;
  const bool holomorphic = cr <= cfg.tol(1e-12);
  out.timing.push_back({"metric_data", seconds_since(t0)});

  if (holomorphic) {
    t0 = Clock::now();
    std::vector<Residuals> per(points.size());
    parallel_for(int(points.size()), cfg.threads,
                 [&](int k) { per[size_t(k)] = verify_point(spec, model, points[size_t(k)], dirs[size_t(k)], cfg); });
    for (const auto& r : per)
      for (const auto& [name, v] : r) {
        auto it = total.find(name);
        if (it == total.end())
          total[name] = v;
        else
          fold_max(it->second, v);
      }
    if (cfg.selected("curvature")) {
      const Point b = base_point(spec.dim());
      const LocalGeometry geo(model, b, GeometryLevel::Curvature);
      total["curvature.reference_point"] =
          std::abs(geo.riemann()(coord::w1, coord::w2, coord::w1, coord::w2) - 0.5 * profile_laplacian_target(spec, b));
    }
    out.timing.push_back({"pointwise", seconds_since(t0)});
    if (cfg.selected("walker")) {
      t0 = Clock::now();
      std::vector<Point> wp(points.begin(), points.begin() + std::min<size_t>(points.size(), 10));
      const WalkerReport w = walker_check(spec, wp);
      total["walker.parallel_null_distribution"] =
          std::max({w.null_defect, w.parallel_defect, w.transport_defect});
      out.timing.push_back({"walker", seconds_since(t0)});
    }
  }

  for (const auto& e : verify_table()) {
    if (!cfg.selected(e.suite)) continue;
    const double thr = cfg.tol(e.threshold);
    if (!applies(e.applies, spec.profile.kind)) {
      doc.checks.push_back(skipped_check(e.name, thr, applies_reason(e.applies)));
      continue;
    }
    if (e.gated && !holomorphic) {
      doc.checks.push_back(skipped_check(e.name, thr, "couplings are not holomorphic"));
      continue;
    }
    const auto it = total.find(e.name);
    if (it == total.end()) throw std::logic_error(std::string("verify produced no value for ") + e.name);
    if (e.info)
      doc.checks.push_back(info_check(e.name, it->second, "R_w1w2w1w2 against -1/2 Lap B"));
    else
      doc.checks.push_back(residual_check(e.name, it->second, thr));
  }
  return out;
}

// ---------------------------------------------------------------- geodesic

namespace {

GeodesicState radial_state(int dim, int comp) {
  GeodesicState s;
  s.x = Point::Zero(dim);
  s.v = Vec::Zero(dim);
  s.x[comp] = 1.0;
  s.v[comp] = -1.0;
  return s;
}

double max_drift(const Trajectory& t) {
  double m = 0.0;
  for (const auto& r : t.rows) fold_max(m, r.norm_drift);
  return m;
}

}  // namespace

RunResult run_geodesic(const MetricSpec& spec, const GeodesicRequest& req, const SuiteConfig& cfg) {
  spec.validate();
  RunResult out;
  ReportDoc& doc = out.report;
  doc.command = "geodesic";
  doc.spec_echo = serialize_spec(spec);
  base_config(doc, cfg);
  const int D = spec.dim();
  const bool singular = spec.profile.kind == ProfileKind::SingularScaleInvariant;
  const double drift_thr = cfg.tol(1e-9);

  GeodesicState init = radial_state(D, 0);
  if (req.x0) init.x = *req.x0;
  if (req.v0) init.v = *req.v0;
  if (init.x.size() != D || init.v.size() != D)
    throw std::invalid_argument("initial point and velocity need " + std::to_string(D) + " components");

  auto t0 = Clock::now();
  const Trajectory traj = geodesic_integrate(spec, init, req.t_end);
  std::ostringstream csv;
  write_trajectory_csv(traj, csv);
  out.files.push_back({"trajectory.csv", csv.str()});
  double drift = max_drift(traj);
  out.timing.push_back({"requested", seconds_since(t0)});

  t0 = Clock::now();
  if (singular) {
    double worst = 0.0;
    std::vector<std::string> notes;
    for (int comp : {coord::w1, coord::w2}) {
      const Trajectory t = geodesic_integrate(spec, radial_state(D, comp), 2.0);
      fold_max(drift, max_drift(t));
      const double r = t.status == IntegrationStatus::SingularityReached
                           ? std::abs(t.t_stop - 1.0)
                           : std::numeric_limits<double>::infinity();
      fold_max(worst, r);
      notes.push_back(to_string(t.status) + " at t=" + fmt(t.t_stop));
    }
    CheckResult c = residual_check("geodesic.incomplete", worst, cfg.tol(1e-6));
    c.note = join(notes, "; ");
    doc.checks.push_back(c);

    std::vector<double> times;
    for (int k = 0; k <= 18; ++k) times.push_back(0.05 * k);
    double rel = 0.0;
    try {
      for (const auto& s : parallel_frame_curvature(spec, times))
        fold_max(rel, std::abs(s.value - s.predicted) / std::max(std::abs(s.predicted), 1e-300));
    } catch (const DegenerateBasis&) {
      rel = std::numeric_limits<double>::infinity();
    }
    doc.checks.push_back(residual_check("geodesic.frame_curvature", rel, cfg.tol(1e-6)));
    doc.checks.push_back(skipped_check("geodesic.complete", 0.0, "the singular profile is incomplete"));
  } else {
    doc.checks.push_back(skipped_check("geodesic.incomplete", cfg.tol(1e-6), "needs the singular profile"));
    doc.checks.push_back(skipped_check("geodesic.frame_curvature", cfg.tol(1e-6), "needs the singular profile"));
    int incomplete = 0;
    std::vector<GeodesicState> starts = {radial_state(D, 0), radial_state(D, 1), init};
    for (const auto& s : starts)
      for (double t_end : {100.0, -100.0}) {
        const Trajectory t = geodesic_integrate(spec, s, t_end);
        fold_max(drift, max_drift(t));
        if (t.status != IntegrationStatus::Completed) ++incomplete;
      }
    CheckResult c = residual_check("geodesic.complete", double(incomplete), 0.0);
    c.note = "trajectories integrated to |t| = 100";
    doc.checks.push_back(c);
  }
  doc.checks.push_back(residual_check("geodesic.norm_drift", drift, drift_thr));
  out.timing.push_back({"families", seconds_since(t0)});

  doc.artifacts.push_back({"trajectory",
                           "{\"status\": \"" + to_string(traj.status) + "\", \"t_stop\": " + fmt(traj.t_stop) +
                               ", \"rows\": " + std::to_string(traj.rows.size()) + "}"});
  return out;
}

// ---------------------------------------------------------------- holonomy

RunResult run_holonomy(const MetricSpec& spec, const SuiteConfig& cfg) {
  spec.validate();
  RunResult out;
  ReportDoc& doc = out.report;
  doc.command = "holonomy";
  doc.spec_echo = serialize_spec(spec);
  base_config(doc, cfg);
  const auto t0 = Clock::now();
  const auto points = sample_points(spec.dim(), std::min(cfg.samples, 20), cfg.seed);
  const bool curved = spec.profile.kind != ProfileKind::Flat && spec.profile.b0 != 0.0;
  const int expected = curved ? 1 : 0;

  std::vector<Residuals> per(points.size());
  parallel_for(int(points.size()), cfg.threads, [&](int k) {
    const Point& p = points[size_t(k)];
    Residuals& r = per[size_t(k)];
    const HolonomyResult h = infinitesimal_holonomy(spec, p, 1);
    r["dimension"] = std::abs(double(h.span.dim() - expected)) + (h.stabilized ? 0.0 : 1.0);
    if (curved) r["proportionality"] = curvature_endomorphisms(spec, p).proportionality_defect;
    const GeneratorChecks g = generator_checks(spec, p);
    r["generator_skew"] = g.skew;
    r["generator_commutes_j"] = g.commutes_J;
    r["generator_nilpotent"] = g.nilpotent;
    if (curved) {
      try {
        const NormalForm nf = su11_normal_form(spec, p);
        const std::complex<double> i(0.0, 1.0);
        CMat2 target;
        target << i, i, -i, -i;
        target *= double(nf.sign);
        r["normal_form"] = (nf.rescaled - target).cwiseAbs().maxCoeff();
        r["su11"] = nf.su11_defect;
      } catch (const DegenerateBasis&) {
      }
    }
  });
  Residuals total;
  for (const auto& r : per)
    for (const auto& [name, v] : r) {
      auto it = total.find(name);
      if (it == total.end())
        total[name] = v;
      else
        fold_max(it->second, v);
    }

  auto add = [&](const std::string& key, double thr) {
    const std::string name = "holonomy." + key;
    const auto it = total.find(key);
    if (it == total.end())
      doc.checks.push_back(skipped_check(name, cfg.tol(thr), "needs a curved profile"));
    else
      doc.checks.push_back(residual_check(name, it->second, key == "dimension" ? 0.0 : cfg.tol(thr)));
  };
  add("dimension", 0.0);
  add("proportionality", 1e-9);
  add("normal_form", 1e-10);
  add("su11", 1e-10);
  add("generator_skew", 1e-12);
  add("generator_commutes_j", 1e-12);
  add("generator_nilpotent", 1e-12);

  if (curved) {
    try {
      doc.artifacts.push_back({"normal_form", normal_form_json(su11_normal_form(spec, base_point(spec.dim())))});
    } catch (const DegenerateBasis&) {
    }
  }
  out.timing.push_back({"holonomy", seconds_since(t0)});
  return out;
}

// ---------------------------------------------------------------- liealg

RunResult run_liealg(const LieRequest& req, const SuiteConfig& cfg) {
  RunResult out;
  ReportDoc& doc = out.report;
  doc.command = "liealg";
  std::ostringstream echo;
  echo << "n = " << req.n << "\nb_p = " << req.b_p.get_str() << "\nb0 = " << req.b0.get_str() << "\n";
  if (!req.epsilons.empty()) {
    echo << "epsilons =";
    for (int e : req.epsilons) echo << ' ' << e;
    echo << "\n";
  }
  if (req.flip_z1w2) echo << "mutate = flip-bracket-z1w2\n";
  doc.spec_echo = echo.str();
  base_config(doc, cfg);

  auto t0 = Clock::now();
  LieAlgebra alg = build_algebra(req.n, req.b_p, req.b0, req.epsilons);
  if (req.flip_z1w2) {
    int k = 0;
    while (k < alg.dim() && alg.c(lie_basis::z1, lie_basis::w2, k) == 0) ++k;
    if (k == alg.dim()) throw std::logic_error("[z1, w2] vanishes; nothing to flip");
    flip_bracket(alg, lie_basis::z1, lie_basis::w2, k);
  }
  const Rational jac = jacobi_residual(alg);
  CheckResult jc = residual_check("lie.jacobi", jac.get_d(), 0.0);
  jc.note = "exact residual " + jac.get_str();
  doc.checks.push_back(jc);
  doc.artifacts.push_back({"algebra", algebra_json(alg)});
  out.files.push_back({"algebra.json", algebra_json(alg)});
  out.timing.push_back({"jacobi", seconds_since(t0)});

  const char* structure_names[] = {"lie.solvable", "lie.derived_length", "lie.nilradical_ideal",
                                   "lie.nilradical_two_step", "lie.nilradical_maximal", "lie.heisenberg"};
  if (jac == 0) {
    t0 = Clock::now();
    const StructureDiagnostics d = structure_diagnostics(alg);
    doc.checks.push_back(boolean_check("lie.solvable", d.solvable, "derived length " + std::to_string(d.derived_length)));
    doc.checks.push_back(residual_check("lie.derived_length", double(d.derived_length), 3.0));
    doc.checks.push_back(boolean_check("lie.nilradical_ideal", d.nilradical_is_ideal && d.nilradical_contains_derived));
    doc.checks.push_back(boolean_check("lie.nilradical_two_step", d.nilradical_two_step,
                                       "class " + std::to_string(d.nilradical_class)));
    doc.checks.push_back(boolean_check("lie.nilradical_maximal", d.nilradical_maximal,
                                       "margin " + fmt(d.maximal_margin)));
    doc.checks.push_back(boolean_check("lie.heisenberg", d.heisenberg));
    doc.artifacts.push_back({"structure", structure_json(d)});
    out.timing.push_back({"structure", seconds_since(t0)});
  } else {
    for (const char* n : structure_names) doc.checks.push_back(skipped_check(n, 0.0, "Jacobi identity fails"));
  }

  t0 = Clock::now();
  const KGeodesicResult kg = k_geodesic(req.b_p.get_d(), req.u0, req.v0, req.t0, req.t_end);
  doc.checks.push_back(
      residual_check("lie.k_geodesic_fit", std::max(kg.max_rel_error_x, kg.max_rel_error_y), cfg.tol(1e-6)));
  if (kg.has_pole && kg.pole_ahead) {
    const double r = kg.status == IntegrationStatus::BlowUp ? std::abs(kg.t_stop - kg.c)
                                                             : std::numeric_limits<double>::infinity();
    CheckResult c = residual_check("lie.k_geodesic_blowup", r, cfg.tol(1e-6));
    c.note = "pole at c = " + fmt(kg.c);
    doc.checks.push_back(c);
  } else {
    doc.checks.push_back(boolean_check("lie.k_geodesic_blowup", kg.status == IntegrationStatus::Completed,
                                       "no pole in range"));
  }
  doc.artifacts.push_back({"k_geodesic", k_geodesic_json(kg)});
  out.timing.push_back({"k_geodesic", seconds_since(t0)});
  return out;
}

// ---------------------------------------------------------------- wave

RunResult run_wave(const PlaneWaveSpec& spec, const SuiteConfig& cfg) {
  spec.validate();
  RunResult out;
  ReportDoc& doc = out.report;
  doc.command = "wave";
  {
    std::ostringstream echo;
    const char* kinds[] = {"constant", "scale_invariant", "polynomial"};
    echo << "kind = " << kinds[int(spec.kind)] << "\nn = " << spec.n << "\n";
    for (size_t m = 0; m < spec.matrices.size(); ++m) {
      echo << "matrix." << m << " =";
      for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) echo << ' ' << fmt(spec.matrices[m](i, j));
      echo << "\n";
    }
    echo << "epsilons =";
    for (int a = 0; a < spec.n; ++a) echo << ' ' << spec.eps(a);
    echo << "\n";
    doc.spec_echo = echo.str();
  }
  base_config(doc, cfg);
  const double u0 = 1.0;

  std::vector<Point> pts;
  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uu(0.5, 2.0), c(-1.0, 1.0);
    for (int k = 0; k < std::min(cfg.samples, 20); ++k) {
      Point p(spec.dim());
      p[wave_coord::u] = uu(rng);
      p[wave_coord::v] = c(rng);
      for (int a = 0; a < spec.n; ++a) p[wave_coord::x(a)] = c(rng);
      pts.push_back(p);
    }
  }

  auto t0 = Clock::now();
  const auto fields = oscillator_killing_fields(spec, u0);
  double kill = 0.0;
  std::string worst_field;
  std::vector<double> kr(fields.size());
  parallel_for(int(fields.size()), cfg.threads,
               [&](int i) { kr[size_t(i)] = killing_residual(spec, fields[size_t(i)], pts); });
  for (size_t i = 0; i < fields.size(); ++i) {
    if (kr[i] > kill || std::isnan(kr[i])) worst_field = fields[i].name;
    fold_max(kill, kr[i]);
  }
  CheckResult kc = residual_check("wave.killing", kill, cfg.tol(1e-8));
  std::vector<std::string> names;
  for (const auto& f : fields) names.push_back(f.name);
  kc.note = "fields " + join(names, ",") + (worst_field.empty() ? "" : "; worst " + worst_field);
  doc.checks.push_back(kc);

  double arow = 0.0;
  for (const Point& p : pts) fold_max(arow, wave_profile(spec, p[wave_coord::u]).row(0).cwiseAbs().maxCoeff());
  if (arow > 0.0) {
    const double tr = killing_residual(spec, translation_field(spec.n, 0), pts);
    CheckResult c = boolean_check("wave.translation_control", tr > 1e-3, "residual " + fmt(tr));
    doc.checks.push_back(c);
  } else {
    doc.checks.push_back(skipped_check("wave.translation_control", 0.0, "profile row vanishes"));
  }
  out.timing.push_back({"killing", seconds_since(t0)});

  t0 = Clock::now();
  doc.checks.push_back(residual_check("wave.wronskian_drift", wronskian_drift(spec, u0, 2.0), cfg.tol(1e-9)));
  const HeisenbergTable ht = heisenberg_table(spec, u0, pts);
  const Eigen::Index m = ht.wronskian.rows();
  const double hres =
      std::max({ht.transverse, ht.variation, ht.dv_coefficient.row(0).cwiseAbs().maxCoeff(),
                (ht.dv_coefficient.bottomRightCorner(m, m) + ht.wronskian).cwiseAbs().maxCoeff()});
  doc.checks.push_back(residual_check("wave.heisenberg", hres, cfg.tol(1e-8)));
  doc.artifacts.push_back({"heisenberg", heisenberg_json(ht)});
  out.timing.push_back({"heisenberg", seconds_since(t0)});

  t0 = Clock::now();
  double prof = 0.0, other = 0.0, nabla = 0.0, ric = 0.0, vsi = 0.0;
  for (const Point& p : pts) {
    const WaveCurvatureReport w = wave_curvature_and_symmetry(spec, p);
    const Mat A = wave_profile(spec, p[wave_coord::u]);
    double tr = 0.0;
    for (int a = 0; a < spec.n; ++a) tr += spec.eps(a) * A(a, a);
    fold_max(prof, (w.r_uaub + A).cwiseAbs().maxCoeff());
    fold_max(other, w.other_components);
    fold_max(nabla, w.nabla_r);
    fold_max(ric, std::max(std::abs(w.ricci_uu + tr), w.ricci_other));
    fold_max(vsi, std::max(std::abs(w.kretschmann), std::abs(w.ricci_squared)));
  }
  doc.checks.push_back(residual_check("wave.profile_curvature", prof, cfg.tol(1e-10)));
  doc.checks.push_back(residual_check("wave.curvature_pattern", other, cfg.tol(1e-10)));
  doc.checks.push_back(residual_check("wave.ricci", ric, cfg.tol(1e-10)));
  doc.checks.push_back(residual_check("wave.vsi", vsi, cfg.tol(1e-9)));
  if (spec.kind == WaveProfileKind::Constant)
    doc.checks.push_back(residual_check("wave.parallel_curvature", nabla, cfg.tol(1e-10)));
  else
    doc.checks.push_back(skipped_check("wave.parallel_curvature", cfg.tol(1e-10), "needs a constant profile"));
  if (spec.kind == WaveProfileKind::ScaleInvariant) {
    const SsiReport s = ssi_structure_check(spec, pts);
    CheckResult c = residual_check("wave.ssi_structure", std::max(s.max(), s.xi_norm), cfg.tol(1e-9));
    std::vector<std::string> parts;
    for (const auto& [n, v] : s.residuals) parts.push_back(n + "=" + fmt(v));
    c.note = join(parts, ", ");
    doc.checks.push_back(c);
  } else {
    doc.checks.push_back(skipped_check("wave.ssi_structure", cfg.tol(1e-9), "needs a scale-invariant profile"));
  }
  out.timing.push_back({"curvature", seconds_since(t0)});
  return out;
}

// ---------------------------------------------------------------- quaternion

RunResult run_quaternion(const QuaternionRequest& req, const SuiteConfig& cfg) {
  RunResult out;
  ReportDoc& doc = out.report;
  doc.command = "quaternion";
  const QuaternionTriple t = build_flat_model(req.p, req.q);
  const int D = t.dim();
  RVec xi = req.xi;
  if (xi.empty()) {
    if (req.p < 1 || req.q < 1) throw std::invalid_argument("an isotropic xi needs p >= 1 and q >= 1");
    xi.assign(size_t(D), Rational(0));
    xi[0] = 1;
    xi[size_t(4 * req.p)] = 1;
  }
  if (int(xi.size()) != D) throw std::invalid_argument("xi needs " + std::to_string(D) + " components");
  {
    std::ostringstream echo;
    echo << "p = " << req.p << "\nq = " << req.q << "\nxi =";
    for (const auto& c : xi) echo << ' ' << c.get_str();
    echo << "\n";
    doc.spec_echo = echo.str();
  }
  base_config(doc, cfg);

  auto t0 = Clock::now();
  doc.checks.push_back(
      boolean_check("quaternion.triple", triple_checks(t, rational_rotation(1, Rational(1, 2), -2)).all()));
  const FlatnessReport fr = flatness_report(req.p, req.q, xi);
  out.timing.push_back({"exact", seconds_since(t0)});

  t0 = Clock::now();
  Vec xd(D);
  for (int i = 0; i < D; ++i) xd[i] = xi[size_t(i)].get_d();
  if (fr.xi_isotropic) {
    const TensorValue S = qk_structure_S(t, xd);
    doc.checks.push_back(residual_check("quaternion.metric_skew", qk_metric_skew_defect(t, S), cfg.tol(1e-12)));
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> nd;
    double nab = 0.0, curv = 0.0;
    for (int k = 0; k < std::min(cfg.samples, 100); ++k) {
      Vec x(D), y(D);
      for (int i = 0; i < D; ++i) {
        x[i] = nd(rng);
        y[i] = nd(rng);
      }
      Vec sx = Vec::Zero(D);
      for (int l = 0; l < D; ++l)
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j) sx[l] += S(l, i, j) * x[i] * xd[j];
      fold_max(nab, (sx - qk_nabla_xi(t, xd, x)).cwiseAbs().maxCoeff());
      fold_max(curv, qk_xi_curvature(t, xd, x, y).cwiseAbs().maxCoeff());
    }
    doc.checks.push_back(residual_check("quaternion.nabla_xi", nab, cfg.tol(1e-12)));
    doc.checks.push_back(residual_check("quaternion.xi_curvature", curv, cfg.tol(1e-12)));
  } else {
    for (const char* n : {"quaternion.metric_skew", "quaternion.nabla_xi", "quaternion.xi_curvature"})
      doc.checks.push_back(skipped_check(n, cfg.tol(1e-12), "xi is not isotropic"));
  }
  out.timing.push_back({"structure", seconds_since(t0)});

  doc.checks.push_back(boolean_check("quaternion.xi_isotropic", fr.xi_isotropic && fr.metric_nondegenerate));
  doc.checks.push_back(boolean_check("quaternion.nu_forced_zero", fr.nu_forced_zero));
  doc.checks.push_back(residual_check("quaternion.constraint_rank", std::abs(double(fr.constraint_rank - 4)), 0.0));
  doc.checks.push_back(residual_check("quaternion.kernel_full", double(fr.kernel_full), 0.0));
  CheckResult th = residual_check("quaternion.kernel_theta_only", std::abs(double(fr.kernel_theta_only - (D - 1))), 0.0);
  th.note = "dimension " + std::to_string(fr.kernel_theta_only) + ", expected " + std::to_string(D - 1);
  doc.checks.push_back(th);
  doc.checks.push_back(boolean_check("quaternion.forces_flat", fr.forces_flat && fr.hyperkahler_forces_flat));
  doc.checks.push_back(boolean_check("quaternion.control_not_flat", !fr.control_forces_flat,
                                     "kernel with two constraints " + std::to_string(fr.kernel_two_constraints)));
  doc.artifacts.push_back({"quaternion", quaternion_json(fr)});
  out.files.push_back({"quaternion.json", quaternion_json(fr)});
  return out;
}

// ---------------------------------------------------------------- registry

std::vector<std::string> command_checks(const std::string& command) {
  std::vector<std::string> out;
  if (command == "verify") {
    for (const auto& e : verify_table()) out.push_back(e.name);
  } else if (command == "geodesic") {
    out = {"geodesic.incomplete", "geodesic.frame_curvature", "geodesic.complete", "geodesic.norm_drift"};
  } else if (command == "holonomy") {
    out = {"holonomy.dimension",      "holonomy.proportionality",     "holonomy.normal_form",
           "holonomy.su11",           "holonomy.generator_skew",      "holonomy.generator_commutes_j",
           "holonomy.generator_nilpotent"};
  } else if (command == "liealg") {
    out = {"lie.jacobi",          "lie.solvable",           "lie.derived_length",
           "lie.nilradical_ideal", "lie.nilradical_two_step", "lie.nilradical_maximal",
           "lie.heisenberg",      "lie.k_geodesic_fit",     "lie.k_geodesic_blowup"};
  } else if (command == "wave") {
    out = {"wave.killing",        "wave.translation_control", "wave.wronskian_drift",     "wave.heisenberg",
           "wave.profile_curvature", "wave.curvature_pattern", "wave.ricci",               "wave.vsi",
           "wave.parallel_curvature", "wave.ssi_structure"};
  } else if (command == "quaternion") {
    out = {"quaternion.triple",          "quaternion.metric_skew",     "quaternion.nabla_xi",
           "quaternion.xi_curvature",    "quaternion.xi_isotropic",    "quaternion.nu_forced_zero",
           "quaternion.constraint_rank", "quaternion.kernel_full",     "quaternion.kernel_theta_only",
           "quaternion.forces_flat",     "quaternion.control_not_flat"};
  } else {
    throw std::invalid_argument("unknown command " + command);
  }
  return out;
}

// ---------------------------------------------------------------- plot data

std::string blowup_csv(const MetricSpec& spec, double t_max, double dt) {
  std::vector<double> times;
  for (int k = 0; k * dt <= t_max + 1e-12; ++k) times.push_back(k * dt);
  std::ostringstream out;
  out << "t,value,predicted\n";
  for (const auto& s : parallel_frame_curvature(spec, times))
    out << fmt(s.t) << ',' << fmt(s.value) << ',' << fmt(s.predicted) << '\n';
  return out.str();
}

std::string trace_csv(const std::string& trajectory_csv) {
  std::istringstream in(trajectory_csv);
  std::string header;
  if (!std::getline(in, header) || header.rfind("t,", 0) != 0)
    throw ConfigError("trajectory CSV has no header starting with t,");
  std::vector<std::string> cols;
  {
    std::stringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 5 || cols[cols.size() - 2] != "norm_drift" || cols.back() != "flag")
    throw ConfigError("trajectory CSV header must end with norm_drift,flag");
  const size_t ncoord = cols.size() - 3;
  std::ostringstream out;
  out << "t";
  for (size_t i = 0; i < ncoord; ++i) out << ',' << cols[1 + i];
  out << ",rho,flag\n";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) f.push_back(c);
    if (f.size() != cols.size()) throw ConfigError("trajectory row has " + std::to_string(f.size()) + " fields");
    const double w1 = parse_double(f[1]), w2 = parse_double(f[2]);
    out << f[0];
    for (size_t i = 0; i < ncoord; ++i) out << ',' << f[1 + i];
    out << ',' << fmt(std::hypot(w1, w2)) << ',' << f.back() << '\n';
  }
  return out.str();
}

}  // namespace pwlab
