// One line per acceptance criterion; exit 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pwlab/curves.hpp"
#include "pwlab/holonomy.hpp"
#include "pwlab/lie_model.hpp"
#include "pwlab/lorentz_waves.hpp"
#include "pwlab/quaternionic.hpp"
#include "pwlab/report.hpp"
#include "pwlab/spec_io.hpp"
#include "pwlab/suites.hpp"

using namespace pwlab;

namespace {

constexpr int kSamples = 100;
constexpr std::uint64_t kSeed = 20240611;

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double max_of(std::initializer_list<double> v) {
  double m = 0.0;
  for (double x : v) m = (std::isnan(x) || std::isnan(m)) ? NAN : std::max(m, x);
  return m;
}

// Singular-profile specs for n in {0,1,2} x b0 in {-2,1,4}, with a harmonic
// part and holomorphic couplings of degree 3.
struct NamedSpec {
  std::string label;
  MetricSpec spec;
};

std::vector<NamedSpec> family(ProfileKind kind, bool compensated, int max_degree = 3) {
  std::vector<NamedSpec> out;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {0, 1, 2})
    for (double b0 : {-2.0, 1.0, 4.0}) {
      MetricSpec s;
      s.n = n;
      s.profile.kind = kind;
      s.profile.b0 = b0;
      s.profile.coupling_compensation = compensated;
      for (int d = 0; d <= 2; ++d) s.profile.harmonic.emplace_back(0.3 * u(rng), 0.3 * u(rng));
      for (int a = 0; a < n; ++a) {
        s.epsilons.push_back(a % 2 == 0 ? 1 : -1);
        Coupling c;
        for (int d = 0; d <= max_degree; ++d) c.holomorphic.emplace_back(0.5 * u(rng), 0.5 * u(rng));
        s.couplings.push_back(c);
      }
      out.push_back({"n=" + std::to_string(n) + ",b0=" + format_double(b0), s});
    }
  return out;
}

SuiteConfig config(std::vector<std::string> suites = {}) {
  SuiteConfig c;
  c.samples = kSamples;
  c.seed = kSeed;
  c.suites = std::move(suites);
  c.threads = threads_from_env();
  return c;
}

double residual(const ReportDoc& d, const std::string& name) {
  const CheckResult* c = d.find(name);
  if (!c) throw std::logic_error("no check " + name);
  if (c->status == CheckStatus::Skipped) return NAN;
  return c->max_residual;
}

// Max of a set of named residuals over a group of reports.
double group_max(const std::vector<ReportDoc>& docs, const std::vector<std::string>& names, size_t from = 0,
                 size_t to = size_t(-1)) {
  double m = 0.0;
  for (size_t i = from; i < std::min(to, docs.size()); ++i)
    for (const auto& n : names) m = max_of({m, residual(docs[i], n)});
  return m;
}

const std::vector<std::string> kAsFour = {"ambrose_singer.metric", "ambrose_singer.curvature",
                                          "ambrose_singer.structure", "ambrose_singer.complex_structure"};
const std::vector<std::string> kLemma = {"lemma.nabla_theta", "lemma.theta_wedge_riemann",
                                         "lemma.jtheta_wedge_riemann", "lemma.recurrence", "lemma.closed_theta"};
const std::vector<std::string> kVsi = {"vsi.kretschmann",
                                       "vsi.ricci_squared",
                                       "vsi.scalar_curvature",
                                       "vsi.nabla_riemann_squared",
                                       "vsi.riemann_dot_nabla_riemann_squared",
                                       "vsi.divergence_riemann_squared"};

// Indices 0-2 are n = 0, 3-8 carry couplings.
void split_notes(Criterion& c, const std::vector<ReportDoc>& literal, const std::vector<ReportDoc>& compensated,
                 const std::vector<std::string>& names) {
  c.notes.push_back("n=0 specs: " + sci(group_max(literal, names, 0, 3)) + "; coupled specs: " +
                    sci(group_max(literal, names, 3, 9)) + "; same couplings with compensation: " +
                    sci(group_max(compensated, names, 3, 9)));
}

}  // namespace

int main() {
  std::vector<Criterion> out;
  const auto literal = family(ProfileKind::SingularScaleInvariant, false);
  const auto compensated = family(ProfileKind::SingularScaleInvariant, true);

  // Full verify runs, reused by criteria 2-5.
  std::vector<ReportDoc> lit_docs, comp_docs;
  for (const auto& s : literal) lit_docs.push_back(run_verify(s.spec, config()).report);
  for (const auto& s : compensated) comp_docs.push_back(run_verify(s.spec, config()).report);
  double effective = 0.0;
  for (const auto& d : lit_docs) effective = max_of({effective, residual(d, "curvature.effective_formula")});

  {
    Criterion c{1, "ricci_flatness"};
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& s : literal)
      worst = max_of({worst, residual(run_verify(s.spec, config({"metric"})).report, "metric.ricci_flat")});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.pass = worst <= 1e-9 && secs < 5.0;
    c.summary = "max|Ric| = " + sci(worst) + " (<= 1e-9) over 9 specs x 100 points in " + sci(secs) + " s (< 5 s)";
    out.push_back(c);
  }

  {
    Criterion c{2, "curvature_formula"};
    const double worst = group_max(lit_docs, {"curvature.formula"});
    const double ref = residual(lit_docs[2], "curvature.reference_point");  // n = 0, b0 = 4
    c.pass = worst <= 1e-10 && ref <= 1e-12;
    c.summary = "max|R_w1w2w1w2 - 1/2 Lap b| = " + sci(worst) + " (<= 1e-10); at (1,0), b0=4: |R - 2| = " + sci(ref) +
                " (<= 1e-12)";
    split_notes(c, lit_docs, comp_docs, {"curvature.formula"});
    c.notes.push_back("R_w1w2w1w2 + 1/2 Lap B (B = -b + sum eps |h|^2) on every literal spec: " + sci(effective));
    out.push_back(c);
  }

  {
    Criterion c{3, "ambrose_singer"};
    const double as = group_max(lit_docs, kAsFour);
    const double lem = group_max(lit_docs, kLemma);
    c.pass = as <= 1e-9 && lem <= 1e-9;
    c.summary = "canonical connection residuals " + sci(as) + ", recurrence-lemma identities " + sci(lem) +
                " (both <= 1e-9) on 9 singular specs";
    for (const auto& n : kAsFour) {
      Criterion tmp;
      split_notes(tmp, lit_docs, comp_docs, {n});
      c.notes.push_back(n + ": " + tmp.notes[0]);
    }
    for (const auto& n : kLemma) {
      Criterion tmp;
      split_notes(tmp, lit_docs, comp_docs, {n});
      c.notes.push_back(n + ": " + tmp.notes[0]);
    }
    out.push_back(c);
  }

  {
    Criterion c{4, "vsi"};
    const double worst = group_max(lit_docs, kVsi);
    c.pass = worst <= 1e-9;
    c.summary = "max |invariant| = " + sci(worst) + " (<= 1e-9) for " + std::to_string(kVsi.size()) +
                " invariants of order <= 1, 9 specs x 100 points";
    out.push_back(c);
  }

  {
    Criterion c{5, "osserman"};
    const double nil = group_max(lit_docs, {"osserman.nilpotent"});
    const double entry = group_max(lit_docs, {"osserman.jacobi_entry"});
    c.pass = nil <= 1e-10 && entry <= 1e-10;
    c.summary = "max|J(X)^2| = " + sci(nil) + " (<= 1e-10, 100 random X per spec); max|J(d_w1) entry + b0/(2 rho^4)| = " +
                sci(entry) + " (<= 1e-10)";
    split_notes(c, lit_docs, comp_docs, {"osserman.jacobi_entry"});
    out.push_back(c);
  }

  {
    Criterion c{6, "holonomy"};
    double dim = 0.0, nf = 0.0, gen = 0.0, su = 0.0;
    for (const auto& s : literal) {
      const ReportDoc d = run_holonomy(s.spec, config()).report;
      dim = max_of({dim, residual(d, "holonomy.dimension")});
      nf = max_of({nf, residual(d, "holonomy.normal_form")});
      su = max_of({su, residual(d, "holonomy.su11")});
      gen = max_of({gen, residual(d, "holonomy.generator_skew"), residual(d, "holonomy.generator_commutes_j"),
                    residual(d, "holonomy.generator_nilpotent")});
    }
    c.pass = dim == 0.0 && nf <= 1e-10 && su <= 1e-10 && gen == 0.0;
    c.summary = "|dim hol' - 1| = " + sci(dim) + " (exact); normal form " + sci(nf) + ", su(1,1) defect " + sci(su) +
                " (<= 1e-10); A skew, A^2, [A,J] max " + sci(gen) + " (exact)";
    out.push_back(c);
  }

  {
    Criterion c{7, "geodesic_incompleteness"};
    double reach = 0.0, frame = 0.0, drift = 0.0;
    for (double b0 : {-2.0, 1.0, 4.0}) {
      const RunResult r = run_geodesic(singular_spec(b0), {}, config());
      reach = max_of({reach, residual(r.report, "geodesic.incomplete")});
      frame = max_of({frame, residual(r.report, "geodesic.frame_curvature")});
      drift = max_of({drift, residual(r.report, "geodesic.norm_drift")});
    }
    c.pass = reach <= 1e-6 && frame <= 1e-6;
    c.summary = "radial families reach rho < 1e-6 at |t - 1| <= " + sci(reach) +
                " (<= 1e-6); parallel-frame curvature relative error " + sci(frame) + " (<= 1e-6) on [0, 0.9]";
    c.notes.push_back("b0 in {-2, 1, 4}; norm drift " + sci(drift));
    out.push_back(c);
  }

  {
    Criterion c{8, "cahen_wallach_analog"};
    auto cw = family(ProfileKind::CahenWallachAnalog, false, 0);
    for (auto& s : family(ProfileKind::CahenWallachAnalog, true, 3)) cw.push_back(s);
    double nabla = 0.0;
    int incomplete = 0;
    for (const auto& s : cw) {
      nabla = max_of({nabla, residual(run_verify(s.spec, config({"symmetric"})).report, "symmetric.nabla_riemann")});
      const RunResult g = run_geodesic(s.spec, {}, config());
      if (g.report.find("geodesic.complete")->failed()) ++incomplete;
    }
    c.pass = nabla <= 1e-10 && incomplete == 0;
    c.summary = "max|nabla R| = " + sci(nabla) + " (<= 1e-10) on 18 specs x 100 points; " +
                std::to_string(incomplete) + " geodesics stopped before |t| = 100";
    double lit = 0.0;
    for (const auto& s : family(ProfileKind::CahenWallachAnalog, false, 3))
      lit = max_of({lit, residual(run_verify(s.spec, config({"symmetric"})).report, "symmetric.nabla_riemann")});
    c.notes.push_back("specs: constant couplings, and degree-3 couplings with compensation; degree-3 couplings "
                      "without compensation give max|nabla R| = " + sci(lit));
    out.push_back(c);
  }

  {
    Criterion c{9, "lie_algebra"};
    int runs = 0, bad = 0;
    Rational worst_jac = 0;
    double fit = 0.0;
    std::vector<std::string> failing;
    for (int n : {0, 1, 2})
      for (const Rational& bp : {Rational(1), Rational(-3, 2)})
        for (const Rational& b0 : {Rational(4), Rational(1)}) {
          LieRequest q;
          q.n = n;
          q.b_p = bp;
          q.b0 = b0;
          const RunResult r = run_liealg(q, config());
          const Rational jac = jacobi_residual(build_algebra(n, bp, b0));
          if (abs(jac) > worst_jac) worst_jac = abs(jac);
          fit = max_of({fit, residual(r.report, "lie.k_geodesic_fit")});
          ++runs;
          if (!r.report.pass()) {
            ++bad;
            for (const auto& f : r.report.failures()) failing.push_back(f);
          }
        }
    // Forward runs from the same data have no pole in range and must not be flagged.
    const KGeodesicResult fwd = k_geodesic(1.0, 1.0, 0.0, 0.0, 2.0);
    const bool no_false_flag = fwd.status == IntegrationStatus::Completed;
    c.pass = worst_jac == 0 && bad == 0 && no_false_flag;
    c.summary = "Jacobi residual " + worst_jac.get_str() + " (exact) on " + std::to_string(runs) +
                " algebras; solvable, derived length <= 3, nilradical 2-step, Heisenberg: " +
                std::to_string(runs - bad) + "/" + std::to_string(runs) + "; K-geodesic fit " + sci(fit) +
                " (<= 1e-6), blow-up flagged before the pole";
    if (!no_false_flag) c.notes.push_back("forward K-geodesic without pole was flagged");
    for (const auto& f : failing) c.notes.push_back("failing: " + f);
    out.push_back(c);
  }

  {
    Criterion c{10, "plane_waves"};
    Mat a2(2, 2), a3(3, 3);
    a2 << 1.0, 0.3, 0.3, -2.0;
    a3 << -1.0, 0.2, 0.0, 0.2, 0.5, -0.4, 0.0, -0.4, 2.0;
    const std::vector<PlaneWaveSpec> specs = {constant_wave(a2), constant_wave(a3, {1, -1, 1}),
                                              scale_invariant_wave(a2), scale_invariant_wave(a3, {-1, 1, 1})};
    double kill = 0.0, wr = 0.0, prof = 0.0, ssi = 0.0;
    bool all = true;
    SuiteConfig cfg = config();
    cfg.samples = 10;
    for (const auto& s : specs) {
      const ReportDoc d = run_wave(s, cfg).report;
      kill = max_of({kill, residual(d, "wave.killing")});
      wr = max_of({wr, residual(d, "wave.wronskian_drift")});
      prof = max_of({prof, residual(d, "wave.profile_curvature")});
      if (s.kind == WaveProfileKind::ScaleInvariant) ssi = max_of({ssi, residual(d, "wave.ssi_structure")});
      all = all && d.pass();
    }
    c.pass = kill <= 1e-8 && wr <= 1e-9 && prof <= 1e-10 && ssi <= 1e-9 && all;
    c.summary = "Killing " + sci(kill) + " (<= 1e-8, d_v, X_p, X_q, d_u / u d_u - v d_v); Wronskian drift " + sci(wr) +
                " (<= 1e-9); R_uaub + A_ab " + sci(prof) + " (<= 1e-10); SSI structure " + sci(ssi) + " (<= 1e-9)";
    c.notes.push_back("4 waves (n = 2, 3; constant and scale-invariant; mixed signs), 10 points each");
    out.push_back(c);
  }

  {
    Criterion c{11, "quaternionic"};
    QuaternionRequest r8, r12;
    r12.p = 2;
    const FlatnessReport f8 = flatness_report(1, 1, {1, 0, 0, 0, 1, 0, 0, 0});
    RVec xi12(12, Rational(0));
    xi12[0] = 1;
    xi12[8] = 1;
    const FlatnessReport f12 = flatness_report(2, 1, xi12);
    c.pass = f8.kernel_full == 0 && f12.kernel_full == 0 && f8.kernel_theta_only == 7 && f8.forces_flat &&
             f12.forces_flat && !f8.control_forces_flat && !f12.control_forces_flat &&
             run_quaternion(r8, config()).report.pass() && run_quaternion(r12, config()).report.pass();
    c.summary = "wedge kernel dim " + std::to_string(f8.kernel_full) + " (4n=8), " + std::to_string(f12.kernel_full) +
                " (4n=12); theta only " + std::to_string(f8.kernel_theta_only) + " (4n=8); forces_flat " +
                (f8.forces_flat && f12.forces_flat ? "true" : "false") + ", two-constraint control " +
                (f8.control_forces_flat || f12.control_forces_flat ? "true" : "false");
    out.push_back(c);
  }

  {
    Criterion c{12, "determinism_and_controls"};
    SuiteConfig one = config(), many = config();
    one.threads = 1;
    many.threads = 4;
    const MetricSpec s = compensated[5].spec;
    const std::string a = to_json(run_verify(s, one).report);
    const bool same = a == to_json(run_verify(s, one).report) && a == to_json(run_verify(s, many).report);
    LieRequest q;
    q.n = 2;
    const bool same_lie = to_json(run_liealg(q, one).report) == to_json(run_liealg(q, one).report);

    const auto cr = run_verify(break_cauchy_riemann(compensated[4].spec), one).report.failures();
    LieRequest flipped;
    flipped.flip_z1w2 = true;
    const auto fl = run_liealg(flipped, one).report.failures();
    const bool cr_only = cr == std::vector<std::string>{"metric.cauchy_riemann"};
    const bool flip_only = fl == std::vector<std::string>{"lie.jacobi"};
    c.pass = same && same_lie && cr_only && flip_only;
    c.summary = std::string("byte-identical reports: ") + (same && same_lie ? "yes" : "no") +
                "; broken Cauchy-Riemann fails " + (cr_only ? "only metric.cauchy_riemann" : "other checks too") +
                "; flipped bracket fails " + (flip_only ? "only lie.jacobi" : "other checks too");
    for (const auto& f : cr) c.notes.push_back("broken Cauchy-Riemann: " + f);
    for (const auto& f : fl) c.notes.push_back("flipped bracket: " + f);
    out.push_back(c);
  }

  int failed = 0;
  for (const auto& c : out) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " " << c.name << ": " << c.summary << "\n";
    for (const auto& n : c.notes) std::cout << "      " << n << "\n";
    if (!c.pass) ++failed;
  }
  std::cout << (out.size() - size_t(failed)) << "/" << out.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
