#include <set>
#include <sstream>

#include "doctest.h"
#include "pwlab/spec_io.hpp"
#include "pwlab/suites.hpp"

using namespace pwlab;

namespace {

SuiteConfig small(int samples = 12) {
  SuiteConfig c;
  c.samples = samples;
  c.seed = 7;
  return c;
}

std::set<std::string> names(const ReportDoc& d) {
  std::set<std::string> out;
  for (const auto& c : d.checks) out.insert(c.name);
  return out;
}

void each_name_once(const RunResult& r) {
  const auto expect = command_checks(r.report.command);
  CHECK(r.report.checks.size() == expect.size());
  CHECK(names(r.report) == std::set<std::string>(expect.begin(), expect.end()));
}

std::string failures(const ReportDoc& d) {
  std::string s;
  for (const auto& f : d.failures()) s += f + " ";
  return s;
}

MetricSpec compensated_coupled() {
  MetricSpec s = singular_spec(4.0, 1);
  s.epsilons = {-1};
  s.couplings[0].holomorphic = {{0.2, 0.1}, {0.5, -0.3}, {0.0, 0.25}};
  s.profile.coupling_compensation = true;
  return s;
}

MetricSpec uncompensated_coupled() {
  MetricSpec s = compensated_coupled();
  s.profile.coupling_compensation = false;
  return s;
}

}  // namespace

TEST_CASE("verify passes on the bundled and compensated specs") {
  for (const MetricSpec& s : {singular_spec(4.0), compensated_coupled(), cahen_wallach_spec(1.0, 1), flat_spec(1)}) {
    const RunResult r = run_verify(s, small());
    INFO(failures(r.report));
    CHECK(r.report.pass());
    each_name_once(r);
  }
  const RunResult r = run_verify(singular_spec(4.0), small());
  CHECK(r.report.find("ambrose_singer.curvature")->status == CheckStatus::Pass);
  CHECK(r.report.find("symmetric.nabla_riemann")->status == CheckStatus::Skipped);
  CHECK(r.report.find("curvature.effective_formula")->status == CheckStatus::Info);
  CHECK(run_verify(cahen_wallach_spec(1.0), small()).report.find("symmetric.nabla_riemann")->status ==
        CheckStatus::Pass);
}

TEST_CASE("uncompensated couplings fail only the curvature-value checks") {
  const RunResult r = run_verify(uncompensated_coupled(), small());
  const std::set<std::string> expected = {"curvature.formula",        "ambrose_singer.curvature",
                                          "lemma.recurrence",         "osserman.jacobi_entry",
                                          "curvature.reference_point"};
  const auto f = r.report.failures();
  INFO(failures(r.report));
  CHECK(std::set<std::string>(f.begin(), f.end()) == expected);
  // The effective formula still holds.
  CHECK(r.report.find("curvature.effective_formula")->max_residual <= 1e-10);
}

TEST_CASE("broken Cauchy-Riemann fails exactly its own check") {
  const RunResult r = run_verify(break_cauchy_riemann(singular_spec(4.0, 1)), small());
  REQUIRE(r.report.failures().size() == 1);
  CHECK(r.report.failures()[0] == "metric.cauchy_riemann");
  CHECK(r.report.find("metric.ricci_flat")->status == CheckStatus::Skipped);
  CHECK(r.report.find("metric.inverse")->status == CheckStatus::Pass);
  CHECK_THROWS_AS(break_cauchy_riemann(singular_spec(4.0, 0)), std::invalid_argument);
}

TEST_CASE("reports are byte-identical for a fixed seed, independent of threads") {
  SuiteConfig a = small(8), b = small(8);
  b.threads = 3;
  const MetricSpec s = compensated_coupled();
  const std::string ja = to_json(run_verify(s, a).report);
  CHECK(ja == to_json(run_verify(s, a).report));
  CHECK(ja == to_json(run_verify(s, b).report));
  SuiteConfig c = small(8);
  c.seed = 8;
  CHECK(ja != to_json(run_verify(s, c).report));
  CHECK(ja.find("\"seconds\"") == std::string::npos);
}

TEST_CASE("suite selection and tolerance scaling") {
  SuiteConfig c = small(4);
  c.suites = {"osserman"};
  const RunResult r = run_verify(singular_spec(4.0), c);
  CHECK(r.report.checks.size() == 2);
  c.suites = {"metric"};
  c.tol_scale = 0.0;
  const RunResult z = run_verify(singular_spec(4.0), c);
  CHECK(z.report.find("metric.inverse")->threshold == 0.0);
}

TEST_CASE("geodesic command") {
  const RunResult r = run_geodesic(singular_spec(4.0), {}, small());
  INFO(failures(r.report));
  CHECK(r.report.pass());
  each_name_once(r);
  REQUIRE(r.files.size() == 1);
  CHECK(r.files[0].name == "trajectory.csv");
  CHECK(r.files[0].content.find("SingularityReached") != std::string::npos);
  CHECK(r.report.find("geodesic.complete")->status == CheckStatus::Skipped);

  const RunResult cw = run_geodesic(cahen_wallach_spec(1.0), {}, small());
  INFO(failures(cw.report));
  CHECK(cw.report.pass());
  CHECK(cw.report.find("geodesic.complete")->status == CheckStatus::Pass);

  GeodesicRequest bad;
  bad.x0 = Point::Zero(3);
  CHECK_THROWS_AS(run_geodesic(singular_spec(4.0), bad, small()), std::invalid_argument);
}

TEST_CASE("holonomy command") {
  for (const MetricSpec& s : {singular_spec(4.0), compensated_coupled(), uncompensated_coupled(), flat_spec(0)}) {
    const RunResult r = run_holonomy(s, small());
    INFO(failures(r.report));
    CHECK(r.report.pass());
    each_name_once(r);
  }
  const RunResult r = run_holonomy(singular_spec(4.0), small());
  REQUIRE(r.report.artifacts.size() == 1);
  CHECK(r.report.artifacts[0].first == "normal_form");
}

TEST_CASE("liealg command and the flipped bracket") {
  for (int n : {0, 1, 2})
    for (const Rational& bp : {Rational(1), Rational(-3, 2)}) {
      LieRequest q;
      q.n = n;
      q.b_p = bp;
      const RunResult r = run_liealg(q, small());
      INFO(failures(r.report));
      CHECK(r.report.pass());
      each_name_once(r);
    }
  LieRequest q;
  q.flip_z1w2 = true;
  const RunResult r = run_liealg(q, small());
  REQUIRE(r.report.failures().size() == 1);
  CHECK(r.report.failures()[0] == "lie.jacobi");
  CHECK(r.report.find("lie.heisenberg")->status == CheckStatus::Skipped);
  CHECK(to_json(r.report).find("\"c\": \"-") != std::string::npos);
}

TEST_CASE("wave command") {
  Mat a(2, 2);
  a << 1.0, 0.3, 0.3, -2.0;
  for (const PlaneWaveSpec& s : {constant_wave(a), scale_invariant_wave(a, {1, -1})}) {
    const RunResult r = run_wave(s, small(6));
    INFO(failures(r.report));
    CHECK(r.report.pass());
    each_name_once(r);
  }
  CHECK(run_wave(constant_wave(a), small(6)).report.find("wave.parallel_curvature")->status == CheckStatus::Pass);
  CHECK(run_wave(scale_invariant_wave(a), small(6)).report.find("wave.ssi_structure")->status ==
        CheckStatus::Pass);
}

TEST_CASE("quaternion command") {
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 1}}) {
    QuaternionRequest rq;
    rq.p = p;
    rq.q = q;
    const RunResult r = run_quaternion(rq, small());
    INFO(failures(r.report));
    CHECK(r.report.pass());
    each_name_once(r);
    CHECK(to_json(r.report).find("\"theta_only\": " + std::to_string(4 * (p + q) - 1)) != std::string::npos);
  }
  QuaternionRequest definite;
  definite.p = 2;
  definite.q = 0;
  CHECK_THROWS_AS(run_quaternion(definite, small()), std::invalid_argument);
  QuaternionRequest spacelike;
  spacelike.xi = RVec(8);
  spacelike.xi[0] = 1;
  const RunResult r = run_quaternion(spacelike, small());
  CHECK_FALSE(r.report.pass());
}

TEST_CASE("every check belongs to exactly one command") {
  std::set<std::string> seen;
  for (const char* cmd : {"verify", "geodesic", "holonomy", "liealg", "wave", "quaternion"})
    for (const auto& n : command_checks(cmd)) {
      INFO(n);
      CHECK(seen.insert(n).second);
    }
  CHECK_THROWS_AS(command_checks("plot"), std::invalid_argument);
}

TEST_CASE("plot data") {
  const std::string b = blowup_csv(singular_spec(4.0));
  CHECK(b.rfind("t,value,predicted\n", 0) == 0);
  std::istringstream in(b);
  std::string line;
  bool found = false;
  while (std::getline(in, line))
    if (line.rfind("0.5,", 0) == 0) {
      found = true;
      const double v = std::stod(line.substr(4, line.find(',', 4) - 4));
      CHECK(v == doctest::Approx(32.0).epsilon(1e-6));
      CHECK(line.substr(line.rfind(',') + 1) == "32");
    }
  CHECK(found);

  CHECK(trace_csv("t,w1,w2,z1,z2,norm_drift,flag\n") == "t,w1,w2,z1,z2,rho,flag\n");
  CHECK(trace_csv("t,w1,w2,z1,z2,norm_drift,flag\n0,0.6,0.8,0,0,0,ok\n") == "t,w1,w2,z1,z2,rho,flag\n0,0.6,0.8,0,0,1,ok\n");
  CHECK_THROWS_AS(trace_csv(""), ConfigError);
  CHECK_THROWS_AS(trace_csv("x,y\n"), ConfigError);
  CHECK_THROWS_AS(trace_csv("t,w1,w2,z1,z2,norm_drift,flag\n0,1\n"), ConfigError);
}
