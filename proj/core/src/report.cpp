#include "pwlab/report.hpp"

#include <cmath>

#include "json.hpp"

namespace pwlab {

using nlohmann::ordered_json;

namespace {

ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ordered_json matrix(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

ordered_json cmatrix(const CMat2& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 2; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < 2; ++j) row.push_back({number(m(i, j).real()), number(m(i, j).imag())});
    rows.push_back(row);
  }
  return rows;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::Info: return "info";
  }
  return "unknown";
}

CheckResult residual_check(std::string name, double r, double threshold) {
  CheckResult c;
  c.name = std::move(name);
  c.max_residual = r;
  c.threshold = threshold;
  c.status = r <= threshold ? CheckStatus::Pass : CheckStatus::Fail;
  return c;
}

CheckResult boolean_check(std::string name, bool holds, std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.max_residual = holds ? 0.0 : 1.0;
  c.threshold = 0.0;
  c.status = holds ? CheckStatus::Pass : CheckStatus::Fail;
  c.note = std::move(note);
  return c;
}

CheckResult info_check(std::string name, double value, std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.max_residual = value;
  c.threshold = 0.0;
  c.status = CheckStatus::Info;
  c.note = std::move(note);
  return c;
}

CheckResult skipped_check(std::string name, double threshold, std::string reason) {
  CheckResult c;
  c.name = std::move(name);
  c.max_residual = 0.0;
  c.threshold = threshold;
  c.status = CheckStatus::Skipped;
  c.note = std::move(reason);
  return c;
}

bool ReportDoc::pass() const {
  for (const auto& c : checks)
    if (c.failed()) return false;
  return true;
}

std::vector<std::string> ReportDoc::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (c.failed()) out.push_back(c.name);
  return out;
}

const CheckResult* ReportDoc::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string to_json(const ReportDoc& doc) {
  ordered_json j;
  j["tool"] = "pwlab";
  j["version"] = kToolVersion;
  j["command"] = doc.command;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : doc.config) cfg[k] = v;
  j["config"] = cfg;
  j["spec"] = doc.spec_echo;
  ordered_json checks = ordered_json::array();
  for (const auto& c : doc.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["status"] = to_string(c.status);
    e["pass"] = !c.failed();
    e["max_residual"] = number(c.max_residual);
    e["threshold"] = number(c.threshold);
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["pass"] = doc.pass();
  j["failures"] = doc.failures();
  ordered_json art = ordered_json::object();
  for (const auto& [k, v] : doc.artifacts) art[k] = ordered_json::parse(v);
  j["artifacts"] = art;
  return dump(j);
}

std::string timing_json(const std::string& command, const std::vector<TimingEntry>& entries) {
  ordered_json j;
  j["command"] = command;
  ordered_json t = ordered_json::object();
  double total = 0.0;
  for (const auto& e : entries) {
    t[e.label] = e.seconds;
    total += e.seconds;
  }
  j["seconds"] = t;
  j["total_seconds"] = total;
  return dump(j);
}

std::string algebra_json(const LieAlgebra& alg) {
  ordered_json j;
  j["n"] = alg.n();
  j["b_p"] = alg.b_p().get_str();
  j["b0"] = alg.b0().get_str();
  std::vector<int> eps = alg.epsilons();
  j["epsilons"] = eps;
  j["labels"] = alg.labels();
  ordered_json br = ordered_json::array();
  for (int i = 0; i < alg.dim(); ++i)
    for (int jj = i + 1; jj < alg.dim(); ++jj)
      for (int k = 0; k < alg.dim(); ++k) {
        const Rational& c = alg.c(i, jj, k);
        if (c == 0) continue;
        br.push_back({{"i", i}, {"j", jj}, {"k", k}, {"c", c.get_str()}});
      }
  j["brackets"] = br;
  return dump(j);
}

std::string structure_json(const StructureDiagnostics& d) {
  ordered_json j;
  j["derived_series"] = d.derived_series;
  j["lower_central_series"] = d.lower_central_series;
  j["solvable"] = d.solvable;
  j["derived_length"] = d.derived_length;
  j["nilpotent"] = d.nilpotent;
  j["nilradical"] = {{"is_ideal", d.nilradical_is_ideal},
                     {"contains_derived", d.nilradical_contains_derived},
                     {"two_step", d.nilradical_two_step},
                     {"class", d.nilradical_class},
                     {"maximal", d.nilradical_maximal},
                     {"maximal_margin", number(d.maximal_margin)}};
  j["heisenberg"] = d.heisenberg;
  return dump(j);
}

std::string k_geodesic_json(const KGeodesicResult& r) {
  ordered_json j;
  j["status"] = to_string(r.status);
  j["t_stop"] = number(r.t_stop);
  j["has_pole"] = r.has_pole;
  j["c"] = number(r.c);
  j["K"] = number(r.K);
  j["pole_ahead"] = r.pole_ahead;
  j["max_rel_error_x"] = number(r.max_rel_error_x);
  j["max_rel_error_y"] = number(r.max_rel_error_y);
  j["rows"] = r.rows.size();
  return dump(j);
}

std::string quaternion_json(const FlatnessReport& r) {
  ordered_json j;
  j["signature"] = {r.p, r.q};
  j["kernel_dims"] = {{"full", r.kernel_full},
                      {"theta_only", r.kernel_theta_only},
                      {"two_constraints", r.kernel_two_constraints}};
  j["constraint_rank"] = r.constraint_rank;
  j["metric_nondegenerate"] = r.metric_nondegenerate;
  j["xi_isotropic"] = r.xi_isotropic;
  j["nu_forced_zero"] = r.nu_forced_zero;
  j["forces_flat"] = r.forces_flat;
  j["hyperkahler_forces_flat"] = r.hyperkahler_forces_flat;
  j["control_forces_flat"] = r.control_forces_flat;
  return dump(j);
}

std::string heisenberg_json(const HeisenbergTable& t) {
  ordered_json j;
  j["labels"] = t.labels;
  j["dv_coefficient"] = matrix(t.dv_coefficient);
  j["wronskian"] = matrix(t.wronskian);
  j["transverse"] = number(t.transverse);
  j["variation"] = number(t.variation);
  return dump(j);
}

std::string normal_form_json(const NormalForm& nf) {
  ordered_json j;
  j["b"] = number(nf.b);
  j["sign"] = nf.sign;
  j["matrix"] = cmatrix(nf.matrix);
  j["rescaled"] = cmatrix(nf.rescaled);
  j["hermitian_form"] = cmatrix(nf.hermitian_form);
  j["fit_residual"] = number(nf.fit_residual);
  j["trace"] = number(nf.trace);
  j["square"] = number(nf.square);
  j["su11_defect"] = number(nf.su11_defect);
  return dump(j);
}

}  // namespace pwlab
