#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pwlab/holonomy.hpp"
#include "pwlab/lie_model.hpp"
#include "pwlab/lorentz_waves.hpp"
#include "pwlab/quaternionic.hpp"

namespace pwlab {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, Skipped, Info };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  CheckStatus status = CheckStatus::Pass;
  std::string note;

  bool failed() const { return status == CheckStatus::Fail; }
};

// Residual check: pass iff r <= threshold (NaN fails).
CheckResult residual_check(std::string name, double r, double threshold);
// Exact or boolean check: residual 0 when it holds, 1 otherwise.
CheckResult boolean_check(std::string name, bool holds, std::string note = {});
// Reported, never gating.
CheckResult info_check(std::string name, double value, std::string note = {});
CheckResult skipped_check(std::string name, double threshold, std::string reason);

struct ReportDoc {
  std::string command;
  std::string spec_echo;  // spec text or parameter summary
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckResult> checks;
  // Named JSON documents embedded under "artifacts".
  std::vector<std::pair<std::string, std::string>> artifacts;

  bool pass() const;
  std::vector<std::string> failures() const;
  const CheckResult* find(const std::string& name) const;
};

// Deterministic JSON (no timing), two-space indented, trailing newline.
std::string to_json(const ReportDoc& doc);

struct TimingEntry {
  std::string label;
  double seconds;
};
std::string timing_json(const std::string& command, const std::vector<TimingEntry>& entries);

// {"n", "b_p", "b0", "epsilons", "labels", "brackets": [{"i","j","k","c"}]}, c as
// exact rational strings, nonzero constants with i < j only.
std::string algebra_json(const LieAlgebra& alg);
std::string structure_json(const StructureDiagnostics& d);
std::string k_geodesic_json(const KGeodesicResult& r);
// {"signature": [p, q], "kernel_dims": {"full", "theta_only", "two_constraints"},
//  "constraint_rank", "forces_flat", "hyperkahler_forces_flat", "control_forces_flat"}
std::string quaternion_json(const FlatnessReport& r);
std::string heisenberg_json(const HeisenbergTable& t);
// Complex 2x2 matrices as [[[re, im], ...], ...].
std::string normal_form_json(const NormalForm& nf);

}  // namespace pwlab
