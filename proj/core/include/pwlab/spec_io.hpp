#pragma once

#include <stdexcept>
#include <string>

#include "pwlab/metric_family.hpp"

namespace pwlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// key = value text, '#' starts a comment. Keys:
//   n, epsilons, profile.kind (singular|cahen_wallach|flat), profile.b0,
//   profile.harmonic, profile.coupling_compensation (true|false),
//   coupling.<a> = (re,im) (re,im) ...   coefficients of h_a, lowest degree first
//   coupling.<a>.r / coupling.<a>.s = c@i,j ...   raw real polynomials
MetricSpec parse_spec(const std::string& text);
MetricSpec load_spec(const std::string& path);
// Shortest round-trip formatting: parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const MetricSpec& spec);

std::string format_double(double x);
double parse_double(const std::string& text);

}  // namespace pwlab
