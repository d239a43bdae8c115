#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "pwlab/integrator.hpp"
#include "pwlab/metric_family.hpp"
#include "pwlab/tensor.hpp"

namespace pwlab {

struct GeodesicState {
  Point x;
  Vec v;
  double t = 0.0;
};

struct TrajectoryRow {
  double t;
  Point x;
  Vec v;
  // |g(v,v)(t) - g(v,v)(0)| / max(1, sum_ij |g_ij v^i v^j|): the norm drift
  // relative to the size of the terms whose cancellation forms g(v,v).
  double norm_drift;
};

struct Trajectory {
  std::vector<std::string> coordinate_names;
  std::vector<TrajectoryRow> rows;
  IntegrationStatus status = IntegrationStatus::Completed;
  double t_stop = 0.0;
};

struct GeodesicOptions {
  double tol = 1e-10;
  double rho_min = 1e-6;
  // Step cap as a fraction of the time to reach the singular set at current speed.
  double approach_fraction = 0.5;
};

double metric_norm(const Mat& g, const Vec& v);

// Adaptive integration of the geodesic equation. Stops with
// SingularityReached once model.singular_distance() < rho_min.
Trajectory geodesic_integrate(const MetricModel& model, const GeodesicState& init, double t_end,
                              const GeodesicOptions& opt = {});
Trajectory geodesic_integrate(const MetricSpec& spec, const GeodesicState& init, double t_end,
                              const GeodesicOptions& opt = {});

// CSV with header t,<coords>,norm_drift,flag; every row but the last has
// flag "ok", the last carries the integration status.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

struct FrameSample {
  double t;
  Point x;
  Vec v;
  std::vector<Vec> frame;
  Mat gram;
};

struct TransportResult {
  std::vector<FrameSample> samples;
  IntegrationStatus status = IntegrationStatus::Completed;
  // Largest |G_ab(t) - G_ab(0)| / max(1, sum_ij |g_ij e_a^i e_b^j|).
  double max_gram_drift = 0.0;
};

// Geodesic and frame integrated together; samples at the requested times
// (increasing, starting at or after init.t).
TransportResult parallel_transport(const MetricModel& model, const GeodesicState& init,
                                   const std::vector<Vec>& frame0, const std::vector<double>& times,
                                   const GeodesicOptions& opt = {});

struct CurvatureSample {
  double t;
  double value;
  double predicted;
};

// R(E1,E2,E1,E2) along gamma(t) = (1-t, 0, ...) with E_i(0) = d_wi / sqrt|b(0)|,
// compared with b0 / (2 b(0)^2) (1-t)^-4.
std::vector<CurvatureSample> parallel_frame_curvature(const MetricSpec& spec,
                                                      const std::vector<double>& times,
                                                      double tol = 1e-11);

}  // namespace pwlab
