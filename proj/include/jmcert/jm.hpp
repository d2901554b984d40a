#pragma once

#include "jmcert/arrangement.hpp"
#include "jmcert/cone.hpp"
#include "jmcert/nbody.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace jmcert {

/// Piecewise-linear path in configuration space.
class Polyline {
 public:
  explicit Polyline(std::vector<Configuration> vertices);
  const std::vector<Configuration>& vertices() const { return vertices_; }
  /// Total length in the mass metric.
  double mass_length(const MassSystem& sys) const;

 private:
  std::vector<Configuration> vertices_;
};

struct JmLengthOptions {
  double energy = -1.0;
  double relative_tolerance = 1e-8;
  /// Allow path endpoints on the collision locus (improper integral).
  bool endpoint_limit = false;
};

/// Length of `path` in the metric 2 max(E + U, 0) <dq, dq>.
/// Throws CollisionError when the path meets the collision locus (except at an
/// endpoint with `endpoint_limit`).
double jm_length(const Polyline& path, const MassSystem& sys, const JmLengthOptions& opts = {});

struct NewtonOptions {
  double absolute_tolerance = 1e-14;
  double relative_tolerance = 1e-14;
  double initial_step = 1e-3;
  /// Stop early once dist(q, Delta) drops below this.
  double collision_distance = 1e-3;
  double energy = -1.0;
  double energy_tolerance = 1e-9;
};

/// Accepted integrator steps of a Newton solution; any intermediate state is
/// reconstructed by a single Runge-Kutta-Fehlberg 7(8) step from the nearest
/// earlier node.
class Trajectory {
 public:
  Trajectory(MassSystem sys, std::vector<double> times, std::vector<std::vector<double>> states,
             bool collision_stop);

  const MassSystem& system() const { return sys_; }
  const std::vector<double>& times() const { return times_; }
  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  std::size_t size() const { return times_.size(); }
  /// True when integration stopped because of a close approach to collision.
  bool collision_stop() const { return collision_stop_; }

  Configuration position(std::size_t i) const;
  Configuration velocity(std::size_t i) const;
  std::pair<Configuration, Configuration> state_at(double t) const;

 private:
  MassSystem sys_;
  std::vector<double> times_;
  std::vector<std::vector<double>> states_;
  bool collision_stop_;
};

/// Integrates qdd = grad U from (q0, v0) over [0, duration]. Requires energy
/// E(q0, v0) = opts.energy within opts.energy_tolerance.
Trajectory newton_integrate(const Configuration& q0, const Configuration& v0, const MassSystem& sys,
                            double duration, const NewtonOptions& opts = {});

/// JM length (energy E) of the trajectory restricted to [t0, t1].
double jm_length(const Trajectory& traj, double t0, double t1, double energy = -1.0);
/// Integral of 2K = <v, v> over [t0, t1].
double kinetic_action(const Trajectory& traj, double t0, double t1);

/// sqrt(2) * int_0^{1/k} sqrt(max(1/(k t) - 1, 0)) dt, by tanh-sinh quadrature in t.
double escaper_jm_bound(double k);
/// The same bound as (sqrt(2)/k) int_0^1 sqrt(1/u - 1) du, by Gauss-Kronrod after
/// removing the endpoint singularities.
double escaper_jm_bound_substituted(double k);

struct CertificateConstants {
  double lambda_min = 0.0;  // lambda_*
  double lambda_sum = 0.0;  // Lambda
  double c1 = 0.0;          // 1 / Lambda
  double C = 0.0;           // 1 / lambda_*
  double rate = 0.0;        // global escape rate of the lifted collision arrangement
  double k = 0.0;           // c1 * rate
  double t_cross = 0.0;     // 1 / k
};

/// Uniform bound on the JM distance from any Hill-region point to the Hill boundary.
struct DiameterCertificate {
  MassSystem sys;
  CertificateConstants constants;
  double bound_single = 0.0;
  double bound_diameter = 0.0;
  LiftRule lift_rule;
  std::shared_ptr<const EscapeGame> game;  // mass-weighted coordinates
};

DiameterCertificate diameter_certificate(const MassSystem& sys,
                                         const LiftRule& rule = LiftRule::first_axis(),
                                         int max_hyperplanes = kMaxHyperplanes,
                                         double tolerance = kProjectionTolerance);

struct BoundaryEscape {
  Polyline path;
  double jm_length = 0.0;
  Configuration direction;  // unit speed in the mass metric
  double crossing_time = 0.0;
};

/// Straight escaper from a Hill-region point to its first crossing of U = 1.
BoundaryEscape escape_to_boundary(const Configuration& q, const MassSystem& sys,
                                  const DiameterCertificate& cert);

/// JM distance from total collision to the Hill boundary for two bodies,
/// integrated in the separation coordinate.
double two_body_boundary_distance(const MassSystem& sys);

}  // namespace jmcert
