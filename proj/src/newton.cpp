#include "jmcert/errors.hpp"
#include "jmcert/jm.hpp"
#include "quadrature.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace jmcert {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

// State layout: positions (N*d) followed by velocities (N*d).
struct NewtonField {
  const MassSystem* sys;

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const int n = sys->bodies(), d = sys->dim();
    const std::size_t half = static_cast<std::size_t>(n * d);
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(half), x.end(), dxdt.begin());
    std::fill(dxdt.begin() + static_cast<std::ptrdiff_t>(half), dxdt.end(), 0.0);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double diff = x[static_cast<std::size_t>(b * d + k)] - x[static_cast<std::size_t>(a * d + k)];
          r2 += diff * diff;
        }
        const double inv_r3 = sys->G() / (r2 * std::sqrt(r2));
        for (int k = 0; k < d; ++k) {
          const double f =
              (x[static_cast<std::size_t>(b * d + k)] - x[static_cast<std::size_t>(a * d + k)]) * inv_r3;
          dxdt[half + static_cast<std::size_t>(a * d + k)] += sys->mass(b) * f;
          dxdt[half + static_cast<std::size_t>(b * d + k)] -= sys->mass(a) * f;
        }
      }
    }
  }
};

struct CloseApproach {};

}  // namespace

Trajectory::Trajectory(MassSystem sys, std::vector<double> times, std::vector<std::vector<double>> states,
                       bool collision_stop)
    : sys_(std::move(sys)), times_(std::move(times)), states_(std::move(states)),
      collision_stop_(collision_stop) {
  if (times_.empty() || times_.size() != states_.size())
    throw ShapeError("trajectory needs matching, nonempty time and state lists");
}

Configuration Trajectory::position(std::size_t i) const {
  const auto& s = states_.at(i);
  const auto half = static_cast<Eigen::Index>(s.size() / 2);
  return Configuration(sys_.bodies(), sys_.dim(), Eigen::Map<const Vector>(s.data(), half));
}

Configuration Trajectory::velocity(std::size_t i) const {
  const auto& s = states_.at(i);
  const auto half = static_cast<Eigen::Index>(s.size() / 2);
  return Configuration(sys_.bodies(), sys_.dim(), Eigen::Map<const Vector>(s.data() + half, half));
}

std::pair<Configuration, Configuration> Trajectory::state_at(double t) const {
  if (t < start_time() || t > end_time()) throw DomainError("time outside the integrated interval");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - times_.begin()) - 1));
  if (t == times_[i]) return {position(i), velocity(i)};
  State x = states_[i];
  odeint::runge_kutta_fehlberg78<State> stepper;
  stepper.do_step(NewtonField{&sys_}, x, times_[i], t - times_[i]);
  const auto half = static_cast<Eigen::Index>(x.size() / 2);
  return {Configuration(sys_.bodies(), sys_.dim(), Eigen::Map<const Vector>(x.data(), half)),
          Configuration(sys_.bodies(), sys_.dim(), Eigen::Map<const Vector>(x.data() + half, half))};
}

Trajectory newton_integrate(const Configuration& q0, const Configuration& v0, const MassSystem& sys,
                            double duration, const NewtonOptions& opts) {
  q0.check_conforms(sys);
  v0.check_conforms(sys);
  if (!(duration > 0.0)) throw DomainError("integration duration must be positive");
  if (dist_to_collision_locus(q0, sys) == 0.0) throw CollisionError("initial configuration is a collision");
  const double e0 = total_energy(q0, v0, sys);
  if (std::abs(e0 - opts.energy) > opts.energy_tolerance)
    throw DomainError("initial energy " + std::to_string(e0) + " differs from " +
                      std::to_string(opts.energy));

  State x(q0.coords().data(), q0.coords().data() + q0.coords().size());
  x.insert(x.end(), v0.coords().data(), v0.coords().data() + v0.coords().size());

  std::vector<double> times;
  std::vector<State> states;
  bool stopped = false;
  auto observer = [&](const State& s, double t) {
    times.push_back(t);
    states.push_back(s);
    const auto half = static_cast<Eigen::Index>(s.size() / 2);
    const Configuration q(sys.bodies(), sys.dim(), Eigen::Map<const Vector>(s.data(), half));
    if (dist_to_collision_locus(q, sys) < opts.collision_distance) throw CloseApproach{};
  };

  auto stepper = odeint::make_controlled(opts.absolute_tolerance, opts.relative_tolerance,
                                         odeint::runge_kutta_fehlberg78<State>());
  try {
    odeint::integrate_adaptive(stepper, NewtonField{&sys}, x, 0.0, duration, opts.initial_step, observer);
  } catch (const CloseApproach&) {
    stopped = true;
  } catch (const odeint::step_adjustment_error& e) {
    throw SolverError(std::string("Newton integration failed: ") + e.what());
  }
  return Trajectory(sys, std::move(times), std::move(states), stopped);
}

namespace {

template <class F>
double integrate_over_steps(const Trajectory& traj, double t0, double t1, F&& integrand) {
  if (!(t0 <= t1) || t0 < traj.start_time() || t1 > traj.end_time())
    throw DomainError("integration window outside the trajectory");
  const auto& ts = traj.times();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = std::max(ts[i], t0), b = std::min(ts[i + 1], t1);
    if (!(b > a)) continue;
    total += detail::gauss_kronrod(
        [&](double t) {
          const auto [q, v] = traj.state_at(t);
          return integrand(q, v);
        },
        a, b, 1e-10, 8);
  }
  return total;
}

}  // namespace

double jm_length(const Trajectory& traj, double t0, double t1, double energy) {
  const MassSystem& sys = traj.system();
  return integrate_over_steps(traj, t0, t1, [&](const Configuration& q, const Configuration& v) {
    return std::sqrt(2.0 * std::max(potential_U(q, sys) + energy, 0.0)) * mass_norm(v, sys);
  });
}

double kinetic_action(const Trajectory& traj, double t0, double t1) {
  const MassSystem& sys = traj.system();
  return integrate_over_steps(traj, t0, t1,
                              [&](const Configuration&, const Configuration& v) { return mass_inner(v, v, sys); });
}

}  // namespace jmcert
