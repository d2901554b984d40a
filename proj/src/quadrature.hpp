#pragma once

#include "jmcert/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace jmcert::detail {

/// Adaptive 15-point Gauss-Kronrod. Depth 13 caps the work near 10^4 panels.
/// The interval is mapped onto [0, 1] first: Boost's error estimate has a floor set by
/// the integrand's magnitude, not the interval width, so short intervals never converge.
template <class F>
double gauss_kronrod(F&& f, double a, double b, double rel_tol, unsigned max_depth = 13) {
  const double h = b - a;
  auto g = [&](double s) { return h * f(a + h * s); };
  double error = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, max_depth,
                                                                                 rel_tol, &error);
  if (!std::isfinite(v)) throw SolverError("quadrature produced a non-finite value");
  return v;
}

/// Double-exponential quadrature; tolerates integrable endpoint singularities.
template <class F>
double tanh_sinh(F&& f, double a, double b, double rel_tol) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  const double v = integrator.integrate(f, a, b, rel_tol, &error);
  if (!std::isfinite(v)) throw SolverError("quadrature produced a non-finite value");
  return v;
}

}  // namespace jmcert::detail
