#include "jmcert/jm.hpp"

#include "jmcert/errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace jmcert {

Polyline::Polyline(std::vector<Configuration> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw DomainError("polyline needs at least one vertex");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const auto& a = vertices_[i - 1];
    const auto& b = vertices_[i];
    if (a.bodies() != b.bodies() || a.dim() != b.dim()) throw ShapeError("polyline vertices differ in shape");
    if (a.coords() == b.coords())
      throw DomainError("polyline vertices " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " coincide");
  }
}

double Polyline::mass_length(const MassSystem& sys) const {
  double len = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) len += mass_norm(vertices_[i] - vertices_[i - 1], sys);
  return len;
}

namespace {

enum class Contact { none, start, end };

// Where the segment a + s (b - a), s in [0, 1], meets the collision locus.
Contact segment_contact(const Configuration& a, const Configuration& b, const MassSystem& sys,
                        bool endpoint_limit) {
  bool at_start = false, at_end = false;
  for (auto [i, j] : sys.pairs()) {
    const Vector w0 = a.body(i) - a.body(j);
    const Vector dw = (b.body(i) - b.body(j)) - w0;
    const double dd = dw.squaredNorm();
    const double s = dd > 0.0 ? std::clamp(-w0.dot(dw) / dd, 0.0, 1.0) : 0.0;
    const double closest = (w0 + s * dw).norm();
    const double scale = w0.norm() + dw.norm();
    if (closest > 1e-14 * scale && closest > 0.0) continue;
    const bool touches_start = w0.norm() <= 1e-14 * scale;
    const bool touches_end = (w0 + dw).norm() <= 1e-14 * scale;
    if (!touches_start && !touches_end)
      throw CollisionError("path crosses the collision locus between bodies " + std::to_string(i) +
                           " and " + std::to_string(j));
    if (!endpoint_limit)
      throw CollisionError("path ends on the collision locus; enable endpoint-limit mode");
    at_start = at_start || touches_start;
    at_end = at_end || touches_end;
  }
  if (at_start && at_end) throw CollisionError("segment has both endpoints on the collision locus");
  return at_start ? Contact::start : at_end ? Contact::end : Contact::none;
}

}  // namespace

namespace {

// Integral of f over [lo, hi]; a flagged endpoint gets the substitution s = end -+ h w^2,
// which absorbs square-root behaviour there (Hill-boundary kinks, collision endpoints).
template <class F>
double integrate_piece(const F& f, double lo, double hi, bool sing_lo, bool sing_hi, double tol) {
  const double h = hi - lo;
  if (sing_lo && sing_hi) {
    const double mid = 0.5 * (lo + hi);
    return integrate_piece(f, lo, mid, true, false, tol) + integrate_piece(f, mid, hi, false, true, tol);
  }
  if (sing_lo) return detail::gauss_kronrod([&](double w) { return f(lo + h * w * w) * 2.0 * h * w; }, 0.0, 1.0, tol);
  if (sing_hi) return detail::gauss_kronrod([&](double w) { return f(hi - h * w * w) * 2.0 * h * w; }, 0.0, 1.0, tol);
  return detail::gauss_kronrod(f, lo, hi, tol);
}

// Sign changes of g on [0, 1] located on a uniform grid, then refined by bisection.
template <class G>
std::vector<double> level_crossings(const G& g, int grid) {
  std::vector<double> roots;
  double prev_s = 0.0, prev = g(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double s = static_cast<double>(i) / grid, val = g(s);
    if ((prev > 0.0) != (val > 0.0)) {
      double lo = prev_s, hi = s;
      const bool lo_positive = prev > 0.0;
      for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((g(mid) > 0.0) == lo_positive ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_s = s;
    prev = val;
  }
  return roots;
}

constexpr int kCrossingGrid = 64;

}  // namespace

double jm_length(const Polyline& path, const MassSystem& sys, const JmLengthOptions& opts) {
  const auto& vs = path.vertices();
  for (const auto& v : vs) v.check_conforms(sys);
  double total = 0.0;
  for (std::size_t i = 1; i < vs.size(); ++i) {
    const Configuration& a = vs[i - 1];
    const Configuration step = vs[i] - a;
    const double len = mass_norm(step, sys);
    const Contact contact = segment_contact(a, vs[i], sys, opts.endpoint_limit);
    auto excess = [&](double s) { return potential_U(a + s * step, sys) + opts.energy; };
    auto integrand = [&](double s) { return std::sqrt(2.0 * std::max(excess(s), 0.0)) * len; };

    std::vector<double> cuts{0.0};
    for (double r : level_crossings(excess, kCrossingGrid)) cuts.push_back(r);
    cuts.push_back(1.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k], hi = cuts[k + 1];
      if (!(hi > lo) || excess(0.5 * (lo + hi)) <= 0.0) continue;
      const bool sing_lo = k > 0 || contact == Contact::start;
      const bool sing_hi = k + 2 < cuts.size() || contact == Contact::end;
      total += integrate_piece(integrand, lo, hi, sing_lo, sing_hi, opts.relative_tolerance);
    }
  }
  return total;
}

double escaper_jm_bound(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("escaper bound needs k > 0");
  auto integrand = [k](double t) {
    if (t <= 0.0) return 0.0;
    return std::sqrt(std::max(1.0 / (k * t) - 1.0, 0.0));
  };
  return std::numbers::sqrt2 * detail::tanh_sinh(integrand, 0.0, 1.0 / k, 1e-13);
}

double escaper_jm_bound_substituted(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("escaper bound needs k > 0");
  // int_0^1 sqrt(1/u - 1) du split at 1/2: u = w^2 on the left, u = 1 - w^2 on the right.
  const double w_max = std::sqrt(0.5);
  const double left = detail::gauss_kronrod([](double w) { return 2.0 * std::sqrt(1.0 - w * w); }, 0.0,
                                            w_max, 1e-11);
  const double right = detail::gauss_kronrod(
      [](double w) { return 2.0 * w * w / std::sqrt(1.0 - w * w); }, 0.0, w_max, 1e-11);
  return std::numbers::sqrt2 / k * (left + right);
}

DiameterCertificate diameter_certificate(const MassSystem& sys, const LiftRule& rule, int max_hyperplanes,
                                         double tolerance) {
  auto game = std::make_shared<const EscapeGame>(
      lift_to_hyperplanes(collision_arrangement(sys), rule), max_hyperplanes, tolerance);
  CertificateConstants c;
  c.lambda_min = sys.lambda_min();
  c.lambda_sum = sys.lambda_sum();
  c.c1 = 1.0 / c.lambda_sum;
  c.C = 1.0 / c.lambda_min;
  c.rate = game->global_rate();
  c.k = c.c1 * c.rate;
  c.t_cross = 1.0 / c.k;
  const double single = escaper_jm_bound(c.k);
  return DiameterCertificate{sys, c, single, 2.0 * single, rule, std::move(game)};
}

BoundaryEscape escape_to_boundary(const Configuration& q, const MassSystem& sys,
                                  const DiameterCertificate& cert) {
  q.check_conforms(sys);
  if (!cert.game) throw DomainError("certificate carries no escape game");
  const HillRegion region = hill_membership(q, sys);
  if (region == HillRegion::exterior) throw DomainError("point lies outside the Hill region U >= 1");

  const double u0 = potential_U(q, sys);
  // The Hill region lies within distance Lambda = 1/c1 of the collision locus.
  const Escaper ray = cert.game->escaper_from_point(to_mass_weighted(q, sys), 1.0 / cert.constants.c1);
  const Configuration dir = from_mass_weighted(ray.direction, sys);
  if (region == HillRegion::boundary) return {Polyline({q}), 0.0, dir, 0.0};

  auto u_at = [&](double t) { return potential_U(q + t * dir, sys); };
  const double horizon = cert.constants.t_cross;
  constexpr int kGrid = 512;
  double lo = 0.0, hi = -1.0;
  for (int j = 1; j <= kGrid; ++j) {
    const double t = horizon * j / kGrid;
    if (u_at(t) <= 1.0) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (hi < 0.0)
    throw SolverError("escaper did not reach the Hill boundary by t = 1/k (U = " +
                      std::to_string(u_at(horizon)) + ")");
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (u_at(mid) <= 1.0 ? hi : lo) = mid;
  }

  Polyline path({q, q + hi * dir});
  JmLengthOptions opts;
  opts.endpoint_limit = std::isinf(u0);
  const double len = jm_length(path, sys, opts);
  return {std::move(path), len, dir, hi};
}

double two_body_boundary_distance(const MassSystem& sys) {
  if (sys.bodies() != 2) throw DomainError("two-body boundary distance needs exactly two bodies");
  const double k = sys.pair_k(0, 1);
  const double gmm = sys.G() * sys.mass(0) * sys.mass(1);
  // Boundary separation r_b = G m1 m2; substitute r = r_b w^2.
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double r = gmm * w * w;
    return k * std::sqrt(2.0 * std::max(gmm / r - 1.0, 0.0)) * 2.0 * gmm * w;
  };
  return detail::gauss_kronrod(integrand, 0.0, 1.0, 1e-11, 30);
}

}  // namespace jmcert
