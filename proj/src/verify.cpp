#include "jmcert/verify.hpp"

#include "jmcert/errors.hpp"
#include "jmcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace jmcert {

Configuration pair_collision_projection(const Configuration& q, int a, int b, const MassSystem& sys) {
  q.check_conforms(sys);
  if (a == b) throw DomainError("pair indices must be distinct");
  const double ma = sys.mass(a), mb = sys.mass(b);
  const Vector cm = (ma * q.body(a) + mb * q.body(b)) / (ma + mb);
  Configuration s = q;
  s.body(a) = cm;
  s.body(b) = cm;
  return s;
}

namespace {

struct Suite {
  std::string name;
  int cases = 0;
  int failures = 0;
  double max_error = 0.0;

  void check(bool ok, double error = 0.0) {
    ++cases;
    if (!ok) ++failures;
    if (std::isfinite(error)) max_error = std::max(max_error, error);
  }
  Json json() const {
    return {{"name", name}, {"cases", cases}, {"failures", failures}, {"max_error", max_error},
            {"passed", failures == 0}};
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

Suite distance_formula(Rng& rng) {
  Suite s{"distance_formula"};
  std::uniform_int_distribution<int> nb(2, 4), dd(1, 3);
  std::uniform_real_distribution<double> mass(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = nb(rng), d = dd(rng);
    std::vector<double> ms(static_cast<std::size_t>(n));
    for (double& m : ms) m = mass(rng);
    const MassSystem sys(ms, d);
    const Configuration q = random_configuration(rng, sys);
    for (auto [a, b] : sys.pairs()) {
      const Configuration proj = pair_collision_projection(q, a, b, sys);
      const double oracle = mass_norm(q - proj, sys);
      s.check(rel(dist_to_pair_collision(q, a, b, sys), oracle) <= 1e-12,
              rel(dist_to_pair_collision(q, a, b, sys), oracle));
    }
    const double u = potential_U(q, sys);
    const auto bounds = sandwich_bounds(q, sys);
    s.check(bounds.lower <= u * (1 + 1e-14) && u <= bounds.upper * (1 + 1e-14));
  }
  return s;
}

Suite projection_equivalence(Rng& rng, double tol) {
  Suite s{"projection_equivalence"};
  std::uniform_int_distribution<int> dd(1, 4), mm(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const PolyhedralCone cone = random_cone(rng, dd(rng), mm(rng));
    const double iter = project_origin_k1(cone, tol).q_star.norm();
    const double exact = project_origin_k1_exhaustive(cone).norm();
    s.check(std::abs(iter - exact) <= 1e-8 * std::max(1.0, exact), std::abs(iter - exact));
  }
  return s;
}

Suite rate_optimality(Rng& rng, double tol) {
  Suite s{"rate_optimality"};
  std::uniform_int_distribution<int> dd(2, 4), mm(2, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const PolyhedralCone cone = random_cone(rng, dd(rng), mm(rng));
    const EscapeCertificate cert = escape_rate(cone, ProjectionMethod::iterative, tol);
    s.check(std::abs(cone.min_face_value(cert.direction) - cert.rate) <= 1e-9,
            std::abs(cone.min_face_value(cert.direction) - cert.rate));
    s.check(std::abs(cert.rate * cert.q_star.norm() - 1.0) <= 1e-9);
    for (int k = 0; k < 25; ++k) {
      const Vector w = random_unit(rng, cone.ambient_dim());
      s.check(cone.min_face_value(w) <= cert.rate + 1e-9);
    }
  }
  return s;
}

Suite escaper_monotonicity(Rng& rng, double tol) {
  Suite s{"escaper_monotonicity"};
  std::uniform_int_distribution<int> dd(2, 4), mm(2, 6);
  std::uniform_real_distribution<double> level(0.1, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const PolyhedralCone cone = random_cone(rng, dd(rng), mm(rng));
    const EscapeCertificate cert = escape_rate(cone, ProjectionMethod::iterative, tol);
    // A point of K: a random point pushed inward along the certificate direction.
    Vector p = random_gaussian(rng, cone.ambient_dim());
    const double shortfall = -cone.min_face_value(p);
    if (shortfall > 0.0) p += (shortfall / cert.rate) * cert.direction;
    const double t = level(rng);
    const Escaper e = make_escaper(p, cert, cone, t);
    double prev = e.start_distance;
    for (int k = 1; k <= 20; ++k) {
      const double sarc = e.exit_arclength * k / 20.0 + 0.05 * k;
      const double dist = cone.min_face_value(e.point(sarc));
      s.check(dist >= e.start_distance + sarc * e.rate - 1e-9 && dist >= prev - 1e-12);
      prev = dist;
    }
    s.check(e.exit_arclength <= t / e.rate + 1e-12);
  }
  return s;
}

Suite chamber_partition(Rng& rng) {
  Suite s{"chamber_partition"};
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vector> normals;
    for (int i = 0; i < 5; ++i) normals.push_back(random_unit(rng, 3));
    const HyperplaneArrangement arr(normals);
    const auto chambers = enumerate_chambers(arr);
    std::set<std::vector<int>> signs;
    for (const auto& c : chambers) signs.insert(c.signs);
    for (int k = 0; k < 200; ++k) {
      const Vector x = random_gaussian(rng, 3);
      std::vector<int> sig;
      for (const auto& n : arr.normals()) sig.push_back(n.dot(x) > 0 ? 1 : -1);
      s.check(signs.count(sig) == 1);
    }
    // Five generic planes through the origin of R^3 cut it into 2 + 5*4 = 22 chambers.
    s.check(chambers.size() == 22);
  }
  return s;
}

Suite closed_form_rates(double tol) {
  Suite s{"closed_form_rates"};
  for (int n = 1; n <= 6; ++n) {
    std::vector<Vector> normals;
    for (int i = 0; i < n; ++i) normals.push_back(Vector::Unit(n, i));
    const double rate = escape_rate(PolyhedralCone(normals), ProjectionMethod::iterative, tol).rate;
    s.check(std::abs(rate - 1.0 / std::sqrt(n)) <= 1e-9, std::abs(rate - 1.0 / std::sqrt(n)));
  }
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
    std::vector<Vector> normals{Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(std::sin(theta), -std::cos(theta))};
    const double rate = escape_rate(PolyhedralCone(normals), ProjectionMethod::iterative, tol).rate;
    s.check(std::abs(rate - std::sin(theta / 2)) <= 1e-9, std::abs(rate - std::sin(theta / 2)));
  }
  return s;
}

Suite certificate_soundness(Rng& rng, double tol) {
  Suite s{"certificate_soundness"};
  for (int n : {2, 3}) {
    const MassSystem sys(std::vector<double>(static_cast<std::size_t>(n), 1.0), 2);
    const DiameterCertificate cert = diameter_certificate(sys, LiftRule::first_axis(), kMaxHyperplanes, tol);
    for (int k = 0; k < 25; ++k) {
      const Configuration q = random_hill_point(rng, sys);
      const BoundaryEscape esc = escape_to_boundary(q, sys, cert);
      s.check(esc.jm_length <= cert.bound_single, esc.jm_length / cert.bound_single);
      for (int j = 1; j <= 16; ++j) {
        const double t = esc.crossing_time * j / 16.0;
        s.check(potential_U(q + t * esc.direction, sys) * cert.constants.k * t <= 1.0 + 1e-6);
      }
    }
  }
  return s;
}

}  // namespace

Json run_verify(std::uint64_t seed, const VerifyOptions& opts) {
  Rng rng(seed);
  std::vector<Suite> suites;
  suites.push_back(distance_formula(rng));
  suites.push_back(projection_equivalence(rng, opts.tol_proj));
  suites.push_back(rate_optimality(rng, opts.tol_proj));
  suites.push_back(escaper_monotonicity(rng, opts.tol_proj));
  suites.push_back(chamber_partition(rng));
  suites.push_back(closed_form_rates(opts.tol_proj));
  suites.push_back(certificate_soundness(rng, opts.tol_proj));

  Json report;
  report["seed"] = seed;
  bool all = true;
  Json list = Json::array();
  for (const auto& s : suites) {
    all = all && s.failures == 0;
    list.push_back(s.json());
  }
  report["suites"] = std::move(list);
  report["all_passed"] = all;
  return report;
}

}  // namespace jmcert
