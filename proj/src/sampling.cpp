#include "jmcert/sampling.hpp"

#include "jmcert/errors.hpp"

#include <cmath>

namespace jmcert {

Vector random_gaussian(Rng& rng, int dim) {
  std::normal_distribution<double> gauss;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
  return v;
}

Vector random_unit(Rng& rng, int dim) {
  for (;;) {
    Vector v = random_gaussian(rng, dim);
    const double n = v.norm();
    if (n > 1e-8) return v / n;
  }
}

Matrix random_orthogonal(Rng& rng, int dim) {
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = random_gaussian(rng, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Configuration random_configuration(Rng& rng, const MassSystem& sys, double scale) {
  return Configuration(sys.bodies(), sys.dim(), scale * random_gaussian(rng, sys.ambient_dim()));
}

Configuration random_hill_point(Rng& rng, const MassSystem& sys) {
  // Typical Hill-region separations are O(G m_a m_b); scale samples to match.
  double scale = 0.0;
  for (auto [a, b] : sys.pairs()) scale = std::max(scale, sys.G() * sys.mass(a) * sys.mass(b));
  std::uniform_real_distribution<double> spread(0.05, 1.0);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    Configuration q = random_configuration(rng, sys, scale * spread(rng));
    const double u = potential_U(q, sys);
    if (std::isfinite(u) && u > 1.0) return q;
  }
  throw SolverError("could not sample a Hill-region point");
}

PolyhedralCone random_cone(Rng& rng, int dim, int facets) {
  std::uniform_real_distribution<double> spread_dist(0.1, 1.5);
  for (;;) {
    const Vector axis = random_unit(rng, dim);
    const double spread = spread_dist(rng);
    std::vector<Vector> normals;
    for (int i = 0; i < facets; ++i) {
      Vector n = axis + spread * random_gaussian(rng, dim);
      const double len = n.norm();
      if (len < 1e-8) continue;
      normals.push_back(n / len);
    }
    if (normals.empty()) continue;
    try {
      return PolyhedralCone(std::move(normals));
    } catch (const DegenerateError&) {
    }
  }
}

}  // namespace jmcert
