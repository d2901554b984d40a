#include "jmcert/nbody.hpp"

#include "jmcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jmcert {

MassSystem::MassSystem(std::vector<double> masses, int dim, double G)
    : masses_(std::move(masses)), dim_(dim), G_(G) {
  if (masses_.size() < 2) throw DomainError("mass system needs at least two bodies");
  if (dim_ < 1) throw DomainError("spatial dimension must be >= 1");
  if (!(G_ > 0.0) || !std::isfinite(G_)) throw DomainError("gravitational constant must be positive");
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("masses must be positive and finite");
  }
  lambda_min_ = std::numeric_limits<double>::infinity();
  for (auto [a, b] : pairs()) {
    const double l = pair_lambda(a, b);
    lambda_min_ = std::min(lambda_min_, l);
    lambda_sum_ += l;
  }
}

void MassSystem::check_pair(int a, int b) const {
  if (a < 0 || b < 0 || a >= bodies() || b >= bodies())
    throw DomainError("body index out of range");
  if (a == b) throw DomainError("pair indices must be distinct");
}

double MassSystem::pair_k(int a, int b) const {
  check_pair(a, b);
  const double ma = mass(a), mb = mass(b);
  return std::sqrt(ma * mb / (ma + mb));
}

double MassSystem::pair_lambda(int a, int b) const {
  return G_ * mass(a) * mass(b) * pair_k(a, b);
}

std::vector<std::pair<int, int>> MassSystem::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(pair_count()));
  for (int a = 0; a < bodies(); ++a)
    for (int b = a + 1; b < bodies(); ++b) out.emplace_back(a, b);
  return out;
}

Configuration::Configuration(int bodies, int dim)
    : Configuration(bodies, dim, Vector::Zero(static_cast<Eigen::Index>(bodies) * dim)) {}

Configuration::Configuration(int bodies, int dim, Vector coords)
    : bodies_(bodies), dim_(dim), coords_(std::move(coords)) {
  if (bodies_ < 1 || dim_ < 1) throw ShapeError("configuration needs positive body count and dimension");
  if (coords_.size() != static_cast<Eigen::Index>(bodies_) * dim_)
    throw ShapeError("coordinate vector length " + std::to_string(coords_.size()) +
                     " does not equal bodies*dim");
}

Configuration Configuration::from_blocks(const std::vector<std::vector<double>>& blocks) {
  if (blocks.empty() || blocks.front().empty()) throw ShapeError("configuration has no blocks");
  const int n = static_cast<int>(blocks.size());
  const int d = static_cast<int>(blocks.front().size());
  Configuration q(n, d);
  for (int a = 0; a < n; ++a) {
    const auto& blk = blocks[static_cast<std::size_t>(a)];
    if (static_cast<int>(blk.size()) != d)
      throw ShapeError("block " + std::to_string(a) + " has length " + std::to_string(blk.size()) +
                       ", expected " + std::to_string(d));
    for (int k = 0; k < d; ++k) q.body(a)[k] = blk[static_cast<std::size_t>(k)];
  }
  return q;
}

std::vector<std::vector<double>> Configuration::to_blocks() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(bodies_));
  for (int a = 0; a < bodies_; ++a) {
    auto blk = body(a);
    out[static_cast<std::size_t>(a)].assign(blk.data(), blk.data() + dim_);
  }
  return out;
}

void Configuration::check_conforms(const MassSystem& sys) const {
  if (bodies_ != sys.bodies() || dim_ != sys.dim())
    throw ShapeError("configuration is " + std::to_string(bodies_) + "x" + std::to_string(dim_) +
                     " but system is " + std::to_string(sys.bodies()) + "x" +
                     std::to_string(sys.dim()));
}

Configuration& Configuration::operator+=(const Configuration& o) {
  if (o.bodies_ != bodies_ || o.dim_ != dim_) throw ShapeError("configuration shapes differ");
  coords_ += o.coords_;
  return *this;
}

Configuration& Configuration::operator-=(const Configuration& o) {
  if (o.bodies_ != bodies_ || o.dim_ != dim_) throw ShapeError("configuration shapes differ");
  coords_ -= o.coords_;
  return *this;
}

Configuration& Configuration::operator*=(double s) {
  coords_ *= s;
  return *this;
}

Configuration operator+(Configuration a, const Configuration& b) { return a += b; }
Configuration operator-(Configuration a, const Configuration& b) { return a -= b; }
Configuration operator*(double s, Configuration a) { return a *= s; }

double mass_inner(const Configuration& u, const Configuration& v, const MassSystem& sys) {
  u.check_conforms(sys);
  v.check_conforms(sys);
  double acc = 0.0;
  for (int a = 0; a < sys.bodies(); ++a) acc += sys.mass(a) * u.body(a).dot(v.body(a));
  return acc;
}

double mass_norm(const Configuration& u, const MassSystem& sys) {
  return std::sqrt(mass_inner(u, u, sys));
}

double potential_U(const Configuration& q, const MassSystem& sys) {
  q.check_conforms(sys);
  double acc = 0.0;
  for (auto [a, b] : sys.pairs()) {
    const double r = (q.body(a) - q.body(b)).norm();
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    acc += sys.mass(a) * sys.mass(b) / r;
  }
  return sys.G() * acc;
}

double dist_to_pair_collision(const Configuration& q, int a, int b, const MassSystem& sys) {
  q.check_conforms(sys);
  const double k = sys.pair_k(a, b);
  return k * (q.body(a) - q.body(b)).norm();
}

double dist_to_collision_locus(const Configuration& q, const MassSystem& sys) {
  q.check_conforms(sys);
  double best = std::numeric_limits<double>::infinity();
  for (auto [a, b] : sys.pairs()) best = std::min(best, dist_to_pair_collision(q, a, b, sys));
  return best;
}

PotentialBounds sandwich_bounds(const Configuration& q, const MassSystem& sys) {
  const double d = dist_to_collision_locus(q, sys);
  if (d == 0.0) throw CollisionError("sandwich bounds are undefined on the collision locus");
  return {sys.lambda_min() / d, sys.lambda_sum() / d};
}

HillRegion hill_membership(const Configuration& q, const MassSystem& sys, double tolerance) {
  const double u = potential_U(q, sys);
  if (std::isinf(u)) return HillRegion::interior;
  if (std::abs(u - 1.0) <= tolerance) return HillRegion::boundary;
  return u > 1.0 ? HillRegion::interior : HillRegion::exterior;
}

Configuration newton_rhs(const Configuration& q, const MassSystem& sys) {
  q.check_conforms(sys);
  Configuration acc(sys);
  for (auto [a, b] : sys.pairs()) {
    const Vector diff = q.body(b) - q.body(a);
    const double r = diff.norm();
    if (r == 0.0)
      throw CollisionError("force is singular: bodies " + std::to_string(a) + " and " +
                           std::to_string(b) + " collide");
    const Vector f = (sys.G() / (r * r * r)) * diff;
    acc.body(a) += sys.mass(b) * f;
    acc.body(b) -= sys.mass(a) * f;
  }
  return acc;
}

Configuration scale_configuration(const Configuration& q, double factor) {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  return factor * q;
}

Vector to_mass_weighted(const Configuration& q, const MassSystem& sys) {
  q.check_conforms(sys);
  Vector x = q.coords();
  for (int a = 0; a < sys.bodies(); ++a)
    x.segment(static_cast<Eigen::Index>(a) * sys.dim(), sys.dim()) *= std::sqrt(sys.mass(a));
  return x;
}

Configuration from_mass_weighted(const Vector& x, const MassSystem& sys) {
  Configuration q(sys.bodies(), sys.dim(), x);
  for (int a = 0; a < sys.bodies(); ++a) q.body(a) /= std::sqrt(sys.mass(a));
  return q;
}

double kinetic_energy(const Configuration& v, const MassSystem& sys) {
  return 0.5 * mass_inner(v, v, sys);
}

double total_energy(const Configuration& q, const Configuration& v, const MassSystem& sys) {
  return kinetic_energy(v, sys) - potential_U(q, sys);
}

}  // namespace jmcert
