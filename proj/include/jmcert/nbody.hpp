#pragma once

#include <Eigen/Dense>

#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace jmcert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Point masses in R^d together with the gravitational constant.
///
/// The masses define the mass inner product <u, v> = sum_a m_a (u_a . v_a) on
/// configuration space (R^d)^N. Every distance, normal and gradient in this
/// library is taken with respect to that inner product.
class MassSystem {
 public:
  MassSystem(std::vector<double> masses, int dim, double G = 1.0);

  int bodies() const { return static_cast<int>(masses_.size()); }
  int dim() const { return dim_; }
  /// N * d, the dimension of configuration space.
  int ambient_dim() const { return bodies() * dim_; }
  double G() const { return G_; }
  double mass(int a) const { return masses_.at(static_cast<std::size_t>(a)); }
  std::span<const double> masses() const { return masses_; }
  int pair_count() const { return bodies() * (bodies() - 1) / 2; }

  /// sqrt(m_a m_b / (m_a + m_b)); dist(q, {q_a = q_b}) = k_ab * r_ab.
  double pair_k(int a, int b) const;
  /// G m_a m_b k_ab, the numerator of U written against pair distances.
  double pair_lambda(int a, int b) const;
  /// Minimum of pair_lambda over distinct pairs.
  double lambda_min() const { return lambda_min_; }
  /// Sum of pair_lambda over distinct pairs.
  double lambda_sum() const { return lambda_sum_; }

  /// Distinct unordered pairs (a < b) in lexicographic order.
  std::vector<std::pair<int, int>> pairs() const;

 private:
  void check_pair(int a, int b) const;

  std::vector<double> masses_;
  int dim_;
  double G_;
  double lambda_min_ = 0.0;
  double lambda_sum_ = 0.0;
};

/// A point q = (q_1, ..., q_N) of (R^d)^N stored as one flat vector.
class Configuration {
 public:
  Configuration() = default;
  Configuration(int bodies, int dim);
  Configuration(int bodies, int dim, Vector coords);
  explicit Configuration(const MassSystem& sys) : Configuration(sys.bodies(), sys.dim()) {}

  static Configuration from_blocks(const std::vector<std::vector<double>>& blocks);
  std::vector<std::vector<double>> to_blocks() const;

  int bodies() const { return bodies_; }
  int dim() const { return dim_; }
  const Vector& coords() const { return coords_; }
  Vector& coords() { return coords_; }

  auto body(int a) { return coords_.segment(static_cast<Eigen::Index>(a) * dim_, dim_); }
  auto body(int a) const { return coords_.segment(static_cast<Eigen::Index>(a) * dim_, dim_); }

  /// Throws ShapeError unless the block layout matches `sys`.
  void check_conforms(const MassSystem& sys) const;

  Configuration& operator+=(const Configuration& o);
  Configuration& operator-=(const Configuration& o);
  Configuration& operator*=(double s);

 private:
  int bodies_ = 0;
  int dim_ = 0;
  Vector coords_;
};

Configuration operator+(Configuration a, const Configuration& b);
Configuration operator-(Configuration a, const Configuration& b);
Configuration operator*(double s, Configuration a);

/// Region relative to the Hill boundary {U = 1} at energy -1.
enum class HillRegion { interior, boundary, exterior };

/// Default relative tolerance for classifying U(q) = 1 as on the Hill boundary.
inline constexpr double kHillTolerance = 1e-9;

double mass_inner(const Configuration& u, const Configuration& v, const MassSystem& sys);
double mass_norm(const Configuration& u, const MassSystem& sys);

/// U(q) = G sum_{a<b} m_a m_b / r_ab. Returns +infinity at a collision.
double potential_U(const Configuration& q, const MassSystem& sys);

double dist_to_pair_collision(const Configuration& q, int a, int b, const MassSystem& sys);
double dist_to_collision_locus(const Configuration& q, const MassSystem& sys);

struct PotentialBounds {
  double lower;
  double upper;
};

/// (lambda_min / dist, lambda_sum / dist), which bracket U(q).
/// Throws CollisionError when q lies on the collision locus.
PotentialBounds sandwich_bounds(const Configuration& q, const MassSystem& sys);

HillRegion hill_membership(const Configuration& q, const MassSystem& sys,
                           double tolerance = kHillTolerance);

/// Mass-metric gradient of U, i.e. the accelerations qdd = -grad V.
Configuration newton_rhs(const Configuration& q, const MassSystem& sys);

Configuration scale_configuration(const Configuration& q, double factor);

/// Isometry from ((R^d)^N, mass metric) onto standard Euclidean R^{Nd}: x_a = sqrt(m_a) q_a.
Vector to_mass_weighted(const Configuration& q, const MassSystem& sys);
/// Configuration whose mass-weighted coordinates are `x`.
Configuration from_mass_weighted(const Vector& x, const MassSystem& sys);

/// Kinetic energy 0.5 <v, v>.
double kinetic_energy(const Configuration& v, const MassSystem& sys);
/// K(v) - U(q).
double total_energy(const Configuration& q, const Configuration& v, const MassSystem& sys);

}  // namespace jmcert
