#include "jmcert/cone.hpp"

#include "jmcert/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace jmcert {

namespace {

Matrix stack_rows(const std::vector<Vector>& vs, Eigen::Index dim) {
  Matrix m(static_cast<Eigen::Index>(vs.size()), dim);
  for (std::size_t i = 0; i < vs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  return m;
}

// Affine minimizer of |sum a_i p_i| subject to sum a_i = 1 over the corral.
bool affine_minimizer(const std::vector<Vector>& pts, const std::vector<int>& corral,
                      std::vector<double>& alpha) {
  const auto k = static_cast<Eigen::Index>(corral.size());
  Matrix sys = Matrix::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double g = pts[static_cast<std::size_t>(corral[static_cast<std::size_t>(i)])].dot(
          pts[static_cast<std::size_t>(corral[static_cast<std::size_t>(j)])]);
      sys(i, j) = g;
      sys(j, i) = g;
    }
    sys(i, k) = 1.0;
    sys(k, i) = 1.0;
  }
  Vector rhs = Vector::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::FullPivLU<Matrix> lu(sys);
  if (!lu.isInvertible()) return false;
  const Vector sol = lu.solve(rhs);
  alpha.assign(sol.data(), sol.data() + k);
  return true;
}

}  // namespace

MinNormPoint min_norm_point(const std::vector<Vector>& points, double tolerance) {
  if (points.empty()) throw DomainError("min_norm_point needs at least one point");
  const std::size_t m = points.size();
  double max_sq = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sq = points[i].squaredNorm();
    max_sq = std::max(max_sq, sq);
    if (sq < points[start].squaredNorm()) start = i;
  }

  std::vector<int> corral{static_cast<int>(start)};
  std::vector<double> weights{1.0};
  Vector x = points[start];
  constexpr double kDrop = 1e-15;

  auto recompute_x = [&] {
    x.setZero(points.front().size());
    for (std::size_t i = 0; i < corral.size(); ++i)
      x += weights[i] * points[static_cast<std::size_t>(corral[i])];
  };

  const int max_major = 100 * static_cast<int>(m) + 100;
  bool stalled = false;
  for (int major = 0; major < max_major && !stalled; ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double v = x.dot(points[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= tolerance * max_sq) break;
    if (std::find(corral.begin(), corral.end(), static_cast<int>(j)) != corral.end()) break;
    corral.push_back(static_cast<int>(j));
    weights.push_back(0.0);

    for (int minor = 0; minor < static_cast<int>(m) + 2; ++minor) {
      std::vector<double> alpha;
      if (!affine_minimizer(points, corral, alpha)) {
        // Affinely dependent corral; drop the newest point and stop improving.
        corral.pop_back();
        weights.pop_back();
        stalled = true;
        break;
      }
      if (std::all_of(alpha.begin(), alpha.end(), [](double a) { return a > kDrop; })) {
        weights = alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] <= kDrop && weights[i] - alpha[i] > 0.0)
          theta = std::min(theta, weights[i] / (weights[i] - alpha[i]));
      }
      for (std::size_t i = 0; i < alpha.size(); ++i)
        weights[i] = theta * alpha[i] + (1.0 - theta) * weights[i];
      std::vector<int> kept;
      std::vector<double> kept_w;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (weights[i] > kDrop) {
          kept.push_back(corral[i]);
          kept_w.push_back(weights[i]);
        }
      }
      if (kept.empty()) {
        kept.push_back(corral.back());
        kept_w.push_back(1.0);
      }
      corral = std::move(kept);
      weights = std::move(kept_w);
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= total;
    recompute_x();
  }
  MinNormPoint out;
  out.point = x;
  out.weights.assign(m, 0.0);
  for (std::size_t i = 0; i < corral.size(); ++i)
    out.weights[static_cast<std::size_t>(corral[i])] = weights[i];
  return out;
}

InteriorWitness interior_witness(const std::vector<Vector>& normals) {
  const MinNormPoint mnp = min_norm_point(normals);
  const double rho = mnp.point.norm();
  if (!(rho > 0.0)) return {Vector::Zero(normals.front().size()), 0.0};
  Vector dir = mnp.point / rho;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& n : normals) margin = std::min(margin, n.dot(dir));
  return {std::move(dir), margin};
}

PolyhedralCone::PolyhedralCone(std::vector<Vector> normals) {
  if (normals.empty()) throw DegenerateError("cone needs at least one normal");
  dim_ = static_cast<int>(normals.front().size());
  if (dim_ < 1) throw ShapeError("cone normals must be nonempty vectors");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    auto& n = normals[i];
    if (n.size() != dim_) throw ShapeError("cone normals have inconsistent dimensions");
    const double len = n.norm();
    if (!std::isfinite(len) || std::abs(len - 1.0) > kNormalTolerance)
      throw DomainError("normal " + std::to_string(i) + " has length " + std::to_string(len) +
                        "; unit normals are required");
    n /= len;
    const bool duplicate = std::any_of(normals_.begin(), normals_.end(), [&](const Vector& kept) {
      return kept.dot(n) > 1.0 - kDuplicateCosine;
    });
    if (!duplicate) normals_.push_back(n);
  }
  rows_ = stack_rows(normals_, dim_);
  witness_ = interior_witness(normals_);
  if (!(witness_.margin > kInteriorMargin))
    throw DegenerateError("cone has empty interior (best interior margin " +
                          std::to_string(witness_.margin) + ")");
}

double PolyhedralCone::min_face_value(const Vector& q) const {
  if (q.size() != dim_) throw ShapeError("point dimension does not match cone");
  return (rows_ * q).minCoeff();
}

bool PolyhedralCone::contains(const Vector& q, double tolerance) const {
  return min_face_value(q) >= -tolerance;
}

EquidistantPolyhedron::EquidistantPolyhedron(PolyhedralCone parent, double level)
    : parent_(std::move(parent)), level_(level) {
  if (!std::isfinite(level_)) throw DomainError("equidistant level must be finite");
}

bool EquidistantPolyhedron::contains(const Vector& q, double tolerance) const {
  return parent_.min_face_value(q) >= level_ - tolerance;
}

double dist_to_cone_boundary(const Vector& q, const PolyhedralCone& cone, double tolerance) {
  const double v = cone.min_face_value(q);
  if (v < -tolerance)
    throw OutsideConeError("point violates a cone face by " + std::to_string(-v));
  return v;
}

namespace {

// Dual objective 1'mu - |N'mu|^2 / 2, a lower bound on |q_star|^2 / 2 for mu >= 0.
double dual_value(const Matrix& rows, const Vector& mu) {
  return mu.sum() - 0.5 * (rows.transpose() * mu).squaredNorm();
}

struct Refined {
  Vector q;
  Vector mu;
  bool ok = false;
};

// Least-norm solution of N_A q = 1 on the current support of the multipliers.
Refined refine_on_support(const Matrix& rows, const Vector& mu) {
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (mu(i) > 0.0) active.push_back(i);
  Refined out;
  if (active.empty()) return out;
  Matrix na(static_cast<Eigen::Index>(active.size()), rows.cols());
  for (std::size_t i = 0; i < active.size(); ++i)
    na.row(static_cast<Eigen::Index>(i)) = rows.row(active[i]);
  const Vector ones = Vector::Ones(na.rows());
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(na);
  out.q = cod.solve(ones);
  if ((na * out.q - ones).lpNorm<Eigen::Infinity>() > 1e-12) return out;
  out.mu = Vector::Zero(rows.rows());
  if (cod.rank() == na.rows()) {
    Eigen::LDLT<Matrix> gram(na * na.transpose());
    const Vector y = gram.solve(ones);
    if (y.minCoeff() >= 0.0)
      for (std::size_t i = 0; i < active.size(); ++i) out.mu(active[i]) = y(static_cast<Eigen::Index>(i));
  }
  out.ok = true;
  return out;
}

}  // namespace

ProjectionResult project_origin_k1(const PolyhedralCone& cone, double tolerance, int max_sweeps) {
  if (!(tolerance > 0.0)) throw DomainError("projection tolerance must be positive");
  const Matrix& rows = cone.normal_matrix();
  const Eigen::Index m = rows.rows();
  Vector mu = Vector::Zero(m);
  Vector q = Vector::Zero(rows.cols());

  auto certified = [&](const Vector& candidate, const Vector& dual) {
    const double margin = (rows * candidate).minCoeff();
    if (!(margin > 0.0)) return false;
    const Vector feasible = candidate / margin;
    const double primal = 0.5 * feasible.squaredNorm();
    return primal - dual_value(rows, dual) <= tolerance * std::max(1.0, primal);
  };

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double step = std::max(-mu(i), 1.0 - rows.row(i).dot(q));
      mu(i) += step;
      q += step * rows.row(i).transpose();
    }
    if (sweep % 64 == 0) q = rows.transpose() * mu;

    const double margin = (rows * q).minCoeff();
    if (margin > 0.0 && certified(q, mu)) {
      ProjectionResult r;
      r.q_star = q / margin;
      r.multipliers.assign(mu.data(), mu.data() + m);
      r.iterations = sweep;
      return r;
    }
    if (sweep % 8 == 0) {
      Refined ref = refine_on_support(rows, mu);
      if (ref.ok && (rows * ref.q).minCoeff() >= 1.0 - 1e-13) {
        const Vector& dual = ref.mu.size() == m && ref.mu.sum() > 0.0 ? ref.mu : mu;
        if (certified(ref.q, dual)) {
          ProjectionResult r;
          r.q_star = ref.q;
          r.multipliers.assign(dual.data(), dual.data() + m);
          r.iterations = sweep;
          return r;
        }
      }
    }
  }
  throw SolverError("projection onto K_1 did not converge in " + std::to_string(max_sweeps) +
                    " sweeps (min face value " + std::to_string((rows * q).minCoeff()) + ")");
}

Vector project_origin_k1_exhaustive(const PolyhedralCone& cone) {
  const Matrix& rows = cone.normal_matrix();
  const int m = cone.facet_count();
  const int max_size = std::min(m, cone.ambient_dim());
  if (m > 30) throw DomainError("exhaustive projection is limited to 30 facets");

  Vector best;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> subset;
  for (unsigned long mask = 1; mask < (1UL << m); ++mask) {
    if (std::popcount(mask) > max_size) continue;
    subset.clear();
    for (int i = 0; i < m; ++i)
      if (mask & (1UL << i)) subset.push_back(i);
    Matrix ns(static_cast<Eigen::Index>(subset.size()), rows.cols());
    for (std::size_t i = 0; i < subset.size(); ++i) ns.row(static_cast<Eigen::Index>(i)) = rows.row(subset[i]);
    const Matrix gram = ns * ns.transpose();
    Eigen::FullPivLU<Matrix> lu(gram);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) continue;
    const Vector q = ns.transpose() * lu.solve(Vector::Ones(ns.rows()));
    if ((rows * q).minCoeff() < 1.0 - 1e-9) continue;
    const double norm = q.norm();
    if (norm < best_norm) {
      best_norm = norm;
      best = q;
    }
  }
  if (!std::isfinite(best_norm)) throw SolverError("no feasible active set found for K_1");
  return best;
}

EscapeCertificate escape_rate(const PolyhedralCone& cone, ProjectionMethod method, double tolerance) {
  Vector q = method == ProjectionMethod::iterative ? project_origin_k1(cone, tolerance).q_star
                                                   : project_origin_k1_exhaustive(cone);
  const double norm = q.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw SolverError("degenerate projection of the origin onto K_1");
  return {q / norm, 1.0 / norm, std::move(q)};
}

Escaper make_escaper(const Vector& p, const EscapeCertificate& cert, const PolyhedralCone& cone,
                     double level) {
  if (!(level > 0.0)) throw DomainError("escape level t must be positive");
  if (p.size() != cone.ambient_dim()) throw ShapeError("escaper origin dimension does not match cone");
  Escaper e;
  e.origin = p;
  e.direction = cert.direction;
  e.rate = cert.rate;
  e.level = level;
  e.start_distance = dist_to_cone_boundary(p, cone);
  if (e.start_distance < level) {
    const Vector at_p = cone.normal_matrix() * p;
    const Vector along_v = cone.normal_matrix() * cert.direction;
    double s = 0.0;
    for (Eigen::Index i = 0; i < at_p.size(); ++i) s = std::max(s, (level - at_p(i)) / along_v(i));
    e.exit_arclength = s;
  }
  return e;
}

PolyhedralCone appendix_b_cone(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("cone z >= a|x|, z >= b|y| needs a > 0 and b > 0");
  const double sa = std::sqrt(a * a + 1.0), sb = std::sqrt(b * b + 1.0);
  std::vector<Vector> normals;
  for (double sign : {1.0, -1.0}) normals.push_back(Eigen::Vector3d(sign * a, 0.0, 1.0) / sa);
  for (double sign : {1.0, -1.0}) normals.push_back(Eigen::Vector3d(0.0, sign * b, 1.0) / sb);
  return PolyhedralCone(std::move(normals));
}

CrossSection appendix_b_cross_section(double a, double b, double z) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("cone z >= a|x|, z >= b|y| needs a > 0 and b > 0");
  CrossSection c;
  c.z = z;
  c.x_halfwidth = (z - std::sqrt(a * a + 1.0)) / a;
  c.y_halfwidth = (z - std::sqrt(b * b + 1.0)) / b;
  c.aspect_ratio = c.x_halfwidth / c.y_halfwidth;
  return c;
}

}  // namespace jmcert
