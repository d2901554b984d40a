#pragma once

#include "jmcert/nbody.hpp"

#include <vector>

namespace jmcert {

/// Absolute tolerance on constraint violations <n_i, q> >= -tau.
inline constexpr double kConeTolerance = 1e-9;
/// Normals whose length deviates from 1 by more than this are rejected.
inline constexpr double kNormalTolerance = 1e-6;
/// Normals with cosine similarity above 1 - kDuplicateCosine are merged.
inline constexpr double kDuplicateCosine = 1e-12;
/// An interior witness must clear every face by more than this.
inline constexpr double kInteriorMargin = 1e-10;
/// Default convergence threshold of the iterative projector.
inline constexpr double kProjectionTolerance = 1e-10;

/// Minimum-norm point of the convex hull of a finite point set (Wolfe's algorithm).
struct MinNormPoint {
  Vector point;
  std::vector<double> weights;  // convex combination coefficients, one per input point
};
MinNormPoint min_norm_point(const std::vector<Vector>& points, double tolerance = 1e-14);

/// Largest margin min_i <n_i, v> over unit vectors v, with the maximizing v.
///
/// Computed as the minimum-norm point of conv{n_i}; a positive margin certifies
/// that the cone {<n_i, q> >= 0} has nonempty interior.
struct InteriorWitness {
  Vector direction;
  double margin;
};
InteriorWitness interior_witness(const std::vector<Vector>& normals);

/// Closed polyhedral cone K = {q : <n_i, q> >= 0 for all i} with unit inward normals.
class PolyhedralCone {
 public:
  /// Validates normals (unit length within kNormalTolerance, common dimension),
  /// renormalizes, merges duplicates, and certifies a nonempty interior.
  explicit PolyhedralCone(std::vector<Vector> normals);

  int ambient_dim() const { return dim_; }
  int facet_count() const { return static_cast<int>(normals_.size()); }
  const std::vector<Vector>& normals() const { return normals_; }
  /// Normals stacked as rows.
  const Matrix& normal_matrix() const { return rows_; }
  /// Interior direction found during certification.
  const InteriorWitness& witness() const { return witness_; }

  bool contains(const Vector& q, double tolerance = kConeTolerance) const;
  /// min_i <n_i, q>, without a membership check.
  double min_face_value(const Vector& q) const;

 private:
  std::vector<Vector> normals_;
  Matrix rows_;
  int dim_ = 0;
  InteriorWitness witness_;
};

/// K_t = {q : <n_i, q> >= t for all i}, the points of K at boundary distance >= t.
class EquidistantPolyhedron {
 public:
  EquidistantPolyhedron(PolyhedralCone parent, double level);
  const PolyhedralCone& parent() const { return parent_; }
  double level() const { return level_; }
  bool contains(const Vector& q, double tolerance = 0.0) const;

 private:
  PolyhedralCone parent_;
  double level_;
};

/// Translational escape direction for a cone and its certified rate.
struct EscapeCertificate {
  Vector direction;  // unit, interior to K
  double rate;       // min_i <n_i, direction> = 1 / |q_star|
  Vector q_star;     // closest point of K_1 to the origin
};

/// Ray p + s v leaving the t-neighbourhood of a boundary set at a certified rate.
struct Escaper {
  Vector origin;
  Vector direction;
  double rate = 0.0;
  double level = 0.0;           // t
  double start_distance = 0.0;  // distance of origin from the boundary set
  double exit_arclength = 0.0;  // first s with distance >= t

  Vector point(double s) const { return origin + s * direction; }
};

/// min_i <n_i, q>; throws OutsideConeError when q violates a face by more than tau.
double dist_to_cone_boundary(const Vector& q, const PolyhedralCone& cone,
                             double tolerance = kConeTolerance);

struct ProjectionResult {
  Vector q_star;
  std::vector<double> multipliers;
  int iterations = 0;
};

/// Closest point of K_1 to the origin by dual coordinate ascent (Hildreth) with
/// a final active-set refinement. Throws SolverError when not converged.
ProjectionResult project_origin_k1(const PolyhedralCone& cone,
                                   double tolerance = kProjectionTolerance,
                                   int max_sweeps = 200000);

/// Closest point of K_1 to the origin by enumerating every candidate active set
/// of linearly independent normals. Exponential in the facet count.
Vector project_origin_k1_exhaustive(const PolyhedralCone& cone);

enum class ProjectionMethod { iterative, exhaustive };

EscapeCertificate escape_rate(const PolyhedralCone& cone,
                              ProjectionMethod method = ProjectionMethod::iterative,
                              double tolerance = kProjectionTolerance);

/// Builds the escaper p + s v for `cert`. Requires p in K; `level` > 0.
Escaper make_escaper(const Vector& p, const EscapeCertificate& cert, const PolyhedralCone& cone,
                     double level);

/// Cone z >= a|x|, z >= b|y| in R^3.
PolyhedralCone appendix_b_cone(double a, double b);

/// Cross-section of K_1 for the cone z >= a|x|, z >= b|y| at height z.
struct CrossSection {
  double z;
  double x_halfwidth;  // negative when the section is empty
  double y_halfwidth;
  double aspect_ratio;  // x_halfwidth / y_halfwidth
};
CrossSection appendix_b_cross_section(double a, double b, double z);

}  // namespace jmcert
