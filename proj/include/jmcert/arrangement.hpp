#pragma once

#include "jmcert/cone.hpp"
#include "jmcert/nbody.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace jmcert {

/// Finitely many proper linear subspaces L_i of R^D, none containing another.
/// Each L_i is stored as an orthonormal basis (rows) of its orthogonal complement.
class SubspaceArrangement {
 public:
  SubspaceArrangement(int ambient_dim, std::vector<Matrix> complement_bases);

  int ambient_dim() const { return dim_; }
  int size() const { return static_cast<int>(complements_.size()); }
  const std::vector<Matrix>& complement_bases() const { return complements_; }

  double dist_to_subspace(const Vector& q, int i) const;
  /// min_i dist(q, L_i)
  double dist(const Vector& q) const;

 private:
  int dim_;
  std::vector<Matrix> complements_;
};

/// Central hyperplane arrangement {<n_i, q> = 0} with unit normals.
class HyperplaneArrangement {
 public:
  explicit HyperplaneArrangement(std::vector<Vector> normals);

  int ambient_dim() const { return dim_; }
  int size() const { return static_cast<int>(normals_.size()); }
  const std::vector<Vector>& normals() const { return normals_; }
  const Matrix& normal_matrix() const { return rows_; }

  /// min_i |<n_i, q>|
  double dist(const Vector& q) const;

 private:
  int dim_;
  std::vector<Vector> normals_;
  Matrix rows_;
};

/// How a hyperplane H_i containing L_i is picked.
///
/// `basis_vector` uses row `basis_index` of L_i's complement basis as the normal; for
/// the collision arrangement that row is the coordinate axis `basis_index`
/// ("first-axis" when 0). `custom` projects a caller-supplied direction per subspace
/// onto the complement of L_i.
struct LiftRule {
  enum class Kind { basis_vector, custom };
  Kind kind = Kind::basis_vector;
  int basis_index = 0;
  std::vector<Vector> custom_directions;

  static LiftRule first_axis() { return {}; }
  std::string name() const;
};

HyperplaneArrangement lift_to_hyperplanes(const SubspaceArrangement& arr, const LiftRule& rule);

/// Collision locus of `sys` in mass-weighted coordinates (see to_mass_weighted);
/// subspace i corresponds to sys.pairs()[i], complement rows ordered by axis.
SubspaceArrangement collision_arrangement(const MassSystem& sys);

/// One connected component of the complement of an arrangement.
struct Chamber {
  std::vector<int> signs;  // +1 / -1 per hyperplane
  PolyhedralCone cone;     // normals signs[i] * n_i
  bool feasible = true;
};

/// Default cap on hyperplane count for exhaustive chamber enumeration.
inline constexpr int kMaxHyperplanes = 20;

/// All chambers, by depth-first extension of sign prefixes with an interior
/// feasibility check at each node. Throws DomainError when size() > max_hyperplanes.
std::vector<Chamber> enumerate_chambers(const HyperplaneArrangement& arr,
                                        int max_hyperplanes = kMaxHyperplanes);

/// Sign vectors met by random Gaussian points; may miss thin chambers.
struct SampledChambers {
  std::vector<std::vector<int>> signs;
  bool complete = false;  // never claimed; sampling cannot prove completeness
};
SampledChambers sample_chambers(const HyperplaneArrangement& arr, int samples, std::uint64_t seed);

struct ChamberRate {
  std::vector<int> signs;
  EscapeCertificate certificate;
};

struct GlobalEscapeRate {
  double rate = 0.0;
  std::vector<ChamberRate> per_chamber;
  int slowest = -1;  // index into per_chamber
};

GlobalEscapeRate global_escape_rate(const HyperplaneArrangement& arr,
                                    int max_hyperplanes = kMaxHyperplanes,
                                    double tolerance = kProjectionTolerance);

/// Escape rate of the chamber x_1 < ... < x_N of the lifted collision arrangement.
/// Valid only for equal masses, where all chambers are congruent; throws otherwise.
double braid_rate_equal_masses(const MassSystem& sys, const LiftRule& rule = LiftRule::first_axis());

/// How a point on several closed chambers picks one.
enum class TieBreak { max_rate, min_rate };

/// Enumerated chambers and their certificates; answers escaper queries.
class EscapeGame {
 public:
  explicit EscapeGame(HyperplaneArrangement arr, int max_hyperplanes = kMaxHyperplanes,
                      double tolerance = kProjectionTolerance);

  const HyperplaneArrangement& arrangement() const { return arr_; }
  const std::vector<Chamber>& chambers() const { return chambers_; }
  const GlobalEscapeRate& rates() const { return rates_; }
  double global_rate() const { return rates_.rate; }

  /// Index of the chamber chosen for q among those whose closure contains it.
  int chamber_for(const Vector& q, TieBreak tie = TieBreak::max_rate) const;
  Escaper escaper_from_point(const Vector& q, double level, TieBreak tie = TieBreak::max_rate) const;

 private:
  HyperplaneArrangement arr_;
  std::vector<Chamber> chambers_;
  GlobalEscapeRate rates_;
};

Escaper escaper_from_point(const Vector& q, const HyperplaneArrangement& arr, double level,
                           TieBreak tie = TieBreak::max_rate);

}  // namespace jmcert
