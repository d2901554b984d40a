#include "jmcert/arrangement.hpp"

#include "jmcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace jmcert {

namespace {

constexpr double kBasisTolerance = 1e-9;

Matrix stack(const std::vector<Vector>& vs) {
  Matrix m(static_cast<Eigen::Index>(vs.size()), vs.front().size());
  for (std::size_t i = 0; i < vs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  return m;
}

std::vector<Vector> signed_normals(const std::vector<Vector>& normals, const std::vector<int>& signs) {
  std::vector<Vector> out;
  out.reserve(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) out.push_back(static_cast<double>(signs[i]) * normals[i]);
  return out;
}

}  // namespace

SubspaceArrangement::SubspaceArrangement(int ambient_dim, std::vector<Matrix> complement_bases)
    : dim_(ambient_dim), complements_(std::move(complement_bases)) {
  if (dim_ < 1) throw DomainError("ambient dimension must be >= 1");
  if (complements_.empty()) throw DomainError("subspace arrangement is empty");
  for (std::size_t i = 0; i < complements_.size(); ++i) {
    const Matrix& b = complements_[i];
    if (b.cols() != dim_) throw ShapeError("complement basis " + std::to_string(i) + " has wrong width");
    if (b.rows() < 1 || b.rows() > dim_)
      throw DomainError("subspace " + std::to_string(i) + " must have codimension in [1, D]");
    const Matrix gram = b * b.transpose();
    if ((gram - Matrix::Identity(b.rows(), b.rows())).cwiseAbs().maxCoeff() > kBasisTolerance)
      throw DomainError("complement basis " + std::to_string(i) + " is not orthonormal");
  }
  for (std::size_t i = 0; i < complements_.size(); ++i) {
    for (std::size_t j = 0; j < complements_.size(); ++j) {
      if (i == j) continue;
      // L_i within L_j  <=>  complement(L_j) within complement(L_i)
      const Matrix& bi = complements_[i];
      const Matrix& bj = complements_[j];
      const Matrix residual = bj - bj * bi.transpose() * bi;
      if (residual.cwiseAbs().maxCoeff() <= kBasisTolerance)
        throw DegenerateError("subspace " + std::to_string(i) + " is contained in subspace " +
                              std::to_string(j));
    }
  }
}

double SubspaceArrangement::dist_to_subspace(const Vector& q, int i) const {
  if (q.size() != dim_) throw ShapeError("point dimension does not match arrangement");
  return (complements_.at(static_cast<std::size_t>(i)) * q).norm();
}

double SubspaceArrangement::dist(const Vector& q) const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i) best = std::min(best, dist_to_subspace(q, i));
  return best;
}

HyperplaneArrangement::HyperplaneArrangement(std::vector<Vector> normals) : normals_(std::move(normals)) {
  if (normals_.empty()) throw DomainError("hyperplane arrangement is empty");
  dim_ = static_cast<int>(normals_.front().size());
  if (dim_ < 1) throw ShapeError("hyperplane normals must be nonempty vectors");
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    Vector& n = normals_[i];
    if (n.size() != dim_) throw ShapeError("hyperplane normals have inconsistent dimensions");
    const double len = n.norm();
    if (!std::isfinite(len) || std::abs(len - 1.0) > kNormalTolerance)
      throw DomainError("normal " + std::to_string(i) + " has length " + std::to_string(len) +
                        "; unit normals are required");
    n /= len;
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(normals_[j].dot(n)) >= 1.0 - kDuplicateCosine)
        throw DegenerateError("hyperplanes " + std::to_string(j) + " and " + std::to_string(i) +
                              " coincide");
    }
  }
  rows_ = stack(normals_);
}

double HyperplaneArrangement::dist(const Vector& q) const {
  if (q.size() != dim_) throw ShapeError("point dimension does not match arrangement");
  return (rows_ * q).cwiseAbs().minCoeff();
}

std::string LiftRule::name() const {
  if (kind == Kind::custom) return "custom";
  return basis_index == 0 ? "first-axis" : "axis-" + std::to_string(basis_index);
}

HyperplaneArrangement lift_to_hyperplanes(const SubspaceArrangement& arr, const LiftRule& rule) {
  std::vector<Vector> normals;
  normals.reserve(static_cast<std::size_t>(arr.size()));
  if (rule.kind == LiftRule::Kind::custom &&
      rule.custom_directions.size() != static_cast<std::size_t>(arr.size()))
    throw DomainError("custom lift rule needs one direction per subspace");
  for (int i = 0; i < arr.size(); ++i) {
    const Matrix& b = arr.complement_bases()[static_cast<std::size_t>(i)];
    Vector n;
    if (rule.kind == LiftRule::Kind::basis_vector) {
      if (rule.basis_index < 0 || rule.basis_index >= b.rows())
        throw DomainError("lift basis index " + std::to_string(rule.basis_index) +
                          " exceeds codimension of subspace " + std::to_string(i));
      n = b.row(rule.basis_index).transpose();
    } else {
      const Vector& d = rule.custom_directions[static_cast<std::size_t>(i)];
      if (d.size() != arr.ambient_dim()) throw ShapeError("custom lift direction has wrong dimension");
      n = b.transpose() * (b * d);
      const double len = n.norm();
      if (!(len > 1e-12))
        throw DegenerateError("custom lift direction " + std::to_string(i) +
                              " is orthogonal to the complement of its subspace");
      n /= len;
    }
    normals.push_back(std::move(n));
  }
  try {
    return HyperplaneArrangement(std::move(normals));
  } catch (const DegenerateError& e) {
    throw DegenerateError(std::string("degenerate lift: ") + e.what() + "; vary the lift rule");
  }
}

SubspaceArrangement collision_arrangement(const MassSystem& sys) {
  const int d = sys.dim();
  std::vector<Matrix> bases;
  for (auto [a, b] : sys.pairs()) {
    Matrix basis = Matrix::Zero(d, sys.ambient_dim());
    const double ia = 1.0 / std::sqrt(sys.mass(a)), ib = 1.0 / std::sqrt(sys.mass(b));
    const double scale = 1.0 / std::sqrt(ia * ia + ib * ib);
    for (int k = 0; k < d; ++k) {
      basis(k, a * d + k) = ia * scale;
      basis(k, b * d + k) = -ib * scale;
    }
    bases.push_back(std::move(basis));
  }
  return SubspaceArrangement(sys.ambient_dim(), std::move(bases));
}

std::vector<Chamber> enumerate_chambers(const HyperplaneArrangement& arr, int max_hyperplanes) {
  if (arr.size() > max_hyperplanes)
    throw DomainError("arrangement has " + std::to_string(arr.size()) +
                      " hyperplanes, above the enumeration cap of " + std::to_string(max_hyperplanes) +
                      "; use sampled mode");
  const auto& normals = arr.normals();
  const std::size_t k = normals.size();
  std::vector<Chamber> out;
  std::vector<int> signs;
  std::vector<Vector> prefix;

  auto descend = [&](auto&& self) -> void {
    if (signs.size() == k) {
      out.push_back(Chamber{signs, PolyhedralCone(prefix), true});
      return;
    }
    const Vector& n = normals[signs.size()];
    for (int s : {+1, -1}) {
      signs.push_back(s);
      prefix.push_back(static_cast<double>(s) * n);
      if (interior_witness(prefix).margin > kInteriorMargin) self(self);
      prefix.pop_back();
      signs.pop_back();
    }
  };
  descend(descend);
  return out;
}

SampledChambers sample_chambers(const HyperplaneArrangement& arr, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::set<std::vector<int>> seen;
  Vector x(arr.ambient_dim());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
    const Vector vals = arr.normal_matrix() * x;
    std::vector<int> sig(static_cast<std::size_t>(vals.size()));
    bool on_plane = false;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (vals(i) == 0.0) on_plane = true;
      sig[static_cast<std::size_t>(i)] = vals(i) > 0.0 ? 1 : -1;
    }
    if (!on_plane) seen.insert(std::move(sig));
  }
  return {std::vector<std::vector<int>>(seen.begin(), seen.end()), false};
}

GlobalEscapeRate global_escape_rate(const HyperplaneArrangement& arr, int max_hyperplanes,
                                    double tolerance) {
  return EscapeGame(arr, max_hyperplanes, tolerance).rates();
}

double braid_rate_equal_masses(const MassSystem& sys, const LiftRule& rule) {
  const auto masses = sys.masses();
  for (double m : masses)
    if (std::abs(m - masses.front()) > 1e-12 * masses.front())
      throw DomainError("braid symmetry shortcut requires equal masses");
  if (rule.kind != LiftRule::Kind::basis_vector)
    throw DomainError("braid symmetry shortcut requires a coordinate-axis lift");
  const HyperplaneArrangement lifted = lift_to_hyperplanes(collision_arrangement(sys), rule);
  // Pairs are a < b, and <n_ab, x> has the sign of q_a - q_b along the axis:
  // the ordering q_1 < ... < q_N has all signs negative.
  std::vector<int> signs(static_cast<std::size_t>(lifted.size()), -1);
  return escape_rate(PolyhedralCone(signed_normals(lifted.normals(), signs))).rate;
}

EscapeGame::EscapeGame(HyperplaneArrangement arr, int max_hyperplanes, double tolerance)
    : arr_(std::move(arr)) {
  chambers_ = enumerate_chambers(arr_, max_hyperplanes);
  rates_.rate = std::numeric_limits<double>::infinity();
  for (const Chamber& c : chambers_) {
    rates_.per_chamber.push_back({c.signs, escape_rate(c.cone, ProjectionMethod::iterative, tolerance)});
    if (rates_.per_chamber.back().certificate.rate < rates_.rate) {
      rates_.rate = rates_.per_chamber.back().certificate.rate;
      rates_.slowest = static_cast<int>(rates_.per_chamber.size()) - 1;
    }
  }
  if (!(rates_.rate > 0.0)) throw SolverError("no chamber with positive escape rate");
}

int EscapeGame::chamber_for(const Vector& q, TieBreak tie) const {
  if (q.size() != arr_.ambient_dim()) throw ShapeError("point dimension does not match arrangement");
  const Vector vals = arr_.normal_matrix() * q;
  int chosen = -1;
  for (std::size_t c = 0; c < chambers_.size(); ++c) {
    const auto& signs = chambers_[c].signs;
    bool in_closure = true;
    for (std::size_t i = 0; i < signs.size() && in_closure; ++i)
      in_closure = static_cast<double>(signs[i]) * vals(static_cast<Eigen::Index>(i)) >= -kConeTolerance;
    if (!in_closure) continue;
    if (chosen < 0) {
      chosen = static_cast<int>(c);
      continue;
    }
    const double rc = rates_.per_chamber[c].certificate.rate;
    const double rb = rates_.per_chamber[static_cast<std::size_t>(chosen)].certificate.rate;
    const double slack = 1e-12 * std::max(rc, rb);
    const bool better = tie == TieBreak::max_rate ? rc > rb + slack : rc < rb - slack;
    const bool tied = std::abs(rc - rb) <= slack;
    if (better || (tied && signs < chambers_[static_cast<std::size_t>(chosen)].signs))
      chosen = static_cast<int>(c);
  }
  if (chosen < 0) throw SolverError("point lies in no enumerated chamber");
  return chosen;
}

Escaper EscapeGame::escaper_from_point(const Vector& q, double level, TieBreak tie) const {
  const auto c = static_cast<std::size_t>(chamber_for(q, tie));
  return make_escaper(q, rates_.per_chamber[c].certificate, chambers_[c].cone, level);
}

Escaper escaper_from_point(const Vector& q, const HyperplaneArrangement& arr, double level, TieBreak tie) {
  return EscapeGame(arr).escaper_from_point(q, level, tie);
}

}  // namespace jmcert
