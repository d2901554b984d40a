#include "jmcert/arrangement.hpp"
#include "jmcert/errors.hpp"
#include "jmcert/sampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace jmcert;

namespace {

std::vector<int> sign_vector(const HyperplaneArrangement& arr, const Vector& x) {
  std::vector<int> s;
  for (const Vector& n : arr.normals()) s.push_back(n.dot(x) > 0 ? 1 : -1);
  return s;
}

std::set<std::vector<int>> enumerated_signs(const HyperplaneArrangement& arr) {
  std::set<std::vector<int>> out;
  for (const Chamber& c : enumerate_chambers(arr)) out.insert(c.signs);
  return out;
}

HyperplaneArrangement coordinate_arrangement(int n) {
  std::vector<Vector> normals;
  for (int i = 0; i < n; ++i) normals.push_back(Vector::Unit(n, i));
  return HyperplaneArrangement(normals);
}

HyperplaneArrangement two_lines(double theta) {
  return HyperplaneArrangement({Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(std::sin(theta), -std::cos(theta))});
}

// Exact distance to the linear span {x : B x = 0} of an orthonormal-row complement B.
double subspace_distance(const Matrix& complement, const Vector& x) { return (complement * x).norm(); }

MassSystem random_system(Rng& rng, int n, int d) {
  std::uniform_real_distribution<double> mass(0.2, 4.0);
  std::vector<double> ms(static_cast<std::size_t>(n));
  for (double& m : ms) m = mass(rng);
  return MassSystem(ms, d);
}

}  // namespace

TEST(Arrangement, RejectsInvalidInput) {
  EXPECT_THROW(HyperplaneArrangement({Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(-1.0, 0.0)}), DegenerateError);
  EXPECT_THROW(HyperplaneArrangement({Eigen::Vector2d(2.0, 0.0)}), ValidationError);
  Matrix line(1, 2);
  line << 1.0, 0.0;
  Matrix plane = Matrix::Identity(2, 2);
  EXPECT_THROW(SubspaceArrangement(2, {line, plane}), DegenerateError);
  Matrix skew(1, 2);
  skew << 2.0, 0.0;
  EXPECT_THROW(SubspaceArrangement(2, {skew}), ValidationError);
}

TEST(Lift, HyperplaneSubspaceIsIdentity) {
  Matrix row(1, 3);
  row << 0.0, 0.6, 0.8;
  const HyperplaneArrangement lifted = lift_to_hyperplanes(SubspaceArrangement(3, {row}), LiftRule::first_axis());
  ASSERT_EQ(lifted.size(), 1);
  EXPECT_LT((lifted.normals()[0] - Vector(row.row(0).transpose())).norm(), 1e-15);
}

TEST(Lift, CollisionNormalsAnnihilatePairSubspaces) {
  Rng rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4, d = 1 + trial % 3;
    const MassSystem sys = random_system(rng, n, d);
    const SubspaceArrangement arr = collision_arrangement(sys);
    const HyperplaneArrangement lifted = lift_to_hyperplanes(arr, LiftRule::first_axis());
    const auto pairs = sys.pairs();
    ASSERT_EQ(lifted.size(), static_cast<int>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [a, b] = pairs[i];
      // Basis of {q_a = q_b} in ordinary coordinates, mapped to weighted ones.
      for (int k = 0; k < d; ++k) {
        Configuration h(n, d);
        h.body(a)[k] = 1.0;
        h.body(b)[k] = 1.0;
        EXPECT_NEAR(lifted.normals()[i].dot(to_mass_weighted(h, sys)), 0.0, 1e-14);
        for (int c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          Configuration g(n, d);
          g.body(c)[k] = 1.0;
          EXPECT_EQ(lifted.normals()[i].dot(to_mass_weighted(g, sys)), 0.0);
        }
      }
      // Normal is the weighted image of the gradient of (q_a - q_b) . e_1.
      const Vector& nv = lifted.normals()[i];
      Configuration expect(n, d);
      expect.body(a)[0] = 1.0 / sys.mass(a);
      expect.body(b)[0] = -1.0 / sys.mass(b);
      Vector w = to_mass_weighted(expect, sys);
      w.normalize();
      EXPECT_LT((nv - w).norm(), 1e-14);
    }
  }
}

TEST(Lift, SubspaceDistanceMatchesPairFormula) {
  Rng rng(83);
  const MassSystem sys = random_system(rng, 4, 2);
  const SubspaceArrangement arr = collision_arrangement(sys);
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration q = random_configuration(rng, sys);
    EXPECT_NEAR(arr.dist(to_mass_weighted(q, sys)), dist_to_collision_locus(q, sys), 1e-12);
  }
}

TEST(Lift, DistanceDominance) {
  Rng rng(89);
  for (int trial = 0; trial < 20; ++trial) {
    const MassSystem sys = random_system(rng, 2 + trial % 4, 1 + trial % 3);
    const SubspaceArrangement arr = collision_arrangement(sys);
    const HyperplaneArrangement lifted = lift_to_hyperplanes(arr, LiftRule::first_axis());
    for (int k = 0; k < 50; ++k) {
      const Vector x = random_gaussian(rng, sys.ambient_dim());
      double exact = INFINITY;
      for (const Matrix& c : arr.complement_bases()) exact = std::min(exact, subspace_distance(c, x));
      EXPECT_LE(lifted.dist(x), exact + 1e-14);
    }
  }
}

TEST(Lift, CustomRuleAndDegenerateLift) {
  // Two lines in R^3 (the x and y axes) lifted to planes.
  Matrix x_axis(2, 3), y_axis(2, 3);
  x_axis << 0, 1, 0, 0, 0, 1;
  y_axis << 1, 0, 0, 0, 0, 1;
  const SubspaceArrangement arr(3, {x_axis, y_axis});
  LiftRule rule;
  rule.kind = LiftRule::Kind::custom;
  rule.custom_directions = {Eigen::Vector3d(1.0, 1.0, 1.0), Eigen::Vector3d(1.0, -1.0, 1.0)};
  const HyperplaneArrangement lifted = lift_to_hyperplanes(arr, rule);
  EXPECT_LT((lifted.normals()[0] - Vector(Eigen::Vector3d(0, 1, 1) / std::sqrt(2.0))).norm(), 1e-14);
  EXPECT_LT((lifted.normals()[1] - Vector(Eigen::Vector3d(1, 0, 1) / std::sqrt(2.0))).norm(), 1e-14);
  EXPECT_EQ(rule.name(), "custom");
  // Second row of each basis is e_3 for both: coincident planes.
  LiftRule second;
  second.basis_index = 1;
  EXPECT_THROW(lift_to_hyperplanes(arr, second), DegenerateError);
  rule.custom_directions = {Eigen::Vector3d(1.0, 0.0, 0.0), Eigen::Vector3d(0.0, 0.0, 1.0)};
  EXPECT_THROW(lift_to_hyperplanes(arr, rule), DegenerateError);  // first direction lies in the x axis
}

TEST(Chambers, PerpendicularLines) {
  const auto chambers = enumerate_chambers(coordinate_arrangement(2));
  EXPECT_EQ(chambers.size(), 4u);
}

TEST(Chambers, CoordinateHyperplanes) {
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(enumerate_chambers(coordinate_arrangement(n)).size(), std::size_t{1} << n);
  }
}

TEST(Chambers, GenericLinesInPlaneMatchSampling) {
  Rng rng(97);
  for (int k = 1; k <= 8; ++k) {
    std::vector<Vector> normals;
    for (int i = 0; i < k; ++i) {
      const double phi = std::numbers::pi * (i + 0.3 * std::uniform_real_distribution<double>(0, 1)(rng)) / k;
      normals.push_back(Eigen::Vector2d(std::cos(phi), std::sin(phi)));
    }
    const HyperplaneArrangement arr(normals);
    std::set<std::vector<int>> sampled;
    for (int s = 0; s < 20000; ++s) sampled.insert(sign_vector(arr, random_gaussian(rng, 2)));
    EXPECT_EQ(enumerated_signs(arr), sampled);
    EXPECT_EQ(sampled.size(), static_cast<std::size_t>(2 * k));
  }
}

TEST(Chambers, PartitionProperty) {
  Rng rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vector> normals;
    const int dim = 2 + trial % 3;
    for (int i = 0; i < 3 + trial; ++i) normals.push_back(random_unit(rng, dim));
    const HyperplaneArrangement arr(normals);
    const auto chambers = enumerate_chambers(arr);
    std::set<std::vector<int>> signs;
    for (const auto& c : chambers) {
      EXPECT_TRUE(c.feasible);
      EXPECT_TRUE(c.cone.contains(c.cone.witness().direction, 0.0));
      signs.insert(c.signs);
    }
    EXPECT_EQ(signs.size(), chambers.size());
    for (int k = 0; k < 1000 / 6; ++k) {
      const Vector x = random_gaussian(rng, dim);
      const auto s = sign_vector(arr, x);
      const auto it = std::find_if(chambers.begin(), chambers.end(), [&](const Chamber& c) { return c.signs == s; });
      ASSERT_NE(it, chambers.end());
      EXPECT_TRUE(it->cone.contains(x, 0.0));
    }
  }
}

TEST(Chambers, CapRefusalAndSampling) {
  Rng rng(103);
  std::vector<Vector> normals;
  for (int i = 0; i < 21; ++i) normals.push_back(random_unit(rng, 3));
  const HyperplaneArrangement arr(normals);
  EXPECT_THROW(enumerate_chambers(arr), DomainError);
  EXPECT_NO_THROW(enumerate_chambers(arr, 21));
  const SampledChambers sampled = sample_chambers(arr, 2000, 5);
  EXPECT_FALSE(sampled.complete);
  EXPECT_FALSE(sampled.signs.empty());
  EXPECT_EQ(sample_chambers(arr, 2000, 5).signs, sampled.signs);
}

TEST(GlobalRate, ClosedForms) {
  EXPECT_NEAR(global_escape_rate(HyperplaneArrangement({Eigen::Vector3d(0, 0, 1)})).rate, 1.0, 1e-9);
  for (int n = 1; n <= 5; ++n) {
    const auto g = global_escape_rate(coordinate_arrangement(n));
    EXPECT_NEAR(g.rate, 1.0 / std::sqrt(n), 1e-9);
    for (const auto& c : g.per_chamber) EXPECT_NEAR(c.certificate.rate, 1.0 / std::sqrt(n), 1e-9);
  }
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
    const auto g = global_escape_rate(two_lines(theta));
    EXPECT_NEAR(g.rate, std::sin(theta / 2), 1e-9);
    ASSERT_EQ(g.per_chamber.size(), 4u);
    int acute = 0;
    for (const auto& c : g.per_chamber) {
      const double r = c.certificate.rate;
      EXPECT_TRUE(std::abs(r - std::sin(theta / 2)) < 1e-9 || std::abs(r - std::cos(theta / 2)) < 1e-9);
      acute += std::abs(r - std::sin(theta / 2)) < 1e-9;
    }
    EXPECT_EQ(acute, 2);
    EXPECT_NEAR(g.per_chamber[static_cast<std::size_t>(g.slowest)].certificate.rate, g.rate, 0.0);
  }
}

TEST(GlobalRate, PositiveAndMonotoneUnderRefinement) {
  Rng rng(107);
  for (int trial = 0; trial < 15; ++trial) {
    const int dim = 2 + trial % 3;
    std::vector<Vector> normals{random_unit(rng, dim)};
    double prev = global_escape_rate(HyperplaneArrangement(normals)).rate;
    for (int k = 0; k < 5; ++k) {
      normals.push_back(random_unit(rng, dim));
      const double rate = global_escape_rate(HyperplaneArrangement(normals)).rate;
      EXPECT_GT(rate, 0.0);
      EXPECT_LE(rate, prev + 1e-9);
      prev = rate;
    }
  }
}

TEST(GlobalRate, BraidShortcutMatchesEnumeration) {
  for (int n = 2; n <= 5; ++n) {
    for (int d = 1; d <= 2; ++d) {
      const MassSystem sys(std::vector<double>(static_cast<std::size_t>(n), 1.0), d);
      const auto lifted = lift_to_hyperplanes(collision_arrangement(sys), LiftRule::first_axis());
      const auto g = global_escape_rate(lifted);
      EXPECT_NEAR(braid_rate_equal_masses(sys), g.rate, 1e-9) << n << " " << d;
      // Chambers of the braid arrangement are the n! orderings of the first coordinate.
      std::size_t fact = 1;
      for (int i = 2; i <= n; ++i) fact *= static_cast<std::size_t>(i);
      EXPECT_EQ(g.per_chamber.size(), fact);
    }
  }
  EXPECT_THROW(braid_rate_equal_masses(MassSystem({1.0, 2.0}, 1)), DomainError);
}

TEST(EscaperFromPoint, InteriorPointUsesItsChamber) {
  const EscapeGame game(two_lines(std::numbers::pi / 4));
  const Vector q = Eigen::Vector2d(1.0, 0.1);  // inside the acute sector
  const int idx = game.chamber_for(q);
  EXPECT_TRUE(game.chambers()[static_cast<std::size_t>(idx)].cone.contains(q, 0.0));
  const Escaper e = game.escaper_from_point(q, 1.0);
  EXPECT_LT((e.direction - game.rates().per_chamber[static_cast<std::size_t>(idx)].certificate.direction).norm(), 1e-15);
}

TEST(EscaperFromPoint, OnHyperplaneTieBreak) {
  const double theta = std::numbers::pi / 4;
  const EscapeGame game(two_lines(theta));
  // On the line y = 0, between the acute sector (y > 0) and an obtuse one (y < 0).
  const Vector q = Eigen::Vector2d(1.0, 0.0);
  const Escaper fast = game.escaper_from_point(q, 0.5, TieBreak::max_rate);
  const Escaper slow = game.escaper_from_point(q, 0.5, TieBreak::min_rate);
  EXPECT_NEAR(fast.rate, std::cos(theta / 2), 1e-9);
  EXPECT_NEAR(slow.rate, std::sin(theta / 2), 1e-9);
  for (const Escaper* e : {&fast, &slow}) {
    EXPECT_EQ(e->start_distance, 0.0);
    double prev = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double s = e->exit_arclength * k / 50.0;
      const double dist = game.arrangement().dist(e->point(s));
      EXPECT_GE(dist, s * e->rate - 1e-12);
      EXPECT_GE(dist, prev);
      EXPECT_GT(dist, 0.0);
      prev = dist;
    }
  }
}

TEST(EscaperFromPoint, ConePointTieBreaks) {
  const double theta = std::numbers::pi / 6;
  const EscapeGame game(two_lines(theta));
  const Escaper slow = game.escaper_from_point(Vector::Zero(2), 1.0, TieBreak::min_rate);
  EXPECT_NEAR(slow.rate, std::sin(theta / 2), 1e-9);
  EXPECT_NEAR(slow.exit_arclength, 1.0 / std::sin(theta / 2), 1e-8);
  const Escaper fast = game.escaper_from_point(Vector::Zero(2), 1.0);
  EXPECT_NEAR(fast.rate, std::cos(theta / 2), 1e-9);
  // Deterministic: equal-rate ties resolve to the lexicographically smallest sign vector.
  const int a = game.chamber_for(Vector::Zero(2), TieBreak::min_rate);
  const int b = game.chamber_for(Vector::Zero(2), TieBreak::min_rate);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < game.chambers().size(); ++i) {
    const double r = game.rates().per_chamber[i].certificate.rate;
    if (std::abs(r - slow.rate) < 1e-12) {
      EXPECT_LE(game.chambers()[static_cast<std::size_t>(a)].signs, game.chambers()[i].signs);
    }
  }
}

TEST(EscaperFromPoint, NoExitOnRandomArrangements) {
  Rng rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial % 3;
    std::vector<Vector> normals;
    for (int i = 0; i < 2 + trial % 4; ++i) normals.push_back(random_unit(rng, dim));
    const EscapeGame game{HyperplaneArrangement(normals)};
    EXPECT_GT(game.global_rate(), 0.0);
    for (int k = 0; k < 20; ++k) {
      const Vector q = random_gaussian(rng, dim);
      const Escaper e = game.escaper_from_point(q, 1.0);
      EXPECT_GE(e.rate, game.global_rate() - 1e-12);
      const auto s0 = sign_vector(game.arrangement(), q);
      for (int j = 1; j <= 30; ++j) {
        const double s = (e.exit_arclength + 0.5) * j / 30.0;
        const Vector x = e.point(s);
        EXPECT_GT(game.arrangement().dist(x), 0.0);
        EXPECT_EQ(sign_vector(game.arrangement(), x), s0);
        EXPECT_GE(game.arrangement().dist(x), game.arrangement().dist(q) + s * e.rate - 1e-12);
      }
    }
  }
}

// Escapers of the lifted braid arrangement, measured against the true collision
// subspaces: the distance stays above the lifted guarantee dist(p, H) + c s.
TEST(EscaperFromPoint, LiftedEscapersGainDistanceFromCollisions) {
  Rng rng(113);
  for (int n : {2, 3, 4}) {
    const MassSystem sys(std::vector<double>(static_cast<std::size_t>(n), 1.0), 2);
    const SubspaceArrangement arr = collision_arrangement(sys);
    const EscapeGame game(lift_to_hyperplanes(arr, LiftRule::first_axis()));
    for (int k = 0; k < 30; ++k) {
      const Vector x = 0.3 * random_gaussian(rng, sys.ambient_dim());
      const Escaper e = game.escaper_from_point(x, 1.0);
      for (int j = 0; j <= 20; ++j) {
        const double s = e.exit_arclength * j / 20.0;
        EXPECT_GE(arr.dist(e.point(s)), e.start_distance + s * e.rate - 1e-12);
      }
      EXPECT_GE(arr.dist(e.point(e.exit_arclength)), 1.0 - 1e-9);
    }
  }
}
