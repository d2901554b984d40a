#include "jmcert/errors.hpp"
#include "jmcert/nbody.hpp"
#include "jmcert/sampling.hpp"
#include "jmcert/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace jmcert;

namespace {

MassSystem unit_masses(int n, int d) { return MassSystem(std::vector<double>(static_cast<std::size_t>(n), 1.0), d); }

MassSystem random_system(Rng& rng, int n, int d) {
  std::uniform_real_distribution<double> mass(0.1, 5.0);
  std::vector<double> ms(static_cast<std::size_t>(n));
  for (double& m : ms) m = mass(rng);
  return MassSystem(ms, d);
}

// Two bodies on the x axis at +-r/2.
Configuration separated(double r, int d = 1) {
  Configuration q(2, d);
  q.body(0)[0] = r / 2;
  q.body(1)[0] = -r / 2;
  return q;
}

}  // namespace

TEST(MassSystem, RejectsInvalidInput) {
  EXPECT_THROW(MassSystem({1.0}, 2), DomainError);
  EXPECT_THROW(MassSystem({1.0, 0.0}, 2), DomainError);
  EXPECT_THROW(MassSystem({1.0, -2.0}, 2), DomainError);
  EXPECT_THROW(MassSystem({1.0, 1.0}, 0), DomainError);
  EXPECT_THROW(MassSystem({1.0, 1.0}, 2, 0.0), DomainError);
}

TEST(MassSystem, PairConstants) {
  const MassSystem sys({2.0, 3.0, 5.0}, 2);
  EXPECT_DOUBLE_EQ(sys.pair_k(0, 1), std::sqrt(6.0 / 5.0));
  EXPECT_DOUBLE_EQ(sys.pair_k(1, 0), sys.pair_k(0, 1));
  EXPECT_DOUBLE_EQ(sys.pair_lambda(1, 2), 15.0 * std::sqrt(15.0 / 8.0));
  double sum = 0.0, lo = INFINITY;
  for (auto [a, b] : sys.pairs()) {
    sum += sys.pair_lambda(a, b);
    lo = std::min(lo, sys.pair_lambda(a, b));
  }
  EXPECT_DOUBLE_EQ(sys.lambda_sum(), sum);
  EXPECT_DOUBLE_EQ(sys.lambda_min(), lo);
  EXPECT_GT(sys.lambda_min(), 0.0);
  EXPECT_LE(sys.lambda_min(), sys.lambda_sum());
  EXPECT_THROW(sys.pair_k(1, 1), DomainError);
}

TEST(MassInner, SingleBodyBlock) {
  const MassSystem sys({2.0, 3.0}, 1);
  Configuration u(2, 1);
  u.body(0)[0] = 1.0;
  EXPECT_DOUBLE_EQ(mass_inner(u, u, sys), 2.0);
}

TEST(MassInner, DisjointBlocksAreOrthogonal) {
  const MassSystem sys({2.0, 3.0}, 2);
  Configuration u(2, 2), v(2, 2);
  u.body(0) << 1.0, 4.0;
  v.body(1) << -2.0, 7.0;
  EXPECT_EQ(mass_inner(u, v, sys), 0.0);
}

TEST(MassInner, MatchesDoubleLoop) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const MassSystem sys = random_system(rng, 2 + trial % 3, 1 + trial % 3);
    const Configuration u = random_configuration(rng, sys), v = random_configuration(rng, sys);
    double oracle = 0.0;
    for (int a = 0; a < sys.bodies(); ++a)
      for (int k = 0; k < sys.dim(); ++k) oracle += sys.mass(a) * u.body(a)[k] * v.body(a)[k];
    EXPECT_NEAR(mass_inner(u, v, sys), oracle, 1e-12 * (1 + std::abs(oracle)));
    EXPECT_NEAR(mass_inner(u, v, sys), mass_inner(v, u, sys), 1e-14);
  }
}

TEST(MassInner, ShapeMismatch) {
  const MassSystem sys({1.0, 1.0}, 2);
  EXPECT_THROW(mass_inner(Configuration(3, 2), Configuration(2, 2), sys), ShapeError);
  EXPECT_THROW(Configuration::from_blocks({{1.0, 2.0}, {1.0}}), ShapeError);
}

TEST(Potential, TwoBodies) {
  EXPECT_DOUBLE_EQ(potential_U(separated(2.0), unit_masses(2, 1)), 0.5);
}

TEST(Potential, CollisionIsInfinite) {
  const Configuration q = Configuration::from_blocks({{0.3, 1.0}, {0.3, 1.0}, {2.0, 0.0}});
  EXPECT_TRUE(std::isinf(potential_U(q, unit_masses(3, 2))));
}

TEST(Potential, EquilateralTriangle) {
  const double h = std::sqrt(3.0) / 2.0;
  const Configuration q = Configuration::from_blocks({{0.0, 0.0}, {1.0, 0.0}, {0.5, h}});
  EXPECT_NEAR(potential_U(q, unit_masses(3, 2)), 3.0, 1e-14);
}

TEST(PairDistance, PaperExample) {
  const Configuration q = Configuration::from_blocks({{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}});
  EXPECT_NEAR(dist_to_pair_collision(q, 0, 1, unit_masses(2, 3)), std::sqrt(2.0), 1e-15);
}

TEST(PairDistance, ZeroOnSubspaceAndInvalidPair) {
  const MassSystem sys = unit_masses(3, 2);
  const Configuration q = Configuration::from_blocks({{0.3, 1.0}, {0.3, 1.0}, {2.0, 0.0}});
  EXPECT_EQ(dist_to_pair_collision(q, 0, 1, sys), 0.0);
  EXPECT_EQ(dist_to_collision_locus(q, sys), 0.0);
  EXPECT_THROW(dist_to_pair_collision(q, 2, 2, sys), DomainError);
}

// The segment from q to its centre-of-mass projection is orthogonal to the
// collision subspace, so the projection is the nearest point.
TEST(PairDistance, MatchesOrthogonalProjection) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3, d = 1 + (trial / 3) % 3;
    const MassSystem sys = random_system(rng, n, d);
    const Configuration q = random_configuration(rng, sys);
    for (auto [a, b] : sys.pairs()) {
      const Configuration s = pair_collision_projection(q, a, b, sys);
      const Configuration v = q - s;
      const double oracle = mass_norm(v, sys);
      EXPECT_NEAR(dist_to_pair_collision(q, a, b, sys), oracle, 1e-12 * oracle);
      // Basis of {q_a = q_b}: e_k in blocks a and b together, or e_k in any other block.
      for (int k = 0; k < d; ++k) {
        Configuration h(n, d);
        h.body(a)[k] = 1.0;
        h.body(b)[k] = 1.0;
        EXPECT_NEAR(mass_inner(v, h, sys), 0.0, 1e-12 * (1 + oracle));
        for (int c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          Configuration g(n, d);
          g.body(c)[k] = 1.0;
          EXPECT_EQ(mass_inner(v, g, sys), 0.0);
        }
      }
    }
  }
}

TEST(CollisionDistance, MinimumOverPairs) {
  Rng rng(8);
  const MassSystem sys = random_system(rng, 3, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration q = random_configuration(rng, sys);
    const double d01 = sys.pair_k(0, 1) * (q.body(0) - q.body(1)).norm();
    const double d02 = sys.pair_k(0, 2) * (q.body(0) - q.body(2)).norm();
    const double d12 = sys.pair_k(1, 2) * (q.body(1) - q.body(2)).norm();
    EXPECT_DOUBLE_EQ(dist_to_collision_locus(q, sys), std::min({d01, d02, d12}));
  }
  const MassSystem two({1.5, 0.5}, 2);
  const Configuration q = random_configuration(rng, two);
  EXPECT_DOUBLE_EQ(dist_to_collision_locus(q, two), dist_to_pair_collision(q, 0, 1, two));
}

TEST(Sandwich, TightForTwoEqualMasses) {
  const MassSystem sys = unit_masses(2, 2);
  EXPECT_DOUBLE_EQ(sys.lambda_min(), std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(sys.lambda_sum(), std::sqrt(0.5));
  const Configuration q = Configuration::from_blocks({{0.4, -0.1}, {-0.3, 0.9}});
  const auto b = sandwich_bounds(q, sys);
  EXPECT_DOUBLE_EQ(b.lower, b.upper);
  EXPECT_NEAR(potential_U(q, sys), b.lower, 1e-14 * b.lower);
}

TEST(Sandwich, ScalesInversely) {
  Rng rng(3);
  const MassSystem sys = random_system(rng, 3, 3);
  const Configuration q = random_configuration(rng, sys);
  const auto b = sandwich_bounds(q, sys);
  const auto b2 = sandwich_bounds(scale_configuration(q, 4.0), sys);
  EXPECT_NEAR(b2.lower, b.lower / 4.0, 1e-14 * b.lower);
  EXPECT_NEAR(b2.upper, b.upper / 4.0, 1e-14 * b.upper);
  EXPECT_THROW(sandwich_bounds(Configuration(sys), sys), CollisionError);
}

// Potential/distance sandwich and the bounded-distance lemma on random systems.
TEST(Sandwich, PropertySweep) {
  Rng rng(2024);
  int hill_points = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int d = 1; d <= 3; ++d) {
      for (int trial = 0; trial < 120; ++trial) {
        const MassSystem sys = random_system(rng, n, d);
        std::uniform_real_distribution<double> scale(0.05, 3.0);
        const Configuration q = random_configuration(rng, sys, scale(rng));
        const double u = potential_U(q, sys);
        const auto b = sandwich_bounds(q, sys);
        EXPECT_LE(b.lower, u * (1 + 1e-14));
        EXPECT_LE(u, b.upper * (1 + 1e-14));
        if (u >= 1.0) {
          ++hill_points;
          EXPECT_LE(dist_to_collision_locus(q, sys), sys.lambda_sum() * (1 + 1e-14));
        }
      }
    }
  }
  EXPECT_GT(hill_points, 50);
}

TEST(Hill, Classification) {
  const MassSystem sys = unit_masses(2, 1);
  EXPECT_EQ(hill_membership(separated(2.0), sys), HillRegion::exterior);
  EXPECT_EQ(hill_membership(separated(0.0), sys), HillRegion::interior);
  EXPECT_EQ(hill_membership(separated(0.5), sys), HillRegion::interior);
  // Root of U(r) = 1 by bisection on the separation.
  double lo = 0.1, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (potential_U(separated(mid), sys) > 1.0 ? lo : hi) = mid;
  }
  EXPECT_EQ(hill_membership(separated(0.5 * (lo + hi)), sys), HillRegion::boundary);
  EXPECT_EQ(hill_membership(separated(1.0 + 1e-6), sys), HillRegion::exterior);
  EXPECT_EQ(hill_membership(separated(1.0 + 1e-6), sys, 1e-5), HillRegion::boundary);
}

TEST(NewtonRhs, SymmetricPairAccelerations) {
  const MassSystem sys = unit_masses(2, 3);
  const Configuration q = Configuration::from_blocks({{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}});
  const Configuration a = newton_rhs(q, sys);
  EXPECT_DOUBLE_EQ(a.body(0)[0], -0.25);
  EXPECT_DOUBLE_EQ(a.body(1)[0], 0.25);
  EXPECT_EQ(a.body(0)[1], 0.0);
  EXPECT_EQ(a.body(0)[2], 0.0);
}

TEST(NewtonRhs, IsMassMetricGradient) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const MassSystem sys = random_system(rng, 2 + trial % 3, 1 + trial % 3);
    const Configuration q = random_configuration(rng, sys);
    const Configuration h = random_configuration(rng, sys);
    const double eps = 1e-5;
    const double fd = (potential_U(q + eps * h, sys) - potential_U(q - eps * h, sys)) / (2 * eps);
    const double exact = mass_inner(newton_rhs(q, sys), h, sys);
    EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST(NewtonRhs, MomentumBalanceAndCollisionError) {
  Rng rng(19);
  const MassSystem sys = random_system(rng, 4, 3);
  const Configuration a = newton_rhs(random_configuration(rng, sys), sys);
  Vector p = Vector::Zero(3);
  for (int b = 0; b < 4; ++b) p += sys.mass(b) * a.body(b);
  EXPECT_LT(p.norm(), 1e-12 * (1 + a.coords().norm()));
  EXPECT_THROW(newton_rhs(Configuration(sys), sys), CollisionError);
}

TEST(Scaling, Homogeneity) {
  Rng rng(23);
  const MassSystem sys = random_system(rng, 3, 2);
  const Configuration q = random_configuration(rng, sys);
  EXPECT_EQ(scale_configuration(q, 1.0).coords(), q.coords());
  const double lambda = 2.75;
  EXPECT_NEAR(potential_U(scale_configuration(q, lambda), sys), potential_U(q, sys) / lambda,
              1e-14 * potential_U(q, sys));
  EXPECT_NEAR(dist_to_collision_locus(scale_configuration(q, lambda), sys),
              lambda * dist_to_collision_locus(q, sys), 1e-14 * lambda);
  EXPECT_THROW(scale_configuration(q, 0.0), DomainError);
  EXPECT_THROW(scale_configuration(q, -1.0), DomainError);
}

TEST(MassWeighted, IsIsometry) {
  Rng rng(29);
  const MassSystem sys = random_system(rng, 3, 2);
  const Configuration u = random_configuration(rng, sys), v = random_configuration(rng, sys);
  EXPECT_NEAR(to_mass_weighted(u, sys).dot(to_mass_weighted(v, sys)), mass_inner(u, v, sys), 1e-12);
  EXPECT_LT((from_mass_weighted(to_mass_weighted(u, sys), sys).coords() - u.coords()).norm(), 1e-14);
}
