#pragma once

#include "jmcert/cone.hpp"
#include "jmcert/nbody.hpp"

#include <random>

namespace jmcert {

using Rng = std::mt19937_64;

Vector random_gaussian(Rng& rng, int dim);
Vector random_unit(Rng& rng, int dim);
/// Uniformly random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(Rng& rng, int dim);

/// Gaussian configuration with coordinate standard deviation `scale`.
Configuration random_configuration(Rng& rng, const MassSystem& sys, double scale = 1.0);

/// Rejection-sampled configuration with U > 1 (strictly inside the Hill region).
Configuration random_hill_point(Rng& rng, const MassSystem& sys);

/// Random cone with nonempty interior: `facets` unit normals spread around a random axis.
PolyhedralCone random_cone(Rng& rng, int dim, int facets);

}  // namespace jmcert
