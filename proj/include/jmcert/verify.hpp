#pragma once

#include "jmcert/io.hpp"
#include "jmcert/nbody.hpp"

#include <cstdint>

namespace jmcert {

/// Nearest point of {q_a = q_b} built explicitly: bodies a and b moved to their
/// common centre of mass, every other body left in place.
Configuration pair_collision_projection(const Configuration& q, int a, int b, const MassSystem& sys);

struct VerifyOptions {
  double tol_proj = kProjectionTolerance;
  double tol_quad = 1e-8;
};

/// Seeded property sweep over every module. The report contains no timings, so
/// equal seeds give byte-identical output.
Json run_verify(std::uint64_t seed, const VerifyOptions& opts = {});

}  // namespace jmcert
