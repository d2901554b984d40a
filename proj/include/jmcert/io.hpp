#pragma once

#include "jmcert/arrangement.hpp"
#include "jmcert/cone.hpp"
#include "jmcert/jm.hpp"
#include "jmcert/nbody.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace jmcert {

using Json = nlohmann::ordered_json;

// Schemas
//   MassSystem     {"masses": [m...], "dim": d, "G": g}          (G optional, default 1)
//   Configuration  {"coords": [[x...], ...]}                     (one block per body)
//   Cone           {"normals": [[n...], ...]}
//   Arrangement    {"normals": [[n...], ...]}
//   Subspaces      {"complement_bases": [[[b...], ...], ...], "lift_directions": [[d...], ...]}
MassSystem parse_mass_system(const Json& j);
Configuration parse_configuration(const Json& j);
PolyhedralCone parse_cone(const Json& j);
HyperplaneArrangement parse_hyperplanes(const Json& j);
SubspaceArrangement parse_subspaces(const Json& j);

/// Parses JSON text; syntax errors become SchemaError with line and column.
Json parse_json_text(const std::string& text, const std::string& source = "input");

Json to_json(const Vector& v);
Json to_json(const EscapeCertificate& cert);
Json to_json(const GlobalEscapeRate& rates);
Json to_json(const DiameterCertificate& cert);

/// Exit codes of the command-line runner.
enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitSolver = 3 };

struct RunSpec {
  std::string command;  // cone-rate | arrangement-rate | nbody-certificate | escape-demo | appendix-b | verify
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;
  double tol_proj = kProjectionTolerance;
  double tol_quad = 1e-8;
  std::string lift_rule = "first-axis";  // first-axis | custom
  int max_hyperplanes = kMaxHyperplanes;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string report;  // JSON or CSV text
  std::string error;   // diagnostic for nonzero exit codes
};

/// Runs one command, returning the report text instead of writing it.
RunOutcome execute(const RunSpec& spec);

/// Runs one command and writes the report to spec.output_path (stdout when empty).
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace jmcert
