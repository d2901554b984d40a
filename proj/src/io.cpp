#include "jmcert/io.hpp"

#include "jmcert/errors.hpp"
#include "jmcert/sampling.hpp"
#include "jmcert/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace jmcert {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Vector> vectors(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto xs = numbers(j[i], where + "[" + std::to_string(i) + "]");
    out.push_back(Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())));
  }
  return out;
}

Matrix rows_matrix(const std::vector<Vector>& rows, const std::string& where) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw SchemaError(where + ": rows have different lengths");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const Json& system_object(const Json& input) {
  return input.contains("system") ? input["system"] : input;
}

LiftRule lift_rule_from(const RunSpec& spec, const Json& input, int ambient_dim) {
  if (spec.lift_rule == "first-axis") return LiftRule::first_axis();
  if (spec.lift_rule != "custom")
    throw ValidationError("unknown lift rule '" + spec.lift_rule + "' (expected first-axis or custom)");
  LiftRule rule;
  rule.kind = LiftRule::Kind::custom;
  rule.custom_directions = vectors(field(input, "lift_directions", "input"), "lift_directions");
  for (const auto& d : rule.custom_directions)
    if (d.size() != ambient_dim) throw SchemaError("lift_directions: vectors must have length " +
                                                   std::to_string(ambient_dim));
  return rule;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string cone_rate(const RunSpec& spec, const Json& input) {
  const PolyhedralCone cone = parse_cone(input);
  return dump(to_json(escape_rate(cone, ProjectionMethod::iterative, spec.tol_proj)));
}

std::string arrangement_rate(const RunSpec& spec, const Json& input) {
  Json out;
  HyperplaneArrangement arr = [&] {
    if (input.contains("complement_bases")) {
      const SubspaceArrangement subs = parse_subspaces(input);
      const LiftRule rule = lift_rule_from(spec, input, subs.ambient_dim());
      out["lift_rule"] = rule.name();
      return lift_to_hyperplanes(subs, rule);
    }
    return parse_hyperplanes(input);
  }();
  out["hyperplanes"] = arr.size();
  Json rates = to_json(global_escape_rate(arr, spec.max_hyperplanes, spec.tol_proj));
  for (auto& [k, v] : rates.items()) out[k] = v;
  return dump(out);
}

std::string nbody_certificate(const RunSpec& spec, const Json& input) {
  const MassSystem sys = parse_mass_system(system_object(input));
  const LiftRule rule = lift_rule_from(spec, input, sys.ambient_dim());
  const DiameterCertificate cert = diameter_certificate(sys, rule, spec.max_hyperplanes, spec.tol_proj);
  Json out = to_json(cert);
  if (sys.bodies() == 2) {
    const double oracle = two_body_boundary_distance(sys);
    out["two_body_probe"] = {{"boundary_distance_from_collision", oracle},
                             {"slack_factor", cert.bound_diameter / (2.0 * oracle)}};
  }
  return dump(out);
}

std::string escape_demo(const RunSpec& spec, const Json& input) {
  const MassSystem sys = parse_mass_system(field(input, "system", "input"));
  const DiameterCertificate cert = diameter_certificate(sys, lift_rule_from(spec, input, sys.ambient_dim()),
                                                        spec.max_hyperplanes, spec.tol_proj);
  Configuration q;
  if (input.contains("configuration")) {
    q = parse_configuration(input["configuration"]);
  } else {
    Rng rng(spec.seed);
    q = random_hill_point(rng, sys);
  }
  q.check_conforms(sys);
  int samples = 32;
  if (input.contains("samples")) samples = static_cast<int>(number(input["samples"], "samples"));
  if (samples < 2) throw SchemaError("samples: need at least 2");

  const BoundaryEscape esc = escape_to_boundary(q, sys, cert);
  JmLengthOptions opts;
  opts.relative_tolerance = spec.tol_quad;
  opts.endpoint_limit = std::isinf(potential_U(q, sys));

  std::ostringstream csv;
  csv << "t";
  for (int a = 0; a < sys.bodies(); ++a)
    for (int k = 0; k < sys.dim(); ++k) csv << ",q" << a << "_" << k;
  csv << ",U,dist_to_Delta,jm_cumlen\n";
  for (int i = 0; i < samples; ++i) {
    const double t = esc.crossing_time * i / (samples - 1);
    const Configuration p = q + t * esc.direction;
    const double cum = t > 0.0 ? jm_length(Polyline({q, p}), sys, opts) : 0.0;
    csv << fmt(t);
    for (Eigen::Index c = 0; c < p.coords().size(); ++c) csv << "," << fmt(p.coords()(c));
    csv << "," << fmt(potential_U(p, sys)) << "," << fmt(dist_to_collision_locus(p, sys)) << "," << fmt(cum)
        << "\n";
  }
  return csv.str();
}

std::string appendix_b(const Json& input) {
  auto get = [&](const char* key, double fallback) {
    return input.contains(key) ? number(input[key], key) : fallback;
  };
  const double a = get("a", 1.0), b = get("b", 0.5);
  const double z_min = get("z_min", 2.0), z_max = get("z_max", 100.0);
  const int samples = static_cast<int>(get("samples", 99));
  appendix_b_cone(a, b);  // validates a, b
  const double apex = std::max(std::sqrt(a * a + 1.0), std::sqrt(b * b + 1.0));
  if (!(z_min > apex)) throw DomainError("z_min must exceed max(sqrt(a^2+1), sqrt(b^2+1)) = " + fmt(apex));
  if (!(z_max > z_min) || samples < 2) throw DomainError("need z_max > z_min and samples >= 2");
  std::ostringstream csv;
  csv << "z,x_halfwidth,y_halfwidth,aspect_ratio\n";
  for (int i = 0; i < samples; ++i) {
    const double z = z_min + (z_max - z_min) * i / (samples - 1);
    const CrossSection s = appendix_b_cross_section(a, b, z);
    csv << fmt(s.z) << "," << fmt(s.x_halfwidth) << "," << fmt(s.y_halfwidth) << "," << fmt(s.aspect_ratio)
        << "\n";
  }
  return csv.str();
}

}  // namespace

MassSystem parse_mass_system(const Json& j) {
  const auto masses = numbers(field(j, "masses", "system"), "system.masses");
  const Json& dim = field(j, "dim", "system");
  if (!dim.is_number_integer()) throw SchemaError("system.dim: expected an integer");
  const double g = j.contains("G") ? number(j["G"], "system.G") : 1.0;
  return MassSystem(masses, dim.get<int>(), g);
}

Configuration parse_configuration(const Json& j) {
  const Json& coords = field(j, "coords", "configuration");
  if (!coords.is_array() || coords.empty()) throw SchemaError("configuration.coords: expected blocks");
  std::vector<std::vector<double>> blocks;
  for (std::size_t i = 0; i < coords.size(); ++i)
    blocks.push_back(numbers(coords[i], "configuration.coords[" + std::to_string(i) + "]"));
  return Configuration::from_blocks(blocks);
}

PolyhedralCone parse_cone(const Json& j) {
  return PolyhedralCone(vectors(field(j, "normals", "cone"), "cone.normals"));
}

HyperplaneArrangement parse_hyperplanes(const Json& j) {
  return HyperplaneArrangement(vectors(field(j, "normals", "arrangement"), "arrangement.normals"));
}

SubspaceArrangement parse_subspaces(const Json& j) {
  const Json& bases = field(j, "complement_bases", "subspaces");
  if (!bases.is_array() || bases.empty()) throw SchemaError("complement_bases: expected a nonempty array");
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const std::string where = "complement_bases[" + std::to_string(i) + "]";
    mats.push_back(rows_matrix(vectors(bases[i], where), where));
  }
  const int dim = static_cast<int>(mats.front().cols());
  return SubspaceArrangement(dim, std::move(mats));
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": malformed JSON: " + e.what());
  }
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json to_json(const EscapeCertificate& cert) {
  return {{"rate", cert.rate}, {"direction", to_json(cert.direction)}, {"q_star", to_json(cert.q_star)}};
}

Json to_json(const GlobalEscapeRate& rates) {
  Json chambers = Json::array();
  for (const auto& c : rates.per_chamber)
    chambers.push_back({{"signs", c.signs},
                        {"rate", c.certificate.rate},
                        {"direction", to_json(c.certificate.direction)}});
  return {{"chambers", std::move(chambers)},
          {"global_rate", rates.rate},
          {"slowest_chamber", rates.slowest}};
}

Json to_json(const DiameterCertificate& cert) {
  const auto& c = cert.constants;
  Json masses = std::vector<double>(cert.sys.masses().begin(), cert.sys.masses().end());
  return {{"system", {{"masses", masses}, {"dim", cert.sys.dim()}, {"G", cert.sys.G()}}},
          {"constants",
           {{"lambda_min", c.lambda_min},
            {"lambda_sum", c.lambda_sum},
            {"c1", c.c1},
            {"C", c.C},
            {"rate", c.rate},
            {"k", c.k},
            {"t_cross", c.t_cross}}},
          {"bound_single", cert.bound_single},
          {"bound_diameter", cert.bound_diameter},
          {"lift_rule", cert.lift_rule.name()}};
}

RunOutcome execute(const RunSpec& spec) {
  RunOutcome out;
  try {
    const bool needs_input = spec.command == "cone-rate" || spec.command == "arrangement-rate" ||
                             spec.command == "nbody-certificate" || spec.command == "escape-demo";
    if (needs_input && spec.input_path.empty())
      throw ValidationError("command '" + spec.command + "' requires --input");
    const Json input =
        spec.input_path.empty() ? Json::object() : parse_json_text(read_file(spec.input_path), spec.input_path);
    if (!input.is_object()) throw SchemaError(spec.input_path + ": top level must be a JSON object");

    if (spec.command == "cone-rate") {
      out.report = cone_rate(spec, input);
    } else if (spec.command == "arrangement-rate") {
      out.report = arrangement_rate(spec, input);
    } else if (spec.command == "nbody-certificate") {
      out.report = nbody_certificate(spec, input);
    } else if (spec.command == "escape-demo") {
      out.report = escape_demo(spec, input);
    } else if (spec.command == "appendix-b") {
      out.report = appendix_b(input);
    } else if (spec.command == "verify") {
      const Json report = run_verify(spec.seed, {spec.tol_proj, spec.tol_quad});
      out.report = dump(report);
      if (!report.at("all_passed").get<bool>()) {
        out.exit_code = kExitSolver;
        out.error = "verification suites reported failures";
      }
    } else {
      throw ValidationError("unknown command '" + spec.command + "'");
    }
  } catch (const ValidationError& e) {
    out.exit_code = kExitValidation;
    out.error = e.what();
  } catch (const SolverError& e) {
    out.exit_code = kExitSolver;
    out.error = e.what();
  }
  return out;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  RunOutcome result = execute(spec);
  if (result.exit_code != kExitOk) err << "error: " << result.error << "\n";
  if (result.report.empty()) return result.exit_code;
  if (spec.output_path.empty()) {
    out << result.report;
  } else {
    std::ofstream file(spec.output_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << spec.output_path << "'\n";
      return kExitValidation;
    }
    file << result.report;
  }
  return result.exit_code;
}

}  // namespace jmcert
