#include "jmcert/io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Escape rates, JM-length bounds and finite-diameter certificates for the N-body problem"};
  app.require_subcommand(1, 1);

  jmcert::RunSpec spec;
  auto add_common = [&spec](CLI::App* sub) {
    sub->add_option("--input", spec.input_path, "JSON input file");
    sub->add_option("--output", spec.output_path, "report file (stdout when omitted)");
    sub->add_option("--seed", spec.seed, "seed for randomized steps");
    sub->add_option("--tol-proj", spec.tol_proj, "projection convergence threshold")->check(CLI::PositiveNumber);
    sub->add_option("--tol-quad", spec.tol_quad, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--lift-rule", spec.lift_rule, "hyperplane choice through each subspace")
        ->check(CLI::IsMember({"first-axis", "custom"}));
    sub->add_option("--max-hyperplanes", spec.max_hyperplanes, "cap for exhaustive chamber enumeration")
        ->check(CLI::PositiveNumber);
  };

  const std::pair<const char*, const char*> commands[] = {
      {"cone-rate", "exact escape rate of a polyhedral cone"},
      {"arrangement-rate", "per-chamber and global escape rates of an arrangement"},
      {"nbody-certificate", "finite-diameter certificate for a mass system at E = -1"},
      {"escape-demo", "escaper from a Hill-region point to the Hill boundary (CSV)"},
      {"appendix-b", "cross-sections of K_1 for the cone z >= a|x|, z >= b|y| (CSV)"},
      {"verify", "seeded property sweep over all modules"},
  };
  for (auto [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    sub->callback([&spec, sub] { spec.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : jmcert::kExitValidation;
  }
  return jmcert::run(spec, std::cout, std::cerr);
}
