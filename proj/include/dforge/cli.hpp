#pragma once

#include "dforge/factory.hpp"
#include "dforge/serialization.hpp"
#include "dforge/verifier.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dforge {

enum class Command { kBuild, kVerify, kBonnet, kWeyl, kCurve };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

struct RunConfig {
  Command command = Command::kBuild;
  Family family = Family::kCylinder;
  std::string curve;  // empty: per-command default
  double A = 2.0;
  Eigen::Vector3d h0 = Eigen::Vector3d::Ones();
  int n = 3;
  std::optional<std::pair<double, double>> s_range;  // unset: per-command default
  double step = 1e-3;
  PairTolerances tol;
  double tol_first_order = 1e-11;
  double tol_second_order = 1e-10;
  double tol_component = 1e-6;
  double tol_plane = 1e-8;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  double c = 0.0;
  IntForm form = IntForm::kPrinted;
  std::string in_path;
  std::string out_path;  // empty: stdout
};

json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const json& j);

/// Parses argv into a config. Returns the exit code to use directly when
/// parsing ends the run (--help: 0, usage error: 2).
std::optional<int> parse_run_config(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out,
                                    std::ostream& err);

/// Exit codes: 0 pass, 1 check failure or internal error, 2 usage or
/// infeasible parameters.
int run_build(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_suites(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dforge
