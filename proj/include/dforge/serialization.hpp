#pragma once

#include "dforge/bonnet.hpp"
#include "dforge/factory.hpp"
#include "dforge/verifier.hpp"
#include "dforge/weyl.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dforge {

using json = nlohmann::ordered_json;

json sphere_to_json(const SphereElement& s);
/// lorentz_rep is recomputed in the canonical embedding.
SphereElement sphere_from_json(const json& j);

json grid_to_json(const StructuredGrid& g);
StructuredGrid grid_from_json(const json& j);

json check_to_json(const CheckReport& r);

/// Everything needed to rebuild a factory pair, plus the samples a verifier
/// compares against (the congruence is taken from the file, not rebuilt).
struct PairFile {
  Family family = Family::kCylinder;
  int n = 3;
  std::string curve;  // make_curve spec
  double A = 0.0;
  Eigen::Vector3d h0 = Eigen::Vector3d::Zero();
  double s0 = 0.0, s1 = 0.0, step = 0.0;
  StructuredGrid grid;
  std::vector<Vec> f, f_tilde;
  std::vector<SphereElement> congruence;
  std::vector<double> conformal_factor;  // e^{2 phi}
};

PairFile make_pair_file(const DarbouxPair& pair, const std::string& curve_spec);
json pair_to_json(const PairFile& p);
/// Throws Error(kInvalidInput) on missing or mistyped fields.
PairFile pair_from_json(const json& j);

json report_to_json(const std::vector<CheckReport>& checks, bool pass, const StructuredGrid& grid);
json bonnet_report_to_json(const BonnetSuiteReport& r);
json weyl_report_to_json(const WeylReport& r);

}  // namespace dforge
