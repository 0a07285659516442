#include "dforge/error.hpp"
#include "dforge/factory.hpp"
#include "dforge/surfaces.hpp"
#include "dforge/verifier.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace dforge;

namespace {

constexpr double kPi = std::numbers::pi;

const DarbouxPair& cylinder_pair() {
  static const DarbouxPair p = darboux_partner(Family::kCylinder, make_curve("circle:R=1"), 2.0,
                                               Eigen::Vector3d(1, 1, 1), 3, 0.0, kPi, 1e-3);
  return p;
}

const DarbouxPair& rotation_pair() {
  static const DarbouxPair p = darboux_partner(Family::kRotation, make_curve("horocycle"), 1.0,
                                               Eigen::Vector3d(1, 1, 1), 3, -1.0, 1.0, 1e-3);
  return p;
}

SurfacePair control_pair() {
  InversionSpec spec{Vec::Zero(4), 1.5};
  spec.center << 0.3, -0.2, 2.5, 0.1;
  return inversion_control_pair(make_builtin("graph:random:3", 3), spec);
}

StructuredGrid small_grid(double spacing = 0.05) {
  StructuredGrid g;
  g.counts = {7, 7, 7};
  g.spacing = Vec::Constant(3, spacing);
  g.lower = Vec::Constant(3, -3 * spacing);
  return g;
}

std::vector<double> log_factor(const DarbouxPair& p, const std::vector<Vec>& pts) {
  std::vector<double> phi;
  for (const auto& u : pts) phi.push_back(0.5 * std::log(p.conformal_factor(u)));
  return phi;
}

std::vector<double> inverse_radii(const std::vector<SphereElement>& s) {
  std::vector<double> a;
  for (const auto& e : s) a.push_back(1.0 / e.radius);
  return a;
}

}  // namespace

TEST(CheckReport, PassIffResidualWithinTolerance) {
  EXPECT_TRUE(make_report("x", 1e-7, 1e-7, 3).pass);
  EXPECT_FALSE(make_report("x", 2e-7, 1e-7, 3).pass);
  EXPECT_FALSE(make_report("x", std::nan(""), 1e-7, 3).pass);
}

TEST(CheckEnvelope, SphereEnvelopesItself) {
  const auto f = make_sphere_graph(3);
  const auto E = EuclideanEmbedding::canonical(4);
  const std::vector<Vec> pts = small_grid().points();
  const std::vector<SphereElement> s(pts.size(), sphere_to_lorentz(E, Vec::Zero(4), 1.0, 1));
  EXPECT_LE(check_envelope(*f, pts, s, 1e-6).max_residual, 1e-9);
}

TEST(CheckEnvelope, FactoryPairBothMembersAndPerturbation) {
  const auto& p = cylinder_pair();
  const auto pts = p.grid.points();
  auto s = sample_congruence(p.congruence, pts);
  EXPECT_TRUE(check_envelope(*p.f, pts, s, 1e-6).pass);
  EXPECT_TRUE(check_envelope(*p.f_tilde, pts, s, 1e-6).pass);
  for (auto& e : s) e.center[0] += 1e-3;
  EXPECT_FALSE(check_envelope(*p.f, pts, s, 1e-6).pass);
}

TEST(CheckCommonCongruence, FactoryControlAndTranslate) {
  const auto& p = rotation_pair();
  const auto pts = p.grid.points();
  EXPECT_LE(check_common_congruence(*p.f, *p.f_tilde, pts, sample_congruence(p.congruence, pts), 1e-6).max_residual,
            1e-6);

  const SurfacePair cp = control_pair();
  const auto cpts = small_grid().points();
  const auto cs = sample_congruence(cp.congruence, cpts);
  EXPECT_LE(check_common_congruence(*cp.f, *cp.f_tilde, cpts, cs, 1e-6).max_residual, 1e-6);

  const auto moved = std::make_shared<AffineImage>(cp.f, Mat::Identity(4, 4), Vec::Constant(4, 0.1));
  EXPECT_FALSE(check_common_congruence(*cp.f, *moved, cpts, cs, 1e-6).pass);
}

TEST(CheckConformality, FactoryPairs) {
  for (const DarbouxPair* p : {&cylinder_pair(), &rotation_pair()}) {
    EXPECT_LE(check_conformality(*p->f, *p->f_tilde, p->grid.points(), 1e-6).max_residual, 1e-6);
  }
}

TEST(CheckBSquared, IdentityPairFactoryPairAndWrongAlpha) {
  const auto f = make_random_graph(3, 5);
  const auto gpts = small_grid().points();
  const std::vector<double> zeros(gpts.size(), 0.0), alpha(gpts.size(), 0.7);
  EXPECT_LE(check_b_squared(*f, *f, alpha, zeros, gpts, 1e-5).max_residual, 1e-9);

  const auto& p = rotation_pair();
  const auto pts = p.grid.points();
  const auto s = sample_congruence(p.congruence, pts);
  const auto phi = log_factor(p, pts);
  auto a = inverse_radii(s);
  EXPECT_LE(check_b_squared(*p.f, *p.f_tilde, a, phi, pts, 1e-5).max_residual, 1e-5);
  for (auto& x : a) x += 0.1;
  EXPECT_FALSE(check_b_squared(*p.f, *p.f_tilde, a, phi, pts, 1e-5).pass);
}

TEST(VerifyPair, SymmetricInTheMembers) {
  const auto& p = cylinder_pair();
  const auto pts = p.grid.points();
  const auto s = sample_congruence(p.congruence, pts);
  for (const auto& r : verify_pair(*p.f_tilde, *p.f, pts, s, {})) EXPECT_TRUE(r.pass) << r.name << " " << r.max_residual;
}

TEST(VerifyPair, BSquaredPassesWhereCommonCongruencePasses) {
  for (const DarbouxPair* p : {&cylinder_pair(), &rotation_pair()}) {
    const auto pts = p->grid.points();
    const auto r = verify_pair(*p->f, *p->f_tilde, pts, sample_congruence(p->congruence, pts), {});
    ASSERT_EQ(r[2].name, "common_congruence");
    EXPECT_TRUE(r[2].pass);
    EXPECT_TRUE(r[4].pass) << r[4].name << " " << r[4].max_residual;
  }
}

TEST(RecoverRibaucourData, FactoryConsistencyAndCoincidentPair) {
  const auto& p = cylinder_pair();
  const RibaucourData d = recover_ribaucour_data(*p.f, *p.f_tilde, local_grid(Family::kCylinder, 3, 1.5));
  EXPECT_LE(d.consistency_residual, 1e-4);
  EXPECT_LE(d.definitional_residual, 1e-10);
  try {
    recover_ribaucour_data(*p.f, *p.f, local_grid(Family::kCylinder, 3, 1.5));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
  }
}

TEST(CheckDarbouxCondition, FactoryPairHasTwoClusters) {
  const auto& p = cylinder_pair();
  const DarbouxReport r = check_darboux_condition(*p.f, *p.f_tilde, local_grid(Family::kCylinder, 3, 1.5), 1e-3);
  EXPECT_TRUE(r.check.pass) << r.check.max_residual;
  EXPECT_EQ(r.classification, DarbouxClass::kTwoClusters);
}

TEST(CheckDarbouxCondition, InversionPairIsSingleCluster) {
  const SurfacePair cp = control_pair();
  const DarbouxReport r = check_darboux_condition(*cp.f, *cp.f_tilde, small_grid(), 1e-3);
  EXPECT_EQ(r.classification, DarbouxClass::kSingleCluster);
}

// Sphere radius against 2 / trace(A restricted to the curve and first
// factor directions). This fails on every factory pair; see the README.
TEST(CheckRadiusTrace, FactoryPairRadiusEqualsTwoOverPartialTrace) {
  const auto& p = cylinder_pair();
  const auto pts = p.grid.points();
  const CheckReport r = check_radius_trace(*p.f, pts, sample_congruence(p.congruence, pts), 1e-6);
  EXPECT_TRUE(r.pass) << "residual " << r.max_residual;
}
