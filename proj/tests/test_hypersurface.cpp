#include "dforge/error.hpp"
#include "dforge/hypersurface.hpp"
#include "dforge/surfaces.hpp"

#include <gtest/gtest.h>

using namespace dforge;

namespace {

double max_gap(const ImmersionJet& a, const ImmersionJet& b) {
  double g = (a.point - b.point).cwiseAbs().maxCoeff();
  g = std::max(g, (a.first - b.first).cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < a.second.size(); ++i) g = std::max(g, (a.second[i] - b.second[i]).cwiseAbs().maxCoeff());
  return g;
}

Vec point3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

}  // namespace

TEST(JetEval, PlaneHasZeroSecondDerivatives) {
  const ImmersionJet j = jet_eval(*make_plane(3), point3(0.3, -1.0, 2.0), 1e-4, JetMode::kFiniteDifference);
  for (const auto& d : j.second) EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-7);  // roundoff / h^2
  const ImmersionJet exact = jet_eval(*make_plane(3), point3(0.3, -1.0, 2.0));
  for (const auto& d : exact.second) EXPECT_EQ(d.cwiseAbs().maxCoeff(), 0.0);
}

TEST(JetEval, SphereAnalyticAgainstFiniteDifferences) {
  const auto s = make_sphere_graph(3);
  const Vec u = point3(0.1, -0.2, 0.15);
  EXPECT_LE(max_gap(jet_eval(*s, u), jet_eval(*s, u, 1e-4, JetMode::kFiniteDifference)), 1e-7);
}

TEST(JetEval, OutsideDomainThrows) {
  const auto s = make_sphere_graph(3);
  const double edge = 0.9 / std::sqrt(3.0);
  try {
    jet_eval(*s, point3(edge, 0.0, 0.0), 1e-4, JetMode::kFiniteDifference);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutsideDomain);
  }
}

TEST(FundamentalForms, UnitSphereIsUmbilic) {
  const FundamentalForms F = fundamental_forms(jet_eval(*make_sphere_graph(3), point3(0.2, 0.1, -0.3)), 1);
  const Vec k = F.principal_curvatures.cwiseAbs();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(k[i], 1.0, 1e-12);
  EXPECT_NEAR(F.principal_curvatures.maxCoeff() - F.principal_curvatures.minCoeff(), 0.0, 1e-12);
}

TEST(FundamentalForms, CylinderCurvatures) {
  const double rho = 2.5;
  const FundamentalForms F = fundamental_forms(jet_eval(*make_cylinder(3, rho), point3(0.7, 1.0, -2.0)), 1);
  Vec k = F.principal_curvatures.cwiseAbs();
  std::sort(k.begin(), k.end());
  EXPECT_NEAR(k[0], 0.0, 1e-14);
  EXPECT_NEAR(k[1], 0.0, 1e-14);
  EXPECT_NEAR(k[2], 1.0 / rho, 1e-14);
}

TEST(FundamentalForms, ParaboloidAtOriginIsIdentity) {
  FundamentalForms F = fundamental_forms(jet_eval(*make_paraboloid(3), Vec::Zero(3)), 1);
  if (F.shape.trace() < 0) F = fundamental_forms(jet_eval(*make_paraboloid(3), Vec::Zero(3)), -1);
  EXPECT_LT((F.shape - Mat::Identity(3, 3)).norm(), 1e-14);
}

TEST(FundamentalForms, OrientationFlipNegatesShape) {
  const ImmersionJet j = jet_eval(*make_random_graph(3, 4), point3(0.1, 0.2, 0.3));
  const FundamentalForms a = fundamental_forms(j, 1), b = fundamental_forms(j, -1);
  EXPECT_LT((a.shape + b.shape).norm(), 1e-13);
  EXPECT_LT((a.normal + b.normal).norm(), 1e-15);
}

TEST(ApplyInversion, SpherePointIsFixedAndInvolution) {
  InversionSpec spec{Vec::Zero(4), 1.0};
  Vec p(4);
  p << 0.6, 0.0, 0.8, 0.0;
  EXPECT_LT((invert_point(spec, p) - p).norm(), 1e-15);

  spec.center << 0.2, -0.1, 0.3, 1.8;
  spec.radius = 1.3;
  const ImmersionJet j = jet_eval(*make_random_graph(3, 11), point3(-0.3, 0.15, 0.1));
  EXPECT_LE(max_gap(apply_inversion(spec, apply_inversion(spec, j)), j), 1e-10);
}

TEST(ApplyInversion, PlaneBecomesSphereThroughCenter) {
  // plane x4 = 1 under the unit inversion at 0: a sphere of radius 1/2 through 0
  const InversionSpec spec{Vec::Zero(4), 1.0};
  Mat M = Mat::Identity(4, 4);
  const auto plane = std::make_shared<AffineImage>(make_plane(3), M, Vec::Unit(4, 3));
  const ImmersionJet j = jet_eval(*plane, Vec::Zero(3));
  const ImmersionJet ij = apply_inversion(spec, j);
  EXPECT_LT((ij.point - Vec::Unit(4, 3)).norm(), 1e-15);
  const Vec q = InvertedImmersion(plane, spec).evaluate(point3(0.4, -0.3, 0.2));
  EXPECT_NEAR((q - 0.5 * Vec::Unit(4, 3)).norm(), 0.5, 1e-14);
}

TEST(InversionShapeLaw, PlaneToSphereOfRadiusHalf) {
  const InversionSpec spec{Vec::Zero(4), 1.0};
  const auto plane = std::make_shared<AffineImage>(make_plane(3), Mat::Identity(4, 4), Vec::Unit(4, 3));
  const ImmersionJet j = jet_eval(*plane, Vec::Zero(3));
  const FundamentalForms F = fundamental_forms(j, 1);
  const double fN = F.normal.dot(j.point - spec.center);
  const FundamentalForms P = inversion_shape_law(spec, j, F);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(P.principal_curvatures[i]), 2.0, 1e-13);
  EXPECT_NEAR(std::abs(fN), 1.0, 1e-15);
}

TEST(InversionShapeLaw, CurvaturePreservingPoint) {
  // |f - p0| = r and <f - p0, N> = 0: the cylinder axis point seen from a
  // center in its tangent hyperplane
  const auto cyl = make_cylinder(3, 1.0);
  const Vec u = point3(0.0, 0.0, 0.0);
  const ImmersionJet j = jet_eval(*cyl, u);
  const FundamentalForms F = fundamental_forms(j, 1);
  InversionSpec spec{j.point + 0.8 * Vec::Unit(4, 2) + 0.6 * Vec::Unit(4, 3), 1.0};
  ASSERT_NEAR(F.normal.dot(j.point - spec.center), 0.0, 1e-15);
  const FundamentalForms P = inversion_shape_law(spec, j, F);
  // orientation is reversed by the inversion
  EXPECT_LT(std::min((P.shape - F.shape).norm(), (P.shape + F.shape).norm()), 1e-12);
}

TEST(InversionShapeLaw, RandomGraphAgainstFiniteDifferenceOracle) {
  InversionSpec spec{Vec::Zero(4), 1.3};
  spec.center << 0.2, -0.1, 0.3, 1.8;
  const auto f = make_random_graph(3, 11);
  const auto inv = std::make_shared<InvertedImmersion>(f, spec);
  const Vec u = point3(0.25, -0.2, 0.1);
  const ImmersionJet j = jet_eval(*f, u);
  const FundamentalForms predicted = inversion_shape_law(spec, j, fundamental_forms(j, 1));
  const FundamentalForms fd = fundamental_forms(jet_eval(*inv, u, 1e-3, JetMode::kFiniteDifference), -1);
  EXPECT_LE((predicted.shape - fd.shape).norm() / predicted.shape.norm(), 1e-5);
}

TEST(ConformalFactorField, HomothetyIdentityAndShear) {
  const auto f = make_random_graph(3, 2);
  const std::vector<Vec> samples = {point3(0.0, 0.0, 0.0), point3(0.1, -0.2, 0.3), point3(-0.3, 0.2, 0.1)};

  const auto scaled = std::make_shared<AffineImage>(f, 2.5 * Mat::Identity(4, 4), Vec::Zero(4));
  const ConformalFit h = conformal_factor_field(*f, *scaled, samples, 1e-10);
  EXPECT_TRUE(h.conformal);
  EXPECT_LE(h.anisotropy, 1e-12);
  for (double phi : h.phi) EXPECT_NEAR(phi, std::log(2.5), 1e-12);

  const ConformalFit same = conformal_factor_field(*f, *f, samples, 1e-10);
  for (double phi : same.phi) EXPECT_NEAR(phi, 0.0, 1e-14);

  Mat shear = Mat::Identity(4, 4);
  shear(0, 1) = 0.5;
  const auto plane = make_plane(3);
  const auto sheared = std::make_shared<AffineImage>(plane, shear, Vec::Zero(4));
  const ConformalFit s = conformal_factor_field(*plane, *sheared, samples, 1e-6);
  EXPECT_FALSE(s.conformal);
  EXPECT_GT(s.anisotropy, 1e-6);
}
