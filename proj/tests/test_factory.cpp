#include "dforge/error.hpp"
#include "dforge/factory.hpp"
#include "dforge/surfaces.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

using namespace dforge;

namespace {

constexpr double kPi = std::numbers::pi;

Vec point3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

Vec sorted_abs_curvatures(const ParamImmersion& f, const Vec& u) {
  Vec k = fundamental_forms(jet_eval(f, u, 1e-3, JetMode::kRichardson)).principal_curvatures.cwiseAbs();
  std::sort(k.begin(), k.end());
  return k;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kVerification;
}

}  // namespace

TEST(BuildCylinder, CircleAndEllipse) {
  const Vec k = sorted_abs_curvatures(*build_cylinder(make_curve("circle:R=1"), 3), point3(0.4, 0.2, -0.1));
  EXPECT_NEAR(k[0], 0.0, 1e-8);
  EXPECT_NEAR(k[1], 0.0, 1e-8);
  EXPECT_NEAR(k[2], 1.0, 1e-8);
  const Vec e = sorted_abs_curvatures(*build_cylinder(make_curve("ellipse:a=2,b=1"), 3), point3(0.0, 0.0, 0.0));
  EXPECT_NEAR(e[2], 2.0, 1e-7);
  EXPECT_NEAR(e[1], 0.0, 1e-8);
}

TEST(BuildCylinder, RejectsCurveOfWrongSpaceForm) {
  EXPECT_THROW(build_cylinder(make_curve("horocycle"), 3), Error);
}

TEST(BuildConeCylinder, MetricIsConformalToProductWithHyperbolicSpace) {
  const auto f = build_cone_cylinder(make_curve("small-circle:theta=1"), 3);
  const double t = 1.3;
  const FundamentalForms F = fundamental_forms(jet_eval(*f, point3(0.5, t, 0.2), 1e-3, JetMode::kRichardson));
  // t^2 (ds^2 + (dt^2 + dtau^2) / t^2)
  Mat want = Mat::Identity(3, 3);
  want(0, 0) = t * t;
  EXPECT_LT((F.metric - want).norm(), 1e-9);
  EXPECT_EQ(code_of([&] { f->evaluate(point3(0.5, 0.0, 0.0)); }), ErrorCode::kOutsideDomain);
}

TEST(BuildConeCylinder, GreatCircleHasNoCurvature) {
  EXPECT_NEAR(SphericalCircle(kPi / 2).curvature(0.3), 0.0, 1e-12);
}

TEST(BuildRotation, HorocycleGivesCylinderOfRevolution) {
  const auto f = build_rotation(make_curve("horocycle"), 3);
  for (double s : {-0.5, 0.0, 0.8}) {
    const Vec p = f->evaluate(point3(s, 1.1, 0.4));
    EXPECT_NEAR(p.tail(3).norm(), 1.0, 1e-12);
  }
}

TEST(BuildRotation, MetricIsConformalToHyperbolicTimesSphere) {
  const auto f = build_rotation(make_curve("horocycle"), 3);
  const Vec u = point3(0.3, 1.2, 0.5);
  const FundamentalForms F = fundamental_forms(jet_eval(*f, u, 1e-3, JetMode::kRichardson));
  const double g2 = to_half_plane(make_curve("horocycle")->frame(u[0]).pos)[1];
  Mat want = Mat::Identity(3, 3) * g2 * g2;
  want(2, 2) *= std::sin(u[1]) * std::sin(u[1]);
  EXPECT_LT((F.metric - want).norm(), 1e-9);
}

TEST(LiftCongruence, PlaneCircleExtendsTrivially) {
  CircleInQc circle;
  circle.c = 0;
  circle.center = (Vec(2) << 0.7, -1.2).finished();
  circle.radius = 0.9;
  const SphereElement s = lift_congruence(Family::kCylinder, circle, 3, point3(0.1, 0.0, 0.0));
  EXPECT_LT((s.center - (Vec(4) << 0.7, -1.2, 0.0, 0.0).finished()).norm(), 1e-12);
  EXPECT_NEAR(s.radius, 0.9, 1e-12);
}

TEST(LiftCongruence, GreatCircleIsAHyperplane) {
  CircleInQc circle;
  circle.c = 1;
  circle.plane_normal = Eigen::Vector3d(0, 0, 1);
  circle.plane_offset = 0.0;
  EXPECT_EQ(code_of([&] { lift_congruence(Family::kConeCylinder, circle, 3, point3(0.0, 1.0, 0.0)); }),
            ErrorCode::kHyperplane);
}

TEST(LiftCongruence, ConeSpheresMeetTheSphereOfRadiusTOrthogonally) {
  const DarbouxPair p = darboux_partner(Family::kConeCylinder, make_curve("small-circle:theta=1"), 3.0,
                                        Eigen::Vector3d(1, 1, 1), 3, 0.0, 2.0, 1e-3);
  double worst = 0.0;
  for (const Vec& u : p.grid.points()) {
    const SphereElement s = p.congruence(u);
    const double t = u[1];
    worst = std::max(worst, std::abs(s.center.head(3).squaredNorm() - s.radius * s.radius - t * t));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(DarbouxPartner, CylinderPairIsIsometric) {
  const DarbouxPair p = darboux_partner(Family::kCylinder, make_curve("circle:R=1"), 2.0, Eigen::Vector3d(1, 1, 1),
                                        3, 0.0, kPi, 1e-3);
  const auto pts = p.grid.points();
  const ConformalFit fit = conformal_factor_field(*p.f, *p.f_tilde, pts, 1e-6, 1e-3, JetMode::kRichardson);
  EXPECT_TRUE(fit.conformal);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(fit.phi[i], 0.0, 1e-8);
    EXPECT_EQ(p.conformal_factor(pts[i]), 1.0);
  }
}

TEST(DarbouxPartner, RotationConformalFactorIsHeightRatioSquared) {
  const DarbouxPair p = darboux_partner(Family::kRotation, make_curve("horocycle"), 1.0, Eigen::Vector3d(1, 1, 1), 3,
                                        -1.0, 1.0, 1e-3);
  const auto pts = p.grid.points();
  const ConformalFit fit = conformal_factor_field(*p.f, *p.f_tilde, pts, 1e-6, 1e-3, JetMode::kRichardson);
  EXPECT_LE(fit.anisotropy, 1e-6);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(std::exp(2 * fit.phi[i]), p.conformal_factor(pts[i]), 1e-6 * p.conformal_factor(pts[i]));
  }
}

TEST(DarbouxPartner, Errors) {
  EXPECT_EQ(code_of([] {
              darboux_partner(Family::kCylinder, make_curve("circle:R=1"), 2.0, Eigen::Vector3d::Zero(), 3, 0.0, 1.0,
                              1e-3);
            }),
            ErrorCode::kDegenerate);
  EXPECT_EQ(code_of([] {
              darboux_partner(Family::kConeCylinder, make_curve("small-circle:theta=1"), 0.5, Eigen::Vector3d(1, 1, 1),
                              3, 0.0, 1.0, 1e-3);
            }),
            ErrorCode::kInfeasible);
}

TEST(DarbouxPartner, DeterministicGivenParameters) {
  auto build = [] {
    return darboux_partner(Family::kCylinder, make_curve("ellipse:a=2,b=1"), 2.0, Eigen::Vector3d(1, 1, 1), 3, 0.0,
                           2.0, 1e-3);
  };
  const DarbouxPair a = build(), b = build();
  for (const Vec& u : a.grid.points()) {
    EXPECT_EQ(a.f_tilde->evaluate(u), b.f_tilde->evaluate(u));
    EXPECT_EQ(a.congruence(u).radius, b.congruence(u).radius);
  }
}

TEST(StructuredGrid, FlatIndexRoundTrip) {
  const StructuredGrid g = local_grid(Family::kRotation, 3, 0.5);
  EXPECT_EQ(g.size(), 343u);
  for (std::size_t i = 0; i < g.size(); i += 17) EXPECT_EQ(g.flat(g.index(i)), i);
  EXPECT_NEAR(g.point(g.size() / 2)[0], 0.5, 1e-15);
}
