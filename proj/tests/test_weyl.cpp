#include "dforge/error.hpp"
#include "dforge/weyl.hpp"

#include <gtest/gtest.h>

using namespace dforge;

namespace {

Vec at_point(double a, double b, double c, double d) { return (Vec(4) << a, b, c, d).finished(); }

}  // namespace

TEST(RiemannTensor, SectionalCurvaturesOfTheFactors) {
  for (double c : {-1.0, -0.5, 0.0, 1.0}) {
    const Tensor4 R = riemann_tensor(product_metric(c), at_point(0.3, -0.2, 0.4, 0.1), 1e-3);
    EXPECT_NEAR(at(R, 0, 1, 1, 0), c, 1e-8) << "c=" << c;
    EXPECT_NEAR(at(R, 2, 3, 3, 2), 1.0, 1e-8) << "c=" << c;
    EXPECT_NEAR(at(R, 0, 2, 2, 0), 0.0, 1e-8) << "c=" << c;
    EXPECT_NEAR(at(R, 0, 1, 0, 1), -c, 1e-8) << "c=" << c;
  }
}

TEST(RiemannTensor, AlgebraicSymmetries) {
  const Tensor4 R = riemann_tensor(product_metric(0.5), at_point(0.1, 0.2, -0.3, 0.4), 1e-3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          EXPECT_NEAR(at(R, i, j, k, l), -at(R, j, i, k, l), 1e-12);
          EXPECT_NEAR(at(R, i, j, k, l), at(R, k, l, i, j), 1e-8);
        }
}

TEST(WeylFromRiemann, ConstantCurvatureIsConformallyFlat) {
  // Q^2_c x S^2 with c = -1 is conformally flat
  const Tensor4 W = weyl_from_riemann(riemann_tensor(product_metric(-1.0), at_point(0.2, 0.1, -0.1, 0.3), 1e-3));
  for (double w : W) EXPECT_NEAR(w, 0.0, 1e-8);
}

TEST(WeylProductCheck, RejectsCurvatureBelowMinusOne) {
  try {
    weyl_product_check(-1.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(ProductMetric, OutsideTheHyperbolicChart) {
  try {
    product_metric(-1.0)(at_point(0.8, 0.7, 0.0, 0.0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutsideDomain);
  }
}

TEST(WeylProductCheck, FlatFactorComponentIsOneThird) {
  const WeylReport r = weyl_product_check(0.0);
  EXPECT_NEAR(at(r.weyl, 0, 1, 1, 0), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(at(r.weyl, 2, 3, 3, 2), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(at(r.weyl, 0, 1, 0, 1), -1.0 / 3.0, 1e-6);
}

TEST(WeylProductCheck, ListedComponentsForSeveralCurvatures) {
  for (double c : {0.0, 1.0, -0.5}) {
    const WeylReport r = weyl_product_check(c);
    ASSERT_EQ(r.checks.front().name.rfind("weyl.listed_components", 0), 0u);
    EXPECT_TRUE(r.checks.front().pass) << "c=" << c << " residual " << r.checks.front().max_residual;
  }
}

TEST(WeylProductCheck, ConformallyFlatLimitHasZeroComponents) {
  const WeylReport r = weyl_product_check(-1.0);
  for (double w : r.weyl) EXPECT_NEAR(w, 0.0, 1e-6);
  EXPECT_TRUE(r.pass);
}

TEST(WeylProductCheck, TraceFreeDiagnosticsHold) {
  for (double c : {0.0, 1.0, -0.5}) {
    for (const auto& ch : weyl_product_check(c).checks) {
      if (ch.name.find("diagnostic") != std::string::npos) EXPECT_TRUE(ch.pass) << ch.name << " " << ch.max_residual;
    }
  }
}

TEST(ClosedFormPlaneValue, CoordinatePlanes) {
  const Vec e1 = Vec::Unit(4, 0), e2 = Vec::Unit(4, 1), e3 = Vec::Unit(4, 2);
  EXPECT_NEAR(closed_form_plane_value(0.0, e1, e2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(closed_form_plane_value(0.0, e1, e3), 0.0, 1e-15);
  EXPECT_NEAR(trace_free_plane_value(0.0, e1, e3), -1.0 / 6.0, 1e-15);
}

// <W(e1,e3)e3,e1> is stated to vanish. The computed tensor gives -(1+c)/6,
// as any trace-free tensor with W_1221 = (1+c)/3 must; this test fails.
TEST(WeylProductCheck, MixedPlaneValueVanishes) {
  const WeylReport r = weyl_product_check(0.0);
  EXPECT_NEAR(plane_value(r.weyl, Vec::Unit(4, 0), Vec::Unit(4, 2)), 0.0, 1e-6);
}

TEST(WeylProductCheck, PlaneCriterionMatchesClosedForm) {
  for (double c : {0.0, 1.0, -0.5}) {
    const WeylReport r = weyl_product_check(c);
    for (const auto& ch : r.checks) {
      if (ch.name.rfind("weyl.plane_closed_form", 0) == 0) EXPECT_TRUE(ch.pass) << ch.name << " " << ch.max_residual;
    }
  }
}
