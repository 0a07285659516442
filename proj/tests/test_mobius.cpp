#include "dforge/error.hpp"
#include "dforge/factory.hpp"
#include "dforge/mobius_fit.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dforge;

namespace {

std::vector<Vec> cloud(unsigned seed, int count = 60, int dim = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Vec> X(count, Vec(dim));
  for (auto& x : X)
    for (auto& v : x) v = U(rng);
  return X;
}

Mat rotation(unsigned seed, int dim = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  Mat M(dim, dim);
  for (int i = 0; i < dim * dim; ++i) M.data()[i] = N(rng);
  return Eigen::HouseholderQR<Mat>(M).householderQ();
}

}  // namespace

TEST(FitSimilarity, RecoversScaleRotationAndShift) {
  const auto X = cloud(1);
  const Mat Q = rotation(2);
  const Vec b = (Vec(4) << 1.0, -2.0, 0.5, 3.0).finished();
  std::vector<Vec> Y;
  for (const auto& x : X) Y.push_back(2.5 * Q * x + b);
  const MobiusFit fit = fit_similarity(X, Y);
  EXPECT_FALSE(fit.uses_inversion);
  EXPECT_NEAR(fit.scale, 2.5, 1e-12);
  EXPECT_LT((fit.Q - Q).norm(), 1e-12);
  EXPECT_LT(fit.residual, 1e-13);
  EXPECT_LT((fit.apply(X[3]) - Y[3]).norm(), 1e-12);
}

TEST(FitMobius, RecoversInversionPole) {
  const auto X = cloud(3);
  const Vec p = (Vec(4) << 0.3, 2.2, -0.4, 0.1).finished();
  const Mat Q = rotation(4);
  std::vector<Vec> Y;
  for (const auto& x : X) Y.push_back(0.7 * Q * (x - p) / (x - p).squaredNorm() + Vec::Constant(4, 0.2));
  const MobiusFit fit = fit_mobius(X, Y);
  EXPECT_TRUE(fit.uses_inversion);
  EXPECT_LT(fit.residual, 1e-10);
  EXPECT_LT((fit.pole - p).norm(), 1e-7);
}

TEST(FitMobius, SimilarityDataStaysTrivial) {
  const auto X = cloud(5);
  std::vector<Vec> Y;
  for (const auto& x : X) Y.push_back(3.0 * x);
  EXPECT_LT(fit_mobius(X, Y).residual, 1e-10);
}

TEST(FitMobius, FactoryPairIsNotMobiusEquivalent) {
  const DarbouxPair pair = darboux_partner(Family::kCylinder, make_curve("circle:R=1"), 2.0, Eigen::Vector3d(1, 1, 1),
                                           3, 0.0, 3.14159, 1e-3);
  std::vector<Vec> X, Y;
  for (const auto& u : pair.grid.points()) {
    X.push_back(pair.f->evaluate(u));
    Y.push_back(pair.f_tilde->evaluate(u));
  }
  EXPECT_GT(fit_mobius(X, Y).residual, 1e-3);
}

TEST(FitMobius, InputErrors) {
  const auto X = cloud(6);
  try {
    fit_mobius(X, cloud(7, 59));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
  try {
    fit_similarity(X, cloud(7, 60, 3));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  try {
    fit_similarity({}, {});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}
