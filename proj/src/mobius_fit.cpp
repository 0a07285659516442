#include "dforge/mobius_fit.hpp"

#include "dforge/error.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include <cmath>
#include <limits>
#include <random>

namespace dforge {

namespace {

Vec invert_about(const Vec& x, const Vec& p) {
  const Vec q = x - p;
  return q / q.squaredNorm();
}

double spread(const std::vector<Vec>& Y) {
  Vec mean = Vec::Zero(Y.front().size());
  for (const auto& y : Y) mean += y;
  mean /= static_cast<double>(Y.size());
  double s = 0.0;
  for (const auto& y : Y) s += (y - mean).squaredNorm();
  return std::sqrt(s / static_cast<double>(Y.size()));
}

void check_samples(const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  if (X.size() != Y.size() || X.size() < 3) throw Error(ErrorCode::kInvalidInput, "fit: need matching samples (>= 3)");
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != X[0].size() || Y[i].size() != X[0].size()) {
      throw Error(ErrorCode::kDimensionMismatch, "fit: samples must share one dimension");
    }
  }
}

// residual vector of the best similarity from J = j(X) onto Y
MobiusFit procrustes(const std::vector<Vec>& J, const std::vector<Vec>& Y) {
  const int m = static_cast<int>(J.front().size());
  const double N = static_cast<double>(J.size());
  Vec mj = Vec::Zero(m), my = Vec::Zero(m);
  for (std::size_t i = 0; i < J.size(); ++i) {
    mj += J[i];
    my += Y[i];
  }
  mj /= N;
  my /= N;
  Mat S = Mat::Zero(m, m);
  double var = 0.0;
  for (std::size_t i = 0; i < J.size(); ++i) {
    S += (Y[i] - my) * (J[i] - mj).transpose();
    var += (J[i] - mj).squaredNorm();
  }
  Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
  MobiusFit fit;
  fit.Q = svd.matrixU() * svd.matrixV().transpose();
  fit.scale = var > 0.0 ? svd.singularValues().sum() / var : 0.0;
  fit.shift = my - fit.scale * fit.Q * mj;
  return fit;
}

double misfit(const MobiusFit& fit, const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) s += (fit.apply(X[i]) - Y[i]).squaredNorm();
  return std::sqrt(s / static_cast<double>(X.size()));
}

struct PoleFunctor : Eigen::DenseFunctor<double> {
  const std::vector<Vec>* X;
  const std::vector<Vec>* Y;

  PoleFunctor(const std::vector<Vec>& x, const std::vector<Vec>& y)
      : Eigen::DenseFunctor<double>(static_cast<int>(x.front().size()),
                                    static_cast<int>(x.size() * x.front().size())),
        X(&x),
        Y(&y) {}

  int operator()(const InputType& p, ValueType& fvec) const {
    std::vector<Vec> J(X->size());
    for (std::size_t i = 0; i < X->size(); ++i) J[i] = invert_about((*X)[i], p);
    MobiusFit fit = procrustes(J, *Y);
    const int m = static_cast<int>(p.size());
    for (std::size_t i = 0; i < X->size(); ++i) {
      fvec.segment(static_cast<int>(i) * m, m) = fit.scale * fit.Q * J[i] + fit.shift - (*Y)[i];
    }
    return 0;
  }
};

}  // namespace

Vec MobiusFit::apply(const Vec& x) const {
  return scale * Q * (uses_inversion ? invert_about(x, pole) : x) + shift;
}

MobiusFit fit_similarity(const std::vector<Vec>& X, const std::vector<Vec>& Y) {
  check_samples(X, Y);
  MobiusFit fit = procrustes(X, Y);
  fit.residual = misfit(fit, X, Y) / std::max(spread(Y), 1e-300);
  return fit;
}

MobiusFit fit_mobius(const std::vector<Vec>& X, const std::vector<Vec>& Y, unsigned seed, int starts) {
  check_samples(X, Y);
  MobiusFit best = fit_similarity(X, Y);
  const int m = static_cast<int>(X.front().size());
  const double spreadY = std::max(spread(Y), 1e-300);

  Vec center = Vec::Zero(m);
  for (const auto& x : X) center += x;
  center /= static_cast<double>(X.size());
  const double radius = std::max(spread(X), 1e-12);

  std::vector<Vec> seeds;
  for (double r : {0.5, 2.0, 8.0}) {
    for (int i = 0; i < m; ++i) {
      for (int sgn : {1, -1}) seeds.push_back(center + sgn * r * radius * Vec::Unit(m, i));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int k = 0; k < starts; ++k) {
    Vec dir(m);
    for (int i = 0; i < m; ++i) dir[i] = gauss(rng);
    seeds.push_back(center + (1.0 + 3.0 * (k % 4)) * radius * dir.normalized());
  }

  PoleFunctor functor(X, Y);
  Eigen::NumericalDiff<PoleFunctor> numdiff(functor);
  for (const Vec& s : seeds) {
    Vec p = s;
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<PoleFunctor>> lm(numdiff);
    lm.setMaxfev(400);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    lm.minimize(p);
    if (!p.allFinite()) continue;
    bool hits_data = false;
    for (const auto& x : X) hits_data = hits_data || (x - p).norm() < 1e-9 * radius;
    if (hits_data) continue;
    std::vector<Vec> J(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) J[i] = invert_about(X[i], p);
    MobiusFit fit = procrustes(J, Y);
    fit.uses_inversion = true;
    fit.pole = p;
    fit.residual = misfit(fit, X, Y) / spreadY;
    if (fit.residual < best.residual) best = fit;
  }
  return best;
}

}  // namespace dforge
