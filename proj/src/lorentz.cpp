#include "dforge/lorentz.hpp"

#include "dforge/error.hpp"

#include <cmath>
#include <string>

namespace dforge {

namespace {
constexpr double kEmbeddingTol = 1e-10;

void require_same_size(const LorentzVector& x, const LorentzVector& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kDimensionMismatch,
                "minkowski_dot: sizes " + std::to_string(x.size()) + " and " +
                    std::to_string(y.size()));
  }
}
}  // namespace

LorentzVector LorentzVector::basis(int size, int index) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  v[index] = 1.0;
  return LorentzVector(std::move(v));
}

double minkowski_dot(const LorentzVector& x, const LorentzVector& y) {
  require_same_size(x, y);
  const int last = x.size() - 1;
  return x.components().head(last).dot(y.components().head(last)) - x[last] * y[last];
}

EuclideanEmbedding::EuclideanEmbedding(LorentzVector p0, LorentzVector w, Eigen::MatrixXd D)
    : p0_(std::move(p0)), w_(std::move(w)), D_(std::move(D)) {
  const int m = p0_.size();
  if (w_.size() != m || D_.rows() != m || D_.cols() != m - 2) {
    throw Error(ErrorCode::kDimensionMismatch, "EuclideanEmbedding: inconsistent sizes");
  }
  if (std::abs(minkowski_dot(p0_, p0_)) > kEmbeddingTol ||
      std::abs(minkowski_dot(w_, w_)) > kEmbeddingTol ||
      std::abs(minkowski_dot(p0_, w_) - 1.0) > kEmbeddingTol) {
    throw Error(ErrorCode::kInvalidInput, "EuclideanEmbedding: p0, w must be null with <p0,w> = 1");
  }
  for (int i = 0; i < D_.cols(); ++i) {
    const LorentzVector di(D_.col(i));
    if (std::abs(minkowski_dot(di, p0_)) > kEmbeddingTol ||
        std::abs(minkowski_dot(di, w_)) > kEmbeddingTol) {
      throw Error(ErrorCode::kInvalidInput, "EuclideanEmbedding: D must map into span{p0,w}^perp");
    }
    for (int j = 0; j < D_.cols(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(minkowski_dot(di, LorentzVector(D_.col(j))) - expected) > kEmbeddingTol) {
        throw Error(ErrorCode::kInvalidInput, "EuclideanEmbedding: D is not an isometry");
      }
    }
  }
}

EuclideanEmbedding EuclideanEmbedding::canonical(int euclidean_dim) {
  if (euclidean_dim < 1) throw Error(ErrorCode::kInvalidInput, "canonical: dimension must be positive");
  const int m = euclidean_dim + 2;
  LorentzVector p0 = LorentzVector::zero(m);
  p0[m - 2] = 0.5;
  p0[m - 1] = 0.5;
  LorentzVector w = LorentzVector::zero(m);
  w[m - 2] = 1.0;
  w[m - 1] = -1.0;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, euclidean_dim);
  D.topRows(euclidean_dim).setIdentity();
  return EuclideanEmbedding(std::move(p0), std::move(w), std::move(D));
}

LorentzVector EuclideanEmbedding::embed(const Eigen::VectorXd& x) const {
  if (x.size() != euclidean_dim()) throw Error(ErrorCode::kDimensionMismatch, "embed: wrong point size");
  return LorentzVector(p0_.components() + D_ * x - 0.5 * x.squaredNorm() * w_.components());
}

LorentzVector EuclideanEmbedding::push_forward(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& v) const {
  if (x.size() != euclidean_dim() || v.size() != euclidean_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "push_forward: wrong vector size");
  }
  return LorentzVector(D_ * v - x.dot(v) * w_.components());
}

Eigen::VectorXd EuclideanEmbedding::pull_back(const LorentzVector& y) const {
  Eigen::VectorXd x(euclidean_dim());
  for (int i = 0; i < euclidean_dim(); ++i) x[i] = minkowski_dot(y, LorentzVector(D_.col(i)));
  return x;
}

SphereElement sphere_to_lorentz(const EuclideanEmbedding& E, const Eigen::VectorXd& center,
                                double radius, int orientation) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidInput, "sphere_to_lorentz: radius must be positive");
  }
  if (orientation != 1 && orientation != -1) {
    throw Error(ErrorCode::kInvalidInput, "sphere_to_lorentz: orientation must be +1 or -1");
  }
  // Evaluate H Psi(f) + Psi_*(f) N at the point f = center + R e_0 with the
  // normal of the requested orientation; the result does not depend on f.
  Eigen::VectorXd f = center;
  f[0] += radius;
  Eigen::VectorXd inward = (center - f) / radius;
  const double H = orientation / radius;
  const Eigen::VectorXd N = orientation * inward;
  SphereElement s;
  s.center = center;
  s.radius = radius;
  s.orientation = orientation;
  s.lorentz_rep = H * E.embed(f) + E.push_forward(f, N);
  return s;
}

SphereElement lorentz_to_sphere(const EuclideanEmbedding& E, const LorentzVector& v) {
  if (v.size() != E.euclidean_dim() + 2) {
    throw Error(ErrorCode::kDimensionMismatch, "lorentz_to_sphere: wrong vector size");
  }
  const double norm = minkowski_dot(v, v);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidInput,
                "lorentz_to_sphere: <v,v> = " + std::to_string(norm) + " is not 1");
  }
  const double vw = minkowski_dot(v, E.w());
  if (std::abs(vw) < 1e-12) {
    throw Error(ErrorCode::kHyperplane, "lorentz_to_sphere: <v,w> = 0 describes a hyperplane");
  }
  // v = sigma/R (Psi(c) + R^2/2 w)
  SphereElement s;
  s.orientation = vw > 0 ? 1 : -1;
  s.radius = 1.0 / std::abs(vw);
  s.center = E.pull_back(v * (s.orientation * s.radius));
  s.lorentz_rep = v;
  return s;
}

LorentzVector congruence_point(const EuclideanEmbedding& E, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& normal, double radius) {
  return (1.0 / radius) * E.embed(f) + E.push_forward(f, normal);
}

double congruence_induced_metric(const ImmersionJet& jet, const FundamentalForms& forms,
                                 double alpha, const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Y) {
  const int n = forms.dim();
  if (X.size() != n || Y.size() != n || jet.dim() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "congruence_induced_metric: tangent size");
  }
  const Eigen::MatrixXd B = forms.shape - alpha * Eigen::MatrixXd::Identity(n, n);
  return (jet.first * (B * X)).dot(jet.first * (B * Y));
}

bool congruence_regularity(const FundamentalForms& forms, double alpha, double tol) {
  return ((forms.principal_curvatures.array() - alpha).abs() > tol).all();
}

}  // namespace dforge
