#pragma once

#include "dforge/jet.hpp"

#include <Eigen/Dense>

namespace dforge {

/// Vector of the Minkowski space L^{m} with scalar product of signature
/// (+,...,+,-). For Euclidean space R^{n+1} the model space has m = n+3.
class LorentzVector {
 public:
  LorentzVector() = default;
  explicit LorentzVector(Eigen::VectorXd components) : c_(std::move(components)) {}
  static LorentzVector zero(int size) { return LorentzVector(Eigen::VectorXd::Zero(size)); }
  static LorentzVector basis(int size, int index);

  int size() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const Eigen::VectorXd& components() const { return c_; }

  LorentzVector operator+(const LorentzVector& o) const { return LorentzVector(c_ + o.c_); }
  LorentzVector operator-(const LorentzVector& o) const { return LorentzVector(c_ - o.c_); }
  LorentzVector operator-() const { return LorentzVector(-c_); }
  LorentzVector operator*(double s) const { return LorentzVector(c_ * s); }
  friend LorentzVector operator*(double s, const LorentzVector& v) { return v * s; }

 private:
  Eigen::VectorXd c_;
};

/// <x,y> = sum_{i<m-1} x_i y_i - x_{m-1} y_{m-1}. Throws on size mismatch.
double minkowski_dot(const LorentzVector& x, const LorentzVector& y);

/// Isometry Psi(x) = p0 + D x - |x|^2/2 w of R^{n+1} onto the horosphere
/// E^{n+1}_w of the light cone.
class EuclideanEmbedding {
 public:
  /// Validates the triple; throws kInvalidInput if <p0,p0>, <w,w>, <p0,w>-1,
  /// or the isometry conditions on D are violated beyond 1e-10.
  EuclideanEmbedding(LorentzVector p0, LorentzVector w, Eigen::MatrixXd D);

  /// p0 = (0,..,0,1/2,1/2), w = (0,..,0,1,-1), D = inclusion of the first
  /// n+1 coordinates.
  static EuclideanEmbedding canonical(int euclidean_dim);

  int euclidean_dim() const { return static_cast<int>(D_.cols()); }
  const LorentzVector& p0() const { return p0_; }
  const LorentzVector& w() const { return w_; }
  const Eigen::MatrixXd& D() const { return D_; }

  LorentzVector embed(const Eigen::VectorXd& x) const;
  /// Psi_*(x) v = D v - <x,v> w.
  LorentzVector push_forward(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;
  /// Inverse of D on span{p0,w}^perp: x_i = <y, D e_i>.
  Eigen::VectorXd pull_back(const LorentzVector& y) const;

 private:
  LorentzVector p0_;
  LorentzVector w_;
  Eigen::MatrixXd D_;
};

inline LorentzVector embed_point(const EuclideanEmbedding& E, const Eigen::VectorXd& x) {
  return E.embed(x);
}

/// Oriented round hypersphere together with its point of the de Sitter
/// space S_1^{n+2}. orientation = +1 means the unit normal points to the
/// center (mean curvature +1/radius); flipping it negates lorentz_rep.
struct SphereElement {
  Eigen::VectorXd center;
  double radius = 1.0;
  int orientation = 1;
  LorentzVector lorentz_rep;
};

SphereElement sphere_to_lorentz(const EuclideanEmbedding& E, const Eigen::VectorXd& center,
                                double radius, int orientation);

/// Throws kHyperplane when <v,w> vanishes (|<v,w>| < 1e-12) and
/// kInvalidInput when v is not a unit spacelike vector.
SphereElement lorentz_to_sphere(const EuclideanEmbedding& E, const LorentzVector& v);

/// s = (1/R) Psi(f) + Psi_*(f) N, the sphere of radius R tangent to the
/// hypersurface at f with center f + R N.
LorentzVector congruence_point(const EuclideanEmbedding& E, const Eigen::VectorXd& f,
                               const Eigen::VectorXd& normal, double radius);

/// <(A - alpha I) X, (A - alpha I) Y> in the metric induced by the jet.
double congruence_induced_metric(const ImmersionJet& jet, const FundamentalForms& forms,
                                 double alpha, const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Y);

/// True iff alpha stays farther than tol from every principal curvature.
bool congruence_regularity(const FundamentalForms& forms, double alpha, double tol);

}  // namespace dforge
