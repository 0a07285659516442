#pragma once

#include "dforge/curve.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace dforge {

/// The phase point is carried in extended precision: in the growing regime
/// |h| reaches 1e3 over one period and rounding a double state alone moves
/// K by ~1e-9.
using HReal = long double;
using HVector = Eigen::Matrix<HReal, 3, 1>;

/// Phase point (h1, h2, h3) of the curve Ribaucour system at arclength s.
struct RibaucourState {
  double s = 0.0;
  HVector h = HVector::Zero();
  double A = 0.0;

  Eigen::Vector3d hd() const { return h.cast<double>(); }
};

/// (k h2 + (A - c) h3, -k h1, h1).
HVector ode_rhs(const RibaucourState& state, double k, double c);

/// h1^2 + h2^2 + (c - A) h3^2, constant along ode_rhs.
HReal first_integral(const HVector& h, double A, double c);
inline double first_integral(const Eigen::Vector3d& h, double A, double c) {
  return static_cast<double>(first_integral(HVector(h.cast<HReal>()), A, c));
}

/// Rescales (h1, h2) so the first integral vanishes. Throws kInfeasible when
/// A <= c or when h3 = 0 with (h1, h2) != 0.
Eigen::Vector3d project_initial_state(const Eigen::Vector3d& h0, double A, double c);

struct IntegrationOptions {
  double drift_tol = 1e-9;
  int max_halvings = 8;
  double h3_min = 1e-8;  // 0 disables the guard
};

struct Trajectory {
  std::vector<RibaucourState> states;  // uniform spacing `step`
  double step = 0.0;
  int halvings = 0;
  double max_drift = 0.0;  // max |K(h) - K(h0)|
  double K0 = 0.0;
};

/// Classical RK4 over [s0, s1]. Halves the step while the drift exceeds
/// drift_tol; throws kDrift if it never gets below, kSingular if |h3| drops
/// under h3_min.
Trajectory integrate_states(const CurveQc& curve, const Eigen::Vector3d& h0, double A, double s0,
                            double s1, double step, const IntegrationOptions& opts = {});

/// gamma = h1 phi' + h2 n + c h3 phi.
Vec ribaucour_gamma(const CurveFrame& fr, const Eigen::Vector3d& h, int c);

/// phi~ = phi - 2 h3 gamma/<gamma,gamma>, evaluated densely along a
/// trajectory. Derivatives are closed form in (h, frame).
class TransformedCurve : public CurveQc {
 public:
  TransformedCurve(CurvePtr base, Trajectory traj);

  std::string describe() const override { return "ribaucour(" + base_->describe() + ")"; }
  std::pair<double, double> range() const override;

  const CurvePtr& base() const { return base_; }
  const Trajectory& trajectory() const { return traj_; }
  double A() const { return A_; }
  /// State at s: node value or one RK4 substep from the nearest node.
  HVector state_at(double s) const;

 protected:
  void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const override;

 private:
  CurvePtr base_;
  Trajectory traj_;
  double A_;
};

/// Throws kSingular if <gamma,gamma> < 1e-14 at a node, kVerification if
/// <gamma,gamma> = A h3^2 fails beyond 1e-9 relative.
std::shared_ptr<TransformedCurve> ribaucour_curve_transform(const CurvePtr& curve, const Trajectory& traj);

/// Circle of Q^2_c through phi(s), phi~(s) tangent to both curves there.
/// c = 0: center/radius in R^2. c = +-1: plane {<m,x> = d} of R^3 with
/// |m| = 1, d >= 0. For c = -1 the Euclidean circle of the half-plane model
/// is filled in as well (half_center, half_radius).
struct CircleInQc {
  int c = 0;
  Vec center;
  double radius = 0.0;
  Eigen::Vector3d plane_normal = Eigen::Vector3d::Zero();
  double plane_offset = 0.0;
  Eigen::Vector2d half_center = Eigen::Vector2d::Zero();
  double half_radius = 0.0;
  double tangency_residual = 0.0;
};

/// Throws kDegenerate for coincident points and kSingular when no circle
/// (only a line) is tangent to both.
CircleInQc enveloped_circle(const CurveQc& curve, const CurveQc& transformed, double s);

/// Header s,h1,h2,h3,K,phix..,phitilx.. then one row per trajectory node.
void write_curve_csv(std::ostream& os, const TransformedCurve& tc);

}  // namespace dforge
