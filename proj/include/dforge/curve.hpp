#pragma once

#include "dforge/jet.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dforge {

/// <a,b> of the model of Q^2_c: Euclidean for c in {0,1}, signature (+,+,-)
/// on R^3 for c = -1.
double ambient_dot(int c, const Vec& a, const Vec& b);

/// Unit normal making {tangent, normal} positively oriented in Q^2_c:
/// c = 0: rotation of the tangent by +90 degrees; c = 1: pos x tangent;
/// c = -1: G (pos x tangent) with G = diag(1,1,-1).
Vec oriented_normal(int c, const Vec& pos, const Vec& tangent);

/// Position, derivatives and curvature of a unit-speed curve at arclength s.
/// accel = phi'' = k normal - c phi.
struct CurveFrame {
  double s = 0.0;
  Vec pos;
  Vec tangent;
  Vec normal;
  Vec accel;
  double k = 0.0;
};

/// Unit-speed curve in Q^2_c with nowhere vanishing geodesic curvature.
/// c = 0 lives in R^2, c = 1 on the unit sphere of R^3, c = -1 on the upper
/// sheet <x,x> = -1 of L^3 (last coordinate timelike).
class CurveQc {
 public:
  explicit CurveQc(int c) : c_(c) {}
  virtual ~CurveQc() = default;

  int c() const { return c_; }
  int ambient_dim() const { return c_ == 0 ? 2 : 3; }

  /// Frame with the normal flipped when flip_normal() is set.
  CurveFrame frame(double s) const;
  double curvature(double s) const { return frame(s).k; }

  virtual std::pair<double, double> range() const {
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }
  /// Round-trippable description, e.g. "circle:R=1".
  virtual std::string describe() const = 0;

  void set_flip_normal(bool flip) { flip_ = flip; }
  bool flip_normal() const { return flip_; }

 protected:
  /// pos, tangent, accel at s; normal and k are derived by the base class.
  virtual void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const = 0;

 private:
  int c_;
  bool flip_ = false;
};

using CurvePtr = std::shared_ptr<const CurveQc>;

/// Circle of radius R about the origin, counterclockwise. k = 1/R.
class PlaneCircle : public CurveQc {
 public:
  explicit PlaneCircle(double radius);
  std::string describe() const override;

 protected:
  void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const override;

 private:
  double R_;
};

/// Ellipse x^2/a^2 + y^2/b^2 = 1 by arclength from (a,0), counterclockwise.
class Ellipse : public CurveQc {
 public:
  Ellipse(double a, double b);
  std::string describe() const override;
  double perimeter() const { return cum_.back(); }

 protected:
  void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const override;

 private:
  double speed(double t) const;
  double arclength(double t) const;
  double parameter(double s) const;

  double a_, b_;
  double dt_;
  std::vector<double> cum_;  // arclength at panel ends over one period
};

/// Circle of colatitude theta on the unit sphere; k = cot(theta).
class SphericalCircle : public CurveQc {
 public:
  explicit SphericalCircle(double colatitude);
  std::string describe() const override;

 protected:
  void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const override;

 private:
  double theta_;
};

/// Image on the hyperboloid of the horizontal line y = 1 of the half-plane,
/// s = x. k = 1.
class Horocycle : public CurveQc {
 public:
  Horocycle() : CurveQc(-1) {}
  std::string describe() const override { return "horocycle"; }

 protected:
  void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const override;
};

/// Curve with prescribed curvature k(s), integrated from the Frenet system
/// phi'' = k n - c phi by RK4 on a fixed node grid; off-node values take one
/// RK4 substep from the nearest node.
class FrenetCurve : public CurveQc {
 public:
  using CurvatureFn = std::function<double(double)>;

  FrenetCurve(int c, CurvatureFn k, std::string description, double s_min = -1.0,
              double s_max = 2.0 * M_PI + 1.0, double node_step = 1e-3);
  std::string describe() const override { return description_; }
  std::pair<double, double> range() const override { return {s_min_, s_max_}; }

 protected:
  void raw(double s, Vec& pos, Vec& tangent, Vec& accel) const override;

 private:
  Vec rhs(double s, const Vec& y) const;
  Vec step(double s, const Vec& y, double h) const;

  CurvatureFn k_;
  std::string description_;
  double s_min_, s_max_, h_;
  std::vector<Vec> nodes_;  // (pos, tangent) stacked
};

/// Parses circle:R=r | ellipse:a=..,b=.. | small-circle:theta=.. | horocycle |
/// frenet:c=..,k0=..,k1=.. (k = k0 + k1 sin s). Throws kInvalidInput.
CurvePtr make_curve(const std::string& spec);

/// Isometry of the hyperboloid onto the upper half-plane (X, Y), Y > 0.
Eigen::Vector2d to_half_plane(const Vec& x);
/// Derivative of to_half_plane at x applied to v.
Eigen::Vector2d to_half_plane_diff(const Vec& x, const Vec& v);
Vec from_half_plane(const Eigen::Vector2d& p);

}  // namespace dforge
