#pragma once

#include "dforge/lorentz.hpp"
#include "dforge/ribaucour.hpp"
#include "dforge/surfaces.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dforge {

enum class Family { kCylinder, kConeCylinder, kRotation };

const char* to_string(Family f);
Family family_from_string(const std::string& name);
/// Ambient curvature of the profile curve: 0, 1, -1.
int family_curvature(Family f);

/// Sphere congruence along a common parameter domain.
using Congruence = std::function<SphereElement(const Vec& u)>;

/// Two hypersurfaces over one parameter domain enveloping a common
/// congruence. conformal_factor returns e^{2 phi} with g~ = e^{2 phi} g when known.
struct SurfacePair {
  ImmersionPtr f;
  ImmersionPtr f_tilde;
  Congruence congruence;
  std::function<double(const Vec&)> conformal_factor;
};

/// Uniform tensor grid lower + i * spacing, i < counts.
struct StructuredGrid {
  Vec lower;
  Vec spacing;
  std::vector<int> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  std::size_t size() const;
  Vec point(std::size_t flat) const;
  std::vector<int> index(std::size_t flat) const;
  std::size_t flat(const std::vector<int>& idx) const;
  std::vector<Vec> points() const;
};

struct DarbouxPair : SurfacePair {
  Family family = Family::kCylinder;
  int n = 3;
  double A = 0.0;
  Eigen::Vector3d h0 = Eigen::Vector3d::Zero();  // as given, before projection
  double s0 = 0.0, s1 = 0.0, step = 0.0;
  CurvePtr curve;
  std::shared_ptr<const TransformedCurve> curve_tilde;
  StructuredGrid grid;  // default verification grid
};

/// f(s, t) = (phi(s), t) in R^2 x R^{n-1}.
ImmersionPtr build_cylinder(const CurvePtr& plane_curve, int n);
/// f(s, t, tau) = (t gamma(s), tau) in R^3 x R^{n-2}, t > 0.
ImmersionPtr build_cone_cylinder(const CurvePtr& spherical_curve, int n);
/// f(s, theta) = (g1(s), g2(s) omega(theta)), g the half-plane image of the
/// curve, omega in S^{n-1} by hyperspherical angles.
ImmersionPtr build_rotation(const CurvePtr& hyperbolic_curve, int n);

/// Hypersphere of R^{n+1} meeting R^2, S^2 or the half-plane orthogonally
/// along the circle, at full parameter u of the family chart.
SphereElement lift_congruence(Family family, const CircleInQc& circle, int n, const Vec& u);

/// Runs projection, RK4, the curve transform and the lift. Throws
/// kInfeasible for A <= c and propagates ODE errors.
DarbouxPair darboux_partner(Family family, const CurvePtr& curve, double A, const Eigen::Vector3d& h0,
                            int n, double s0, double s1, double step,
                            const IntegrationOptions& opts = {});

/// Grid of the family chart: curve samples in [s0, s1] (inset by margin),
/// a few values of every other coordinate.
StructuredGrid default_grid(Family family, int n, double s0, double s1, int curve_samples = 9,
                            int other_samples = 3);

/// Small uniform grid centred at s_center (and a fixed interior point of
/// the other coordinates) for stencil-based checks.
StructuredGrid local_grid(Family family, int n, double s_center, double spacing = 0.02, int count = 7);

/// Trivial pair (f, I∘f) with the congruence of spheres tangent to f that
/// are orthogonal to the inversion sphere (hence I-invariant).
SurfacePair inversion_control_pair(const ImmersionPtr& f, const InversionSpec& spec,
                                   double step = kDefaultJetStep);

}  // namespace dforge
