#include "dforge/factory.hpp"

#include "dforge/error.hpp"

#include <cmath>

namespace dforge {

const char* to_string(Family f) {
  switch (f) {
    case Family::kCylinder: return "cylinder";
    case Family::kConeCylinder: return "cone-cylinder";
    case Family::kRotation: return "rotation";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "cylinder") return Family::kCylinder;
  if (name == "cone-cylinder" || name == "cone") return Family::kConeCylinder;
  if (name == "rotation") return Family::kRotation;
  throw Error(ErrorCode::kInvalidInput, "unknown family: " + name);
}

int family_curvature(Family f) {
  switch (f) {
    case Family::kCylinder: return 0;
    case Family::kConeCylinder: return 1;
    case Family::kRotation: return -1;
  }
  return 0;
}

std::size_t StructuredGrid::size() const {
  std::size_t n = 1;
  for (int c : counts) n *= static_cast<std::size_t>(c);
  return n;
}

std::vector<int> StructuredGrid::index(std::size_t flat) const {
  std::vector<int> idx(counts.size());
  for (std::size_t d = counts.size(); d-- > 0;) {
    idx[d] = static_cast<int>(flat % counts[d]);
    flat /= counts[d];
  }
  return idx;
}

std::size_t StructuredGrid::flat(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (std::size_t d = 0; d < counts.size(); ++d) f = f * counts[d] + idx[d];
  return f;
}

Vec StructuredGrid::point(std::size_t flat_index) const {
  const auto idx = index(flat_index);
  Vec p = lower;
  for (std::size_t d = 0; d < idx.size(); ++d) p[d] += idx[d] * spacing[d];
  return p;
}

std::vector<Vec> StructuredGrid::points() const {
  std::vector<Vec> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

namespace {

void require_family_curve(const CurvePtr& curve, int c, const char* who) {
  if (!curve) throw Error(ErrorCode::kInvalidInput, std::string(who) + ": null curve");
  if (curve->c() != c) throw Error(ErrorCode::kInvalidInput, std::string(who) + ": curve lives in the wrong space form");
}

ParamBox curve_box(const CurveQc& curve, int n) {
  ParamBox box = ParamBox::unbounded(n);
  const auto [lo, hi] = curve.range();
  box.lower[0] = lo;
  box.upper[0] = hi;
  return box;
}

// omega in S^{n-1} from n-1 hyperspherical angles
Vec sphere_point(const Vec& angles) {
  const int m = static_cast<int>(angles.size());
  Vec w(m + 1);
  double prod = 1.0;
  for (int i = 0; i < m; ++i) {
    w[i] = prod * std::cos(angles[i]);
    prod *= std::sin(angles[i]);
  }
  w[m] = prod;
  return w;
}

}  // namespace

ImmersionPtr build_cylinder(const CurvePtr& curve, int n) {
  require_family_curve(curve, 0, "build_cylinder");
  if (n < 2) throw Error(ErrorCode::kInvalidInput, "build_cylinder: n must be at least 2");
  auto eval = [curve, n](const Vec& u) {
    Vec p(n + 1);
    p.head(2) = curve->frame(u[0]).pos;
    p.tail(n - 1) = u.tail(n - 1);
    return p;
  };
  return std::make_shared<FunctionImmersion>("cylinder over " + curve->describe(), n, eval,
                                             FunctionImmersion::JetFn{}, curve_box(*curve, n));
}

ImmersionPtr build_cone_cylinder(const CurvePtr& curve, int n) {
  require_family_curve(curve, 1, "build_cone_cylinder");
  if (n < 2) throw Error(ErrorCode::kInvalidInput, "build_cone_cylinder: n must be at least 2");
  auto eval = [curve, n](const Vec& u) {
    if (!(u[1] > 0.0)) throw Error(ErrorCode::kOutsideDomain, "cone: t must be positive (vertex excluded)");
    Vec p(n + 1);
    p.head(3) = u[1] * curve->frame(u[0]).pos;
    p.tail(n - 2) = u.tail(n - 2);
    return p;
  };
  ParamBox box = curve_box(*curve, n);
  box.lower[1] = 0.0;
  return std::make_shared<FunctionImmersion>("cone over " + curve->describe(), n, eval,
                                             FunctionImmersion::JetFn{}, box);
}

ImmersionPtr build_rotation(const CurvePtr& curve, int n) {
  require_family_curve(curve, -1, "build_rotation");
  if (n < 2) throw Error(ErrorCode::kInvalidInput, "build_rotation: n must be at least 2");
  auto eval = [curve, n](const Vec& u) {
    const Eigen::Vector2d g = to_half_plane(curve->frame(u[0]).pos);
    Vec p(n + 1);
    p[0] = g[0];
    p.tail(n) = g[1] * sphere_point(u.tail(n - 1));
    return p;
  };
  ParamBox box = curve_box(*curve, n);
  for (int i = 1; i < n - 1; ++i) {
    box.lower[i] = 0.0;
    box.upper[i] = M_PI;
  }
  return std::make_shared<FunctionImmersion>("rotation over " + curve->describe(), n, eval,
                                             FunctionImmersion::JetFn{}, box);
}

SphereElement lift_congruence(Family family, const CircleInQc& circle, int n, const Vec& u) {
  if (circle.c != family_curvature(family)) {
    throw Error(ErrorCode::kInvalidInput, "lift_congruence: circle does not match the family");
  }
  if (u.size() != n) throw Error(ErrorCode::kDimensionMismatch, "lift_congruence: parameter has wrong size");
  const auto E = EuclideanEmbedding::canonical(n + 1);
  Vec center(n + 1);
  double radius = 0.0;
  switch (family) {
    case Family::kCylinder:
      if (!(circle.radius > 0.0)) throw Error(ErrorCode::kDegenerate, "lift_congruence: degenerate circle");
      center.head(2) = circle.center;
      center.tail(n - 1) = u.tail(n - 1);
      radius = circle.radius;
      break;
    case Family::kConeCylinder: {
      const double d = circle.plane_offset;
      if (d < 1e-12) throw Error(ErrorCode::kHyperplane, "lift_congruence: great circle lifts to a hyperplane");
      if (d >= 1.0) throw Error(ErrorCode::kDegenerate, "lift_congruence: degenerate circle");
      center.head(3) = u[1] * circle.plane_normal / d;
      center.tail(n - 2) = u.tail(n - 2);
      radius = u[1] * std::sqrt(1.0 / (d * d) - 1.0);
      break;
    }
    case Family::kRotation:
      if (!(circle.half_radius > 0.0)) throw Error(ErrorCode::kDegenerate, "lift_congruence: degenerate circle");
      center[0] = circle.half_center[0];
      center.tail(n) = circle.half_center[1] * sphere_point(u.tail(n - 1));
      radius = circle.half_radius;
      break;
  }
  return sphere_to_lorentz(E, center, radius, 1);
}

StructuredGrid default_grid(Family family, int n, double s0, double s1, int curve_samples, int other_samples) {
  StructuredGrid g;
  g.lower = Vec::Zero(n);
  g.spacing = Vec::Zero(n);
  g.counts.assign(n, other_samples);
  const double margin = 0.05 * (s1 - s0);
  g.counts[0] = curve_samples;
  g.lower[0] = s0 + margin;
  g.spacing[0] = curve_samples > 1 ? (s1 - s0 - 2.0 * margin) / (curve_samples - 1) : 0.0;
  auto span = [&](int i, double lo, double hi) {
    g.lower[i] = lo;
    g.spacing[i] = other_samples > 1 ? (hi - lo) / (other_samples - 1) : 0.0;
  };
  for (int i = 1; i < n; ++i) {
    switch (family) {
      case Family::kCylinder: span(i, -0.5, 0.5); break;
      case Family::kConeCylinder: i == 1 ? span(i, 0.8, 1.6) : span(i, -0.5, 0.5); break;
      case Family::kRotation: i < n - 1 ? span(i, 0.8, 2.2) : span(i, 0.0, 1.0); break;
    }
  }
  return g;
}

StructuredGrid local_grid(Family family, int n, double s_center, double spacing, int count) {
  StructuredGrid g;
  g.counts.assign(n, count);
  g.spacing = Vec::Constant(n, spacing);
  Vec center = Vec::Zero(n);
  center[0] = s_center;
  for (int i = 1; i < n; ++i) {
    switch (family) {
      case Family::kCylinder: center[i] = 0.0; break;
      case Family::kConeCylinder: center[i] = i == 1 ? 1.2 : 0.0; break;
      case Family::kRotation: center[i] = i < n - 1 ? 1.5 : 0.5; break;
    }
  }
  g.lower = center - 0.5 * (count - 1) * g.spacing;
  return g;
}

DarbouxPair darboux_partner(Family family, const CurvePtr& curve, double A, const Eigen::Vector3d& h0, int n,
                            double s0, double s1, double step, const IntegrationOptions& opts) {
  const int c = family_curvature(family);
  require_family_curve(curve, c, "darboux_partner");
  if (n < 3) throw Error(ErrorCode::kInvalidInput, "darboux_partner: n must be at least 3");
  if (h0.squaredNorm() == 0.0) throw Error(ErrorCode::kDegenerate, "darboux_partner: h0 = 0 gives no transform");
  const Eigen::Vector3d h = project_initial_state(h0, A, c);
  const Trajectory traj = integrate_states(*curve, h, A, s0, s1, step, opts);
  auto tc = ribaucour_curve_transform(curve, traj);

  DarbouxPair pair;
  pair.family = family;
  pair.n = n;
  pair.A = A;
  pair.h0 = h0;
  pair.s0 = s0;
  pair.s1 = s1;
  pair.step = step;
  pair.curve = curve;
  pair.curve_tilde = tc;
  switch (family) {
    case Family::kCylinder:
      pair.f = build_cylinder(curve, n);
      pair.f_tilde = build_cylinder(tc, n);
      pair.conformal_factor = [](const Vec&) { return 1.0; };
      break;
    case Family::kConeCylinder:
      pair.f = build_cone_cylinder(curve, n);
      pair.f_tilde = build_cone_cylinder(tc, n);
      pair.conformal_factor = [](const Vec&) { return 1.0; };
      break;
    case Family::kRotation:
      pair.f = build_rotation(curve, n);
      pair.f_tilde = build_rotation(tc, n);
      pair.conformal_factor = [curve, tc](const Vec& u) {
        const double y = to_half_plane(curve->frame(u[0]).pos)[1];
        const double yt = to_half_plane(tc->frame(u[0]).pos)[1];
        return (yt * yt) / (y * y);
      };
      break;
  }
  pair.congruence = [family, curve, tc, n](const Vec& u) {
    return lift_congruence(family, enveloped_circle(*curve, *tc, u[0]), n, u);
  };
  pair.grid = default_grid(family, n, s0, s1);

  // the circles must touch both curves; anything else is a construction bug
  for (int i = 0; i < pair.grid.counts[0]; ++i) {
    const double s = pair.grid.lower[0] + i * pair.grid.spacing[0];
    const CircleInQc circle = enveloped_circle(*curve, *tc, s);
    if (!(circle.tangency_residual <= 1e-6)) {
      throw Error(ErrorCode::kVerification,
                  "darboux_partner: enveloped circle misses tangency at s = " + std::to_string(s) +
                      " (residual " + std::to_string(circle.tangency_residual) + ")");
    }
  }
  return pair;
}

SurfacePair inversion_control_pair(const ImmersionPtr& f, const InversionSpec& spec, double step) {
  SurfacePair pair;
  pair.f = f;
  pair.f_tilde = std::make_shared<InvertedImmersion>(f, spec);
  const int n = f->dim();
  pair.congruence = [f, spec, step, n](const Vec& u) {
    const ImmersionJet jet = jet_eval(*f, u, step);
    const FundamentalForms forms = fundamental_forms(jet);
    const Vec q = jet.point - spec.center;
    const double qN = q.dot(forms.normal);
    if (std::abs(qN) < 1e-12) throw Error(ErrorCode::kHyperplane, "control congruence: sphere degenerates to a plane");
    const double R = (spec.radius * spec.radius - q.squaredNorm()) / (2.0 * qN);
    return sphere_to_lorentz(EuclideanEmbedding::canonical(n + 1), jet.point + R * forms.normal, std::abs(R), 1);
  };
  pair.conformal_factor = [f, spec](const Vec& u) {
    const double q2 = (f->evaluate(u) - spec.center).squaredNorm();
    const double r2 = spec.radius * spec.radius;
    return (r2 * r2) / (q2 * q2);
  };
  return pair;
}

}  // namespace dforge
