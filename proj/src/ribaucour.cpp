#include "dforge/ribaucour.hpp"

#include "dforge/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace dforge {

HVector ode_rhs(const RibaucourState& st, double k, double c) {
  const auto& h = st.h;
  const HReal kk = k, a = static_cast<HReal>(st.A) - c;
  return {kk * h[1] + a * h[2], -kk * h[0], h[0]};
}

HReal first_integral(const HVector& h, double A, double c) {
  return h[0] * h[0] + h[1] * h[1] + (static_cast<HReal>(c) - A) * h[2] * h[2];
}

Eigen::Vector3d project_initial_state(const Eigen::Vector3d& h0, double A, double c) {
  if (!(A > c)) throw Error(ErrorCode::kInfeasible, "infeasible: A must exceed c");
  if (std::abs(first_integral(h0, A, c)) <= 1e-14) return h0;
  const double planar = h0[0] * h0[0] + h0[1] * h0[1];
  if (h0[2] == 0.0) throw Error(ErrorCode::kInfeasible, "infeasible: h3 = 0 forces h1 = h2 = 0");
  if (planar == 0.0) throw Error(ErrorCode::kInfeasible, "infeasible: (h1, h2) = 0 cannot be rescaled");
  const double scale = std::sqrt((A - c) * h0[2] * h0[2] / planar);
  return {h0[0] * scale, h0[1] * scale, h0[2]};
}

namespace {

HVector rk4(const CurveQc& curve, double s, const HVector& h, double A, double dt) {
  const double c = curve.c();
  const double k0 = curve.curvature(s);
  const double km = curve.curvature(s + 0.5 * dt);
  const double k1 = curve.curvature(s + dt);
  auto f = [&](double k, const HVector& y) { return ode_rhs({0.0, y, A}, k, c); };
  const HReal t = dt;
  const HVector a = f(k0, h);
  const HVector b = f(km, h + (t / 2) * a);
  const HVector d = f(km, h + (t / 2) * b);
  const HVector e = f(k1, h + t * d);
  return h + (t / 6) * (a + 2 * b + 2 * d + e);
}

}  // namespace

Trajectory integrate_states(const CurveQc& curve, const Eigen::Vector3d& h0, double A, double s0,
                            double s1, double step, const IntegrationOptions& opts) {
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidInput, "integrate_states: step must be positive");
  if (!(s1 > s0)) throw Error(ErrorCode::kInvalidInput, "integrate_states: empty range");
  const double c = curve.c();
  const HVector hs = h0.cast<HReal>();
  const HReal K0 = first_integral(hs, A, c);
  if (std::abs(static_cast<double>(K0)) > 1e-12 * std::max(1.0, h0.squaredNorm())) {
    throw Error(ErrorCode::kInfeasible, "integrate_states: initial state does not satisfy K = 0");
  }
  const long base_steps = std::max(1L, static_cast<long>(std::ceil((s1 - s0) / step - 1e-9)));

  Trajectory out;
  for (int m = 0; m <= opts.max_halvings; ++m) {
    const long count = base_steps << m;
    const double dt = (s1 - s0) / static_cast<double>(count);
    Trajectory t;
    t.step = dt;
    t.halvings = m;
    t.K0 = static_cast<double>(K0);
    t.states.reserve(static_cast<std::size_t>(count) + 1);
    HVector h = hs;
    bool drifted = false;
    for (long i = 0; i <= count; ++i) {
      const double s = s0 + i * dt;
      if (opts.h3_min > 0.0 && std::abs(h[2]) < opts.h3_min) {
        throw Error(ErrorCode::kSingular, "integrate_states: |h3| fell below h3_min at s = " + std::to_string(s));
      }
      t.states.push_back({s, h, A});
      const double drift = static_cast<double>(std::abs(first_integral(h, A, c) - K0));
      t.max_drift = std::max(t.max_drift, drift);
      if (!(drift <= opts.drift_tol)) {
        drifted = true;
        break;
      }
      if (i < count) h = rk4(curve, s, h, A, dt);
    }
    if (!drifted) return t;
    out = std::move(t);
  }
  throw Error(ErrorCode::kDrift, "integrate_states: first-integral drift " + std::to_string(out.max_drift) +
                                     " exceeds tolerance after " + std::to_string(opts.max_halvings) + " halvings");
}

Vec ribaucour_gamma(const CurveFrame& fr, const Eigen::Vector3d& h, int c) {
  return h[0] * fr.tangent + h[1] * fr.normal + (c * h[2]) * fr.pos;
}

TransformedCurve::TransformedCurve(CurvePtr base, Trajectory traj)
    : CurveQc(base->c()), base_(std::move(base)), traj_(std::move(traj)) {
  if (traj_.states.size() < 2) throw Error(ErrorCode::kInvalidInput, "transform: trajectory too short");
  A_ = traj_.states.front().A;
  set_flip_normal(false);
}

std::pair<double, double> TransformedCurve::range() const {
  return {traj_.states.front().s, traj_.states.back().s};
}

HVector TransformedCurve::state_at(double s) const {
  const double s0 = traj_.states.front().s;
  const int last = static_cast<int>(traj_.states.size()) - 1;
  const int i = std::clamp(static_cast<int>(std::lround((s - s0) / traj_.step)), 0, last);
  const RibaucourState& node = traj_.states[i];
  if (s == node.s) return node.h;
  return rk4(*base_, node.s, node.h, A_, s - node.s);
}

void TransformedCurve::raw(double s, Vec& pos, Vec& tangent, Vec& accel) const {
  const int c = this->c();
  const CurveFrame fr = base_->frame(s);
  const Eigen::Vector3d h = state_at(s).cast<double>();
  const Vec g = ribaucour_gamma(fr, h, c);
  const double G = ambient_dot(c, g, g);
  if (std::abs(G) < 1e-14) throw Error(ErrorCode::kSingular, "transform: <gamma,gamma> vanishes");
  const double A = A_;
  const double h1p = fr.k * h[1] + (A - c) * h[2];
  const double Gp = 2.0 * A * h[2] * h[0];
  // phi~ = phi + P gamma, gamma' = A h3 phi'
  const double P = -2.0 * h[2] / G;
  const double Pp = -2.0 * h[0] / G + 2.0 * h[2] * Gp / (G * G);
  const double Gpp = 2.0 * A * (h[0] * h[0] + h[2] * h1p);
  const double Ppp = -2.0 * h1p / G + 2.0 * h[0] * Gp / (G * G) + 2.0 * h[0] * Gp / (G * G) +
                     2.0 * h[2] * Gpp / (G * G) - 4.0 * h[2] * Gp * Gp / (G * G * G);
  pos = fr.pos + P * g;
  tangent = (1.0 + P * A * h[2]) * fr.tangent + Pp * g;
  accel = (1.0 + P * A * h[2]) * fr.accel + Ppp * g + (2.0 * Pp * A * h[2] + P * A * h[0]) * fr.tangent;
}

std::shared_ptr<TransformedCurve> ribaucour_curve_transform(const CurvePtr& curve, const Trajectory& traj) {
  const int c = curve->c();
  for (const auto& st : traj.states) {
    const CurveFrame fr = curve->frame(st.s);
    const Eigen::Vector3d h = st.hd();
    const Vec g = ribaucour_gamma(fr, h, c);
    const double G = ambient_dot(c, g, g);
    if (std::abs(G) < 1e-14) throw Error(ErrorCode::kSingular, "transform: <gamma,gamma> vanishes");
    const double expect = st.A * h[2] * h[2];
    if (std::abs(G - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
      throw Error(ErrorCode::kVerification, "transform: <gamma,gamma> != A h3^2 (first integral not zero)");
    }
  }
  return std::make_shared<TransformedCurve>(curve, traj);
}

namespace {

// center on the normal line through p: p + rho nu, equidistant from q
double normal_offset(const Eigen::Vector2d& p, const Eigen::Vector2d& nu, const Eigen::Vector2d& q) {
  const Eigen::Vector2d d = p - q;
  const double dn = d.dot(nu);
  if (std::abs(dn) < 1e-14 * d.squaredNorm()) {
    throw Error(ErrorCode::kSingular, "enveloped_circle: tangency system singular (a line, not a circle)");
  }
  return -d.squaredNorm() / (2.0 * dn);
}

}  // namespace

CircleInQc enveloped_circle(const CurveQc& curve, const CurveQc& transformed, double s) {
  if (curve.c() != transformed.c()) throw Error(ErrorCode::kDimensionMismatch, "enveloped_circle: different space forms");
  const CurveFrame a = curve.frame(s);
  const CurveFrame b = transformed.frame(s);
  const Vec diff = a.pos - b.pos;
  if (diff.norm() < 1e-12) throw Error(ErrorCode::kDegenerate, "enveloped_circle: points coincide");

  CircleInQc out;
  out.c = curve.c();
  if (out.c == 0) {
    const Eigen::Vector2d p = a.pos, q = b.pos, nu = a.normal;
    const double rho = normal_offset(p, nu, q);
    const Eigen::Vector2d C = p + rho * nu;
    out.center = C;
    out.radius = std::abs(rho);
    out.tangency_residual = std::abs((C - q).norm() - out.radius) + std::abs((C - q).dot(Eigen::Vector2d(b.tangent))) +
                            std::abs((C - p).dot(Eigen::Vector2d(a.tangent)));
    return out;
  }

  Eigen::Matrix3d rows;
  rows.row(0) = a.tangent.head<3>().transpose();
  rows.row(1) = b.tangent.head<3>().transpose();
  rows.row(2) = diff.head<3>().transpose() / diff.norm();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(rows, Eigen::ComputeFullV);
  if (svd.singularValues()[1] < 1e-10) {
    throw Error(ErrorCode::kSingular, "enveloped_circle: tangency system singular");
  }
  Eigen::Vector3d m = svd.matrixV().col(2);
  double d = m.dot(a.pos.head<3>());
  if (d < 0.0) {
    m = -m;
    d = -d;
  }
  out.plane_normal = m;
  out.plane_offset = d;
  out.tangency_residual = std::abs(m.dot(b.pos.head<3>()) - d) + std::abs(m.dot(a.tangent.head<3>())) +
                          std::abs(m.dot(b.tangent.head<3>()));
  if (out.c == 1) {
    // spherical center and angular radius of {x in S^2 : <m,x> = d}
    out.center = m;
    out.radius = std::acos(std::clamp(d, -1.0, 1.0));
    return out;
  }

  const Eigen::Vector2d p = to_half_plane(a.pos), q = to_half_plane(b.pos);
  const Eigen::Vector2d tp = to_half_plane_diff(a.pos, a.tangent).normalized();
  const Eigen::Vector2d tq = to_half_plane_diff(b.pos, b.tangent).normalized();
  const Eigen::Vector2d nu(-tp[1], tp[0]);
  const double rho = normal_offset(p, nu, q);
  out.half_center = p + rho * nu;
  out.half_radius = std::abs(rho);
  out.center = out.half_center;
  out.radius = out.half_radius;
  out.tangency_residual += std::abs((out.half_center - q).norm() - out.half_radius) +
                           std::abs((out.half_center - q).dot(tq));
  return out;
}

void write_curve_csv(std::ostream& os, const TransformedCurve& tc) {
  const int d = tc.ambient_dim();
  const char* axis[3] = {"x", "y", "z"};
  os << "s,h1,h2,h3,K";
  for (int i = 0; i < d; ++i) os << ",phi" << axis[i];
  for (int i = 0; i < d; ++i) os << ",phitil" << axis[i];
  os << '\n';
  os << std::setprecision(17);
  for (const auto& st : tc.trajectory().states) {
    const CurveFrame a = tc.base()->frame(st.s);
    const CurveFrame b = tc.frame(st.s);
    const Eigen::Vector3d h = st.hd();
    os << st.s << ',' << h[0] << ',' << h[1] << ',' << h[2] << ','
       << static_cast<double>(first_integral(st.h, st.A, tc.c()));
    for (int i = 0; i < d; ++i) os << ',' << a.pos[i];
    for (int i = 0; i < d; ++i) os << ',' << b.pos[i];
    os << '\n';
  }
}

}  // namespace dforge
