#include "dforge/curve.hpp"

#include "dforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dforge {

double ambient_dot(int c, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "ambient_dot: size mismatch");
  double v = a.dot(b);
  if (c == -1) v -= 2.0 * a[a.size() - 1] * b[b.size() - 1];
  return v;
}

Vec oriented_normal(int c, const Vec& pos, const Vec& t) {
  if (c == 0) {
    Vec n(2);
    n << -t[1], t[0];
    return n;
  }
  const Eigen::Vector3d p = pos.head<3>();
  const Eigen::Vector3d v = t.head<3>();
  Vec n = p.cross(v);
  if (c == -1) n[2] = -n[2];
  return n;
}

CurveFrame CurveQc::frame(double s) const {
  const auto [lo, hi] = range();
  if (!(s >= lo && s <= hi)) throw Error(ErrorCode::kOutsideDomain, "curve: s outside range of " + describe());
  CurveFrame f;
  f.s = s;
  raw(s, f.pos, f.tangent, f.accel);
  f.normal = oriented_normal(c_, f.pos, f.tangent);
  if (flip_) f.normal = -f.normal;
  f.k = ambient_dot(c_, f.accel, f.normal);
  return f;
}

// ---- circle

PlaneCircle::PlaneCircle(double radius) : CurveQc(0), R_(radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidInput, "circle: radius must be positive");
}

std::string PlaneCircle::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "circle:R=" << R_;
  return os.str();
}

void PlaneCircle::raw(double s, Vec& pos, Vec& tangent, Vec& accel) const {
  const double c = std::cos(s / R_), sn = std::sin(s / R_);
  pos = Vec(2);
  pos << R_ * c, R_ * sn;
  tangent = Vec(2);
  tangent << -sn, c;
  accel = -pos / (R_ * R_);
}

// ---- ellipse

namespace {
constexpr int kPanels = 512;
constexpr double kGLx[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                            0.9061798459386640};
constexpr double kGLw[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                            0.2369268850561891, 0.2369268850561891};
}  // namespace

Ellipse::Ellipse(double a, double b) : CurveQc(0), a_(a), b_(b) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::kInvalidInput, "ellipse: semi-axes must be positive");
  dt_ = 2.0 * M_PI / kPanels;
  cum_.assign(kPanels + 1, 0.0);
  for (int i = 0; i < kPanels; ++i) {
    const double mid = (i + 0.5) * dt_;
    double sum = 0.0;
    for (int q = 0; q < 5; ++q) sum += kGLw[q] * speed(mid + 0.5 * dt_ * kGLx[q]);
    cum_[i + 1] = cum_[i] + 0.5 * dt_ * sum;
  }
}

std::string Ellipse::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "ellipse:a=" << a_ << ",b=" << b_;
  return os.str();
}

double Ellipse::speed(double t) const {
  return std::hypot(a_ * std::sin(t), b_ * std::cos(t));
}

double Ellipse::arclength(double t) const {
  const double period = 2.0 * M_PI;
  const double m = std::floor(t / period);
  const double r = t - m * period;
  const int i = std::min(kPanels - 1, static_cast<int>(r / dt_));
  const double t0 = i * dt_;
  const double len = r - t0;
  double sum = 0.0;
  for (int q = 0; q < 5; ++q) sum += kGLw[q] * speed(t0 + 0.5 * len * (1.0 + kGLx[q]));
  return m * perimeter() + cum_[i] + 0.5 * len * sum;
}

double Ellipse::parameter(double s) const {
  double t = s * 2.0 * M_PI / perimeter();
  for (int it = 0; it < 50; ++it) {
    const double dt = (arclength(t) - s) / speed(t);
    t -= dt;
    if (std::abs(dt) < 1e-15 * (1.0 + std::abs(t))) break;
  }
  return t;
}

void Ellipse::raw(double s, Vec& pos, Vec& tangent, Vec& accel) const {
  const double t = parameter(s);
  const double c = std::cos(t), sn = std::sin(t);
  Eigen::Vector2d e1(-a_ * sn, b_ * c), e2(-a_ * c, -b_ * sn);
  const double v2 = e1.squaredNorm();
  pos = Vec(2);
  pos << a_ * c, b_ * sn;
  tangent = e1 / std::sqrt(v2);
  accel = (e2 - (e1.dot(e2) / v2) * e1) / v2;
}

// ---- spherical circle

SphericalCircle::SphericalCircle(double colatitude) : CurveQc(1), theta_(colatitude) {
  if (!(colatitude > 0.0 && colatitude < M_PI)) {
    throw Error(ErrorCode::kInvalidInput, "small-circle: colatitude must lie in (0, pi)");
  }
}

std::string SphericalCircle::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "small-circle:theta=" << theta_;
  return os.str();
}

void SphericalCircle::raw(double s, Vec& pos, Vec& tangent, Vec& accel) const {
  const double st = std::sin(theta_), ct = std::cos(theta_);
  const double t = s / st;
  pos = Vec(3);
  pos << st * std::cos(t), st * std::sin(t), ct;
  tangent = Vec(3);
  tangent << -std::sin(t), std::cos(t), 0.0;
  accel = Vec(3);
  accel << -std::cos(t) / st, -std::sin(t) / st, 0.0;
}

// ---- horocycle

void Horocycle::raw(double s, Vec& pos, Vec& tangent, Vec& accel) const {
  pos = Vec(3);
  pos << s, 0.5 * s * s, 1.0 + 0.5 * s * s;
  tangent = Vec(3);
  tangent << 1.0, s, s;
  accel = Vec(3);
  accel << 0.0, 1.0, 1.0;
}

// ---- Frenet integration

FrenetCurve::FrenetCurve(int c, CurvatureFn k, std::string description, double s_min,
                         double s_max, double node_step)
    : CurveQc(c), k_(std::move(k)), description_(std::move(description)), s_min_(s_min), s_max_(s_max) {
  if (c < -1 || c > 1) throw Error(ErrorCode::kInvalidInput, "frenet: c must be -1, 0 or 1");
  if (!(s_min <= 0.0 && s_max >= 0.0 && s_max > s_min)) {
    throw Error(ErrorCode::kInvalidInput, "frenet: range must contain 0");
  }
  if (!(node_step > 0.0)) throw Error(ErrorCode::kInvalidInput, "frenet: step must be positive");
  const int d = ambient_dim();
  Vec y0(2 * d);
  if (c == 0) {
    y0 << 0.0, 0.0, 1.0, 0.0;
  } else if (c == 1) {
    y0 << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  } else {
    y0 << 0.0, 0.0, 1.0, 1.0, 0.0, 0.0;
  }
  const int back = static_cast<int>(std::ceil(-s_min / node_step));
  const int fwd = static_cast<int>(std::ceil(s_max / node_step));
  h_ = node_step;
  s_min_ = -back * h_;
  s_max_ = fwd * h_;
  nodes_.assign(back + fwd + 1, Vec());
  nodes_[back] = y0;
  for (int i = back; i < back + fwd; ++i) nodes_[i + 1] = step(s_min_ + i * h_, nodes_[i], h_);
  for (int i = back; i > 0; --i) nodes_[i - 1] = step(s_min_ + i * h_, nodes_[i], -h_);
}

Vec FrenetCurve::rhs(double s, const Vec& y) const {
  const int d = ambient_dim();
  const Vec pos = y.head(d), t = y.tail(d);
  Vec dy(2 * d);
  dy.head(d) = t;
  dy.tail(d) = k_(s) * oriented_normal(c(), pos, t) - c() * pos;
  return dy;
}

Vec FrenetCurve::step(double s, const Vec& y, double h) const {
  const Vec k1 = rhs(s, y);
  const Vec k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1);
  const Vec k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2);
  const Vec k4 = rhs(s + h, y + h * k3);
  Vec out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  // back onto <pos,pos> = c, <pos,t> = 0, <t,t> = 1; on the hyperboloid the
  // coordinates grow like cosh s and the drift would otherwise grow with them
  const int d = ambient_dim(), cc = c();
  Vec pos = out.head(d), t = out.tail(d);
  if (cc != 0) {
    pos /= std::sqrt(cc * ambient_dot(cc, pos, pos));
    t -= cc * ambient_dot(cc, t, pos) * pos;
  }
  t /= std::sqrt(ambient_dot(cc, t, t));
  out << pos, t;
  return out;
}

void FrenetCurve::raw(double s, Vec& pos, Vec& tangent, Vec& accel) const {
  const int d = ambient_dim();
  const int i = std::clamp(static_cast<int>(std::lround((s - s_min_) / h_)), 0,
                           static_cast<int>(nodes_.size()) - 1);
  const double si = s_min_ + i * h_;
  const Vec y = (s == si) ? nodes_[i] : step(si, nodes_[i], s - si);
  pos = y.head(d);
  tangent = y.tail(d);
  accel = k_(s) * oriented_normal(c(), pos, tangent) - c() * pos;
}

// ---- parsing

namespace {

struct SpecArgs {
  std::string head;
  std::vector<std::pair<std::string, double>> kv;

  double get(const std::string& key, double fallback) const {
    for (const auto& [k, v] : kv) {
      if (k == key) return v;
    }
    return fallback;
  }
};

SpecArgs parse_spec(const std::string& spec) {
  SpecArgs out;
  const auto colon = spec.find(':');
  out.head = spec.substr(0, colon);
  if (colon == std::string::npos) return out;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidInput, "malformed curve spec: " + spec);
    try {
      out.kv.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidInput, "malformed curve spec: " + spec);
    }
  }
  return out;
}

}  // namespace

CurvePtr make_curve(const std::string& spec) {
  const SpecArgs a = parse_spec(spec);
  if (a.head == "circle") return std::make_shared<PlaneCircle>(a.get("R", 1.0));
  if (a.head == "ellipse") return std::make_shared<Ellipse>(a.get("a", 2.0), a.get("b", 1.0));
  if (a.head == "small-circle") return std::make_shared<SphericalCircle>(a.get("theta", 1.0));
  if (a.head == "horocycle") return std::make_shared<Horocycle>();
  if (a.head == "frenet") {
    const double c = a.get("c", 0.0);
    const double k0 = a.get("k0", 1.0), k1 = a.get("k1", 0.0);
    if (c != 0.0 && c != 1.0 && c != -1.0) throw Error(ErrorCode::kInvalidInput, "frenet: c must be -1, 0 or 1");
    std::ostringstream os;
    os.precision(17);
    os << "frenet:c=" << c << ",k0=" << k0 << ",k1=" << k1;
    return std::make_shared<FrenetCurve>(
        static_cast<int>(c), [k0, k1](double s) { return k0 + k1 * std::sin(s); }, os.str(),
        a.get("smin", -1.0), a.get("smax", 2.0 * M_PI + 1.0));
  }
  throw Error(ErrorCode::kInvalidInput, "unknown curve: " + spec);
}

Eigen::Vector2d to_half_plane(const Vec& x) {
  const double den = x[2] - x[1];
  if (!(den > 0.0)) throw Error(ErrorCode::kOutsideDomain, "to_half_plane: point not on the upper sheet");
  const double Y = 1.0 / den;
  return {x[0] * Y, Y};
}

Eigen::Vector2d to_half_plane_diff(const Vec& x, const Vec& v) {
  const double Y = 1.0 / (x[2] - x[1]);
  const double dY = -Y * Y * (v[2] - v[1]);
  return {v[0] * Y + x[0] * dY, dY};
}

Vec from_half_plane(const Eigen::Vector2d& p) {
  const double X = p[0], Y = p[1];
  if (!(Y > 0.0)) throw Error(ErrorCode::kOutsideDomain, "from_half_plane: need Y > 0");
  const double r2 = X * X + Y * Y;
  Vec x(3);
  x << X / Y, (r2 - 1.0) / (2.0 * Y), (1.0 + r2) / (2.0 * Y);
  return x;
}

}  // namespace dforge
