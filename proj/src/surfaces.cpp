#include "dforge/surfaces.hpp"

#include "dforge/error.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace dforge {

FunctionImmersion::FunctionImmersion(std::string name, int n, EvalFn eval, JetFn jet,
                                     std::optional<ParamBox> box)
    : name_(std::move(name)),
      n_(n),
      eval_(std::move(eval)),
      jet_(std::move(jet)),
      box_(box ? *box : ParamBox::unbounded(n)) {}

std::optional<ImmersionJet> FunctionImmersion::jet(const Vec& u) const {
  if (!jet_) return std::nullopt;
  return jet_(u);
}

AffineImage::AffineImage(ImmersionPtr base, Mat M, Vec b)
    : base_(std::move(base)), M_(std::move(M)), b_(std::move(b)) {
  const int m = base_->ambient_dim();
  if (M_.rows() != m || M_.cols() != m || b_.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "AffineImage: map has wrong size");
  }
}

std::optional<ImmersionJet> AffineImage::jet(const Vec& u) const {
  auto j = base_->jet(u);
  if (!j) return std::nullopt;
  j->point = M_ * j->point + b_;
  j->first = M_ * j->first;
  for (auto& v : j->second) v = M_ * v;
  return j;
}

InvertedImmersion::InvertedImmersion(ImmersionPtr base, InversionSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
  if (spec_.center.size() != base_->ambient_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "InvertedImmersion: center has wrong size");
  }
}

std::optional<ImmersionJet> InvertedImmersion::jet(const Vec& u) const {
  auto j = base_->jet(u);
  if (!j) return std::nullopt;
  return apply_inversion(spec_, *j);
}

namespace {

// Jet of the graph (u, z(u)) from the value, gradient and Hessian of z.
ImmersionJet graph_jet(const Vec& u, double z, const Vec& grad, const Mat& hess) {
  const int n = static_cast<int>(u.size());
  ImmersionJet j(n, n + 1);
  j.param = u;
  j.point.head(n) = u;
  j.point[n] = z;
  j.first.topRows(n) = Mat::Identity(n, n);
  j.first.row(n) = grad.transpose();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) j.d2(a, b)[n] = hess(a, b);
  }
  return j;
}

ParamBox box(int n, double lo, double hi) {
  return {Vec::Constant(n, lo), Vec::Constant(n, hi)};
}

void require_dim(int n, int min_n, const char* what) {
  if (n < min_n) throw Error(ErrorCode::kInvalidInput, std::string(what) + ": dimension too small");
}

}  // namespace

ImmersionPtr make_plane(int n) {
  require_dim(n, 1, "plane");
  auto eval = [n](const Vec& u) {
    Vec p = Vec::Zero(n + 1);
    p.head(n) = u;
    return p;
  };
  auto jet = [n](const Vec& u) { return graph_jet(u, 0.0, Vec::Zero(n), Mat::Zero(n, n)); };
  return std::make_shared<FunctionImmersion>("plane", n, eval, jet);
}

ImmersionPtr make_sphere_graph(int n, double R) {
  require_dim(n, 1, "sphere");
  if (!(R > 0.0)) throw Error(ErrorCode::kInvalidInput, "sphere: radius must be positive");
  auto z = [R](const Vec& u) {
    const double q = R * R - u.squaredNorm();
    if (!(q > 0.0)) throw Error(ErrorCode::kOutsideDomain, "sphere: outside the hemisphere");
    return std::sqrt(q);
  };
  auto eval = [n, z](const Vec& u) {
    Vec p(n + 1);
    p.head(n) = u;
    p[n] = z(u);
    return p;
  };
  auto jet = [n, z](const Vec& u) {
    const double w = z(u);
    const Vec grad = -u / w;
    const Mat hess = -Mat::Identity(n, n) / w - u * u.transpose() / (w * w * w);
    return graph_jet(u, w, grad, hess);
  };
  // the box stays inside the open ball
  const double half = 0.9 * R / std::sqrt(static_cast<double>(n));
  return std::make_shared<FunctionImmersion>("sphere", n, eval, jet, box(n, -half, half));
}

ImmersionPtr make_cylinder(int n, double R) {
  require_dim(n, 1, "cylinder");
  if (!(R > 0.0)) throw Error(ErrorCode::kInvalidInput, "cylinder: radius must be positive");
  auto eval = [n, R](const Vec& u) {
    Vec p(n + 1);
    p[0] = R * std::cos(u[0]);
    p[1] = R * std::sin(u[0]);
    p.tail(n - 1) = u.tail(n - 1);
    return p;
  };
  auto jet = [n, R](const Vec& u) {
    ImmersionJet j(n, n + 1);
    j.param = u;
    const double c = std::cos(u[0]);
    const double s = std::sin(u[0]);
    j.point[0] = R * c;
    j.point[1] = R * s;
    j.point.tail(n - 1) = u.tail(n - 1);
    j.first(0, 0) = -R * s;
    j.first(1, 0) = R * c;
    for (int i = 1; i < n; ++i) j.first(i + 1, i) = 1.0;
    j.d2(0, 0)[0] = -R * c;
    j.d2(0, 0)[1] = -R * s;
    return j;
  };
  return std::make_shared<FunctionImmersion>("cylinder", n, eval, jet);
}

ImmersionPtr make_torus(int n, double a, double b) {
  require_dim(n, 2, "torus");
  if (!(a > b && b > 0.0)) throw Error(ErrorCode::kInvalidInput, "torus: need a > b > 0");
  auto jet = [n, a, b](const Vec& u) {
    ImmersionJet j(n, n + 1);
    j.param = u;
    const double cu = std::cos(u[0]), su = std::sin(u[0]);
    const double cv = std::cos(u[1]), sv = std::sin(u[1]);
    const double r = a + b * cv;
    j.point.head(3) << r * cu, r * su, b * sv;
    j.point.tail(n - 2) = u.tail(n - 2);
    j.first.col(0).head(3) << -r * su, r * cu, 0.0;
    j.first.col(1).head(3) << -b * sv * cu, -b * sv * su, b * cv;
    for (int i = 2; i < n; ++i) j.first(i + 1, i) = 1.0;
    j.d2(0, 0).head(3) << -r * cu, -r * su, 0.0;
    j.d2(0, 1).head(3) << b * sv * su, -b * sv * cu, 0.0;
    j.d2(1, 0) = j.d2(0, 1);
    j.d2(1, 1).head(3) << -b * cv * cu, -b * cv * su, -b * sv;
    return j;
  };
  auto eval = [jet](const Vec& u) { return jet(u).point; };
  return std::make_shared<FunctionImmersion>("torus", n, eval, jet);
}

ImmersionPtr make_paraboloid(int n) {
  require_dim(n, 1, "paraboloid");
  auto jet = [n](const Vec& u) {
    return graph_jet(u, 0.5 * u.squaredNorm(), u, Mat::Identity(n, n));
  };
  auto eval = [jet](const Vec& u) { return jet(u).point; };
  return std::make_shared<FunctionImmersion>("graph:paraboloid", n, eval, jet);
}

ImmersionPtr make_random_graph(int n, unsigned seed) {
  require_dim(n, 1, "random graph");
  constexpr int kModes = 4;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.3, 0.3), freq(-1.5, 1.5), phase(0.0, 2.0 * M_PI);
  std::vector<double> A(kModes), P(kModes);
  std::vector<Vec> W(kModes, Vec(n));
  for (int k = 0; k < kModes; ++k) {
    A[k] = amp(rng);
    for (int i = 0; i < n; ++i) W[k][i] = freq(rng);
    P[k] = phase(rng);
  }
  auto jet = [n, A, W, P](const Vec& u) {
    double z = 0.0;
    Vec grad = Vec::Zero(n);
    Mat hess = Mat::Zero(n, n);
    for (int k = 0; k < kModes; ++k) {
      const double arg = W[k].dot(u) + P[k];
      z += A[k] * std::sin(arg);
      grad += A[k] * std::cos(arg) * W[k];
      hess -= A[k] * std::sin(arg) * W[k] * W[k].transpose();
    }
    return graph_jet(u, z, grad, hess);
  };
  auto eval = [jet](const Vec& u) { return jet(u).point; };
  return std::make_shared<FunctionImmersion>("graph:random:" + std::to_string(seed), n, eval, jet);
}

namespace {

// "key=value,key=value" after the first ':'
double option(const std::string& spec, const std::string& key, double fallback) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return fallback;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq != std::string::npos && item.substr(0, eq) == key) {
      try {
        return std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidInput, "bad value in surface spec: " + spec);
      }
    }
  }
  return fallback;
}

}  // namespace

ImmersionPtr make_builtin(const std::string& spec, int n) {
  const std::string head = spec.substr(0, spec.find(':'));
  if (head == "plane") return make_plane(n);
  if (head == "sphere") return make_sphere_graph(n, option(spec, "R", 1.0));
  if (head == "cylinder") return make_cylinder(n, option(spec, "R", 1.0));
  if (head == "torus") return make_torus(n, option(spec, "a", 2.0), option(spec, "b", 1.0));
  if (spec == "graph:paraboloid") return make_paraboloid(n);
  const std::string random_prefix = "graph:random:";
  if (spec.rfind(random_prefix, 0) == 0) {
    try {
      return make_random_graph(n, static_cast<unsigned>(std::stoul(spec.substr(random_prefix.size()))));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidInput, "bad seed in surface spec: " + spec);
    }
  }
  throw Error(ErrorCode::kInvalidInput, "unknown surface: " + spec);
}

}  // namespace dforge
