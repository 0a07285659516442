#include "dforge/hypersurface.hpp"

#include "dforge/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace dforge {

ImmersionJet::ImmersionJet(int n, int ambient)
    : param(Vec::Zero(n)),
      point(Vec::Zero(ambient)),
      first(Mat::Zero(ambient, n)),
      second(static_cast<std::size_t>(n * n), Vec::Zero(ambient)) {}

ParamBox ParamBox::unbounded(int n) {
  const double inf = std::numeric_limits<double>::infinity();
  return {Vec::Constant(n, -inf), Vec::Constant(n, inf)};
}

bool ParamBox::contains(const Vec& u, double margin) const {
  if (u.size() != lower.size()) return false;
  for (int i = 0; i < u.size(); ++i) {
    if (!(u[i] - margin > lower[i]) || !(u[i] + margin < upper[i])) return false;
  }
  return true;
}

namespace {

ImmersionJet fd_jet(const ParamImmersion& s, const Vec& u, double h) {
  const int n = s.dim();
  ImmersionJet jet(n, s.ambient_dim());
  jet.param = u;
  jet.point = s.evaluate(u);
  auto at = [&](int i, double di, int j, double dj) {
    Vec v = u;
    v[i] += di;
    if (j >= 0) v[j] += dj;
    return s.evaluate(v);
  };
  for (int i = 0; i < n; ++i) {
    const Vec fp = at(i, h, -1, 0.0);
    const Vec fm = at(i, -h, -1, 0.0);
    jet.first.col(i) = (fp - fm) / (2.0 * h);
    jet.d2(i, i) = (fp - 2.0 * jet.point + fm) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec mixed =
          (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4.0 * h * h);
      jet.d2(i, j) = mixed;
      jet.d2(j, i) = mixed;
    }
  }
  return jet;
}

void require_domain(const ParamImmersion& s, const Vec& u, double margin) {
  if (u.size() != s.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "jet_eval: parameter has wrong size");
  }
  if (!s.domain().contains(u, margin)) {
    throw Error(ErrorCode::kOutsideDomain, "jet_eval: parameter outside domain of " + s.name());
  }
}

}  // namespace

ImmersionJet jet_eval(const ParamImmersion& surface, const Vec& u, double step, JetMode mode) {
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidInput, "jet_eval: step must be positive");
  if (mode == JetMode::kRichardson) {
    require_domain(surface, u, 4.0 * step);
    ImmersionJet fine = fd_jet(surface, u, step);
    const ImmersionJet coarse = fd_jet(surface, u, 2.0 * step);
    fine.first = (4.0 * fine.first - coarse.first) / 3.0;
    for (std::size_t k = 0; k < fine.second.size(); ++k) {
      fine.second[k] = (4.0 * fine.second[k] - coarse.second[k]) / 3.0;
    }
    return fine;
  }
  require_domain(surface, u, 2.0 * step);
  if (mode == JetMode::kAuto) {
    if (auto exact = surface.jet(u)) return *exact;
  }
  return fd_jet(surface, u, step);
}

double jet_fd_error(const ParamImmersion& surface, const Vec& u, double step) {
  require_domain(surface, u, 4.0 * step);
  const ImmersionJet a = fd_jet(surface, u, step);
  const ImmersionJet b = fd_jet(surface, u, 2.0 * step);
  double gap = (a.first - b.first).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < a.second.size(); ++k) {
    gap = std::max(gap, (a.second[k] - b.second[k]).cwiseAbs().maxCoeff());
  }
  return gap;
}

FundamentalForms fundamental_forms(const ImmersionJet& jet, int orientation) {
  const int n = jet.dim();
  const int m = jet.ambient_dim();
  if (m != n + 1) throw Error(ErrorCode::kDimensionMismatch, "fundamental_forms: codimension must be one");
  if (orientation != 1 && orientation != -1) {
    throw Error(ErrorCode::kInvalidInput, "fundamental_forms: orientation must be +1 or -1");
  }
  Eigen::JacobiSVD<Mat> svd(jet.first);
  const auto& sv = svd.singularValues();
  if (sv[0] == 0.0 || sv[n - 1] < 1e-12 * sv[0]) {
    throw Error(ErrorCode::kRankDeficient, "fundamental_forms: first derivatives are not of full rank");
  }

  FundamentalForms forms;
  forms.orientation = orientation;
  forms.metric = jet.first.transpose() * jet.first;

  Eigen::HouseholderQR<Mat> qr(jet.first);
  const Mat Q = qr.householderQ() * Mat::Identity(m, m);
  Vec N = Q.col(n).normalized();
  Mat frame(m, m);
  frame << jet.first, N;
  if ((frame.determinant() > 0 ? 1 : -1) != orientation) N = -N;
  forms.normal = N;

  forms.second_form.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      forms.second_form(i, j) = 0.5 * (jet.d2(i, j) + jet.d2(j, i)).dot(N);
    }
  }
  forms.shape = forms.metric.ldlt().solve(forms.second_form);

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> eig(forms.second_form, forms.metric);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kRankDeficient, "fundamental_forms: metric is not positive definite");
  }
  forms.principal_curvatures = eig.eigenvalues();
  forms.principal_frame = eig.eigenvectors();
  return forms;
}

Mat orthonormal_frame(const Mat& metric) {
  const int n = static_cast<int>(metric.rows());
  Mat E = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    Vec v = E.col(i);
    for (int j = 0; j < i; ++j) v -= (E.col(j).dot(metric * v)) * E.col(j);
    const double len2 = v.dot(metric * v);
    if (!(len2 > 0.0)) throw Error(ErrorCode::kRankDeficient, "orthonormal_frame: degenerate metric");
    E.col(i) = v / std::sqrt(len2);
  }
  return E;
}

Mat operator_in_frame(const Mat& endo, const Mat& metric, const Mat& E) {
  Mat M = E.transpose() * metric * endo * E;
  return 0.5 * (M + M.transpose());
}

Vec invert_point(const InversionSpec& spec, const Vec& p) {
  const Vec q = p - spec.center;
  const double rho2 = q.squaredNorm();
  if (rho2 == 0.0) throw Error(ErrorCode::kSingular, "inversion: point coincides with the center");
  return spec.center + (spec.radius * spec.radius / rho2) * q;
}

ImmersionJet apply_inversion(const InversionSpec& spec, const ImmersionJet& jet) {
  if (spec.center.size() != jet.ambient_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "apply_inversion: center has wrong size");
  }
  if (!(spec.radius > 0.0)) throw Error(ErrorCode::kInvalidInput, "apply_inversion: radius must be positive");
  const int n = jet.dim();
  const Vec q = jet.point - spec.center;
  const double rho2 = q.squaredNorm();
  if (rho2 == 0.0) throw Error(ErrorCode::kSingular, "apply_inversion: point coincides with the center");
  const double r2 = spec.radius * spec.radius;
  const double rho4 = rho2 * rho2;
  const double rho6 = rho4 * rho2;

  auto d1 = [&](const Vec& v) -> Vec { return r2 * (v / rho2 - 2.0 * q.dot(v) * q / rho4); };
  auto d2 = [&](const Vec& v, const Vec& w) -> Vec {
    const double qv = q.dot(v);
    const double qw = q.dot(w);
    return r2 * (-2.0 * qw * v / rho4 - 2.0 * qv * w / rho4 - 2.0 * v.dot(w) * q / rho4 +
                 8.0 * qv * qw * q / rho6);
  };

  ImmersionJet out(n, jet.ambient_dim());
  out.param = jet.param;
  out.point = spec.center + (r2 / rho2) * q;
  for (int i = 0; i < n; ++i) out.first.col(i) = d1(jet.first.col(i));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.d2(i, j) = d1(jet.d2(i, j)) + d2(jet.first.col(i), jet.first.col(j));
    }
  }
  return out;
}

FundamentalForms inversion_shape_law(const InversionSpec& spec, const ImmersionJet& jet,
                                     const FundamentalForms& forms) {
  const int n = forms.dim();
  const Vec q = jet.point - spec.center;
  const double rho2 = q.squaredNorm();
  if (rho2 == 0.0) throw Error(ErrorCode::kSingular, "inversion_shape_law: point coincides with the center");
  const double r2 = spec.radius * spec.radius;
  const double qN = q.dot(forms.normal);

  FundamentalForms out;
  out.orientation = -forms.orientation;
  out.metric = (r2 * r2 / (rho2 * rho2)) * forms.metric;
  out.normal = forms.normal - (2.0 * qN / rho2) * q;
  out.shape = (rho2 * forms.shape + 2.0 * qN * Mat::Identity(n, n)) / r2;
  out.second_form = out.metric * out.shape;
  out.second_form = 0.5 * (out.second_form + out.second_form.transpose()).eval();
  out.principal_curvatures = (rho2 * forms.principal_curvatures.array() + 2.0 * qN) / r2;
  out.principal_frame = (rho2 / r2) * forms.principal_frame;
  return out;
}

std::pair<double, double> conformal_ratio(const Mat& metric_f, const Mat& metric_g) {
  Eigen::LLT<Mat> llt(metric_f);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerate, "conformal_ratio: metric of f is not positive definite");
  }
  const Mat L = llt.matrixL();
  const Mat Linv = L.inverse();
  Mat M = Linv * metric_g * Linv.transpose();
  M = 0.5 * (M + M.transpose()).eval();
  const int n = static_cast<int>(M.rows());
  const double mu = M.trace() / n;
  if (!(mu > 0.0)) throw Error(ErrorCode::kDegenerate, "conformal_ratio: metric of g is degenerate");
  const double resid = (M - mu * Mat::Identity(n, n)).norm() / M.norm();
  return {mu, resid};
}

ConformalFit conformal_factor_field(const ParamImmersion& f, const ParamImmersion& g,
                                    const std::vector<Vec>& samples, double tol, double step,
                                    JetMode mode) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::kDimensionMismatch, "conformal_factor_field: dimensions differ");
  ConformalFit fit;
  fit.phi.reserve(samples.size());
  fit.residual.reserve(samples.size());
  for (const Vec& u : samples) {
    const ImmersionJet jf = jet_eval(f, u, step, mode);
    const ImmersionJet jg = jet_eval(g, u, step, mode);
    const auto [mu, resid] =
        conformal_ratio(jf.first.transpose() * jf.first, jg.first.transpose() * jg.first);
    fit.phi.push_back(0.5 * std::log(mu));
    fit.residual.push_back(resid);
    fit.anisotropy = std::max(fit.anisotropy, resid);
  }
  fit.conformal = fit.anisotropy <= tol;
  return fit;
}

}  // namespace dforge
