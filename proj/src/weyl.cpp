#include "dforge/weyl.hpp"

#include "dforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace dforge {

namespace {

constexpr int kDim = 4;

Vec shifted(const Vec& x, int a, double da, int b = -1, double db = 0.0) {
  Vec y = x;
  y[a] += da;
  if (b >= 0) y[b] += db;
  return y;
}

// 4th-order central stencil weights for f' at offsets -2..2 (times 1/(12h))
constexpr double kD1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
constexpr double kD2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};

struct MetricJet {
  Mat g, ginv;
  std::array<Mat, kDim> dg;                   // dg[m] = d_m g
  std::array<std::array<Mat, kDim>, kDim> ddg;  // ddg[m][n] = d_m d_n g
};

MetricJet metric_jet(const MetricField& g, const Vec& x, double h) {
  if (x.size() != kDim) throw Error(ErrorCode::kDimensionMismatch, "weyl: points live in R^4");
  MetricJet J;
  J.g = g(x);
  J.ginv = J.g.inverse();
  for (int m = 0; m < kDim; ++m) {
    Mat d1 = Mat::Zero(kDim, kDim), d2 = Mat::Zero(kDim, kDim);
    for (int s = -2; s <= 2; ++s) {
      if (s == 0) {
        d2 += kD2[2] * J.g;
        continue;
      }
      const Mat gs = g(shifted(x, m, s * h));
      d1 += kD1[s + 2] * gs;
      d2 += kD2[s + 2] * gs;
    }
    J.dg[m] = d1 / (12.0 * h);
    J.ddg[m][m] = d2 / (12.0 * h * h);
  }
  for (int m = 0; m < kDim; ++m) {
    for (int n = m + 1; n < kDim; ++n) {
      Mat d = Mat::Zero(kDim, kDim);
      for (int s = -2; s <= 2; ++s) {
        for (int t = -2; t <= 2; ++t) {
          const double w = kD1[s + 2] * kD1[t + 2];
          if (w != 0.0) d += w * g(shifted(x, m, s * h, n, t * h));
        }
      }
      J.ddg[m][n] = J.ddg[n][m] = d / (144.0 * h * h);
    }
  }
  return J;
}

}  // namespace

Tensor4 riemann_tensor(const MetricField& gf, const Vec& x, double h) {
  const MetricJet J = metric_jet(gf, x, h);
  // Gamma_{n j k} (first kind) and its derivatives
  auto gamma1 = [&](int n, int j, int k) {
    return 0.5 * (J.dg[j](n, k) + J.dg[k](n, j) - J.dg[n](j, k));
  };
  auto dgamma1 = [&](int m, int n, int j, int k) {
    return 0.5 * (J.ddg[m][j](n, k) + J.ddg[m][k](n, j) - J.ddg[m][n](j, k));
  };
  double G[kDim][kDim][kDim];  // G[l][j][k] = Gamma^l_{jk}
  double dG[kDim][kDim][kDim][kDim];  // dG[m][l][j][k] = d_m Gamma^l_{jk}
  for (int l = 0; l < kDim; ++l) {
    for (int j = 0; j < kDim; ++j) {
      for (int k = 0; k < kDim; ++k) {
        double s = 0.0;
        for (int n = 0; n < kDim; ++n) s += J.ginv(l, n) * gamma1(n, j, k);
        G[l][j][k] = s;
      }
    }
  }
  for (int m = 0; m < kDim; ++m) {
    const Mat dginv = -J.ginv * J.dg[m] * J.ginv;
    for (int l = 0; l < kDim; ++l) {
      for (int j = 0; j < kDim; ++j) {
        for (int k = 0; k < kDim; ++k) {
          double s = 0.0;
          for (int n = 0; n < kDim; ++n) s += dginv(l, n) * gamma1(n, j, k) + J.ginv(l, n) * dgamma1(m, n, j, k);
          dG[m][l][j][k] = s;
        }
      }
    }
  }
  // coordinate components R_{ijkl} = g(R(d_i,d_j)d_k, d_l)
  Tensor4 Rc{};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      for (int k = 0; k < kDim; ++k) {
        double up[kDim];
        for (int p = 0; p < kDim; ++p) {
          double s = dG[i][p][j][k] - dG[j][p][i][k];
          for (int q = 0; q < kDim; ++q) s += G[p][i][q] * G[q][j][k] - G[p][j][q] * G[q][i][k];
          up[p] = s;
        }
        for (int l = 0; l < kDim; ++l) {
          double s = 0.0;
          for (int p = 0; p < kDim; ++p) s += up[p] * J.g(p, l);
          at(Rc, i, j, k, l) = s;
        }
      }
    }
  }
  // Gram–Schmidt frame: e_a = sum_i E(i,a) d_i
  const Eigen::LLT<Mat> llt(J.g);
  const Mat E = Mat(llt.matrixU()).inverse();
  Tensor4 R{};
  for (int a = 0; a < kDim; ++a) {
    for (int b = 0; b < kDim; ++b) {
      for (int cc = 0; cc < kDim; ++cc) {
        for (int d = 0; d < kDim; ++d) {
          double s = 0.0;
          for (int i = 0; i <= a; ++i) {
            for (int j = 0; j <= b; ++j) {
              for (int k = 0; k <= cc; ++k) {
                for (int l = 0; l <= d; ++l) s += E(i, a) * E(j, b) * E(k, cc) * E(l, d) * at(Rc, i, j, k, l);
              }
            }
          }
          at(R, a, b, cc, d) = s;
        }
      }
    }
  }
  return R;
}

Tensor4 weyl_from_riemann(const Tensor4& R) {
  double ric[kDim][kDim] = {};
  double scal = 0.0;
  for (int j = 0; j < kDim; ++j) {
    for (int k = 0; k < kDim; ++k) {
      for (int i = 0; i < kDim; ++i) ric[j][k] += at(R, i, j, k, i);
    }
    scal += ric[j][j];
  }
  double P[kDim][kDim];
  for (int j = 0; j < kDim; ++j) {
    for (int k = 0; k < kDim; ++k) P[j][k] = 0.5 * (ric[j][k] - (j == k ? scal / 6.0 : 0.0));
  }
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  Tensor4 W{};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      for (int k = 0; k < kDim; ++k) {
        for (int l = 0; l < kDim; ++l) {
          const double png = P[j][k] * d(i, l) + P[i][l] * d(j, k) - P[i][k] * d(j, l) - P[j][l] * d(i, k);
          at(W, i, j, k, l) = at(R, i, j, k, l) - png;
        }
      }
    }
  }
  return W;
}

MetricField product_metric(double c) {
  return [c](const Vec& x) {
    const double q = 1.0 + c * (x[0] * x[0] + x[1] * x[1]);
    if (!(q > 0.0)) throw Error(ErrorCode::kOutsideDomain, "product_metric: outside the Q_c chart");
    const double l1 = 2.0 / q;
    const double l2 = 2.0 / (1.0 + x[2] * x[2] + x[3] * x[3]);
    Mat g = Mat::Zero(kDim, kDim);
    g(0, 0) = g(1, 1) = l1 * l1;
    g(2, 2) = g(3, 3) = l2 * l2;
    return g;
  };
}

double plane_value(const Tensor4& W, const Vec& X, const Vec& Y) {
  double s = 0.0;
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      for (int k = 0; k < kDim; ++k) {
        for (int l = 0; l < kDim; ++l) s += X[i] * Y[j] * Y[k] * X[l] * at(W, i, j, k, l);
      }
    }
  }
  return s;
}

namespace {
double p(const Vec& X, const Vec& Y, int i, int j) { return X[i] * Y[j] - X[j] * Y[i]; }
}  // namespace

double closed_form_plane_value(double c, const Vec& X, const Vec& Y) {
  const double a = p(X, Y, 0, 1), b = p(X, Y, 2, 3);
  return (1.0 + c) / 3.0 * (a * a + b * b);
}

double trace_free_plane_value(double c, const Vec& X, const Vec& Y) {
  const double a = p(X, Y, 0, 1), b = p(X, Y, 2, 3);
  return (1.0 + c) / 2.0 * (a * a + b * b) - (1.0 + c) / 6.0;
}

WeylReport weyl_product_check(double c, const WeylOptions& opt) {
  if (!(c >= -1.0) || !std::isfinite(c)) throw Error(ErrorCode::kInvalidInput, "weyl: c must be >= -1");
  std::vector<Vec> points = opt.points;
  if (points.empty()) {
    points.push_back(Vec::Zero(kDim));
    points.push_back((Vec(kDim) << 0.3, -0.2, 0.4, 0.1).finished());
    points.push_back((Vec(kDim) << -0.5, 0.4, -0.3, 0.6).finished());
  }
  const double v = (1.0 + c) / 3.0;
  struct Listed {
    int i, j, k, l;
    double sign;
  };
  const Listed listed[] = {{0, 1, 1, 0, 1}, {1, 0, 0, 1, 1}, {2, 3, 3, 2, 1}, {3, 2, 2, 3, 1},
                           {0, 1, 0, 1, -1}, {1, 0, 1, 0, -1}, {2, 3, 2, 3, -1}, {3, 2, 3, 2, -1}};

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vec = [&] {
    Vec r(kDim);
    for (int i = 0; i < kDim; ++i) r[i] = gauss(rng);
    return r;
  };

  double listed_res = 0.0, other_res = 0.0, trace_res = 0.0;
  double quad_res = 0.0, tf_quad_res = 0.0, zero_res = 0.0;
  WeylReport rep;
  rep.c = c;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Tensor4 W = weyl_from_riemann(riemann_tensor(product_metric(c), points[pi], opt.step));
    if (pi == 0) rep.weyl = W;
    std::array<bool, 256> is_listed{};
    for (const auto& e : listed) {
      listed_res = std::max(listed_res, std::abs(at(W, e.i, e.j, e.k, e.l) - e.sign * v));
      is_listed[((e.i * 4 + e.j) * 4 + e.k) * 4 + e.l] = true;
    }
    for (int n = 0; n < 256; ++n) {
      if (!is_listed[n]) other_res = std::max(other_res, std::abs(W[n]));
    }
    for (int j = 0; j < kDim; ++j) {
      for (int k = 0; k < kDim; ++k) {
        double s = 0.0;
        for (int i = 0; i < kDim; ++i) s += at(W, i, j, k, i);
        trace_res = std::max(trace_res, std::abs(s));
      }
    }
    for (std::size_t t = 0; t < opt.planes; ++t) {
      Vec X = random_vec().normalized();
      Vec Y = random_vec();
      Y = (Y - Y.dot(X) * X).normalized();
      const double w = plane_value(W, X, Y);
      quad_res = std::max(quad_res, std::abs(w - closed_form_plane_value(c, X, Y)));
      tf_quad_res = std::max(tf_quad_res, std::abs(w - trace_free_plane_value(c, X, Y)));

      Vec S = Vec::Zero(kDim), T = Vec::Zero(kDim);
      S.head(2) = random_vec().head(2).normalized();
      T.tail(2) = random_vec().tail(2).normalized();
      zero_res = std::max(zero_res, std::abs(plane_value(W, S, T)));
    }
  }
  const std::size_t np = points.size();
  const std::string tag = "[c=" + std::to_string(c) + "]";
  rep.checks.push_back(make_report("weyl.listed_components" + tag, listed_res, opt.component_tol, 8 * np));
  rep.checks.push_back(make_report("weyl.other_components_vanish" + tag, other_res, opt.component_tol, 248 * np));
  rep.checks.push_back(make_report("weyl.plane_closed_form" + tag, quad_res, opt.plane_tol, opt.planes * np));
  rep.checks.push_back(make_report("weyl.plane_zero_on_intersecting" + tag, zero_res, opt.plane_tol, opt.planes * np));
  rep.checks.push_back(make_report("weyl.diagnostic.trace_free" + tag, trace_res, opt.component_tol, 16 * np,
                                   "diagnostic"));
  rep.checks.push_back(make_report("weyl.diagnostic.plane_trace_free_form" + tag, tf_quad_res, opt.plane_tol,
                                   opt.planes * np, "diagnostic"));
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckReport& r) { return r.pass; });
  return rep;
}

}  // namespace dforge
