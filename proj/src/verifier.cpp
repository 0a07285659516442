#include "dforge/verifier.hpp"

#include "dforge/error.hpp"
#include "dforge/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dforge {

CheckReport make_report(std::string name, double residual, double tol, std::size_t samples, std::string note) {
  CheckReport r;
  r.name = std::move(name);
  r.max_residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;  // NaN fails
  r.samples = samples;
  r.note = std::move(note);
  return r;
}

namespace {

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, x);
  }
  return m;
}

void require_aligned(const std::vector<Vec>& points, const std::vector<SphereElement>& spheres) {
  if (points.size() != spheres.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "verifier: one sphere per sample point is required");
  }
}

// sup over g-unit X of |v^T X| for a covector v
double dual_norm(const Mat& metric, const Vec& v) {
  return std::sqrt(std::max(0.0, v.dot(metric.ldlt().solve(v))));
}

}  // namespace

std::vector<SphereElement> sample_congruence(const Congruence& congruence, const std::vector<Vec>& points) {
  std::vector<SphereElement> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = congruence(points[i]); });
  return out;
}

CheckReport check_envelope(const ParamImmersion& f, const std::vector<Vec>& points,
                           const std::vector<SphereElement>& spheres, double tol, const VerifyOptions& opts) {
  require_aligned(points, spheres);
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const ImmersionJet jet = jet_eval(f, points[i], opts.step, opts.mode);
    const Vec r = jet.point - spheres[i].center;
    const Mat g = jet.first.transpose() * jet.first;
    res[i] = std::abs(r.norm() - spheres[i].radius) + dual_norm(g, jet.first.transpose() * r);
  });
  return make_report("envelope(" + f.name() + ")", max_of(res), tol, points.size());
}

CheckReport check_common_congruence(const ParamImmersion& f, const ParamImmersion& ft,
                                    const std::vector<Vec>& points, const std::vector<SphereElement>& spheres,
                                    double tol, const VerifyOptions& opts) {
  require_aligned(points, spheres);
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const ImmersionJet a = jet_eval(f, points[i], opts.step, opts.mode);
    const ImmersionJet b = jet_eval(ft, points[i], opts.step, opts.mode);
    const Vec N = fundamental_forms(a).normal;
    const Vec Nt = fundamental_forms(b).normal;
    const double R = spheres[i].radius;
    double best = std::numeric_limits<double>::infinity();
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        best = std::min(best, ((a.point + sa * R * N) - (b.point + sb * R * Nt)).norm());
      }
    }
    res[i] = best;
  });
  return make_report("common_congruence", max_of(res), tol, points.size());
}

CheckReport check_conformality(const ParamImmersion& f, const ParamImmersion& ft, const std::vector<Vec>& points,
                               double tol, const VerifyOptions& opts) {
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    res[i] = conformal_factor_field(f, ft, {points[i]}, tol, opts.step, opts.mode).anisotropy;
  });
  return make_report("conformality", max_of(res), tol, points.size());
}

CheckReport check_b_squared(const ParamImmersion& f, const ParamImmersion& ft, const std::vector<double>& alpha,
                            const std::vector<double>& phi, const std::vector<Vec>& points, double tol,
                            const VerifyOptions& opts) {
  if (alpha.size() != points.size() || phi.size() != points.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "check_b_squared: field sizes differ from the grid");
  }
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const ImmersionJet a = jet_eval(f, points[i], opts.step, opts.mode);
    const ImmersionJet b = jet_eval(ft, points[i], opts.step, opts.mode);
    const FundamentalForms fa = fundamental_forms(a);
    const FundamentalForms fb = fundamental_forms(b);
    const int n = fa.dim();
    const Mat I = Mat::Identity(n, n);
    const Mat E = orthonormal_frame(fa.metric);
    const double w = std::exp(-2.0 * phi[i]);
    double best = std::numeric_limits<double>::infinity();
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        const Mat B = sa * fa.shape - alpha[i] * I;
        const Mat Bt = sb * fb.shape - alpha[i] * I;
        const Mat D = operator_in_frame(Bt * Bt - w * (B * B), fa.metric, E);
        best = std::min(best, D.jacobiSvd().singularValues()[0]);
      }
    }
    res[i] = best;
  });
  return make_report("b_squared", max_of(res), tol, points.size());
}

CheckReport check_radius_trace(const ParamImmersion& f, const std::vector<Vec>& points,
                               const std::vector<SphereElement>& spheres, double tol, const VerifyOptions& opts) {
  require_aligned(points, spheres);
  if (f.dim() < 2) throw Error(ErrorCode::kInvalidInput, "check_radius_trace: needs n >= 2");
  std::vector<double> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const ImmersionJet a = jet_eval(f, points[i], opts.step, opts.mode);
    FundamentalForms fa = fundamental_forms(a);
    if ((spheres[i].center - a.point).dot(fa.normal) < 0.0) fa = fundamental_forms(a, -1);
    const Mat E = orthonormal_frame(fa.metric);
    double trace = 0.0;
    for (int k = 0; k < 2; ++k) trace += E.col(k).dot(fa.second_form * E.col(k));
    res[i] = std::abs(spheres[i].radius - 2.0 / trace);
  });
  return make_report("radius_trace", max_of(res), tol, points.size());
}

// ---------------------------------------------------------------- Ribaucour data

namespace {

// 2 <d, df~(e_axis)> / |d|^2 at u
double log_mu_rate(const ParamImmersion& f, const ParamImmersion& ft, const Vec& u, int axis,
                   const VerifyOptions& opts) {
  const Vec d = f.evaluate(u) - ft.evaluate(u);
  const ImmersionJet jt = jet_eval(ft, u, opts.step, opts.mode);
  return 2.0 * d.dot(jt.first.col(axis)) / d.squaredNorm();
}

}  // namespace

RibaucourData recover_ribaucour_data(const ParamImmersion& f, const ParamImmersion& ft, const StructuredGrid& grid,
                                     const VerifyOptions& opts) {
  const std::size_t N = grid.size();
  if (N < 2) throw Error(ErrorCode::kInvalidInput, "recover_ribaucour_data: grid too small");
  RibaucourData out;
  out.grid = grid;

  std::vector<Vec> d(N);
  parallel_for(N, [&](std::size_t i) {
    const Vec u = grid.point(i);
    d[i] = f.evaluate(u) - ft.evaluate(u);
  });
  for (std::size_t i = 0; i < N; ++i) {
    if (d[i].norm() < 1e-12) throw Error(ErrorCode::kDegenerate, "recover_ribaucour_data: f and f~ coincide at a grid point");
  }

  struct Edge {
    std::size_t a, b;
    double delta;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < N; ++i) {
    auto idx = grid.index(i);
    for (int ax = 0; ax < grid.dim(); ++ax) {
      if (idx[ax] + 1 >= grid.counts[ax]) continue;
      auto j = idx;
      ++j[ax];
      edges.push_back({i, grid.flat(j), 0.0});
    }
  }
  parallel_for(edges.size(), [&](std::size_t e) {
    Edge& ed = edges[e];
    const auto ia = grid.index(ed.a), ib = grid.index(ed.b);
    int ax = 0;
    while (ia[ax] == ib[ax]) ++ax;
    const Vec ua = grid.point(ed.a), ub = grid.point(ed.b);
    const Vec um = 0.5 * (ua + ub);
    const double ra = log_mu_rate(f, ft, ua, ax, opts);
    const double rm = log_mu_rate(f, ft, um, ax, opts);
    const double rb = log_mu_rate(f, ft, ub, ax, opts);
    ed.delta = grid.spacing[ax] * (ra + 4.0 * rm + rb) / 6.0;
  });

  // least squares over edges, node 0 pinned
  const int unknowns = static_cast<int>(N) - 1;
  Eigen::SparseMatrix<double> L(static_cast<int>(edges.size()), unknowns);
  std::vector<Eigen::Triplet<double>> trip;
  Vec rhs(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].b != 0) trip.emplace_back(static_cast<int>(e), static_cast<int>(edges[e].b) - 1, 1.0);
    if (edges[e].a != 0) trip.emplace_back(static_cast<int>(e), static_cast<int>(edges[e].a) - 1, -1.0);
    rhs[e] = edges[e].delta;
  }
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> LtL = L.transpose() * L;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(LtL);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::kSingular, "recover_ribaucour_data: edge system singular");
  const Vec x = solver.solve(L.transpose() * rhs);
  out.log_mu.assign(N, 0.0);
  for (int i = 0; i < unknowns; ++i) out.log_mu[i + 1] = x[i];
  const Vec misfit = L * x - rhs;
  out.edge_residual = misfit.size() ? misfit.cwiseAbs().maxCoeff() : 0.0;

  out.phi.resize(N);
  out.F.resize(N);
  out.nu.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double mu = std::exp(out.log_mu[i]);
    out.F[i] = mu * d[i];
    out.phi[i] = 0.5 * mu * d[i].squaredNorm();
    out.nu[i] = 1.0 / out.F[i].squaredNorm();
    const Vec rebuilt = d[i] - 2.0 * out.nu[i] * out.phi[i] * out.F[i];  // should vanish
    out.definitional_residual = std::max({out.definitional_residual,
                                          std::abs(out.nu[i] * out.F[i].squaredNorm() - 1.0), rebuilt.norm()});
  }

  // dphi = <F, df> along every axis with central differences of phi
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto idx = grid.index(i);
    const ImmersionJet j = jet_eval(f, grid.point(i), opts.step, opts.mode);
    for (int ax = 0; ax < grid.dim(); ++ax) {
      if (idx[ax] == 0 || idx[ax] + 1 >= grid.counts[ax]) continue;
      auto p = idx, m = idx;
      ++p[ax];
      --m[ax];
      const double dphi = (out.phi[grid.flat(p)] - out.phi[grid.flat(m)]) / (2.0 * grid.spacing[ax]);
      const double expect = out.F[i].dot(j.first.col(ax));
      worst = std::max(worst, std::abs(dphi - expect));
      scale = std::max(scale, std::abs(expect));
    }
  }
  out.consistency_residual = worst / std::max(scale, 1e-300);
  return out;
}

const char* to_string(DarbouxClass c) {
  switch (c) {
    case DarbouxClass::kTwoClusters: return "two-cluster";
    case DarbouxClass::kSingleCluster: return "single-cluster (trivial/Ribaucour-degenerate)";
    case DarbouxClass::kIndeterminate: return "indeterminate";
    case DarbouxClass::kManyClusters: return "more than two clusters";
  }
  return "?";
}

DarbouxReport check_darboux_condition(const ParamImmersion& f, const ParamImmersion& ft, const StructuredGrid& grid,
                                      double tol, const VerifyOptions& opts) {
  for (int c : grid.counts) {
    if (c < 5) throw Error(ErrorCode::kInvalidInput, "check_darboux_condition: need at least 5 nodes per axis");
  }
  const RibaucourData data = recover_ribaucour_data(f, ft, grid, opts);
  const std::size_t N = grid.size();
  const int n = grid.dim();

  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < N; ++i) {
    const auto idx = grid.index(i);
    bool ok = true;
    for (int ax = 0; ax < n; ++ax) ok = ok && idx[ax] >= 2 && idx[ax] + 2 < grid.counts[ax];
    if (ok) interior.push_back(i);
  }

  struct NodeResult {
    DarbouxClass cls = DarbouxClass::kIndeterminate;
    double residual = 0.0;
    double err = 0.0;
    double separation = std::numeric_limits<double>::infinity();
  };
  std::vector<NodeResult> nodes(interior.size());
  parallel_for(interior.size(), [&](std::size_t k) {
    const std::size_t i = interior[k];
    const auto idx = grid.index(i);
    const ImmersionJet j = jet_eval(f, grid.point(i), opts.step, opts.mode);
    const Mat g = j.first.transpose() * j.first;
    const Mat Jplus = g.ldlt().solve(j.first.transpose());
    const int m = static_cast<int>(j.point.size());
    Mat dF5(m, n), dF3(m, n);
    for (int ax = 0; ax < n; ++ax) {
      auto at = [&](int off) {
        auto q = idx;
        q[ax] += off;
        return data.F[grid.flat(q)];
      };
      const double hstep = grid.spacing[ax];
      dF5.col(ax) = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * hstep);
      dF3.col(ax) = (at(1) - at(-1)) / (2.0 * hstep);
    }
    const Mat E = orthonormal_frame(g);
    const Mat S5 = operator_in_frame(Jplus * dF5, g, E);
    const Mat S3 = operator_in_frame(Jplus * dF3, g, E);
    NodeResult r;
    r.err = (S5 - S3).jacobiSvd().singularValues()[0];
    Eigen::SelfAdjointEigenSolver<Mat> eig(S5);
    const Vec ev = eig.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    const double thr = 10.0 * r.err + 1e-9 * scale;
    int big = 0, at_gap = -1;
    double largest = 0.0;
    for (int q = 0; q + 1 < n; ++q) {
      const double gap = ev[q + 1] - ev[q];
      if (gap > thr) {
        ++big;
        at_gap = q;
      }
      largest = std::max(largest, gap);
    }
    if (r.err > 1e-3 * std::max(scale, 1e-300)) {
      r.cls = DarbouxClass::kIndeterminate;
    } else if (big == 0) {
      r.cls = DarbouxClass::kSingleCluster;
    } else if (big == 1) {
      r.cls = DarbouxClass::kTwoClusters;
      r.separation = largest / std::max(thr, 1e-300);
      const double lambda = ev.head(at_gap + 1).mean();
      const double mu = ev.tail(n - at_gap - 1).mean();
      const double FF = data.F[i].squaredNorm();
      r.residual = std::abs((lambda + mu) * data.phi[i] - FF) / FF;
    } else {
      r.cls = DarbouxClass::kManyClusters;
    }
    nodes[k] = r;
  });

  DarbouxReport rep;
  double worst = 0.0;
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& r : nodes) {
    rep.error_estimate = std::max(rep.error_estimate, r.err);
    switch (r.cls) {
      case DarbouxClass::kTwoClusters:
        ++rep.two_cluster;
        worst = std::max(worst, r.residual);
        sep = std::min(sep, r.separation);
        break;
      case DarbouxClass::kSingleCluster: ++rep.single_cluster; break;
      case DarbouxClass::kIndeterminate: ++rep.indeterminate; break;
      case DarbouxClass::kManyClusters: ++rep.many_clusters; break;
    }
  }
  rep.separation = rep.two_cluster ? sep : 0.0;
  rep.consistency_residual = data.consistency_residual;
  const std::size_t total = nodes.size();
  auto majority = [&](std::size_t count) { return total > 0 && 10 * count >= 9 * total; };
  if (majority(rep.two_cluster)) {
    rep.classification = DarbouxClass::kTwoClusters;
  } else if (majority(rep.single_cluster)) {
    rep.classification = DarbouxClass::kSingleCluster;
  } else if (majority(rep.many_clusters)) {
    rep.classification = DarbouxClass::kManyClusters;
  } else {
    rep.classification = DarbouxClass::kIndeterminate;
  }
  if (rep.classification == DarbouxClass::kTwoClusters) {
    rep.check = make_report("darboux", worst, tol, total);
  } else {
    rep.check = make_report("darboux", std::numeric_limits<double>::infinity(), tol, total,
                            std::string("eigenvalues: ") + to_string(rep.classification));
  }
  return rep;
}

std::vector<CheckReport> verify_pair(const ParamImmersion& f, const ParamImmersion& ft, const std::vector<Vec>& points,
                                     const std::vector<SphereElement>& spheres, const PairTolerances& tol,
                                     const VerifyOptions& opts) {
  require_aligned(points, spheres);
  std::vector<CheckReport> out;
  CheckReport e1 = check_envelope(f, points, spheres, tol.envelope, opts);
  e1.name = "envelope_f";
  CheckReport e2 = check_envelope(ft, points, spheres, tol.envelope, opts);
  e2.name = "envelope_f_tilde";
  out.push_back(e1);
  out.push_back(e2);
  out.push_back(check_common_congruence(f, ft, points, spheres, tol.envelope, opts));
  const ConformalFit fit = conformal_factor_field(f, ft, points, tol.conformal, opts.step, opts.mode);
  out.push_back(make_report("conformality", fit.anisotropy, tol.conformal, points.size()));
  std::vector<double> alpha(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) alpha[i] = 1.0 / spheres[i].radius;
  out.push_back(check_b_squared(f, ft, alpha, fit.phi, points, tol.b_squared, opts));
  return out;
}

}  // namespace dforge
