#pragma once

#include "dforge/jet.hpp"
#include "dforge/verifier.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace dforge {

/// (0,4) tensor on a 4-manifold, T[i][j][k][l] = <T(e_i,e_j)e_k, e_l>,
/// flattened as ((i*4 + j)*4 + k)*4 + l.
using Tensor4 = std::array<double, 256>;

inline double& at(Tensor4& t, int i, int j, int k, int l) { return t[((i * 4 + j) * 4 + k) * 4 + l]; }
inline double at(const Tensor4& t, int i, int j, int k, int l) { return t[((i * 4 + j) * 4 + k) * 4 + l]; }

using MetricField = std::function<Mat(const Vec&)>;

/// Riemann tensor with R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z, so that
/// <R(X,Y)Y,X> is the sectional curvature of an orthonormal pair. Metric
/// derivatives by fourth-order central differences of step h; components are
/// returned in the frame obtained by Gram–Schmidt of the coordinate basis.
Tensor4 riemann_tensor(const MetricField& g, const Vec& x, double h);

/// W = R - P (Kulkarni–Nomizu) g with Schouten P = (Ric - s g / 6) / 2.
Tensor4 weyl_from_riemann(const Tensor4& R);

/// Q^2_c x S^2 in conformal coordinates: (x0,x1) on Q_c with factor
/// 2/(1 + c|x|^2), (x2,x3) on the unit sphere with 2/(1 + |y|^2).
MetricField product_metric(double c);

/// <W(X,Y)Y,X> for frame components X, Y.
double plane_value(const Tensor4& W, const Vec& X, const Vec& Y);

/// (1+c)/3 ((a1 b2 - a2 b1)^2 + (a3 b4 - a4 b3)^2) for orthonormal X, Y.
double closed_form_plane_value(double c, const Vec& X, const Vec& Y);

/// What the trace-free tensor with W_1221 = W_3443 = (1+c)/3 gives:
/// the mixed sectional entries are then -(1+c)/6 and
/// <W(X,Y)Y,X> = (1+c)/2 (p12^2 + p34^2) - (1+c)/6.
double trace_free_plane_value(double c, const Vec& X, const Vec& Y);

struct WeylOptions {
  double step = 1e-3;
  std::size_t planes = 100;
  std::uint64_t seed = 1;
  double component_tol = 1e-6;
  double plane_tol = 1e-8;
  std::vector<Vec> points;  // empty = three fixed sample points
};

struct WeylReport {
  double c = 0.0;
  Tensor4 weyl{};  // at the first sample point
  std::vector<CheckReport> checks;
  bool pass = false;
};

/// Checks, at every sample point: the eight listed components equal
/// +-(1+c)/3, every other component vanishes, the plane value on random
/// planes matches the closed-form quadratic, and planes spanned by S in
/// span{e1,e2}, T in span{e3,e4} have zero plane value. Two diagnostics
/// (trace-freeness and the trace-free quadratic) are reported alongside.
WeylReport weyl_product_check(double c, const WeylOptions& options = {});

}  // namespace dforge
