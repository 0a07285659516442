#pragma once

#include <Eigen/Dense>

#include <vector>

namespace dforge {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Position, first and second parameter derivatives of a hypersurface
/// f: U ⊂ R^n -> R^{n+1} at one parameter point.
struct ImmersionJet {
  Vec param;                 // u, size n
  Vec point;                 // f(u), size n+1
  Mat first;                 // (n+1) x n, column i = ∂f/∂u_i
  std::vector<Vec> second;   // n*n entries, [i*n+j] = ∂²f/∂u_i∂u_j

  ImmersionJet() = default;
  ImmersionJet(int n, int ambient);

  int dim() const { return static_cast<int>(first.cols()); }
  int ambient_dim() const { return static_cast<int>(point.size()); }

  const Vec& d2(int i, int j) const { return second[i * dim() + j]; }
  Vec& d2(int i, int j) { return second[i * dim() + j]; }
};

/// First and second fundamental data of an immersion at a point. The shape
/// matrix acts on coordinate tangent vectors: (A X)^i = shape(i,j) X^j.
struct FundamentalForms {
  Mat metric;                  // g_ij
  Vec normal;                  // unit normal in R^{n+1}
  Mat second_form;             // II_ij = <∂_i∂_j f, N>
  Mat shape;                   // g^{-1} II
  Vec principal_curvatures;    // ascending
  Mat principal_frame;         // columns g-orthonormal eigenvectors of shape
  int orientation = 1;

  int dim() const { return static_cast<int>(metric.rows()); }
};

}  // namespace dforge
