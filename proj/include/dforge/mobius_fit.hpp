#pragma once

#include "dforge/jet.hpp"

#include <vector>

namespace dforge {

/// Best map Y ≈ M(X) with M(x) = scale Q j(x) + shift, Q orthogonal and
/// j either the identity (similarity) or x -> (x - p)/|x - p|^2.
struct MobiusFit {
  bool uses_inversion = false;
  Vec pole;         // p, empty for a similarity
  double scale = 1.0;
  Mat Q;
  Vec shift;
  double residual = 0.0;  // RMS misfit / RMS spread of Y about its centroid

  Vec apply(const Vec& x) const;
};

/// Closed-form orthogonal Procrustes with scaling (reflections allowed).
MobiusFit fit_similarity(const std::vector<Vec>& X, const std::vector<Vec>& Y);

/// Similarity fit, then Levenberg–Marquardt over the pole p with the
/// similarity part solved in closed form for each p; several starts around
/// the data. Returns the best of all candidates.
MobiusFit fit_mobius(const std::vector<Vec>& X, const std::vector<Vec>& Y, unsigned seed = 1, int starts = 24);

}  // namespace dforge
