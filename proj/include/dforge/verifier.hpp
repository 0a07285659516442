#pragma once

#include "dforge/factory.hpp"

#include <string>
#include <vector>

namespace dforge {

/// pass <=> max_residual <= tolerance.
struct CheckReport {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t samples = 0;
  std::string note;
};

CheckReport make_report(std::string name, double residual, double tol, std::size_t samples,
                        std::string note = {});

/// Jets used by every check. Extrapolated finite differences by default so
/// the checks never reuse a closed form the construction relied on; plain
/// central differences at 1e-4 leave ~1e-5 roundoff in B^2 on strongly
/// curved rotation partners.
struct VerifyOptions {
  double step = 1e-3;
  JetMode mode = JetMode::kRichardson;
};

std::vector<SphereElement> sample_congruence(const Congruence& congruence, const std::vector<Vec>& points);

/// max over points of |‖f - C‖ - R| + sup_{|X|=1} |<f - C, f_* X>|.
CheckReport check_envelope(const ParamImmersion& f, const std::vector<Vec>& points,
                           const std::vector<SphereElement>& spheres, double tol,
                           const VerifyOptions& opts = {});

/// max over points of min over normal signs of ‖(f + R N) - (f~ + R N~)‖.
CheckReport check_common_congruence(const ParamImmersion& f, const ParamImmersion& f_tilde,
                                    const std::vector<Vec>& points,
                                    const std::vector<SphereElement>& spheres, double tol,
                                    const VerifyOptions& opts = {});

/// Anisotropy of metric_f~ against metric_f.
CheckReport check_conformality(const ParamImmersion& f, const ParamImmersion& f_tilde,
                               const std::vector<Vec>& points, double tol,
                               const VerifyOptions& opts = {});

/// max ‖B~^2 - e^{-2 phi} B^2‖ in g-orthonormal frames, B = A - alpha I,
/// minimized over the four normal sign choices. phi[i] = log conformal factor.
CheckReport check_b_squared(const ParamImmersion& f, const ParamImmersion& f_tilde,
                            const std::vector<double>& alpha, const std::vector<double>& phi,
                            const std::vector<Vec>& points, double tol,
                            const VerifyOptions& opts = {});

/// |R - 2 / trace(A|W)| with W = span{d/du0, d/du1} (curve direction and
/// first factor direction) and the normal pointing to the sphere center.
CheckReport check_radius_trace(const ParamImmersion& f, const std::vector<Vec>& points,
                               const std::vector<SphereElement>& spheres, double tol,
                               const VerifyOptions& opts = {});

/// f~ = f - 2 nu phi F with nu^{-1} = <F,F> and dphi = <F, df>. F = mu (f - f~),
/// phi = mu |f - f~|^2 / 2, log mu integrated along grid edges (Simpson) and
/// fitted by least squares with mu = 1 at node 0.
struct RibaucourData {
  StructuredGrid grid;
  std::vector<double> phi;
  std::vector<Vec> F;
  std::vector<double> nu;
  std::vector<double> log_mu;
  double edge_residual = 0.0;          // max loop-closure misfit of log mu
  double consistency_residual = 0.0;   // relative misfit of dphi = <F, df>
  double definitional_residual = 0.0;  // max |nu <F,F> - 1| and |f~ - (f - 2 nu phi F)|
};

RibaucourData recover_ribaucour_data(const ParamImmersion& f, const ParamImmersion& f_tilde,
                                     const StructuredGrid& grid, const VerifyOptions& opts = {});

enum class DarbouxClass { kTwoClusters, kSingleCluster, kIndeterminate, kManyClusters };
const char* to_string(DarbouxClass c);

struct DarbouxReport {
  CheckReport check;            // (lambda + mu) phi = <F,F>, relative
  DarbouxClass classification = DarbouxClass::kIndeterminate;
  double separation = 0.0;      // min over nodes of cluster gap / error estimate
  double error_estimate = 0.0;  // max differentiation error estimate of S
  std::size_t two_cluster = 0, single_cluster = 0, indeterminate = 0, many_clusters = 0;
  double consistency_residual = 0.0;
};

/// Differentiates F on the grid (5-point stencils, 3-point for the error
/// estimate), solves dF = df∘S and clusters the eigenvalues of S at every
/// interior node with threshold 10x the error estimate.
DarbouxReport check_darboux_condition(const ParamImmersion& f, const ParamImmersion& f_tilde,
                                      const StructuredGrid& grid, double tol,
                                      const VerifyOptions& opts = {});

/// Tolerances of a full pair verification.
struct PairTolerances {
  double conformal = 1e-6;
  double envelope = 1e-6;
  double b_squared = 1e-5;
  double darboux = 1e-3;
  double radius_trace = 1e-6;
};

/// Envelope (both members), common congruence, conformality, B^2 law.
std::vector<CheckReport> verify_pair(const ParamImmersion& f, const ParamImmersion& f_tilde,
                                     const std::vector<Vec>& points,
                                     const std::vector<SphereElement>& spheres,
                                     const PairTolerances& tol, const VerifyOptions& opts = {});

}  // namespace dforge
