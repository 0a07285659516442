#pragma once

#include "dforge/jet.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dforge {

/// Axis-aligned parameter box; bounds may be infinite.
struct ParamBox {
  Vec lower;
  Vec upper;

  static ParamBox unbounded(int n);
  bool contains(const Vec& u, double margin) const;
};

/// A parameterized hypersurface f: U ⊂ R^n -> R^{n+1}. Implementations may
/// supply exact jets; everything else falls back to finite differences.
class ParamImmersion {
 public:
  virtual ~ParamImmersion() = default;

  virtual int dim() const = 0;
  int ambient_dim() const { return dim() + 1; }
  virtual Vec evaluate(const Vec& u) const = 0;
  virtual std::optional<ImmersionJet> jet(const Vec& /*u*/) const { return std::nullopt; }
  virtual ParamBox domain() const { return ParamBox::unbounded(dim()); }
  virtual std::string name() const { return "immersion"; }
};

enum class JetMode {
  kAuto,              // analytic jet when the surface has one
  kFiniteDifference,  // always central differences
  kRichardson,        // (4 D_h - D_2h)/3 of central differences, fourth order
};

constexpr double kDefaultJetStep = 1e-4;

/// Throws kOutsideDomain unless u lies in the domain with margin 2*step
/// (4*step for kRichardson).
ImmersionJet jet_eval(const ParamImmersion& surface, const Vec& u,
                      double step = kDefaultJetStep, JetMode mode = JetMode::kAuto);

/// Richardson-style check: largest component gap between the central
/// difference jets at step and 2*step. The step-h error is about a third of it.
double jet_fd_error(const ParamImmersion& surface, const Vec& u, double step = kDefaultJetStep);

/// Normal chosen so that det[first | normal] has the sign of orientation.
/// Throws kRankDeficient if the first derivatives are not of full rank.
FundamentalForms fundamental_forms(const ImmersionJet& jet, int orientation = 1);

/// Columns are a g-orthonormal basis built by Gram–Schmidt in coordinate order.
Mat orthonormal_frame(const Mat& metric);

/// Symmetric matrix of a g-self-adjoint coordinate endomorphism in the frame E.
Mat operator_in_frame(const Mat& endo, const Mat& metric, const Mat& E);

struct InversionSpec {
  Vec center;
  double radius = 1.0;
};

Vec invert_point(const InversionSpec& spec, const Vec& p);

/// Jet of I∘f by the chain rule on I(p) = p0 + r^2 (p - p0)/|p - p0|^2.
ImmersionJet apply_inversion(const InversionSpec& spec, const ImmersionJet& jet);

/// Predicted forms of I∘f with respect to Ñ = |f-p0|^2 r^-2 I_* N:
///   r^2 Ã = |f-p0|^2 A + 2<f-p0,N> I,  r^2 λ̃_i = λ_i |f-p0|^2 + 2<f-p0,N>.
/// The metric is rescaled by r^4/|f-p0|^4 and orientation is reversed, so the
/// result is directly comparable with fundamental_forms(apply_inversion(jet), -orientation).
FundamentalForms inversion_shape_law(const InversionSpec& spec, const ImmersionJet& jet,
                                     const FundamentalForms& forms);

struct ConformalFit {
  std::vector<double> phi;        // metric_g ≈ e^{2 phi} metric_f at each sample
  std::vector<double> residual;   // relative anisotropy per sample
  double anisotropy = 0.0;        // max residual
  bool conformal = true;          // anisotropy <= tol
};

ConformalFit conformal_factor_field(const ParamImmersion& f, const ParamImmersion& g,
                                    const std::vector<Vec>& samples, double tol,
                                    double step = kDefaultJetStep,
                                    JetMode mode = JetMode::kAuto);

/// Least-squares conformal factor of metric_g against metric_f at one point.
/// Returns (e^{2phi}, relative anisotropy).
std::pair<double, double> conformal_ratio(const Mat& metric_f, const Mat& metric_g);

}  // namespace dforge
