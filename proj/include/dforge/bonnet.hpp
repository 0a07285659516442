#pragma once

#include "dforge/verifier.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dforge {

/// Which integrability condition for h_x = H_x e^u, h_y = -H_y e^u the jet
/// is built to satisfy.
///   kPrinted:   2H_xy + H_x u_y + H_y + H_x = 0
///   kCorrected: 2H_xy + H_x u_y + H_y u_x = 0 (equality of mixed partials of h)
enum class IntForm { kPrinted, kCorrected };

const char* to_string(IntForm form);
IntForm int_form_from_string(const std::string& s);

/// 2-jet at one point of a Bonnet pair in conformal coordinates
/// e^u (dx^2 + dy^2). Jet order: (f, f_x, f_y, f_xx, f_xy, f_yy).
struct BonnetJet {
  int c = 0;
  std::array<double, 6> u{};
  std::array<double, 6> H{};
  double h = 0.0;
  double k = 1.0;
  int eps = 1;
  IntForm form = IntForm::kPrinted;

  double h_x() const;  // from Codazzi
  double h_y() const;
  BonnetJet with_eps(int e) const;
};

/// Codazzi holds by construction (h_x, h_y are never stored); these are the
/// other two constraints the generator solves for.
struct ConstraintResiduals {
  double integrability = 0.0;
  double gauss = 0.0;
};
ConstraintResiduals constraint_residuals(const BonnetJet& jet);

/// Random admissible jet: u_xx from the Gauss equation of Q_c^3,
/// u_xx + u_yy = -2 e^u (c + H^2 - (h^2 + k^2) e^{-2u}), and H_xy from the
/// chosen integrability condition. |H| >= 0.3 for c = 0 and |H| > 1.2 for
/// c = -1 so that both the 1/H and the coth R = H constructions exist.
BonnetJet make_admissible_jet(std::uint64_t seed, int c, IntForm form = IntForm::kPrinted);

/// Coefficients over {X, Y, eta, f}; Gram diag(e^u, e^u, 1, c).
struct FrameVector {
  std::array<double, 4> a{};
};
double frame_dot(const BonnetJet& jet, const FrameVector& v, const FrameVector& w);

struct BonnetFrame {
  FrameVector F_X, F_Y, N;
};

/// F = f + eta/H (c = 0) or F = C f + S eta (c != 0), its coordinate
/// vectors and the displayed normal N.
BonnetFrame bonnet_frame(const BonnetJet& jet);

/// <N, F_xx>, <N, F_xy>, <N, F_yy>: second fundamental form of F along N
/// from Gauss–Weingarten.
struct BonnetSecondOrder {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;
};
BonnetSecondOrder bonnet_second_order(const BonnetJet& jet);

/// Closed forms the displays claim.
struct BonnetDisplays {
  double fx_norm2, fy_norm2, fxfy, n_norm2, cross;
  double cross_lower_bound;  // from the cross display with all squares but k^2 dropped
};
BonnetDisplays bonnet_displays(const BonnetJet& jet);

/// Named max residuals, all scaled as |a - b| / (1 + |b|).
struct IdentityResiduals {
  std::vector<std::pair<std::string, double>> entries;
  double get(const std::string& name) const;
  void merge_max(const IdentityResiduals& other);
};

/// fx_norm2, fy_norm2, fxfy, n_norm2 (displays, both eps), normal
/// (<N,F_X>, <N,F_Y>), eps_equality (metric and |N|^2 across eps).
IdentityResiduals first_order_identities(const BonnetJet& jet);

/// diag_eps_independence, cross_display, cross_symmetry (F_xy = F_yx),
/// cross_odd (sum over eps), cross_nonvanishing (shortfall below the bound).
IdentityResiduals second_order_identities(const BonnetJet& jet);

struct BonnetSuiteOptions {
  int c = 0;
  IntForm form = IntForm::kPrinted;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double first_order_tol = 1e-11;
  double second_order_tol = 1e-10;
};

struct BonnetSuiteReport {
  BonnetSuiteOptions options;
  ConstraintResiduals constraints;  // max over trials
  IdentityResiduals first_order;
  IdentityResiduals second_order;
  std::vector<CheckReport> checks;
  bool pass = false;
};

BonnetSuiteReport run_bonnet_suite(const BonnetSuiteOptions& options);

CheckReport first_order_identity_check(const BonnetJet& jet, double tol = 1e-11);
CheckReport second_order_identity_check(const BonnetJet& jet, double tol = 1e-10);

}  // namespace dforge
