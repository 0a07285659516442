#include "dforge/bonnet.hpp"

#include "dforge/error.hpp"
#include "dforge/parallel.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <random>

namespace dforge {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Vector2d>;

enum Jet { kF = 0, kX, kY, kXX, kXY, kYY };

// u, H, H_x, H_y, h as scalars; with T = AD they also carry d/dx, d/dy.
template <class T>
struct Fields {
  T u, H, Hx, Hy, h;
};

Fields<AD> ad_fields(const BonnetJet& j) {
  const auto& u = j.u;
  const auto& H = j.H;
  Fields<AD> f;
  f.u = AD(u[kF], Eigen::Vector2d(u[kX], u[kY]));
  f.H = AD(H[kF], Eigen::Vector2d(H[kX], H[kY]));
  f.Hx = AD(H[kX], Eigen::Vector2d(H[kXX], H[kXY]));
  f.Hy = AD(H[kY], Eigen::Vector2d(H[kXY], H[kYY]));
  f.h = AD(j.h, Eigen::Vector2d(j.h_x(), j.h_y()));
  return f;
}

Fields<double> plain_fields(const BonnetJet& j) {
  return {j.u[kF], j.H[kF], j.H[kX], j.H[kY], j.h};
}

// S, C with cot R = H (c = 1) or coth R = H (c = -1); C = H S.
template <class T>
T radius_sine(const T& H, int c) {
  using std::sqrt;
  if (c == 1) return 1.0 / sqrt(H * H + 1.0);
  return (H < 0.0 ? -1.0 : 1.0) / sqrt(H * H - 1.0);
}

template <class T>
struct Coeffs {
  std::array<T, 4> Fx, Fy, N;
};

template <class T>
Coeffs<T> frame_coeffs(const Fields<T>& F, int c, double k, int eps) {
  using std::exp;
  const T emu = exp(-F.u);
  const double ek = eps * k;
  Coeffs<T> out;
  if (c == 0) {
    const T iH = 1.0 / F.H;
    out.Fx = {-F.h * emu * iH, -ek * emu * iH, -F.Hx * iH * iH, T(0.0)};
    out.Fy = {-ek * emu * iH, F.h * emu * iH, -F.Hy * iH * iH, T(0.0)};
    out.N = {ek * F.Hy + F.h * F.Hx, ek * F.Hx - F.h * F.Hy, -F.H * (k * k + F.h * F.h), T(0.0)};
    return out;
  }
  const T S = radius_sine(F.H, c);
  const T C = F.H * S;
  const T Rx = -S * S * F.Hx;
  const T Ry = -S * S * F.Hy;
  const T q = F.h * F.h + k * k;
  out.Fx = {-S * F.h * emu, -ek * S * emu, Rx * C, -double(c) * S * Rx};
  out.Fy = {-ek * S * emu, S * F.h * emu, Ry * C, -double(c) * S * Ry};
  out.N = {F.h * Rx + ek * Ry, -(F.h * Ry - ek * Rx), S * q * C, -double(c) * S * S * q};
  return out;
}

template <class T>
FrameVector value_of(const std::array<T, 4>& a) {
  FrameVector v;
  for (int i = 0; i < 4; ++i) {
    if constexpr (std::is_same_v<T, AD>) {
      v.a[i] = a[i].value();
    } else {
      v.a[i] = a[i];
    }
  }
  return v;
}

// Gauss–Weingarten: derivative of basis element b in direction d (0 = x, 1 = y).
std::array<std::array<std::array<double, 4>, 2>, 4> basis_derivatives(const BonnetJet& j) {
  const double ux = j.u[kX], uy = j.u[kY];
  const double e = std::exp(j.u[kF]), ie = 1.0 / e;
  const double H = j.H[kF];
  const double ek = j.eps * j.k;
  const double L = e * H + j.h, M = ek, Nn = e * H - j.h;
  const double cf = -j.c * e;  // <D X, f> = -<X,X>, <f,f> = c
  std::array<std::array<std::array<double, 4>, 2>, 4> d{};
  d[0][0] = {ux / 2, -uy / 2, L, cf};
  d[0][1] = {uy / 2, ux / 2, M, 0.0};
  d[1][0] = {uy / 2, ux / 2, M, 0.0};
  d[1][1] = {-ux / 2, uy / 2, Nn, cf};
  d[2][0] = {-(H + j.h * ie), -ek * ie, 0.0, 0.0};
  d[2][1] = {-ek * ie, -(H - j.h * ie), 0.0, 0.0};
  d[3][0] = {1.0, 0.0, 0.0, 0.0};
  d[3][1] = {0.0, 1.0, 0.0, 0.0};
  return d;
}

FrameVector covariant(const BonnetJet& j, const std::array<AD, 4>& v, int dir) {
  const auto db = basis_derivatives(j);
  FrameVector out;
  for (int b = 0; b < 4; ++b) out.a[b] += v[b].derivatives()[dir];
  for (int b = 0; b < 4; ++b) {
    for (int i = 0; i < 4; ++i) out.a[i] += v[b].value() * db[b][dir][i];
  }
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

void put_max(IdentityResiduals& r, const std::string& name, double value) {
  for (auto& [n, v] : r.entries) {
    if (n == name) {
      v = std::max(v, value);
      if (std::isnan(value)) v = value;
      return;
    }
  }
  r.entries.emplace_back(name, value);
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

const char* to_string(IntForm form) { return form == IntForm::kPrinted ? "printed" : "corrected"; }

IntForm int_form_from_string(const std::string& s) {
  if (s == "printed") return IntForm::kPrinted;
  if (s == "corrected") return IntForm::kCorrected;
  throw Error(ErrorCode::kInvalidInput, "unknown integrability form '" + s + "' (printed|corrected)");
}

double BonnetJet::h_x() const { return H[kX] * std::exp(u[kF]); }
double BonnetJet::h_y() const { return -H[kY] * std::exp(u[kF]); }

BonnetJet BonnetJet::with_eps(int e) const {
  BonnetJet j = *this;
  j.eps = e;
  return j;
}

ConstraintResiduals constraint_residuals(const BonnetJet& j) {
  ConstraintResiduals r;
  const double tail = j.form == IntForm::kPrinted ? j.H[kY] + j.H[kX] : j.H[kY] * j.u[kX];
  r.integrability = std::abs(2.0 * j.H[kXY] + j.H[kX] * j.u[kY] + tail);
  const double e = std::exp(j.u[kF]);
  const double K = j.c + j.H[kF] * j.H[kF] - (j.h * j.h + j.k * j.k) / (e * e);
  r.gauss = std::abs(j.u[kXX] + j.u[kYY] + 2.0 * e * K);
  return r;
}

BonnetJet make_admissible_jet(std::uint64_t seed, int c, IntForm form) {
  if (c != -1 && c != 0 && c != 1) throw Error(ErrorCode::kInvalidInput, "bonnet: c must be -1, 0 or 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> kdist(0.5, 2.0);
  BonnetJet j;
  j.c = c;
  j.form = form;
  const double h_min = c == 0 ? 0.3 : c == -1 ? 1.2 : 0.0;
  const double h_max = c == -1 ? 2.5 : 2.0;
  do {
    j.H[kF] = h_max * unit(rng);
  } while (std::abs(j.H[kF]) < h_min);
  j.H[kX] = unit(rng);
  j.H[kY] = unit(rng);
  j.H[kXX] = unit(rng);
  j.H[kYY] = unit(rng);
  j.u[kF] = 0.5 * unit(rng);
  j.u[kX] = unit(rng);
  j.u[kY] = unit(rng);
  j.u[kXY] = unit(rng);
  j.u[kYY] = unit(rng);
  j.h = unit(rng);
  j.k = kdist(rng);
  j.eps = unit(rng) < 0.0 ? -1 : 1;

  const double tail = form == IntForm::kPrinted ? j.H[kY] + j.H[kX] : j.H[kY] * j.u[kX];
  j.H[kXY] = -0.5 * (j.H[kX] * j.u[kY] + tail);
  const double e = std::exp(j.u[kF]);
  const double K = c + j.H[kF] * j.H[kF] - (j.h * j.h + j.k * j.k) / (e * e);
  j.u[kXX] = -j.u[kYY] - 2.0 * e * K;
  return j;
}

double frame_dot(const BonnetJet& jet, const FrameVector& v, const FrameVector& w) {
  const double e = std::exp(jet.u[kF]);
  return e * (v.a[0] * w.a[0] + v.a[1] * w.a[1]) + v.a[2] * w.a[2] + jet.c * v.a[3] * w.a[3];
}

BonnetFrame bonnet_frame(const BonnetJet& jet) {
  if (jet.c == 0 && jet.H[kF] == 0.0) throw Error(ErrorCode::kDegenerate, "bonnet_frame: H = 0");
  if (jet.c == -1 && std::abs(jet.H[kF]) <= 1.0) {
    throw Error(ErrorCode::kDegenerate, "bonnet_frame: coth R = H needs |H| > 1");
  }
  const auto co = frame_coeffs(plain_fields(jet), jet.c, jet.k, jet.eps);
  return {value_of(co.Fx), value_of(co.Fy), value_of(co.N)};
}

BonnetSecondOrder bonnet_second_order(const BonnetJet& jet) {
  const auto co = frame_coeffs(ad_fields(jet), jet.c, jet.k, jet.eps);
  const FrameVector N = value_of(co.N);
  BonnetSecondOrder s;
  s.xx = frame_dot(jet, N, covariant(jet, co.Fx, 0));
  s.xy = frame_dot(jet, N, covariant(jet, co.Fx, 1));
  s.yx = frame_dot(jet, N, covariant(jet, co.Fy, 0));
  s.yy = frame_dot(jet, N, covariant(jet, co.Fy, 1));
  return s;
}

BonnetDisplays bonnet_displays(const BonnetJet& j) {
  const double e = std::exp(j.u[kF]);
  const double H = j.H[kF], Hx = j.H[kX], Hy = j.H[kY];
  const double q = j.h * j.h + j.k * j.k;
  const double grad = Hx * Hx + Hy * Hy;
  const double k = j.k;
  BonnetDisplays d{};
  if (j.c == 0) {
    const double H2 = H * H, H4 = H2 * H2;
    d.fx_norm2 = q / (e * H2) + Hx * Hx / H4;
    d.fy_norm2 = q / (e * H2) + Hy * Hy / H4;
    d.fxfy = Hx * Hy / H4;
    d.n_norm2 = q * (H2 + e * grad);
    d.cross = j.eps * (k / H) * (e * grad + H2 * (k * k + j.h * j.h));
    d.cross_lower_bound = std::abs(k) * std::abs(H) * k * k;
    return d;
  }
  const double S = radius_sine(H, j.c);
  const double C = H * S;
  const double Rx = -S * S * Hx, Ry = -S * S * Hy;
  d.fx_norm2 = S * S * q / e + Rx * Rx;
  d.fy_norm2 = S * S * q / e + Ry * Ry;
  d.fxfy = Rx * Ry;
  d.n_norm2 = q * (S * S * q + e * (Rx * Rx + Ry * Ry));
  d.cross = -j.eps * (k / S) * (e * grad + S * S * C * C * (k * k + j.h * j.h));
  d.cross_lower_bound = std::abs(k) * std::abs(S) * C * C * k * k;
  return d;
}

double IdentityResiduals::get(const std::string& name) const {
  for (const auto& [n, v] : entries) {
    if (n == name) return v;
  }
  throw Error(ErrorCode::kInvalidInput, "no identity named " + name);
}

void IdentityResiduals::merge_max(const IdentityResiduals& other) {
  for (const auto& [n, v] : other.entries) put_max(*this, n, v);
}

IdentityResiduals first_order_identities(const BonnetJet& jet) {
  IdentityResiduals r;
  double metric[2][3], nn[2];
  for (int s = 0; s < 2; ++s) {
    const BonnetJet j = jet.with_eps(s == 0 ? 1 : -1);
    const BonnetFrame F = bonnet_frame(j);
    const BonnetDisplays d = bonnet_displays(j);
    metric[s][0] = frame_dot(j, F.F_X, F.F_X);
    metric[s][1] = frame_dot(j, F.F_Y, F.F_Y);
    metric[s][2] = frame_dot(j, F.F_X, F.F_Y);
    nn[s] = frame_dot(j, F.N, F.N);
    put_max(r, "fx_norm2", rel(metric[s][0], d.fx_norm2));
    put_max(r, "fy_norm2", rel(metric[s][1], d.fy_norm2));
    put_max(r, "fxfy", rel(metric[s][2], d.fxfy));
    put_max(r, "n_norm2", rel(nn[s], d.n_norm2));
    const double scale = std::sqrt(nn[s]) * std::sqrt(std::max(metric[s][0], metric[s][1]));
    put_max(r, "normal",
            std::max(std::abs(frame_dot(j, F.N, F.F_X)), std::abs(frame_dot(j, F.N, F.F_Y))) / (1.0 + scale));
  }
  double across = rel(nn[0], nn[1]);
  for (int i = 0; i < 3; ++i) across = std::max(across, rel(metric[0][i], metric[1][i]));
  put_max(r, "eps_equality", across);
  return r;
}

IdentityResiduals second_order_identities(const BonnetJet& jet) {
  IdentityResiduals r;
  const BonnetJet jp = jet.with_eps(1), jm = jet.with_eps(-1);
  const BonnetSecondOrder sp = bonnet_second_order(jp), sm = bonnet_second_order(jm);
  const BonnetDisplays dp = bonnet_displays(jp), dm = bonnet_displays(jm);
  put_max(r, "diag_eps_independence", std::max(rel(sp.xx, sm.xx), rel(sp.yy, sm.yy)));
  put_max(r, "cross_display", std::max(rel(sp.xy, dp.cross), rel(sm.xy, dm.cross)));
  put_max(r, "cross_symmetry", std::max(rel(sp.xy, sp.yx), rel(sm.xy, sm.yx)));
  put_max(r, "cross_odd", std::abs(sp.xy + sm.xy) / (1.0 + std::abs(sp.xy)));
  const double shortfall = std::max({0.0, dp.cross_lower_bound - std::abs(sp.xy),
                                     dm.cross_lower_bound - std::abs(sm.xy)});
  put_max(r, "cross_nonvanishing", shortfall / (1.0 + dp.cross_lower_bound));
  return r;
}

CheckReport first_order_identity_check(const BonnetJet& jet, double tol) {
  const IdentityResiduals r = first_order_identities(jet);
  double worst = 0.0;
  std::string which;
  for (const auto& [n, v] : r.entries) {
    if (!(v <= worst)) {
      worst = v;
      which = n;
    }
  }
  return make_report("bonnet.first_order", worst, tol, 1, which);
}

CheckReport second_order_identity_check(const BonnetJet& jet, double tol) {
  const IdentityResiduals r = second_order_identities(jet);
  double worst = 0.0;
  std::string which;
  for (const auto& [n, v] : r.entries) {
    if (!(v <= worst)) {
      worst = v;
      which = n;
    }
  }
  return make_report("bonnet.second_order", worst, tol, 1, which);
}

BonnetSuiteReport run_bonnet_suite(const BonnetSuiteOptions& opt) {
  if (opt.trials == 0) throw Error(ErrorCode::kInvalidInput, "bonnet: trials must be positive");
  std::vector<ConstraintResiduals> cons(opt.trials);
  std::vector<IdentityResiduals> first(opt.trials), second(opt.trials);
  parallel_for(opt.trials, [&](std::size_t t) {
    const BonnetJet jet = make_admissible_jet(trial_seed(opt.seed, t), opt.c, opt.form);
    cons[t] = constraint_residuals(jet);
    first[t] = first_order_identities(jet);
    second[t] = second_order_identities(jet);
  });
  BonnetSuiteReport rep;
  rep.options = opt;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    rep.constraints.integrability = std::max(rep.constraints.integrability, cons[t].integrability);
    rep.constraints.gauss = std::max(rep.constraints.gauss, cons[t].gauss);
    rep.first_order.merge_max(first[t]);
    rep.second_order.merge_max(second[t]);
  }
  const std::string tag = std::string("[c=") + std::to_string(opt.c) + "," + to_string(opt.form) + "]";
  rep.checks.push_back(make_report("bonnet.constraints" + tag,
                                   std::max(rep.constraints.integrability, rep.constraints.gauss), 1e-12,
                                   opt.trials));
  for (const auto& [n, v] : rep.first_order.entries) {
    rep.checks.push_back(make_report("bonnet.first_order." + n + tag, v, opt.first_order_tol, opt.trials));
  }
  for (const auto& [n, v] : rep.second_order.entries) {
    rep.checks.push_back(make_report("bonnet.second_order." + n + tag, v, opt.second_order_tol, opt.trials));
  }
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckReport& c) { return c.pass; });
  return rep;
}

}  // namespace dforge
