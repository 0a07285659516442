#pragma once

#include "dforge/hypersurface.hpp"

#include <functional>
#include <memory>
#include <string>

namespace dforge {

using ImmersionPtr = std::shared_ptr<const ParamImmersion>;

/// Immersion given by closures; the jet closure is optional.
class FunctionImmersion : public ParamImmersion {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using JetFn = std::function<ImmersionJet(const Vec&)>;

  FunctionImmersion(std::string name, int n, EvalFn eval, JetFn jet = {},
                    std::optional<ParamBox> box = std::nullopt);

  int dim() const override { return n_; }
  Vec evaluate(const Vec& u) const override { return eval_(u); }
  std::optional<ImmersionJet> jet(const Vec& u) const override;
  ParamBox domain() const override { return box_; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  int n_;
  EvalFn eval_;
  JetFn jet_;
  ParamBox box_;
};

/// x -> M x + b applied to a base immersion (homotheties, motions, shears).
class AffineImage : public ParamImmersion {
 public:
  AffineImage(ImmersionPtr base, Mat M, Vec b);

  int dim() const override { return base_->dim(); }
  Vec evaluate(const Vec& u) const override { return M_ * base_->evaluate(u) + b_; }
  std::optional<ImmersionJet> jet(const Vec& u) const override;
  ParamBox domain() const override { return base_->domain(); }
  std::string name() const override { return "affine(" + base_->name() + ")"; }

 private:
  ImmersionPtr base_;
  Mat M_;
  Vec b_;
};

/// I∘f for an inversion I.
class InvertedImmersion : public ParamImmersion {
 public:
  InvertedImmersion(ImmersionPtr base, InversionSpec spec);

  int dim() const override { return base_->dim(); }
  Vec evaluate(const Vec& u) const override { return invert_point(spec_, base_->evaluate(u)); }
  std::optional<ImmersionJet> jet(const Vec& u) const override;
  ParamBox domain() const override { return base_->domain(); }
  std::string name() const override { return "inverted(" + base_->name() + ")"; }
  const InversionSpec& spec() const { return spec_; }

 private:
  ImmersionPtr base_;
  InversionSpec spec_;
};

/// f(u) = (u, 0).
ImmersionPtr make_plane(int n);
/// Upper hemisphere of radius R as the graph (u, sqrt(R^2 - |u|^2)).
ImmersionPtr make_sphere_graph(int n, double radius = 1.0);
/// (R cos u0, R sin u0, u1, ..., u_{n-1}).
ImmersionPtr make_cylinder(int n, double radius = 1.0);
/// Torus of revolution with radii a > b, times a flat factor when n > 2.
ImmersionPtr make_torus(int n, double a = 2.0, double b = 1.0);
/// (u, |u|^2/2).
ImmersionPtr make_paraboloid(int n);
/// (u, sum_k a_k sin(w_k . u + p_k)), four random modes drawn from seed.
ImmersionPtr make_random_graph(int n, unsigned seed);

/// Names: plane, sphere[:R=r], cylinder[:R=r], torus[:a=..,b=..],
/// graph:paraboloid, graph:random:<seed>. Throws kInvalidInput otherwise.
ImmersionPtr make_builtin(const std::string& spec, int n);

}  // namespace dforge
