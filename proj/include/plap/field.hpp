#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "plap/types.hpp"

namespace plap {

/// A positive scalar field on R^n with value, gradient, and Hessian access.
///
/// Subclasses supply value(); gradient() and hessian() fall back to central
/// differences unless overridden. Implementations are immutable after
/// construction and may be shared between threads.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual int dimension() const = 0;
  virtual double value(const VectorRef& x) const = 0;
  virtual Vector gradient(const VectorRef& x) const;
  virtual Matrix hessian(const VectorRef& x) const;

  virtual bool has_analytic_gradient() const { return false; }
  virtual bool has_analytic_hessian() const { return false; }

  /// Scale of |grad u| used to turn the relative critical-point floor into an
  /// absolute one.
  virtual double gradient_scale() const { return 1.0; }

  /// Center of symmetry for fields known to be radial; radial quadratures
  /// reject fields that return nullopt.
  virtual std::optional<Vector> radial_center() const { return std::nullopt; }

  /// Default central-difference step  cbrt(eps) * max(1, |x|).
  static double fd_step(const VectorRef& x);
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Central-difference gradient of value() with step h.
Vector fd_gradient(const ScalarField& f, const VectorRef& x, double h);

/// Central-difference Hessian of value() with step h (second differences).
Matrix fd_hessian(const ScalarField& f, const VectorRef& x, double h);

/// Central-difference Hessian built from gradient() with step h; symmetrized.
Matrix fd_hessian_from_gradient(const ScalarField& f, const VectorRef& x, double h);

/// Third-derivative tensor T[k](i, j) = d_k H_ij from differences of hessian().
std::vector<Matrix> fd_third(const ScalarField& f, const VectorRef& x, double h);

/// Field assembled from callables. Missing derivatives use central differences.
class FunctionField final : public ScalarField {
 public:
  using ValueFn = std::function<double(const VectorRef&)>;
  using GradientFn = std::function<Vector(const VectorRef&)>;
  using HessianFn = std::function<Matrix(const VectorRef&)>;

  FunctionField(int n, ValueFn value, GradientFn gradient = {}, HessianFn hessian = {});

  int dimension() const override { return n_; }
  double value(const VectorRef& x) const override { return value_(x); }
  Vector gradient(const VectorRef& x) const override;
  Matrix hessian(const VectorRef& x) const override;
  bool has_analytic_gradient() const override { return static_cast<bool>(gradient_); }
  bool has_analytic_hessian() const override { return static_cast<bool>(hessian_); }

 private:
  int n_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

/// Value and first two radial derivatives of a profile at one radius.
template <typename Scalar>
struct RadialJet {
  Scalar f{};
  Scalar df{};
  Scalar d2f{};
};

/// Field u(x) = f(|x - center|) given by its radial jet.
///
/// Hessian = f'' e e^T + (f'/r)(I - e e^T), e = (x - center)/r. At r = 0 the
/// gradient is zero and the Hessian is f''(0) I.
class RadialProfileField : public ScalarField {
 public:
  using JetFn = std::function<RadialJet<double>(double)>;

  RadialProfileField(Vector center, JetFn jet, double gradient_scale = 1.0);

  int dimension() const override { return static_cast<int>(center_.size()); }
  double value(const VectorRef& x) const override;
  Vector gradient(const VectorRef& x) const override;
  Matrix hessian(const VectorRef& x) const override;
  bool has_analytic_gradient() const override { return true; }
  bool has_analytic_hessian() const override { return true; }
  double gradient_scale() const override { return gradient_scale_; }
  std::optional<Vector> radial_center() const override { return center_; }

  const Vector& center() const { return center_; }
  RadialJet<double> jet(double r) const { return jet_(r); }

 private:
  Vector center_;
  JetFn jet_;
  double gradient_scale_;
};

}  // namespace plap
