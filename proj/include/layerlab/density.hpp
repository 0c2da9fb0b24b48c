#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "layerlab/boundary_geometry.hpp"

namespace layerlab {

// A function on the boundary, evaluable at nodes and off-node points, with an
// optional tangential gradient.
class Density {
 public:
  using ValueFn = std::function<cplx(const BPoint&)>;
  using GradFn = std::function<CVec3(const BPoint&)>;

  Density() : Density(constant(0.0)) {}
  Density(ValueFn value, GradFn grad) : value_(std::move(value)), grad_(std::move(grad)) {}

  static Density constant(cplx c);
  static Density ambient(std::function<cplx(const Vec3&)> f, std::function<CVec3(const Vec3&)> grad);
  static Density parametric(std::function<cplx(double)> f, std::function<cplx(double)> df);
  // Curves: trigonometric interpolant. Surfaces: piecewise constant, no gradient.
  static Density nodal(const BoundarySurface& surface, std::vector<cplx> values);
  static Density normal(int l);

  cplx operator()(const BPoint& p) const { return value_(p); }
  bool has_gradient() const { return static_cast<bool>(grad_); }
  CVec3 tgrad(const BPoint& p) const;
  std::optional<cplx> constant_value() const { return constant_; }

  // Value-only densities built from the gradient.
  Density M(int l, int r) const;
  Density grad_component(int j) const;
  Density inverse() const;

  std::vector<cplx> sample(const BoundarySurface& surface) const;

  friend Density operator+(const Density& a, const Density& b);
  friend Density operator-(const Density& a, const Density& b);
  friend Density operator*(const Density& a, const Density& b);
  friend Density operator*(cplx c, const Density& a);

 private:
  ValueFn value_;
  GradFn grad_;
  std::optional<cplx> constant_;
};

// d/dt of a trigonometric interpolant given at equispaced nodes.
std::vector<cplx> spectral_derivative(const std::vector<cplx>& values);

// Tangential derivatives of nodal data on a curve.
std::vector<CVec3> tangential_gradient(const BoundarySurface& surface, const std::vector<cplx>& values);
std::vector<CVec3> tangential_gradient(const BoundarySurface& surface, const Density& f);
// M_lr f = nu_l (grad_T f)_r - nu_r (grad_T f)_l
std::vector<cplx> tangential_M(const BoundarySurface& surface, int l, int r, const std::vector<cplx>& values);
std::vector<cplx> tangential_M(const BoundarySurface& surface, int l, int r, const Density& f);

}  // namespace layerlab
