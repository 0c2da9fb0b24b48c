#pragma once

#include "layerlab/elliptic_operator.hpp"

namespace layerlab {

enum class RadialFamily { Laplace, Helmholtz, ModifiedHelmholtz };

// Value, gradient and Hessian of S at one point, together with the
// coefficients of ln|x|^2 in each (planar case; zero in 3D).
struct FsValues {
  cplx S = 0.0;
  CVec3 grad = CVec3::Zero();
  CMat3 hess = CMat3::Zero();
  cplx log_S = 0.0;
  CVec3 log_grad = CVec3::Zero();
  CMat3 log_hess = CMat3::Zero();
};

class FundamentalSolution {
 public:
  explicit FundamentalSolution(const CoefficientVector& c);

  int dim() const { return red_.n; }
  RadialFamily family() const { return family_; }
  const CoefficientVector& coefficients() const { return coeffs_; }
  const ReducedOperator& reduced() const { return red_; }

  cplx S(const Vec3& x) const;
  CVec3 grad(const Vec3& x) const;
  CMat3 hess(const Vec3& x) const;
  FsValues eval(const Vec3& x, bool with_hessian) const;

  // Homogeneous part S_n(T^{-1} x)/sqrt(det a2) and the remainder S - principal.
  double principal(const Vec3& x) const;
  cplx remainder(const Vec3& x) const;

  cplx pde_residual(const Vec3& x) const;

 private:
  struct Radial {
    cplx phi, dphi, d2phi;
  };
  struct LogRadial {
    cplx l, dl, d2l;  // derivatives with respect to s = rho^2
  };
  Radial radial(double rho) const;
  LogRadial log_radial(double rho) const;
  Vec3 pulled_back(const Vec3& x) const;

  CoefficientVector coeffs_;
  ReducedOperator red_;
  RadialFamily family_ = RadialFamily::Laplace;
  cplx k_ = 0.0;  // principal sqrt(lambda), or sqrt(-lambda) for the modified family
  Mat3 identity_n_ = Mat3::Zero();
};

}  // namespace layerlab
