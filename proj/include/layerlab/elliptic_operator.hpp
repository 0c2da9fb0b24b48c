#pragma once

#include <map>
#include <string>
#include <vector>

#include "layerlab/types.hpp"

namespace layerlab {

using MultiIndex = std::vector<int>;

// Coefficients of P = sum_{|gamma|<=2} a_gamma D^gamma in block form.
// Unused rows/columns (n = 2) are padded with the identity and zeros.
struct CoefficientVector {
  int n = 0;
  Mat3 a2 = Mat3::Identity();  // a_lj, symmetric, real
  CVec3 a1 = CVec3::Zero();    // a_j
  cplx a0 = 0.0;               // a

  Eigen::MatrixXd principal() const { return a2.topLeftCorner(n, n); }
  std::map<MultiIndex, cplx> to_multi_index() const;
};

CoefficientVector build_coefficients(int n, const std::map<MultiIndex, cplx>& coeffs);
CoefficientVector coefficients_from_json(const std::string& json_text);
std::string coefficients_to_json(const CoefficientVector& c);

// Smallest eigenvalue of the principal block; throws NotElliptic when <= 1e-12.
double check_ellipticity(const CoefficientVector& c);

struct ReducedOperator {
  int n = 0;
  Mat3 T = Mat3::Identity();     // lower Cholesky factor, a2 = T T^t
  Mat3 Tinv = Mat3::Identity();
  CVec3 b = CVec3::Zero();       // T^{-1} a1
  cplx lambda = 0.0;             // a - b.b/4 (bilinear square)
  double det_a2 = 1.0;
  double det_T = 1.0;
};

ReducedOperator reduce(const CoefficientVector& c);

// Applies P to a function given by value, gradient and Hessian at a point.
cplx apply_operator(const CoefficientVector& c, cplx u, const CVec3& grad, const CMat3& hess);

namespace presets {
CoefficientVector laplace(int n);
// Delta + kappa^2
CoefficientVector helmholtz(int n, double kappa);
// Delta - m^2
CoefficientVector modified_helmholtz(int n, double m);
// Delta + drift . grad + a
CoefficientVector drift(int n, const Vec3& drift, cplx a);
}  // namespace presets

}  // namespace layerlab
