#include "layerlab/fundamental_solution.hpp"

#include <cmath>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

constexpr cplx I(0.0, 1.0);

cplx cexpm1(cplx w) {
  double x = w.real(), y = w.imag();
  double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// J1(x)/x and J2(x)/x^2 (or the I-function versions when modified is set).
double j1_over_x(double x, bool modified) {
  if (x < 1e-4) return modified ? 0.5 + x * x / 16.0 : 0.5 - x * x / 16.0;
  return (modified ? std::cyl_bessel_i(1.0, x) : std::cyl_bessel_j(1.0, x)) / x;
}

double j2_over_x2(double x, bool modified) {
  if (x < 1e-3) return modified ? 0.125 + x * x / 96.0 : 0.125 - x * x / 96.0;
  return (modified ? std::cyl_bessel_i(2.0, x) : std::cyl_bessel_j(2.0, x)) / (x * x);
}

}  // namespace

FundamentalSolution::FundamentalSolution(const CoefficientVector& c) : coeffs_(c), red_(reduce(c)) {
  for (int k = 0; k < red_.n; ++k) identity_n_(k, k) = 1.0;
  double scale = std::max({1.0, std::abs(c.a0), red_.b.squaredNorm()});
  cplx lam = red_.lambda;
  if (std::abs(lam.imag()) <= 1e-13 * scale) lam = cplx(lam.real(), 0.0);
  if (std::abs(lam) <= 1e-13 * scale) lam = 0.0;
  red_.lambda = lam;
  if (lam == 0.0) {
    family_ = RadialFamily::Laplace;
  } else if (red_.n == 2) {
    if (lam.imag() != 0.0)
      throw Error(ErrorCode::UnsupportedFamily, "planar operators need a real reduced constant");
    if (lam.real() > 0) {
      family_ = RadialFamily::Helmholtz;
      k_ = std::sqrt(lam.real());
    } else {
      family_ = RadialFamily::ModifiedHelmholtz;
      k_ = std::sqrt(-lam.real());
    }
  } else {
    family_ = (lam.imag() == 0.0 && lam.real() < 0) ? RadialFamily::ModifiedHelmholtz
                                                      : RadialFamily::Helmholtz;
    k_ = std::sqrt(lam);
  }
}

FundamentalSolution::Radial FundamentalSolution::radial(double rho) const {
  Radial r;
  if (red_.n == 3) {
    if (family_ == RadialFamily::Laplace) {
      r.phi = -1.0 / (4 * kPi * rho);
      r.dphi = 1.0 / (4 * kPi * rho * rho);
      r.d2phi = -1.0 / (2 * kPi * rho * rho * rho);
      return r;
    }
    cplx ik = I * k_;
    cplx e = std::exp(ik * rho);
    r.phi = -e / (4 * kPi * rho);
    r.dphi = -e * (ik * rho - 1.0) / (4 * kPi * rho * rho);
    r.d2phi = -e * (ik * ik * rho * rho - 2.0 * ik * rho + 2.0) / (4 * kPi * rho * rho * rho);
    return r;
  }
  switch (family_) {
    case RadialFamily::Laplace:
      r.phi = std::log(rho) / (2 * kPi);
      r.dphi = 1.0 / (2 * kPi * rho);
      r.d2phi = -1.0 / (2 * kPi * rho * rho);
      break;
    case RadialFamily::Helmholtz: {
      double k = k_.real(), x = k * rho;
      double j0 = std::cyl_bessel_j(0.0, x), j1 = std::cyl_bessel_j(1.0, x);
      double y0 = std::cyl_neumann(0.0, x), y1 = std::cyl_neumann(1.0, x);
      cplx h0(j0, y0), h1(j1, y1);
      r.phi = -0.25 * I * h0;
      r.dphi = 0.25 * I * k * h1;
      r.d2phi = 0.25 * I * k * k * (h0 - h1 / x);
      break;
    }
    case RadialFamily::ModifiedHelmholtz: {
      double m = k_.real(), x = m * rho;
      double k0 = std::cyl_bessel_k(0.0, x), k1 = std::cyl_bessel_k(1.0, x);
      r.phi = -k0 / (2 * kPi);
      r.dphi = m * k1 / (2 * kPi);
      r.d2phi = -m * m * (k0 + k1 / x) / (2 * kPi);
      break;
    }
  }
  return r;
}

FundamentalSolution::LogRadial FundamentalSolution::log_radial(double rho) const {
  LogRadial r{0.0, 0.0, 0.0};
  if (red_.n == 3) return r;
  switch (family_) {
    case RadialFamily::Laplace:
      r.l = 1.0 / (2 * kPi);
      break;
    case RadialFamily::Helmholtz: {
      double k = k_.real(), x = k * rho, lam = k * k;
      r.l = std::cyl_bessel_j(0.0, x) / (2 * kPi);
      r.dl = -lam / (4 * kPi) * j1_over_x(x, false);
      r.d2l = lam * lam / (8 * kPi) * j2_over_x2(x, false);
      break;
    }
    case RadialFamily::ModifiedHelmholtz: {
      double m = k_.real(), x = m * rho, mu2 = m * m;
      r.l = std::cyl_bessel_i(0.0, x) / (2 * kPi);
      r.dl = mu2 / (4 * kPi) * j1_over_x(x, true);
      r.d2l = mu2 * mu2 / (8 * kPi) * j2_over_x2(x, true);
      break;
    }
  }
  return r;
}

Vec3 FundamentalSolution::pulled_back(const Vec3& x) const {
  Vec3 y = red_.Tinv * x;
  if (red_.n == 2) y[2] = 0.0;
  if (!(y.norm() >= 1e-300)) throw Error(ErrorCode::EvalAtOrigin, "fundamental solution evaluated at the pole");
  return y;
}

FsValues FundamentalSolution::eval(const Vec3& x, bool with_hessian) const {
  Vec3 y = pulled_back(x);
  double rho = y.norm();
  Vec3 yh = y / rho;
  const CVec3& b = red_.b;
  cplx by = b[0] * y[0] + b[1] * y[1] + b[2] * y[2];
  cplx E = std::exp(-0.5 * by) / red_.det_T;
  Radial r = radial(rho);
  CVec3 yhc = yh.cast<cplx>();
  CMat3 TinvT = red_.Tinv.transpose().cast<cplx>();

  FsValues out;
  out.S = E * r.phi;
  CVec3 gy = E * (r.dphi * yhc - 0.5 * r.phi * b);
  out.grad = TinvT * gy;
  if (with_hessian) {
    CVec3 dp = r.dphi * yhc;
    CMat3 P = yhc * yhc.transpose();
    CMat3 H = r.d2phi * P + (r.dphi / rho) * (identity_n_.cast<cplx>() - P) -
              0.5 * (b * dp.transpose() + dp * b.transpose()) + 0.25 * r.phi * (b * b.transpose());
    out.hess = TinvT * (E * H) * red_.Tinv.cast<cplx>();
    // the triple product is symmetric only up to rounding
    out.hess = (0.5 * (out.hess + out.hess.transpose())).eval();
  }
  if (red_.n == 2) {
    LogRadial lr = log_radial(rho);
    // coefficient of ln(rho) is E*l(rho^2); ln|x|^2 carries half of it
    CVec3 yc = y.cast<cplx>();
    cplx c = E * lr.l;
    CVec3 gl = E * (2.0 * lr.dl * yc - 0.5 * lr.l * b);
    out.log_S = 0.5 * c;
    out.log_grad = 0.5 * (TinvT * gl);
    if (with_hessian) {
      CVec3 q = 2.0 * lr.dl * yc;
      CMat3 H = 0.25 * lr.l * (b * b.transpose()) - 0.5 * (b * q.transpose() + q * b.transpose()) +
                2.0 * lr.dl * identity_n_.cast<cplx>() + 4.0 * lr.d2l * (yc * yc.transpose());
      out.log_hess = 0.5 * (TinvT * (E * H) * red_.Tinv.cast<cplx>());
      out.log_hess = (0.5 * (out.log_hess + out.log_hess.transpose())).eval();
    }
  }
  return out;
}

cplx FundamentalSolution::S(const Vec3& x) const {
  Vec3 y = pulled_back(x);
  double rho = y.norm();
  const CVec3& b = red_.b;
  cplx by = b[0] * y[0] + b[1] * y[1] + b[2] * y[2];
  return std::exp(-0.5 * by) * radial(rho).phi / red_.det_T;
}

CVec3 FundamentalSolution::grad(const Vec3& x) const { return eval(x, false).grad; }
CMat3 FundamentalSolution::hess(const Vec3& x) const { return eval(x, true).hess; }

double FundamentalSolution::principal(const Vec3& x) const {
  double rho = pulled_back(x).norm();
  double s = red_.n == 2 ? std::log(rho) / (2 * kPi) : -1.0 / (4 * kPi * rho);
  return s / red_.det_T;
}

cplx FundamentalSolution::remainder(const Vec3& x) const {
  Vec3 y = pulled_back(x);
  double rho = y.norm();
  const CVec3& b = red_.b;
  cplx w = -0.5 * (b[0] * y[0] + b[1] * y[1] + b[2] * y[2]);
  double phi0 = red_.n == 2 ? std::log(rho) / (2 * kPi) : -1.0 / (4 * kPi * rho);
  cplx diff;
  if (red_.n == 3) {
    // E e^{ik rho} - 1 in one cancellation-free step
    diff = -cexpm1(w + I * k_ * rho) / (4 * kPi * rho);
  } else {
    cplx phi = radial(rho).phi;
    diff = std::exp(w) * (phi - phi0) + cexpm1(w) * phi0;
  }
  return diff / red_.det_T;
}

cplx FundamentalSolution::pde_residual(const Vec3& x) const {
  FsValues v = eval(x, true);
  return apply_operator(coeffs_, v.S, v.grad, v.hess);
}

}  // namespace layerlab
