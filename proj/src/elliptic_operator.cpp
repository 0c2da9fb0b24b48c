#include "layerlab/elliptic_operator.hpp"

#include <cmath>

#include <json.hpp>

#include "layerlab/errors.hpp"

namespace layerlab {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRealPrincipalPart: return "NonRealPrincipalPart";
    case ErrorCode::BadMultiIndex: return "BadMultiIndex";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::EvalAtOrigin: return "EvalAtOrigin";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::BadShapeParams: return "BadShapeParams";
    case ErrorCode::NeedsAmbientForm: return "NeedsAmbientForm";
    case ErrorCode::DegenerateNodeSet: return "DegenerateNodeSet";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::MissingSplit: return "MissingSplit";
    case ErrorCode::MissingSingularityDeclaration: return "MissingSingularityDeclaration";
    case ErrorCode::NonFiniteKernelValue: return "NonFiniteKernelValue";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::RoughDensityUnsupported: return "RoughDensityUnsupported";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

CoefficientVector build_coefficients(int n, const std::map<MultiIndex, cplx>& coeffs) {
  if (n != 2 && n != 3) throw Error(ErrorCode::UnsupportedDimension, "n must be 2 or 3");
  CoefficientVector c;
  c.n = n;
  c.a2 = Mat3::Identity();
  c.a2.topLeftCorner(n, n).setZero();
  for (const auto& [gamma, value] : coeffs) {
    if (static_cast<int>(gamma.size()) != n)
      throw Error(ErrorCode::BadMultiIndex, "multi-index length differs from n");
    int order = 0;
    for (int g : gamma) {
      if (g < 0) throw Error(ErrorCode::BadMultiIndex, "negative multi-index entry");
      order += g;
    }
    if (order > 2) throw Error(ErrorCode::BadMultiIndex, "order exceeds 2");
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw Error(ErrorCode::BadMultiIndex, "non-finite coefficient");
    if (order == 2) {
      if (value.imag() != 0.0)
        throw Error(ErrorCode::NonRealPrincipalPart, "second-order coefficient has nonzero imaginary part");
      int l = -1, j = -1;
      for (int k = 0; k < n; ++k) {
        if (gamma[k] == 2) l = j = k;
        if (gamma[k] == 1) (l < 0 ? l : j) = k;
      }
      if (l == j) {
        c.a2(l, l) = value.real();
      } else {
        c.a2(l, j) = 0.5 * value.real();
        c.a2(j, l) = 0.5 * value.real();
      }
    } else if (order == 1) {
      for (int k = 0; k < n; ++k)
        if (gamma[k] == 1) c.a1[k] = value;
    } else {
      c.a0 = value;
    }
  }
  return c;
}

std::map<MultiIndex, cplx> CoefficientVector::to_multi_index() const {
  std::map<MultiIndex, cplx> out;
  for (int l = 0; l < n; ++l) {
    for (int j = l; j < n; ++j) {
      MultiIndex g(n, 0);
      g[l] += 1;
      g[j] += 1;
      double v = (l == j) ? a2(l, l) : 2.0 * a2(l, j);
      if (v != 0.0) out[g] = v;
    }
  }
  for (int k = 0; k < n; ++k) {
    if (a1[k] != 0.0) {
      MultiIndex g(n, 0);
      g[k] = 1;
      out[g] = a1[k];
    }
  }
  if (a0 != 0.0) out[MultiIndex(n, 0)] = a0;
  return out;
}

CoefficientVector coefficients_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("operator json: ") + e.what());
  }
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw Error(ErrorCode::InvalidConfig, "operator json needs integer n");
  int n = j["n"].get<int>();
  if (j.contains("preset")) {
    std::string p = j["preset"].get<std::string>();
    if (p == "laplace") return presets::laplace(n);
    if (p == "helmholtz") return presets::helmholtz(n, j.value("kappa", 1.0));
    if (p == "modified_helmholtz") return presets::modified_helmholtz(n, j.value("m", 1.0));
    if (p == "drift") {
      Vec3 b = Vec3::Zero();
      auto bj = j.at("b");
      for (size_t k = 0; k < bj.size() && k < 3; ++k) b[k] = bj[k].get<double>();
      return presets::drift(n, b, cplx(j.value("a_re", 0.0), j.value("a_im", 0.0)));
    }
    throw Error(ErrorCode::InvalidConfig, "unknown operator preset " + p);
  }
  std::map<MultiIndex, cplx> coeffs;
  if (!j.contains("coeffs") || !j["coeffs"].is_array())
    throw Error(ErrorCode::InvalidConfig, "operator json needs coeffs array or preset");
  for (const auto& e : j["coeffs"]) {
    MultiIndex g = e.at("gamma").get<MultiIndex>();
    cplx v(e.value("re", 0.0), e.value("im", 0.0));
    if (coeffs.count(g)) throw Error(ErrorCode::BadMultiIndex, "duplicate multi-index");
    coeffs[g] = v;
  }
  return build_coefficients(n, coeffs);
}

std::string coefficients_to_json(const CoefficientVector& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [g, v] : c.to_multi_index())
    j["coeffs"].push_back({{"gamma", g}, {"re", v.real()}, {"im", v.imag()}});
  return j.dump();
}

double check_ellipticity(const CoefficientVector& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.principal(), Eigen::EigenvaluesOnly);
  double m = es.eigenvalues().minCoeff();
  if (!(m > 1e-12)) throw Error(ErrorCode::NotElliptic, "principal part is not positive definite");
  return m;
}

ReducedOperator reduce(const CoefficientVector& c) {
  check_ellipticity(c);
  ReducedOperator r;
  r.n = c.n;
  Eigen::LLT<Mat3> llt(c.a2);
  r.T = llt.matrixL();
  r.Tinv = r.T.triangularView<Eigen::Lower>().solve(Mat3::Identity());
  r.b = r.Tinv.cast<cplx>() * c.a1;
  cplx bb = 0.0;
  for (int k = 0; k < 3; ++k) bb += r.b[k] * r.b[k];
  r.lambda = c.a0 - 0.25 * bb;
  r.det_T = r.T.diagonal().prod();
  r.det_a2 = r.det_T * r.det_T;
  return r;
}

cplx apply_operator(const CoefficientVector& c, cplx u, const CVec3& grad, const CMat3& hess) {
  cplx s = c.a0 * u;
  for (int l = 0; l < c.n; ++l) {
    s += c.a1[l] * grad[l];
    for (int j = 0; j < c.n; ++j) s += c.a2(l, j) * hess(l, j);
  }
  return s;
}

namespace presets {

CoefficientVector laplace(int n) {
  std::map<MultiIndex, cplx> m;
  for (int k = 0; k < n; ++k) {
    MultiIndex g(n, 0);
    g[k] = 2;
    m[g] = 1.0;
  }
  return build_coefficients(n, m);
}

CoefficientVector helmholtz(int n, double kappa) {
  CoefficientVector c = laplace(n);
  c.a0 = kappa * kappa;
  return c;
}

CoefficientVector modified_helmholtz(int n, double m) {
  CoefficientVector c = laplace(n);
  c.a0 = -m * m;
  return c;
}

CoefficientVector drift(int n, const Vec3& b, cplx a) {
  CoefficientVector c = laplace(n);
  for (int k = 0; k < n; ++k) c.a1[k] = b[k];
  c.a0 = a;
  return c;
}

}  // namespace presets

}  // namespace layerlab
