#include "layerlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "layerlab/errors.hpp"

namespace layerlab {

GaussRule gauss_legendre(int n) {
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = 0.5 * (1 - z);
    g.w[i] = 1.0 / ((1 - z * z) * dp * dp);
  }
  return g;
}

std::vector<TriPoint> triangle_rule(int n) {
  GaussRule g = gauss_legendre(n);
  std::vector<TriPoint> out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out.push_back({g.x[a], g.x[b] * (1 - g.x[a]), g.w[a] * g.w[b] * (1 - g.x[a])});
  return out;
}

std::vector<TriPoint> duffy_rule(int n, double s0, double w0) {
  GaussRule g = gauss_legendre(n);
  const double c[3][2] = {{0, 0}, {1, 0}, {0, 1}};
  std::vector<TriPoint> out;
  for (int e = 0; e < 3; ++e) {
    const double* q1 = c[e];
    const double* q2 = c[(e + 1) % 3];
    double d1s = q1[0] - s0, d1w = q1[1] - w0, d2s = q2[0] - q1[0], d2w = q2[1] - q1[1];
    double det = std::abs(d1s * d2w - d1w * d2s);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double u = g.x[a], v = g.x[b];
        out.push_back({s0 + u * (d1s + v * d2s), w0 + u * (d1w + v * d2w), g.w[a] * g.w[b] * u * det});
      }
  }
  return out;
}

cplx integrate_smooth(const BoundarySurface& surface, const std::vector<cplx>& values) {
  if (values.size() != surface.size())
    throw Error(ErrorCode::DegenerateNodeSet, "values do not match the node count");
  cplx s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      throw Error(ErrorCode::NonFiniteIntegrand, "non-finite sample at node " + std::to_string(i));
    s += surface.weight(i) * values[i];
  }
  return s;
}

KressRule::KressRule(int N) : n_(N), r_(N) {
  const int h = N / 2;
  for (int d = 0; d < N; ++d) {
    double t = 2 * kPi * d / N, s = 0;
    for (int m = 1; m < h; ++m) s += std::cos(m * t) / m;
    r_[d] = -4 * kPi / N * s - 4 * kPi / (static_cast<double>(N) * N) * std::cos(h * t);
  }
}

cplx integrate_weakly_singular_2d(const BoundarySurface& surface, const SplitKernel& kernel, int i,
                                  bool has_split) {
  if (surface.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "product rule needs a curve");
  if (!has_split) throw Error(ErrorCode::MissingSplit, "kernel has no logarithmic split");
  const int N = static_cast<int>(surface.size());
  const KressRule R(N);
  const BPoint& x = surface.node(i);
  const double h = surface.step();
  cplx sum = 0.0;
  for (int j = 0; j < N; ++j) {
    const BPoint& y = surface.node(j);
    cplx L, B;
    if (j == i) {
      auto f = [&](double e) {
        BPoint yy = surface.at_param(x.t + e);
        SplitValue v = kernel(x, yy);
        return Eigen::Vector2cd(v.log_coef, v.value - v.log_coef * log_sin2(e));
      };
      Eigen::Vector2cd lim = symmetric_limit(f, kDiagonalStep);
      L = lim[0];
      B = lim[1];
    } else {
      SplitValue v = kernel(x, y);
      L = v.log_coef;
      B = v.value - L * log_sin2(x.t - y.t);
    }
    sum += y.speed * (R(i, j) * L + h * B);
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
    throw Error(ErrorCode::NonFiniteIntegrand, "non-finite kernel sum at node " + std::to_string(i));
  return sum;
}

cplx integrate_truncated(const BoundarySurface& surface, const std::function<cplx(int, int)>& kernel, int i,
                         double r) {
  cplx s = 0.0;
  const Vec3& x = surface.node(i).x;
  for (std::size_t j = 0; j < surface.size(); ++j) {
    if (static_cast<int>(j) == i || (surface.node(j).x - x).norm() < r) continue;
    s += surface.weight(j) * kernel(i, static_cast<int>(j));
  }
  return s;
}

TruncatedSup truncated_sup(const BoundarySurface& surface, const std::function<cplx(int, int)>& kernel,
                           const std::vector<double>& radii, const std::vector<int>& targets) {
  const int N = static_cast<int>(surface.size());
  std::vector<int> xs = targets;
  if (xs.empty())
    for (int i = 0; i < N; ++i) xs.push_back(i);
  std::vector<double> grid = radii;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  TruncatedSup best;
  std::vector<std::pair<double, cplx>> terms;
  for (int i : xs) {
    terms.clear();
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      cplx v = surface.weight(j) * kernel(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorCode::NonFiniteIntegrand, "non-finite truncated kernel sample");
      terms.emplace_back((surface.node(j).x - surface.node(i).x).norm(), v);
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    cplx cum = 0.0;
    auto consider = [&](double r) {
      if (std::abs(cum) > best.value) best = {std::abs(cum), i, r};
    };
    if (grid.empty()) {
      for (std::size_t k = 0; k < terms.size(); ++k) {
        cum += terms[k].second;
        if (k + 1 == terms.size() || terms[k + 1].first < terms[k].first) consider(terms[k].first);
      }
    } else {
      std::size_t k = 0;
      for (double r : grid) {
        while (k < terms.size() && terms[k].first >= r) cum += terms[k++].second;
        consider(r);
      }
    }
  }
  return best;
}

cplx duffy_integrate_3d(const BoundarySurface& surface, const SingularKernel& kernel, int i, int order) {
  if (surface.dim() != 3) throw Error(ErrorCode::UnsupportedDimension, "Duffy rule needs a surface");
  if (!kernel.singularity_order)
    throw Error(ErrorCode::MissingSingularityDeclaration, "kernel singularity order not declared");
  const BPoint& x = surface.node(i);
  cplx s = 0.0;
  for (std::size_t j = 0; j < surface.size(); ++j)
    if (static_cast<int>(j) != i) s += surface.weight(j) * kernel.eval(x, surface.node(j));
  for (const auto& q : duffy_rule(order, 1.0 / 3, 1.0 / 3))
    s += q.weight * surface.area_density(i, q.s, q.w) * kernel.eval(x, surface.at_triangle(i, q.s, q.w));
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
    throw Error(ErrorCode::NonFiniteIntegrand, "non-finite kernel sum at node " + std::to_string(i));
  return s;
}

}  // namespace layerlab
