#pragma once

#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

#include "layerlab/boundary_geometry.hpp"

namespace layerlab {

struct GaussRule {
  std::vector<double> x, w;  // on [0, 1]
};
GaussRule gauss_legendre(int n);

struct TriPoint {
  double s, w, weight;  // reference triangle {s, w >= 0, s + w <= 1}, weights sum to 1/2
};
std::vector<TriPoint> triangle_rule(int n);
// Three collapsed sub-triangles around (s0, w0); the Duffy Jacobian removes a 1/r singularity there.
std::vector<TriPoint> duffy_rule(int n, double s0, double w0);

cplx integrate_smooth(const BoundarySurface& surface, const std::vector<cplx>& values);

// Weights R_j for ln(4 sin^2((t_i - t)/2)) on N equispaced nodes, indexed by (i - j) mod N.
class KressRule {
 public:
  explicit KressRule(int N);
  double operator()(int i, int j) const { return r_[((i - j) % n_ + n_) % n_]; }
  int size() const { return n_; }

 private:
  int n_;
  std::vector<double> r_;
};

inline double log_sin2(double d) {
  double s = std::sin(0.5 * d);
  return std::log(4 * s * s);
}

// Kernel sample split as value = log_coef * ln|x - y|^2 + smooth. Kernels
// without a split leave log_coef empty.
struct SplitValue {
  cplx value = 0.0;
  cplx log_coef = 0.0;
};
using SplitKernel = std::function<SplitValue(const BPoint& x, const BPoint& y)>;

// Extrapolation in d^2 to d = 0 from samples at +-eps, +-2 eps, +-3 eps: the
// odd terms cancel in each pair and the error is O(eps^6).
struct DiagonalTap {
  double offset, weight;  // offset in units of eps
};
inline constexpr DiagonalTap kDiagonalTaps[6] = {{1, 0.75}, {-1, 0.75}, {2, -0.3}, {-2, -0.3}, {3, 0.05}, {-3, 0.05}};
inline constexpr double kDiagonalStep = 2e-3;

template <class F>
auto symmetric_limit(F&& f, double eps) {
  using T = std::decay_t<decltype(f(eps))>;
  T acc = kDiagonalTaps[0].weight * f(kDiagonalTaps[0].offset * eps);
  for (int k = 1; k < 6; ++k) acc += kDiagonalTaps[k].weight * f(kDiagonalTaps[k].offset * eps);
  return acc;
}

// Product-quadrature value of int K(x_i, y) dsigma_y on a curve. The kernel
// carries the density. The diagonal is filled by a symmetric parameter limit.
cplx integrate_weakly_singular_2d(const BoundarySurface& surface, const SplitKernel& kernel, int i,
                                  bool has_split);

// int_{boundary \ B(x_i, r)} K(x_i, y) dsigma_y with the node rule.
cplx integrate_truncated(const BoundarySurface& surface, const std::function<cplx(int, int)>& kernel, int i,
                         double r);

struct TruncatedSup {
  double value = 0.0;
  int at = -1;
  double radius = 0.0;
};

// sup over targets and radii of |integrate_truncated|; an empty radii grid
// takes every node distance as a cut, an empty target list means all nodes.
TruncatedSup truncated_sup(const BoundarySurface& surface, const std::function<cplx(int, int)>& kernel,
                           const std::vector<double>& radii = {}, const std::vector<int>& targets = {});

struct SingularKernel {
  std::function<cplx(const BPoint& x, const BPoint& y)> eval;
  std::optional<double> singularity_order;  // K = O(|x - y|^{-order}), order < 2
};

inline constexpr int kDuffyOrder = 3;

// Surfaces: node rule off the self triangle, Duffy rule on it.
cplx duffy_integrate_3d(const BoundarySurface& surface, const SingularKernel& kernel, int i,
                        int order = kDuffyOrder);

}  // namespace layerlab
