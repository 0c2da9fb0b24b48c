#pragma once

#include <functional>
#include <vector>

#include "layerlab/density.hpp"
#include "layerlab/fundamental_solution.hpp"
#include "layerlab/quadrature.hpp"

namespace layerlab {

enum class LayerKind { Single, Double, ConormalAdjoint };

struct LayerOptions {
  std::size_t cache_limit = 512;  // cache node-pair values for curves up to this size
  int duffy_order = kDuffyOrder;
};

class LayerContext {
 public:
  // Kernel at target x and source y; f holds S(x - y) and its derivatives.
  using Kernel = std::function<SplitValue(const BPoint& x, const BPoint& y, const FsValues& f)>;

  LayerContext(const CoefficientVector& coeffs, const BoundarySurface& surface, LayerOptions opts = {});

  int dim() const { return surface_.dim(); }
  const BoundarySurface& surface() const { return surface_; }
  const FundamentalSolution& fs() const { return fs_; }
  const CoefficientVector& coefficients() const { return fs_.coefficients(); }

  std::vector<cplx> V(const Density& mu) const;
  std::vector<cplx> W(const Density& mu) const;
  std::vector<cplx> Wstar(const Density& mu) const;
  std::vector<cplx> Q(int j, const Density& g, const Density& mu) const;
  std::vector<cplx> R(const Density& g, const Density& h, const Density& mu) const;
  std::vector<cplx> T(int l, int j, const Density& mu) const;

  std::vector<cplx> apply(LayerKind kind, const Density& mu) const;
  // Dense matrix of V, W or W_* acting on nodal values.
  Eigen::MatrixXcd assemble(LayerKind kind) const;

  // Applies an arbitrary kernel with the boundary rule of this context.
  std::vector<cplx> integrate(const Kernel& kernel, bool needs_hessian = false, double singularity = 1.0) const;

  // Density-free kernels of the three layer operators.
  SplitValue kernel(LayerKind kind, const BPoint& x, const BPoint& y, const FsValues& f) const;

  Density normal_dot_a1() const;  // nu . a^1
  Density conormal_weight() const;  // nu^t a^2 nu

 private:
  FsValues pair_values(int i, int j, bool needs_hessian) const;

  BoundarySurface surface_;
  FundamentalSolution fs_;
  LayerOptions opts_;
  struct PairCache {
    cplx S, log_S;
    cplx g[2], lg[2];
  };
  std::vector<PairCache> cache_;
};

// Residuals of the operator identities, as max-norms over the nodes.
double residual_slay2(const LayerContext& ctx, const Density& mu, int j, int l);
double residual_wregn(const LayerContext& ctx, const Density& mu, int l, int j);
double residual_wstar(const LayerContext& ctx, const Density& mu);
double residual_gradQ(const LayerContext& ctx, const Density& g, const Density& mu, int j, int h);
double residual_pljr(const LayerContext& ctx, const Density& g, const Density& mu, int l, int j, int r);

// sup over nodes x and radii r of |int_{boundary \ B(x, r)} (x_z - y_z) d_h d_j S(x - y) dsigma_y|
TruncatedSup gauss_truncated_sup(const LayerContext& ctx, int z, int h, int j, const std::vector<double>& radii = {});

// Right-hand side of the recursion for M_lj Q_r[g, mu] (nodal values).
std::vector<cplx> P_ljr(const LayerContext& ctx, const Density& g, const Density& mu, int l, int j, int r);

}  // namespace layerlab
