#include "layerlab/layer_potentials.hpp"

#include <cmath>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<cplx>& axpy(std::vector<cplx>& acc, cplx c, const std::vector<cplx>& v) {
  if (acc.empty()) acc.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += c * v[i];
  return acc;
}

// Pointwise product of nodal values with a density sampled at the nodes.
std::vector<cplx> times(const BoundarySurface& s, const Density& f, const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f(s.node(i)) * v[i];
  return out;
}

void require_curve(const LayerContext& ctx, const char* what) {
  if (ctx.dim() != 2)
    throw Error(ErrorCode::UnsupportedDimension,
                std::string(what) + " needs tangential derivatives of nodal data, available on curves only");
}

// Trigonometric Lagrange basis function of node j evaluated at t.
double lagrange(int N, int j, double t) {
  double d = t - 2 * kPi * j / N, s = 1;
  for (int k = 1; k < N / 2; ++k) s += 2 * std::cos(k * d);
  return (s + std::cos(N / 2 * d)) / N;
}

}  // namespace

LayerContext::LayerContext(const CoefficientVector& coeffs, const BoundarySurface& surface, LayerOptions opts)
    : surface_(surface), fs_(coeffs), opts_(opts) {
  if (coeffs.n != surface.dim())
    throw Error(ErrorCode::UnsupportedDimension, "operator and boundary dimensions differ");
  const std::size_t N = surface_.size();
  if (dim() == 2 && N <= opts_.cache_limit) {
    cache_.resize(N * N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        if (i == j) continue;
        FsValues f = fs_.eval(surface_.node(i).x - surface_.node(j).x, false);
        cache_[i * N + j] = {f.S, f.log_S, {f.grad[0], f.grad[1]}, {f.log_grad[0], f.log_grad[1]}};
      }
  }
}

FsValues LayerContext::pair_values(int i, int j, bool needs_hessian) const {
  if (!cache_.empty() && !needs_hessian) {
    const PairCache& c = cache_[static_cast<std::size_t>(i) * surface_.size() + j];
    FsValues f;
    f.S = c.S;
    f.log_S = c.log_S;
    f.grad = CVec3(c.g[0], c.g[1], 0.0);
    f.log_grad = CVec3(c.lg[0], c.lg[1], 0.0);
    return f;
  }
  return fs_.eval(surface_.node(i).x - surface_.node(j).x, needs_hessian);
}

std::vector<cplx> LayerContext::integrate(const Kernel& kernel, bool needs_hessian, double singularity) const {
  const int N = static_cast<int>(surface_.size());
  std::vector<cplx> out(N);
  if (dim() == 3) {
    for (int i = 0; i < N; ++i) {
      SingularKernel k{[&](const BPoint& x, const BPoint& y) {
                         return kernel(x, y, fs_.eval(x.x - y.x, needs_hessian)).value;
                       },
                       singularity};
      out[i] = duffy_integrate_3d(surface_, k, i, opts_.duffy_order);
    }
    return out;
  }
  const KressRule R(N);
  const double h = surface_.step();
  for (int i = 0; i < N; ++i) {
    const BPoint& x = surface_.node(i);
    cplx sum = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      const BPoint& y = surface_.node(j);
      SplitValue v = kernel(x, y, pair_values(i, j, needs_hessian));
      sum += y.speed * (R(i, j) * v.log_coef + h * (v.value - v.log_coef * log_sin2(x.t - y.t)));
    }
    auto f = [&](double e) {
      BPoint y = surface_.at_param(x.t + e);
      SplitValue v = kernel(x, y, fs_.eval(x.x - y.x, needs_hessian));
      return Eigen::Vector2cd(v.log_coef, v.value - v.log_coef * log_sin2(e));
    };
    Eigen::Vector2cd lim = symmetric_limit(f, kDiagonalStep);
    sum += x.speed * (R(i, i) * lim[0] + h * lim[1]);
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
      throw Error(ErrorCode::NonFiniteIntegrand, "non-finite kernel sum at node " + std::to_string(i));
    out[i] = sum;
  }
  return out;
}

SplitValue LayerContext::kernel(LayerKind kind, const BPoint& x, const BPoint& y, const FsValues& f) const {
  const CoefficientVector& c = coefficients();
  switch (kind) {
    case LayerKind::Single:
      return {f.S, f.log_S};
    case LayerKind::Double: {
      CVec3 cn = (c.a2 * y.nu).cast<cplx>();
      cplx q = (c.a1.transpose() * y.nu.cast<cplx>())(0);
      if (dim() == 2) cn[2] = 0.0;
      return {-(cn.dot(f.grad) + q * f.S), -(cn.dot(f.log_grad) + q * f.log_S)};
    }
    case LayerKind::ConormalAdjoint: {
      CVec3 cn = (c.a2 * x.nu).cast<cplx>();
      if (dim() == 2) cn[2] = 0.0;
      return {cn.dot(f.grad), cn.dot(f.log_grad)};
    }
  }
  return {};
}

std::vector<cplx> LayerContext::apply(LayerKind kind, const Density& mu) const {
  if (auto c = mu.constant_value(); c && *c == 0.0) return std::vector<cplx>(surface_.size(), 0.0);
  return integrate([&](const BPoint& x, const BPoint& y, const FsValues& f) {
    SplitValue v = kernel(kind, x, y, f);
    cplx m = mu(y);
    return SplitValue{v.value * m, v.log_coef * m};
  });
}

std::vector<cplx> LayerContext::V(const Density& mu) const { return apply(LayerKind::Single, mu); }
std::vector<cplx> LayerContext::W(const Density& mu) const { return apply(LayerKind::Double, mu); }
std::vector<cplx> LayerContext::Wstar(const Density& mu) const { return apply(LayerKind::ConormalAdjoint, mu); }

std::vector<cplx> LayerContext::Q(int j, const Density& g, const Density& mu) const {
  if (auto c = mu.constant_value(); c && *c == 0.0) return std::vector<cplx>(surface_.size(), 0.0);
  return integrate(
      [&](const BPoint& x, const BPoint& y, const FsValues& f) {
        cplx d = (g(x) - g(y)) * mu(y);
        return SplitValue{d * f.grad[j], d * f.log_grad[j]};
      },
      false, 0.0);
}

std::vector<cplx> LayerContext::R(const Density& g, const Density& h, const Density& mu) const {
  const CoefficientVector& c = coefficients();
  const std::size_t N = surface_.size();
  std::vector<cplx> out(N, 0.0);
  std::vector<cplx> gn = g.sample(surface_), hn = h.sample(surface_);
  for (int r = 0; r < dim(); ++r) {
    if (c.a1[r] == 0.0) continue;
    std::vector<cplx> q1 = Q(r, g * h, mu), q2 = Q(r, h, mu), q3 = Q(r, h, g * mu);
    for (std::size_t i = 0; i < N; ++i) out[i] += c.a1[r] * (q1[i] - gn[i] * q2[i] - q3[i]);
  }
  if (c.a0 != 0.0) {
    std::vector<cplx> v1 = V(h * mu), v2 = V(g * mu);
    for (std::size_t i = 0; i < N; ++i) out[i] += c.a0 * (gn[i] * v1[i] - hn[i] * v2[i]);
  }
  return out;
}

Density LayerContext::normal_dot_a1() const {
  Density d = Density::constant(0.0);
  for (int s = 0; s < dim(); ++s)
    if (coefficients().a1[s] != 0.0) d = d + coefficients().a1[s] * Density::normal(s);
  return d;
}

Density LayerContext::conormal_weight() const {
  Density d = Density::constant(0.0);
  for (int s = 0; s < dim(); ++s)
    for (int h = 0; h < dim(); ++h)
      if (coefficients().a2(s, h) != 0.0)
        d = d + cplx(coefficients().a2(s, h)) * (Density::normal(s) * Density::normal(h));
  return d;
}

std::vector<cplx> LayerContext::T(int l, int j, const Density& mu) const {
  const CoefficientVector& c = coefficients();
  const Density nl = Density::normal(l), nj = Density::normal(j), na = normal_dot_a1();
  const bool constant_mu = mu.constant_value().has_value();
  std::vector<cplx> out(surface_.size(), 0.0);
  if (!constant_mu) {
    axpy(out, 1.0, W(mu.M(l, j)));
    for (int b = 0; b < dim(); ++b)
      for (int r = 0; r < dim(); ++r) {
        if (c.a2(b, r) == 0.0) continue;
        axpy(out, c.a2(b, r), Q(b, nl, mu.M(j, r)));
        axpy(out, -c.a2(b, r), Q(b, nj, mu.M(l, r)));
      }
  }
  if (c.a1 != CVec3::Zero()) {
    axpy(out, 1.0, times(surface_, nl, Q(j, na, mu)));
    axpy(out, -1.0, times(surface_, nj, Q(l, na, mu)));
    std::vector<cplx> d = Q(l, nj, mu);
    axpy(d, -1.0, Q(j, nl, mu));
    axpy(out, 1.0, times(surface_, na, d));
    if (!constant_mu) {
      Density m = mu.M(l, j);
      axpy(out, -1.0, times(surface_, na, V(m)));
      axpy(out, 1.0, V(na * m));
    }
  }
  axpy(out, 1.0, R(nl, nj, mu));
  return out;
}

Eigen::MatrixXcd LayerContext::assemble(LayerKind kind) const {
  const int N = static_cast<int>(surface_.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  if (dim() == 3) {
    for (int i = 0; i < N; ++i) {
      const BPoint& x = surface_.node(i);
      for (int j = 0; j < N; ++j)
        if (j != i) A(i, j) = surface_.weight(j) * kernel(kind, x, surface_.node(j), pair_values(i, j, false)).value;
      cplx d = 0.0;
      for (const auto& q : duffy_rule(opts_.duffy_order, 1.0 / 3, 1.0 / 3)) {
        BPoint y = surface_.at_triangle(i, q.s, q.w);
        d += q.weight * surface_.area_density(i, q.s, q.w) * kernel(kind, x, y, fs_.eval(x.x - y.x, false)).value;
      }
      A(i, i) = d;
    }
    return A;
  }
  const KressRule R(N);
  const double h = surface_.step();
  for (int i = 0; i < N; ++i) {
    const BPoint& x = surface_.node(i);
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      const BPoint& y = surface_.node(j);
      SplitValue v = kernel(kind, x, y, pair_values(i, j, false));
      A(i, j) = y.speed * (R(i, j) * v.log_coef + h * (v.value - v.log_coef * log_sin2(x.t - y.t)));
    }
    // the diagonal limit samples the interpolated density off the grid
    for (auto [off, w] : kDiagonalTaps) {
      const double e = off * kDiagonalStep;
      BPoint y = surface_.at_param(x.t + e);
      SplitValue v = kernel(kind, x, y, fs_.eval(x.x - y.x, false));
      cplx c = x.speed * w * (R(i, i) * v.log_coef + h * (v.value - v.log_coef * log_sin2(e)));
      for (int j = 0; j < N; ++j) A(i, j) += c * lagrange(N, j, x.t + e);
    }
  }
  return A;
}

double residual_slay2(const LayerContext& ctx, const Density& mu, int j, int l) {
  require_curve(ctx, "slay2 residual");
  const BoundarySurface& s = ctx.surface();
  std::vector<cplx> lhs = tangential_M(s, j, l, ctx.V(mu));
  std::vector<cplx> rhs = ctx.Q(l, Density::normal(j), mu);
  axpy(rhs, -1.0, ctx.Q(j, Density::normal(l), mu));
  if (!mu.constant_value()) axpy(rhs, 1.0, ctx.V(mu.M(j, l)));
  return max_diff(lhs, rhs);
}

double residual_wregn(const LayerContext& ctx, const Density& mu, int l, int j) {
  require_curve(ctx, "double layer tangential residual");
  return max_diff(tangential_M(ctx.surface(), l, j, ctx.W(mu)), ctx.T(l, j, mu));
}

double residual_wstar(const LayerContext& ctx, const Density& mu) {
  const CoefficientVector& c = ctx.coefficients();
  std::vector<cplx> rhs(ctx.surface().size(), 0.0);
  for (int b = 0; b < ctx.dim(); ++b)
    for (int r = 0; r < ctx.dim(); ++r)
      if (c.a2(b, r) != 0.0) axpy(rhs, c.a2(b, r), ctx.Q(b, Density::normal(r), mu));
  axpy(rhs, -1.0, ctx.W(mu));
  if (c.a1 != CVec3::Zero()) axpy(rhs, -1.0, ctx.V(ctx.normal_dot_a1() * mu));
  return max_diff(ctx.Wstar(mu), rhs);
}

double residual_gradQ(const LayerContext& ctx, const Density& g, const Density& mu, int j, int h) {
  require_curve(ctx, "gradient of Q residual");
  const BoundarySurface& s = ctx.surface();
  const std::size_t N = s.size();
  std::vector<CVec3> lhs = tangential_gradient(s, ctx.Q(j, g, mu));
  std::vector<CVec3> g1 = tangential_gradient(s, ctx.Q(j, g, Density::constant(1.0)));
  std::vector<cplx> first(N, 0.0), second(N, 0.0);
  if (!mu.constant_value()) {
    first = ctx.integrate([&](const BPoint& x, const BPoint& y, const FsValues& f) {
      cplx d = mu(y) - mu(x);
      return SplitValue{d * f.grad[j], d * f.log_grad[j]};
    });
    second = ctx.integrate(
        [&](const BPoint& x, const BPoint& y, const FsValues& f) {
          cplx d = (g(x) - g(y)) * (mu(y) - mu(x));
          cplx k = f.hess(h, j), lk = f.log_hess(h, j);
          for (int l = 0; l < ctx.dim(); ++l) {
            k -= f.hess(l, j) * x.nu[l] * x.nu[h];
            lk -= f.log_hess(l, j) * x.nu[l] * x.nu[h];
          }
          return SplitValue{d * k, d * lk};
        },
        true);
  }
  double m = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const BPoint& x = s.node(i);
    cplx rhs = g.tgrad(x)[h] * first[i] + second[i] + mu(x) * g1[i][h];
    m = std::max(m, std::abs(lhs[i][h] - rhs));
  }
  return m;
}

std::vector<cplx> P_ljr(const LayerContext& ctx, const Density& g, const Density& mu, int l, int j, int r) {
  require_curve(ctx, "recursion for M Q");
  const BoundarySurface& s = ctx.surface();
  const CoefficientVector& c = ctx.coefficients();
  const int n = ctx.dim();
  const Density nl = Density::normal(l), nj = Density::normal(j), nr = Density::normal(r);
  const Density w = mu * ctx.conormal_weight().inverse();  // mu / (nu^t a2 nu)
  auto a2nu = [&](int q) {
    Density d = Density::constant(0.0);
    for (int k = 0; k < n; ++k)
      if (c.a2(q, k) != 0.0) d = d + cplx(c.a2(q, k)) * Density::normal(k);
    return d;
  };
  std::vector<cplx> out(s.size(), 0.0);

  axpy(out, 1.0, times(s, nl, ctx.Q(r, g.grad_component(j), mu)));
  axpy(out, -1.0, times(s, nj, ctx.Q(r, g.grad_component(l), mu)));

  // Q_r[g, sum_s M_sj[(a2 nu)_s mu / kappa]]
  auto msum = [&](int col) {
    std::vector<Density> parts;
    for (int q = 0; q < n; ++q) parts.push_back((a2nu(q) * w).M(q, col));
    return Density([parts](const BPoint& p) {
      cplx v = 0.0;
      for (const auto& d : parts) v += d(p);
      return v;
    }, Density::GradFn());
  };
  axpy(out, 1.0, times(s, nl, ctx.Q(r, g, msum(j))));
  axpy(out, -1.0, times(s, nj, ctx.Q(r, g, msum(l))));

  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k) {
      if (c.a2(q, k) == 0.0) continue;
      const Density mg = g.M(k, r) * w;
      std::vector<cplx> tl = ctx.Q(q, nj, mg);
      axpy(tl, 1.0, ctx.Q(q, g, (nj * w).M(k, r)));
      std::vector<cplx> tj = ctx.Q(q, nl, mg);
      axpy(tj, 1.0, ctx.Q(q, g, (nl * w).M(k, r)));
      axpy(out, c.a2(q, k), times(s, nl, tl));
      axpy(out, -c.a2(q, k), times(s, nj, tj));
    }

  for (int q = 0; q < n; ++q) {
    if (c.a1[q] == 0.0) continue;
    axpy(out, -c.a1[q], times(s, nl, ctx.Q(q, g, nj * nr * w)));
    axpy(out, c.a1[q], times(s, nj, ctx.Q(q, g, nl * nr * w)));
  }

  if (c.a0 != 0.0) {
    std::vector<cplx> inner = times(s, nl, ctx.V(nj * nr * w));
    axpy(inner, -1.0, times(s, nj, ctx.V(nl * nr * w)));
    inner = times(s, g, inner);
    axpy(inner, -1.0, times(s, nl, ctx.V(g * nj * nr * w)));
    axpy(inner, 1.0, times(s, nj, ctx.V(g * nl * nr * w)));
    axpy(out, -c.a0, inner);
  }
  return out;
}

TruncatedSup gauss_truncated_sup(const LayerContext& ctx, int z, int h, int j, const std::vector<double>& radii) {
  const BoundarySurface& s = ctx.surface();
  return truncated_sup(
      s,
      [&](int a, int b) {
        Vec3 d = s.node(a).x - s.node(b).x;
        return d[z] * ctx.fs().eval(d, true).hess(h, j);
      },
      radii);
}

double residual_pljr(const LayerContext& ctx, const Density& g, const Density& mu, int l, int j, int r) {
  require_curve(ctx, "recursion for M Q");
  return max_diff(tangential_M(ctx.surface(), l, j, ctx.Q(r, g, mu)), P_ljr(ctx, g, mu, l, j, r));
}

}  // namespace layerlab
