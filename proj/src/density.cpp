#include "layerlab/density.hpp"

#include <memory>

#include <unsupported/Eigen/FFT>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

struct TrigInterpolant {
  std::vector<cplx> values, coeffs, node_deriv;

  explicit TrigInterpolant(std::vector<cplx> v) : values(std::move(v)) {
    Eigen::FFT<double> fft;
    fft.fwd(coeffs, values);
    node_deriv = spectral_derivative(values);
  }

  // value and d/dt at parameter t
  std::pair<cplx, cplx> eval(double t) const {
    const std::size_t N = values.size(), h = N / 2;
    cplx z = std::polar(1.0, t), zk = 1.0, zi = 1.0 / z, zik = zi;
    cplx f = coeffs[0], df = 0.0;
    for (std::size_t k = 1; k < h; ++k) {
      zk *= z;
      cplx a = coeffs[k] * zk, b = coeffs[N - k] * zik;
      f += a + b;
      df += cplx(0, static_cast<double>(k)) * (a - b);
      zik *= zi;
    }
    double nt = static_cast<double>(h) * t;
    f += coeffs[h] * std::cos(nt);
    df -= coeffs[h] * static_cast<double>(h) * std::sin(nt);
    return {f / static_cast<double>(N), df / static_cast<double>(N)};
  }
};

CVec3 project(const BPoint& p, const CVec3& g) {
  CVec3 nu = p.nu.cast<cplx>();
  return g - nu * (nu.transpose() * g)(0);
}

}  // namespace

std::vector<cplx> spectral_derivative(const std::vector<cplx>& values) {
  const std::size_t N = values.size();
  Eigen::FFT<double> fft;
  std::vector<cplx> c, out;
  fft.fwd(c, values);
  for (std::size_t k = 0; k < N; ++k) {
    double m = k < N / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(N);
    if (2 * k == N) m = 0;
    c[k] *= cplx(0, m);
  }
  fft.inv(out, c);
  return out;
}

Density Density::constant(cplx c) {
  Density d([c](const BPoint&) { return c; }, [](const BPoint&) { return CVec3::Zero().eval(); });
  d.constant_ = c;
  return d;
}

Density Density::ambient(std::function<cplx(const Vec3&)> f, std::function<CVec3(const Vec3&)> grad) {
  GradFn g;
  if (grad) g = [grad](const BPoint& p) { return project(p, grad(p.x)); };
  return Density([f](const BPoint& p) { return f(p.x); }, g);
}

Density Density::parametric(std::function<cplx(double)> f, std::function<cplx(double)> df) {
  GradFn g;
  if (df) g = [df](const BPoint& p) { return (df(p.t) / p.speed * p.tangent.cast<cplx>()).eval(); };
  return Density([f](const BPoint& p) { return f(p.t); }, g);
}

Density Density::nodal(const BoundarySurface& surface, std::vector<cplx> values) {
  if (values.size() != surface.size())
    throw Error(ErrorCode::DegenerateNodeSet, "nodal values do not match the node count");
  if (surface.dim() == 3) {
    auto v = std::make_shared<std::vector<cplx>>(std::move(values));
    return Density(
        [v](const BPoint& p) { return (*v)[p.index >= 0 ? p.index : p.tri]; }, GradFn());
  }
  auto ip = std::make_shared<TrigInterpolant>(std::move(values));
  return Density(
      [ip](const BPoint& p) { return p.index >= 0 ? ip->values[p.index] : ip->eval(p.t).first; },
      [ip](const BPoint& p) {
        cplx d = p.index >= 0 ? ip->node_deriv[p.index] : ip->eval(p.t).second;
        return (d / p.speed * p.tangent.cast<cplx>()).eval();
      });
}

Density Density::normal(int l) {
  return Density([l](const BPoint& p) { return cplx(p.nu[l]); },
                 [l](const BPoint& p) { return p.dnu.row(l).transpose().cast<cplx>().eval(); });
}

CVec3 Density::tgrad(const BPoint& p) const {
  if (!grad_) throw Error(ErrorCode::NeedsAmbientForm, "density has no tangential gradient");
  return grad_(p);
}

Density Density::M(int l, int r) const {
  if (!grad_) throw Error(ErrorCode::NeedsAmbientForm, "tangential derivative needs a gradient");
  GradFn g = grad_;
  return Density([g, l, r](const BPoint& p) {
    CVec3 d = g(p);
    return p.nu[l] * d[r] - p.nu[r] * d[l];
  }, GradFn());
}

Density Density::grad_component(int j) const {
  if (!grad_) throw Error(ErrorCode::NeedsAmbientForm, "gradient component needs a gradient");
  GradFn g = grad_;
  return Density([g, j](const BPoint& p) { return g(p)[j]; }, GradFn());
}

Density Density::inverse() const {
  ValueFn v = value_;
  GradFn g;
  if (grad_) {
    GradFn gg = grad_;
    g = [v, gg](const BPoint& p) {
      cplx f = v(p);
      return (-gg(p) / (f * f)).eval();
    };
  }
  Density d([v](const BPoint& p) { return 1.0 / v(p); }, g);
  if (constant_) d.constant_ = 1.0 / *constant_;
  return d;
}

std::vector<cplx> Density::sample(const BoundarySurface& surface) const {
  std::vector<cplx> out(surface.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value_(surface.node(i));
  return out;
}

Density operator+(const Density& a, const Density& b) {
  Density::ValueFn va = a.value_, vb = b.value_;
  Density::GradFn g;
  if (a.grad_ && b.grad_) {
    Density::GradFn ga = a.grad_, gb = b.grad_;
    g = [ga, gb](const BPoint& p) { return (ga(p) + gb(p)).eval(); };
  }
  Density d([va, vb](const BPoint& p) { return va(p) + vb(p); }, g);
  if (a.constant_ && b.constant_) d.constant_ = *a.constant_ + *b.constant_;
  return d;
}

Density operator*(cplx c, const Density& a) {
  Density::ValueFn va = a.value_;
  Density::GradFn g;
  if (a.grad_) {
    Density::GradFn ga = a.grad_;
    g = [ga, c](const BPoint& p) { return (c * ga(p)).eval(); };
  }
  Density d([va, c](const BPoint& p) { return c * va(p); }, g);
  if (a.constant_) d.constant_ = c * *a.constant_;
  return d;
}

Density operator-(const Density& a, const Density& b) { return a + cplx(-1.0) * b; }

Density operator*(const Density& a, const Density& b) {
  if (a.constant_) return *a.constant_ * b;
  if (b.constant_) return *b.constant_ * a;
  Density::ValueFn va = a.value_, vb = b.value_;
  Density::GradFn g;
  if (a.grad_ && b.grad_) {
    Density::GradFn ga = a.grad_, gb = b.grad_;
    g = [va, vb, ga, gb](const BPoint& p) { return (va(p) * gb(p) + vb(p) * ga(p)).eval(); };
  }
  return Density([va, vb](const BPoint& p) { return va(p) * vb(p); }, g);
}

std::vector<CVec3> tangential_gradient(const BoundarySurface& surface, const Density& f) {
  std::vector<CVec3> out(surface.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.tgrad(surface.node(i));
  return out;
}

std::vector<CVec3> tangential_gradient(const BoundarySurface& surface, const std::vector<cplx>& values) {
  if (surface.dim() != 2)
    throw Error(ErrorCode::NeedsAmbientForm, "nodal data on a surface has no tangential gradient");
  return tangential_gradient(surface, Density::nodal(surface, values));
}

std::vector<cplx> tangential_M(const BoundarySurface& surface, int l, int r, const Density& f) {
  return f.M(l, r).sample(surface);
}

std::vector<cplx> tangential_M(const BoundarySurface& surface, int l, int r, const std::vector<cplx>& values) {
  if (surface.dim() != 2)
    throw Error(ErrorCode::NeedsAmbientForm, "nodal data on a surface has no tangential gradient");
  return tangential_M(surface, l, r, Density::nodal(surface, values));
}

}  // namespace layerlab
