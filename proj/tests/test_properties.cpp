// Invariants that hold across families, shapes and resolutions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "families.hpp"
#include "layerlab/fundamental_solution.hpp"
#include "layerlab/holder.hpp"
#include "layerlab/layer_potentials.hpp"
#include "layerlab/regularity_lab.hpp"

using namespace layerlab;

namespace {

BoundarySurface shape(const std::string& json) { return BoundarySurface::make(ShapeSpec::from_json(json)); }

double max_abs(const std::vector<cplx>& v, cplx c = 0.0) {
  double m = 0;
  for (cplx z : v) m = std::max(m, std::abs(z - c));
  return m;
}

// Plane wave exp(i k.x) with its normal derivative.
struct Wave {
  Vec3 k;
  Density u() const {
    Vec3 kk = k;
    return Density::ambient([kk](const Vec3& x) { return std::exp(cplx(0, kk.dot(x))); },
                            [kk](const Vec3& x) { return (cplx(0, 1) * std::exp(cplx(0, kk.dot(x))) * kk.cast<cplx>()).eval(); });
  }
  Density dnu() const {
    Vec3 kk = k;
    return Density([kk](const BPoint& p) { return cplx(0, kk.dot(p.nu)) * std::exp(cplx(0, kk.dot(p.x))); }, nullptr);
  }
};

}  // namespace

TEST_CASE("Gauss: W[1] = 1/2 on every closed curve") {
  for (const char* g : {R"({"kind":"kite","N":256})", R"({"kind":"ellipse","a":3,"b":0.5,"N":512})",
                        R"({"kind":"star","k":5,"eps":0.25,"N":256})", R"({"kind":"circle","r":0.3,"N":64})"}) {
    CAPTURE(g);
    LayerContext ctx(presets::laplace(2), shape(g));
    CHECK(max_abs(ctx.W(Density::constant(1.0)), 0.5) <= 1e-9);
  }
}

TEST_CASE("Gauss on surfaces") {
  for (const char* g : {R"({"kind":"sphere","r":2,"level":3})", R"({"kind":"ellipsoid","a":1,"b":1.3,"c":0.8,"level":3})"}) {
    CAPTURE(g);
    LayerContext ctx(presets::laplace(3), shape(g));
    CHECK(max_abs(ctx.W(Density::constant(1.0)), 0.5) <= 0.03);
  }
}

TEST_CASE("Green's representation on the boundary: u/2 = W[u] - V[du/dnu]") {
  for (double kappa : {0.0, 1.0, 3.0})
    for (const char* g : {R"({"kind":"kite","N":256})", R"({"kind":"star","k":3,"eps":0.2,"N":256})"}) {
      CAPTURE(kappa);
      CAPTURE(g);
      auto s = shape(g);
      LayerContext ctx(kappa == 0 ? presets::laplace(2) : presets::helmholtz(2, kappa), s);
      Vec3 k = kappa == 0 ? Vec3::Zero() : Vec3(0.6 * kappa, 0.8 * kappa, 0);
      Density u = kappa == 0 ? Density::ambient([](const Vec3& x) { return cplx(x[0] * x[1]); }, nullptr)
                             : Wave{k}.u();
      Density du = kappa == 0
                       ? Density([](const BPoint& p) { return cplx(p.x[1] * p.nu[0] + p.x[0] * p.nu[1]); }, nullptr)
                       : Wave{k}.dnu();
      auto w = ctx.W(u), v = ctx.V(du), uv = u.sample(s);
      double m = 0;
      for (std::size_t i = 0; i < s.size(); ++i) m = std::max(m, std::abs(w[i] - v[i] - 0.5 * uv[i]));
      CHECK(m <= 1e-9);
    }
}

TEST_CASE("Green's representation on the sphere") {
  auto s = shape(R"({"kind":"sphere","level":3})");
  LayerContext ctx(presets::laplace(3), s);
  Density u = Density::ambient([](const Vec3& x) { return cplx(x[0]); }, nullptr);
  auto w = ctx.W(u), v = ctx.V(Density::normal(0)), uv = u.sample(s);
  double m = 0;
  for (std::size_t i = 0; i < s.size(); ++i) m = std::max(m, std::abs(w[i] - v[i] - 0.5 * uv[i]));
  CHECK(m <= 0.02);
}

TEST_CASE("drift-free fundamental solutions are even") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> G;
  for (const auto& op : operator_corpus()) {
    if (op.c.a1 != CVec3::Zero()) continue;
    FundamentalSolution fs(op.c);
    for (int t = 0; t < 20; ++t) {
      Vec3 x(G(rng), G(rng), op.c.n == 3 ? G(rng) : 0.0);
      CHECK(std::abs(fs.S(x) - fs.S(-x)) <= 1e-14 * std::abs(fs.S(x)) + 1e-300);
      CHECK((fs.grad(x) + fs.grad(-x)).norm() <= 1e-14 * fs.grad(x).norm());
    }
  }
}

TEST_CASE("drift factor relates S at opposite points") {
  // S(x) = exp(-b.y/2) Phi(rho) / det T with y = T^{-1} x, so S(x) / S(-x) = exp(-b.y)
  for (const auto& op : operator_corpus()) {
    if (op.c.a1 == CVec3::Zero()) continue;
    CAPTURE(op.name);
    FundamentalSolution fs(op.c);
    const auto& r = fs.reduced();
    Vec3 x(0.3, -0.4, op.c.n == 3 ? 0.5 : 0.0);
    Vec3 y = r.Tinv * x;
    cplx by = (r.b.transpose() * y.cast<cplx>())(0);
    CHECK(std::abs(fs.S(x) / fs.S(-x) - std::exp(-by)) <= 1e-12);
  }
}

TEST_CASE("rotating the density rotates the potential on the circle") {
  auto s = shape(R"({"kind":"circle","N":128})");
  LayerContext ctx(presets::helmholtz(2, 1.7), s);
  const int shift = 16;
  // singular point between nodes: at a node the power amplifies rounding of the parameter
  auto base = make_density(R"({"kind":"abs_sin_power","beta":0.5,"theta0":0.3})", s);
  const double dt = 2 * kPi * shift / 128;
  Density rotated([&s, base, dt](const BPoint& p) { return base(s.at_param(p.t - dt)); }, nullptr);
  auto a = ctx.V(base), b = ctx.V(rotated);
  double m = 0;
  for (int i = 0; i < 128; ++i) m = std::max(m, std::abs(b[(i + shift) % 128] - a[i]));
  CHECK(m <= 1e-12);
}

TEST_CASE("seminorms are absolutely homogeneous and subadditive") {
  auto s = shape(R"({"kind":"kite","N":128})");
  auto f = make_density(R"({"kind":"cos","k":3})", s).sample(s);
  auto g = make_density(R"({"kind":"x2"})", s).sample(s);
  for (Modulus m : {Modulus::power(0.5), Modulus::omega(0.5)}) {
    double nf = holder_seminorm(s, f, m).value, ng = holder_seminorm(s, g, m).value;
    std::vector<cplx> sf(f.size()), fg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      sf[i] = cplx(0, -2.5) * f[i];
      fg[i] = f[i] + g[i];
    }
    CHECK(holder_seminorm(s, sf, m).value == doctest::Approx(2.5 * nf).epsilon(1e-14));
    CHECK(holder_seminorm(s, fg, m).value <= nf + ng + 1e-14);
  }
}

TEST_CASE("refinement does not change converged potentials") {
  auto at = [](int N) {
    auto s = shape(R"({"kind":"ellipse","a":2,"b":1,"N":)" + std::to_string(N) + "}");
    LayerContext ctx(presets::drift(2, Vec3(1, 0, 0), 0.25), s);
    return ctx.W(make_density(R"({"kind":"cos"})", s))[0];
  };
  CHECK(std::abs(at(64) - at(256)) <= 1e-9);
}
