#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "layerlab/boundary_geometry.hpp"
#include "layerlab/density.hpp"
#include "layerlab/errors.hpp"
#include "layerlab/holder.hpp"
#include "oracles.hpp"

using namespace layerlab;

namespace {

BoundarySurface shape(const char* json) { return BoundarySurface::make(ShapeSpec::from_json(json)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

double weight_sum(const BoundarySurface& s) {
  double t = 0;
  for (double w : s.weights()) t += w;
  return t;
}

Density coord(int k) {
  return Density::ambient([k](const Vec3& x) { return cplx(x[k]); }, [k](const Vec3&) { return CVec3(CVec3::Unit(k)); });
}

}  // namespace

TEST_CASE("circle nodes, normals and weights") {
  auto s = shape(R"({"kind":"circle","N":64})");
  CHECK(std::abs(weight_sum(s) - 2 * oracle::pi) < 1e-12);
  for (const auto& p : s.nodes()) CHECK((p.nu - p.x).norm() < 1e-15);
}

TEST_CASE("ellipse perimeter against adaptive arclength") {
  auto s = shape(R"({"kind":"ellipse","a":2,"b":1,"N":128})");
  double L = oracle::simpson([](double t) { return std::hypot(2 * std::sin(t), std::cos(t)); }, 0, 2 * oracle::pi,
                             1e-14);
  CHECK(L == doctest::Approx(9.688448220547675).epsilon(1e-12));
  CHECK(std::abs(weight_sum(s) - L) < 1e-10);
}

TEST_CASE("unit normals and the divergence theorem on constants") {
  for (const char* j : {R"({"kind":"circle","N":32})", R"({"kind":"ellipse","N":64})", R"({"kind":"kite","N":128})",
                        R"({"kind":"star","k":5,"eps":0.3,"N":128})", R"({"kind":"sphere","level":2})",
                        R"({"kind":"ellipsoid","a":1,"b":1.5,"c":0.8,"level":2})"}) {
    CAPTURE(j);
    auto s = shape(j);
    Vec3 flux = Vec3::Zero();
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(std::abs(s.node(i).nu.norm() - 1) < 1e-14);
      flux += s.weight(i) * s.node(i).nu;
    }
    CHECK(flux.norm() < (s.dim() == 2 ? 1e-12 : 1e-3));
  }
}

TEST_CASE("sphere measure converges and degenerate ellipsoid matches") {
  auto s3 = shape(R"({"kind":"sphere","level":3})");
  CHECK(std::abs(weight_sum(s3) - 4 * oracle::pi) <= 2e-3 * 4 * oracle::pi);
  auto s0 = shape(R"({"kind":"sphere","level":0})");
  CHECK(std::abs(weight_sum(s0) - 4 * oracle::pi) <= 5e-3 * 4 * oracle::pi);
  auto e = shape(R"({"kind":"ellipsoid","a":1,"b":1,"c":1,"level":3})");
  REQUIRE(e.size() == s3.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(e.node(i).x == s3.node(i).x);
    CHECK(e.weight(i) == s3.weight(i));
  }
}

TEST_CASE("shape validation") {
  CHECK(code_of([] { shape(R"({"kind":"circle","N":15})"); }) == ErrorCode::BadShapeParams);
  CHECK(code_of([] { shape(R"({"kind":"circle","N":8})"); }) == ErrorCode::BadShapeParams);
  CHECK(code_of([] { shape(R"({"kind":"circle","r":-1})"); }) == ErrorCode::BadShapeParams);
  CHECK(code_of([] { shape(R"({"kind":"star","k":5,"eps":1.2})"); }) == ErrorCode::BadShapeParams);
  CHECK(code_of([] { shape(R"({"kind":"sphere","level":7})"); }) == ErrorCode::BadShapeParams);
  CHECK(code_of([] { shape(R"({"kind":"torus"})"); }) == ErrorCode::BadShapeParams);
}

TEST_CASE("tangential derivative examples") {
  auto s = shape(R"({"kind":"circle","N":64})");
  auto m = tangential_M(s, 0, 1, coord(0));
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(m[i] + s.node(i).nu[1]) < 1e-15);
  CHECK(std::abs(m[0]) < 1e-15);
  for (cplx v : tangential_M(s, 0, 1, Density::constant(2.5))) CHECK(v == 0.0);
}

TEST_CASE("integration by parts on the ellipse") {
  auto s = shape(R"({"kind":"ellipse","a":2,"b":1,"N":256})");
  auto phi = Density::ambient([](const Vec3& x) { return cplx(std::sin(x[0]) * x[1]); },
                              [](const Vec3& x) { return CVec3(std::cos(x[0]) * x[1], std::sin(x[0]), 0); });
  auto psi = Density::ambient([](const Vec3& x) { return cplx(std::exp(0.3 * x[0]) + x[1] * x[1]); },
                              [](const Vec3& x) { return CVec3(0.3 * std::exp(0.3 * x[0]), 2 * x[1], 0); });
  auto a = tangential_M(s, 0, 1, phi), b = tangential_M(s, 0, 1, psi);
  auto pv = phi.sample(s), qv = psi.sample(s);
  cplx t = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) t += s.weight(i) * (a[i] * qv[i] + pv[i] * b[i]);
  CHECK(std::abs(t) <= 1e-8);
}

TEST_CASE("tangential gradient") {
  auto c = shape(R"({"kind":"circle","N":64})");
  auto g = tangential_gradient(c, coord(0));
  const std::size_t top = 16;  // theta = pi/2, x = (0, 1)
  CHECK(std::abs(g[top][0] - 1.0) < 1e-15);
  CHECK(std::abs(g[top][1]) < 1e-15);
  auto sphere = shape(R"({"kind":"sphere","level":2})");
  auto r2 = Density::ambient([](const Vec3& x) { return cplx(x.squaredNorm()); },
                             [](const Vec3& x) { return CVec3((2 * x).cast<cplx>()); });
  for (const auto& v : tangential_gradient(sphere, r2)) CHECK(v.norm() < 1e-14);
  auto k = shape(R"({"kind":"kite","N":128})");
  auto f = Density::ambient([](const Vec3& x) { return cplx(std::cos(x[0]) * x[1]); },
                            [](const Vec3& x) { return CVec3(-std::sin(x[0]) * x[1], std::cos(x[0]), 0); });
  auto gk = tangential_gradient(k, f);
  auto nodal = tangential_M(k, 0, 1, f.sample(k));
  for (std::size_t i = 0; i < k.size(); ++i) {
    const BPoint& p = k.node(i);
    CHECK(std::abs((gk[i].transpose() * p.nu.cast<cplx>())(0)) < 1e-12);
    CHECK(std::abs((gk[i].transpose() * p.tangent.cast<cplx>())(0) - nodal[i]) < 1e-10);
  }
}

TEST_CASE("spectral derivative of trigonometric polynomials") {
  const int N = 32;
  std::vector<cplx> v(N), dv(N);
  for (int i = 0; i < N; ++i) {
    double t = 2 * oracle::pi * i / N;
    v[i] = cplx(std::cos(3 * t) + 0.5 * std::sin(7 * t), std::sin(t));
    dv[i] = cplx(-3 * std::sin(3 * t) + 3.5 * std::cos(7 * t), std::cos(t));
  }
  auto d = spectral_derivative(v);
  for (int i = 0; i < N; ++i) CHECK(std::abs(d[i] - dv[i]) < 1e-12);
}

TEST_CASE("surfaces need ambient densities for tangential calculus") {
  auto s = shape(R"({"kind":"sphere","level":1})");
  std::vector<cplx> v(s.size(), 1.0);
  CHECK(code_of([&] { tangential_M(s, 0, 1, v); }) == ErrorCode::NeedsAmbientForm);
}

TEST_CASE("moduli") {
  for (double th : {0.25, 0.5, 1.0}) {
    Modulus w = Modulus::omega(th);
    const double rt = std::exp(-1 / th);
    CHECK(w(0.0) == 0.0);
    CHECK(w(rt) == w(std::nextafter(rt, 1.0)));
    double prev = 0, worst = 0;
    for (double r = 1e-12; r < 10; r *= 1.1) {
      CHECK(w(r) >= prev);
      prev = w(r);
      for (double a = 1; a < 1e3; a *= 1.3) worst = std::max(worst, w(a * r) / (a * w(r)));
    }
    CHECK(worst <= 1 + 1 / (th * std::exp(1.0)));
  }
  CHECK(Modulus::power(0.5)(0.25) == 0.5);
}

TEST_CASE("Hoelder seminorm") {
  auto s = shape(R"({"kind":"circle","N":128})");
  auto lip = Modulus::power(1.0);
  CHECK(holder_seminorm(s, Density::constant(3.0).sample(s), lip).value == 0.0);
  double coarse = holder_seminorm(shape(R"({"kind":"circle","N":32})"), coord(0).sample(shape(R"({"kind":"circle","N":32})")), lip).value;
  double fine = holder_seminorm(s, coord(0).sample(s), lip).value;
  CHECK(fine <= 1.0);
  CHECK(fine >= coarse);
  CHECK(fine > 0.999);
  // Pairs with |x - y| >= a: the seminorm is at most 2 sup|f| / omega(a).
  PairSampler all;
  const double a = 0.5;
  auto v = Density::ambient([](const Vec3& x) { return cplx(std::sin(5 * x[0])); }, nullptr).sample(s);
  double sup = 0, q = 0;
  for (cplx z : v) sup = std::max(sup, std::abs(z));
  for (auto [i, j] : all.pairs(s)) {
    double d = (s.node(i).x - s.node(j).x).norm();
    if (d >= a) q = std::max(q, std::abs(v[i] - v[j]) / std::sqrt(d));
  }
  CHECK(q <= 2 / std::sqrt(a) * sup);
  CHECK(code_of([&] { holder_seminorm(s, std::vector<cplx>(3), lip); }) == ErrorCode::DegenerateNodeSet);
}

TEST_CASE("Taylor defect") {
  auto s = shape(R"({"kind":"circle","N":128})");
  auto lip = Modulus::power(1.0);
  auto f = coord(0);
  double d = taylor_defect(s, f, lip).value;
  CHECK(d > 0);
  CHECK(d <= 2);
  CHECK(taylor_defect(s, Density::constant(1.0), lip).value == 0.0);
  CHECK(taylor_defect(s, cplx(2.0) * f, lip).value == 2 * d);
  CHECK(code_of([&] { taylor_defect(s, Density::ambient([](const Vec3&) { return cplx(1); }, nullptr), lip); }) ==
        ErrorCode::NeedsAmbientForm);
}

TEST_CASE("off-node curve points agree with nodes") {
  auto s = shape(R"({"kind":"kite","N":64})");
  for (int i = 0; i < 64; i += 7) {
    BPoint p = s.at_param(s.node(i).t);
    CHECK((p.x - s.node(i).x).norm() < 1e-15);
    CHECK((p.nu - s.node(i).nu).norm() < 1e-15);
    CHECK(p.index == -1);
  }
}
