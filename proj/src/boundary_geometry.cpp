#include "layerlab/boundary_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "layerlab/errors.hpp"
#include "layerlab/quadrature.hpp"

namespace layerlab {

namespace {

const std::map<std::string, ShapeKind> kShapeNames = {
    {"circle", ShapeKind::Circle}, {"ellipse", ShapeKind::Ellipse}, {"kite", ShapeKind::Kite},
    {"star", ShapeKind::Star},     {"sphere", ShapeKind::Sphere},   {"ellipsoid", ShapeKind::Ellipsoid}};

std::string shape_name(ShapeKind k) {
  for (const auto& [name, kind] : kShapeNames)
    if (kind == k) return name;
  return "unknown";
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::BadShapeParams, msg);
}

}  // namespace

ShapeSpec ShapeSpec::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("geometry json: ") + e.what());
  }
  ShapeSpec s;
  std::string kind = j.value("kind", "");
  auto it = kShapeNames.find(kind);
  if (it == kShapeNames.end()) throw Error(ErrorCode::BadShapeParams, "unknown shape '" + kind + "'");
  s.kind = it->second;
  s.nodes = j.value("N", 64);
  s.level = j.value("level", 2);
  switch (s.kind) {
    case ShapeKind::Circle: s.params = {j.value("r", 1.0)}; break;
    case ShapeKind::Ellipse: s.params = {j.value("a", 2.0), j.value("b", 1.0)}; break;
    case ShapeKind::Kite: s.params = {}; break;
    case ShapeKind::Star: s.params = {j.value("k", 5.0), j.value("eps", 0.3)}; break;
    case ShapeKind::Sphere: s.params = {j.value("r", 1.0)}; break;
    case ShapeKind::Ellipsoid: s.params = {j.value("a", 1.0), j.value("b", 1.0), j.value("c", 1.0)}; break;
  }
  return s;
}

std::string ShapeSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = shape_name(kind);
  const char* names[6][3] = {{"r"}, {"a", "b"}, {}, {"k", "eps"}, {"r"}, {"a", "b", "c"}};
  for (size_t i = 0; i < params.size(); ++i) j[names[static_cast<int>(kind)][i]] = params[i];
  if (kind == ShapeKind::Sphere || kind == ShapeKind::Ellipsoid)
    j["level"] = level;
  else
    j["N"] = nodes;
  return j.dump();
}

std::string ShapeSpec::label() const {
  std::string s = shape_name(kind);
  if (kind == ShapeKind::Ellipse || kind == ShapeKind::Ellipsoid || kind == ShapeKind::Star) {
    s += "(";
    for (size_t i = 0; i < params.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%g", i ? "," : "", params[i]);
      s += buf;
    }
    s += ")";
  }
  return s;
}

BoundarySurface BoundarySurface::make(const ShapeSpec& spec) {
  BoundarySurface b;
  b.spec_ = spec;
  const auto& p = spec.params;
  switch (spec.kind) {
    case ShapeKind::Circle:
      require(p.size() == 1 && p[0] > 0, "circle needs r > 0");
      break;
    case ShapeKind::Ellipse:
      require(p.size() == 2 && p[0] > 0 && p[1] > 0, "ellipse needs positive semi-axes");
      break;
    case ShapeKind::Kite:
      break;
    case ShapeKind::Star:
      require(p.size() == 2 && p[0] >= 1 && std::floor(p[0]) == p[0] && p[1] >= 0 && p[1] < 1,
              "star needs integer k >= 1 and 0 <= eps < 1");
      break;
    case ShapeKind::Sphere:
      require(p.size() == 1 && p[0] > 0, "sphere needs r > 0");
      b.axes_ = Vec3::Constant(p[0]);
      break;
    case ShapeKind::Ellipsoid:
      require(p.size() == 3 && p[0] > 0 && p[1] > 0 && p[2] > 0, "ellipsoid needs positive semi-axes");
      b.axes_ = Vec3(p[0], p[1], p[2]);
      break;
  }
  if (spec.kind == ShapeKind::Sphere || spec.kind == ShapeKind::Ellipsoid) {
    require(spec.level >= 0 && spec.level <= 6, "refinement level must lie in [0, 6]");
    b.dim_ = 3;
    b.build_surface();
  } else {
    require(spec.nodes >= 16 && spec.nodes % 2 == 0, "node count must be even and at least 16");
    b.dim_ = 2;
    b.build_curve();
  }
  return b;
}

std::array<Vec3, 3> BoundarySurface::curve_derivs(double t) const {
  double c = std::cos(t), s = std::sin(t);
  const auto& p = spec_.params;
  switch (spec_.kind) {
    case ShapeKind::Circle:
      return {Vec3(p[0] * c, p[0] * s, 0), Vec3(-p[0] * s, p[0] * c, 0), Vec3(-p[0] * c, -p[0] * s, 0)};
    case ShapeKind::Ellipse:
      return {Vec3(p[0] * c, p[1] * s, 0), Vec3(-p[0] * s, p[1] * c, 0), Vec3(-p[0] * c, -p[1] * s, 0)};
    case ShapeKind::Kite:
      return {Vec3(c + 0.65 * std::cos(2 * t) - 0.65, 1.5 * s, 0),
              Vec3(-s - 1.3 * std::sin(2 * t), 1.5 * c, 0),
              Vec3(-c - 2.6 * std::cos(2 * t), -1.5 * s, 0)};
    case ShapeKind::Star: {
      double k = p[0], e = p[1];
      double R = 1 + e * std::cos(k * t), R1 = -e * k * std::sin(k * t), R2 = -e * k * k * std::cos(k * t);
      Vec3 u(c, s, 0), v(-s, c, 0);
      return {R * u, R1 * u + R * v, R2 * u + 2 * R1 * v - R * u};
    }
    default:
      throw Error(ErrorCode::UnsupportedDimension, "curve parameterisation requested on a surface");
  }
}

BPoint BoundarySurface::at_param(double t) const {
  if (dim_ != 2) throw Error(ErrorCode::UnsupportedDimension, "at_param needs a curve");
  auto d = curve_derivs(t);
  BPoint p;
  p.t = t;
  p.x = d[0];
  p.speed = d[1].norm();
  p.tangent = d[1] / p.speed;
  p.nu = Vec3(p.tangent[1], -p.tangent[0], 0);
  Vec3 dt = (d[2] - p.tangent.dot(d[2]) * p.tangent) / (p.speed * p.speed);  // d tangent / ds
  Vec3 dnu_ds(dt[1], -dt[0], 0);
  for (int l = 0; l < 2; ++l) p.dnu.row(l) = dnu_ds[l] * p.tangent.transpose();
  return p;
}

void BoundarySurface::build_curve() {
  int N = spec_.nodes;
  nodes_.resize(N);
  weights_.resize(N);
  for (int j = 0; j < N; ++j) {
    nodes_[j] = at_param(2 * kPi * j / N);
    nodes_[j].index = j;
    weights_[j] = nodes_[j].speed * 2 * kPi / N;
  }
}

Vec3 BoundarySurface::surface_map(const Vec3& p) const { return axes_.cwiseProduct(p / p.norm()); }

BPoint BoundarySurface::at_triangle(int tri, double s, double w) const {
  if (dim_ != 3) throw Error(ErrorCode::UnsupportedDimension, "at_triangle needs a surface");
  const auto& T = tris_[tri];
  Vec3 p = T[0] + s * (T[1] - T[0]) + w * (T[2] - T[0]);
  BPoint b;
  b.tri = tri;
  b.s = s;
  b.w = w;
  b.x = surface_map(p);
  Vec3 g = b.x.cwiseQuotient(axes_.cwiseProduct(axes_));
  double gn = g.norm();
  b.nu = g / gn;
  Mat3 P = Mat3::Identity() - b.nu * b.nu.transpose();
  Mat3 J = P * axes_.cwiseProduct(axes_).cwiseInverse().asDiagonal() / gn;
  b.dnu = J * P;
  return b;
}

double BoundarySurface::area_density(int tri, double s, double w) const {
  const auto& T = tris_[tri];
  Vec3 p = T[0] + s * (T[1] - T[0]) + w * (T[2] - T[0]);
  double r = p.norm();
  Vec3 ph = p / r;
  auto d = [&](const Vec3& e) { return Vec3(axes_.cwiseProduct(e - ph * ph.dot(e)) / r); };
  return d(T[1] - T[0]).cross(d(T[2] - T[0])).norm();
}

void BoundarySurface::build_surface() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Vec3> v;
  for (double a : {-1.0, 1.0})
    for (double b : {-phi, phi}) {
      v.emplace_back(0, a, b);
      v.emplace_back(a, b, 0);
      v.emplace_back(b, 0, a);
    }
  std::vector<std::array<Vec3, 3>> tris;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      for (size_t k = j + 1; k < v.size(); ++k) {
        auto edge = [&](size_t a, size_t b) { return std::abs((v[a] - v[b]).norm() - 2.0) < 1e-9; };
        if (!(edge(i, j) && edge(j, k) && edge(i, k))) continue;
        Vec3 A = v[i].normalized(), B = v[j].normalized(), C = v[k].normalized();
        if ((B - A).cross(C - A).dot(A + B + C) < 0) std::swap(B, C);
        tris.push_back({A, B, C});
      }
  for (int l = 0; l < spec_.level; ++l) {
    std::vector<std::array<Vec3, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      Vec3 ab = (t[0] + t[1]).normalized(), bc = (t[1] + t[2]).normalized(), ca = (t[2] + t[0]).normalized();
      next.push_back({t[0], ab, ca});
      next.push_back({ab, t[1], bc});
      next.push_back({ca, bc, t[2]});
      next.push_back({ab, bc, ca});
    }
    tris.swap(next);
  }
  tris_ = std::move(tris);
  const auto rule = triangle_rule(8);
  nodes_.resize(tris_.size());
  weights_.resize(tris_.size());
  for (size_t i = 0; i < tris_.size(); ++i) {
    nodes_[i] = at_triangle(static_cast<int>(i), 1.0 / 3, 1.0 / 3);
    nodes_[i].index = static_cast<int>(i);
    double a = 0;
    for (const auto& q : rule) a += q.weight * area_density(static_cast<int>(i), q.s, q.w);
    weights_[i] = a;
  }
}

double BoundarySurface::measure() const {
  double m = 0;
  for (double w : weights_) m += w;
  return m;
}

double BoundarySurface::diameter() const {
  if (dim_ == 3) return 2 * axes_.maxCoeff();
  size_t N = nodes_.size(), stride = std::max<size_t>(1, N / 2048);
  double d = 0;
  for (size_t i = 0; i < N; i += stride)
    for (size_t j = i + stride; j < N; j += stride) d = std::max(d, (nodes_[i].x - nodes_[j].x).norm());
  return d;
}

}  // namespace layerlab
