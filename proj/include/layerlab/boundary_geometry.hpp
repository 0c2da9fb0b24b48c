#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "layerlab/types.hpp"

namespace layerlab {

// A boundary point with its local frame. Off-node points carry index -1.
struct BPoint {
  int index = -1;
  int tri = -1;           // owning triangle on surfaces
  double t = 0.0;         // parameter on curves
  double s = 0.0, w = 0.0;  // triangle coordinates on surfaces
  Vec3 x = Vec3::Zero();
  Vec3 nu = Vec3::Zero();       // exterior unit normal
  Vec3 tangent = Vec3::Zero();  // unit tangent on curves
  double speed = 1.0;           // |x'(t)| on curves
  Mat3 dnu = Mat3::Zero();      // row l: tangential gradient of nu_l
};

enum class ShapeKind { Circle, Ellipse, Kite, Star, Sphere, Ellipsoid };

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Circle;
  std::vector<double> params;  // circle {r}, ellipse {a,b}, star {k,eps}, ellipsoid {a,b,c}
  int nodes = 64;              // curves
  int level = 2;               // surfaces

  static ShapeSpec from_json(const std::string& json_text);
  std::string to_json() const;
  std::string label() const;
};

struct Smoothness {
  int m = 1000;  // analytic shapes report a large order
  double alpha = 1.0;
};

class BoundarySurface {
 public:
  static BoundarySurface make(const ShapeSpec& spec);

  int dim() const { return dim_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<BPoint>& nodes() const { return nodes_; }
  const BPoint& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const ShapeSpec& spec() const { return spec_; }
  Smoothness smoothness() const { return {}; }
  double measure() const;
  double diameter() const;

  // Curves: point at an arbitrary parameter value.
  BPoint at_param(double t) const;
  double step() const { return 2 * kPi / static_cast<double>(nodes_.size()); }

  // Surfaces: point at triangle coordinates (s, w) of triangle tri, and the
  // area density with respect to ds dw.
  BPoint at_triangle(int tri, double s, double w) const;
  double area_density(int tri, double s, double w) const;
  const std::array<Vec3, 3>& triangle(int tri) const { return tris_[tri]; }

 private:
  void build_curve();
  void build_surface();
  Vec3 surface_map(const Vec3& p) const;
  std::array<Vec3, 3> curve_derivs(double t) const;  // x, x', x''

  int dim_ = 2;
  ShapeSpec spec_;
  std::vector<BPoint> nodes_;
  std::vector<double> weights_;
  std::vector<std::array<Vec3, 3>> tris_;
  Vec3 axes_ = Vec3::Ones();
};

}  // namespace layerlab
