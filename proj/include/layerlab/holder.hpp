#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "layerlab/density.hpp"

namespace layerlab {

// Continuity moduli: r^a, or omega_theta(r) = r^theta |ln r| on (0, e^{-1/theta}]
// and constant beyond.
struct Modulus {
  enum class Kind { Power, Omega } kind = Kind::Power;
  double exponent = 1.0;

  static Modulus power(double a) { return {Kind::Power, a}; }
  static Modulus omega(double theta) { return {Kind::Omega, theta}; }
  double operator()(double r) const;
};

struct PairSampler {
  std::size_t exhaustive_limit = 512;  // all pairs up to this many nodes
  std::size_t pairs_per_band = 1000;
  int bands = 12;
  std::uint64_t seed = 1;

  std::vector<std::pair<int, int>> pairs(const BoundarySurface& surface) const;
};

struct SeminormReport {
  double value = 0.0;
  int i = -1, j = -1;
  std::size_t pairs = 0;
};

SeminormReport holder_seminorm(const BoundarySurface& surface, const std::vector<cplx>& values,
                               const Modulus& modulus, const PairSampler& sampler = {});

// sup |f(y) - f(x) - grad_T f(x).(y - x)| / (|x - y| omega(|x - y|))
SeminormReport taylor_defect(const BoundarySurface& surface, const Density& f, const Modulus& modulus,
                             const PairSampler& sampler = {});

}  // namespace layerlab
