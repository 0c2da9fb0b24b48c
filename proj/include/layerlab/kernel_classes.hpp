#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "layerlab/density.hpp"
#include "layerlab/holder.hpp"

namespace layerlab {

struct KernelExponents {
  double s1 = 0, s2 = 0, s3 = 0;
};

struct KernelHandle {
  std::function<cplx(const BPoint& x, const BPoint& y)> eval;
  KernelExponents exps;
  std::optional<double> homogeneity;  // degree -h of a convolution kernel
  std::optional<int> parity;          // +1 even, -1 odd
  std::string name;
};

// Convolution kernel K(x, y) = k(x - y).
KernelHandle convolution_kernel(std::function<cplx(const Vec3&)> k, KernelExponents exps, std::string name,
                                std::optional<double> homogeneity = {}, std::optional<int> parity = {});
KernelHandle zero_kernel(KernelExponents exps = {});
// Xi[mu](x, y) = mu(x) - mu(y) with exponents (-alpha, 0, alpha).
KernelHandle xi_kernel(const Density& mu, double alpha);

struct Triple {
  int xp, xpp, y;  // x', x'', y with |x' - y| >= 2 |x' - x''|
};

struct TripleSampler {
  std::size_t count = 10000;
  int bands = 16;
  std::uint64_t seed = 7;

  std::vector<Triple> triples(const BoundarySurface& surface) const;
};

struct KernelNormReport {
  std::string name;
  KernelExponents exps;
  double first = 0, second = 0;
  std::optional<double> sharp;
  std::array<int, 2> first_at{-1, -1};
  std::array<int, 3> second_at{-1, -1, -1};
  int sharp_at = -1;
  double sharp_radius = 0;
  std::size_t pairs = 0, triples = 0;
  std::uint64_t seed = 0;

  double norm() const { return first + second; }
  std::string to_json(const BoundarySurface& surface) const;
};

double norm_Ks(const BoundarySurface& surface, const KernelHandle& K, double s, const PairSampler& sampler = {});
KernelNormReport norm_Ks1s2s3(const BoundarySurface& surface, const KernelHandle& K, const KernelExponents& e,
                              const PairSampler& pairs = {}, const TripleSampler& triples = {});
// Adds sup over (x, r) of the truncated boundary integrals; an empty radii grid
// takes every node distance as a cut.
KernelNormReport sharp_norm(const BoundarySurface& surface, const KernelHandle& K, const KernelExponents& e,
                            const std::vector<double>& radii = {}, const PairSampler& pairs = {},
                            const TripleSampler& triples = {});

struct ProductCheck {
  std::size_t violations = 0, samples = 0;
  double worst_ratio = 0;  // max lhs / rhs
};

// Counts triples violating the product bound with both norms inflated by `inflate`.
ProductCheck check_product_inequality(const BoundarySurface& surface, const KernelHandle& K1,
                                      const KernelExponents& e1, const KernelHandle& K2,
                                      const KernelExponents& e2, const std::vector<Triple>& triples,
                                      const KernelNormReport& n1, const KernelNormReport& n2,
                                      double inflate = 1.05);

// Per-sample check that lowering (s2, s3) by a >= 0 scales each quotient by at most 2^{-a}.
ProductCheck check_embedding(const BoundarySurface& surface, const KernelHandle& K, const KernelExponents& e,
                             double a, const std::vector<Triple>& triples);

// Quotient |F(dir(x',y), |x'-y|) - F(dir(x'',y), |x''-y|)| |x'-y| / |x'-x''| against Lip(F)(2 + diam).
ProductCheck check_frozen_direction(const BoundarySurface& surface,
                                    const std::function<double(const Vec3& dir, double r)>& F, double lip,
                                    const std::vector<Triple>& triples);

}  // namespace layerlab
