#include "layerlab/holder.hpp"

#include <cmath>
#include <random>

#include "layerlab/errors.hpp"

namespace layerlab {

double Modulus::operator()(double r) const {
  if (r <= 0) return 0.0;
  if (kind == Kind::Power) return std::pow(r, exponent);
  double rt = std::exp(-1.0 / exponent);
  double rr = std::min(r, rt);
  return std::pow(rr, exponent) * std::abs(std::log(rr));
}

std::vector<std::pair<int, int>> PairSampler::pairs(const BoundarySurface& surface) const {
  const int N = static_cast<int>(surface.size());
  if (N < 2) throw Error(ErrorCode::DegenerateNodeSet, "need at least two nodes");
  std::vector<std::pair<int, int>> out;
  if (static_cast<std::size_t>(N) <= exhaustive_limit) {
    out.reserve(static_cast<std::size_t>(N) * (N - 1) / 2);
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) out.emplace_back(i, j);
    return out;
  }
  // One pair per dyadic distance band per random anchor.
  std::mt19937_64 rng(seed);
  const double diam = surface.diameter();
  std::vector<std::vector<int>> members(bands);
  for (std::size_t a = 0; a < pairs_per_band; ++a) {
    int i = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
    for (auto& m : members) m.clear();
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      double d = (surface.node(i).x - surface.node(j).x).norm() / diam;
      int b = d >= 1.0 ? 0 : static_cast<int>(std::floor(-std::log2(d)));
      if (b < bands) members[b].push_back(j);
    }
    for (int b = 0; b < bands; ++b) {
      if (members[b].empty()) continue;
      int j = members[b][rng() % members[b].size()];
      out.emplace_back(i, j);
    }
  }
  return out;
}

SeminormReport holder_seminorm(const BoundarySurface& surface, const std::vector<cplx>& values,
                               const Modulus& modulus, const PairSampler& sampler) {
  if (values.size() != surface.size())
    throw Error(ErrorCode::DegenerateNodeSet, "values do not match the node count");
  SeminormReport r;
  for (auto [i, j] : sampler.pairs(surface)) {
    double d = (surface.node(i).x - surface.node(j).x).norm();
    if (d <= 0) throw Error(ErrorCode::DegenerateNodeSet, "coincident nodes");
    double q = std::abs(values[i] - values[j]) / modulus(d);
    ++r.pairs;
    if (q > r.value) r = {q, i, j, r.pairs};
  }
  return r;
}

SeminormReport taylor_defect(const BoundarySurface& surface, const Density& f, const Modulus& modulus,
                             const PairSampler& sampler) {
  std::vector<cplx> v = f.sample(surface);
  std::vector<CVec3> g = tangential_gradient(surface, f);
  SeminormReport r;
  for (auto [a, b] : sampler.pairs(surface)) {
    for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
      Vec3 dx = surface.node(j).x - surface.node(i).x;
      double d = dx.norm();
      if (d <= 0) throw Error(ErrorCode::DegenerateNodeSet, "coincident nodes");
      cplx lin = (g[i].transpose() * dx.cast<cplx>())(0);
      double q = std::abs(v[j] - v[i] - lin) / (d * modulus(d));
      ++r.pairs;
      if (q > r.value) r = {q, i, j, r.pairs};
    }
  }
  return r;
}

}  // namespace layerlab
