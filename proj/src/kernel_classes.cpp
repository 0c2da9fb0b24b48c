#include "layerlab/kernel_classes.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "layerlab/errors.hpp"
#include "layerlab/quadrature.hpp"

namespace layerlab {

namespace {

cplx checked(const KernelHandle& K, const BPoint& x, const BPoint& y) {
  cplx v = K.eval(x, y);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorCode::NonFiniteKernelValue,
                K.name + " is not finite at nodes " + std::to_string(x.index) + ", " + std::to_string(y.index));
  return v;
}

double dist(const BoundarySurface& s, int a, int b) { return (s.node(a).x - s.node(b).x).norm(); }

}  // namespace

KernelHandle convolution_kernel(std::function<cplx(const Vec3&)> k, KernelExponents exps, std::string name,
                                std::optional<double> homogeneity, std::optional<int> parity) {
  return {[k](const BPoint& x, const BPoint& y) { return k(x.x - y.x); }, exps, homogeneity, parity,
          std::move(name)};
}

KernelHandle zero_kernel(KernelExponents exps) {
  return {[](const BPoint&, const BPoint&) { return cplx(0.0); }, exps, {}, {}, "zero"};
}

KernelHandle xi_kernel(const Density& mu, double alpha) {
  return {[mu](const BPoint& x, const BPoint& y) { return mu(x) - mu(y); }, {-alpha, 0.0, alpha}, {}, -1, "Xi"};
}

std::vector<Triple> TripleSampler::triples(const BoundarySurface& surface) const {
  const int N = static_cast<int>(surface.size());
  if (N < 3) throw Error(ErrorCode::DegenerateNodeSet, "need at least three nodes");
  const double diam = surface.diameter();
  std::mt19937_64 rng(seed);
  std::vector<Triple> out;
  std::vector<double> d(N);
  std::vector<std::vector<int>> members(bands);
  std::vector<int> far;
  std::size_t idle = 0;
  while (out.size() < count && idle < 64) {
    int xp = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
    for (auto& m : members) m.clear();
    for (int j = 0; j < N; ++j) {
      d[j] = dist(surface, xp, j);
      if (j == xp) continue;
      double q = d[j] / diam;
      int b = q >= 1.0 ? 0 : static_cast<int>(std::floor(-std::log2(q)));
      if (b < bands) members[b].push_back(j);
    }
    std::size_t before = out.size();
    for (int b = 0; b < bands && out.size() < count; ++b) {
      if (members[b].empty()) continue;
      int xpp = members[b][rng() % members[b].size()];
      far.clear();
      for (int j = 0; j < N; ++j)
        if (d[j] >= 2 * d[xpp]) far.push_back(j);
      if (far.empty()) continue;
      out.push_back({xp, xpp, far[rng() % far.size()]});
    }
    idle = out.size() == before ? idle + 1 : 0;
  }
  return out;
}

double norm_Ks(const BoundarySurface& surface, const KernelHandle& K, double s, const PairSampler& sampler) {
  double m = 0;
  for (auto [i, j] : sampler.pairs(surface)) {
    double r = std::pow(dist(surface, i, j), s);
    m = std::max({m, std::abs(checked(K, surface.node(i), surface.node(j))) * r,
                  std::abs(checked(K, surface.node(j), surface.node(i))) * r});
  }
  return m;
}

KernelNormReport norm_Ks1s2s3(const BoundarySurface& surface, const KernelHandle& K, const KernelExponents& e,
                              const PairSampler& pairs, const TripleSampler& triples) {
  KernelNormReport rep;
  rep.name = K.name;
  rep.exps = e;
  rep.seed = triples.seed;
  for (auto [a, b] : pairs.pairs(surface)) {
    double r = std::pow(dist(surface, a, b), e.s1);
    for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
      double v = std::abs(checked(K, surface.node(i), surface.node(j))) * r;
      ++rep.pairs;
      if (v > rep.first) {
        rep.first = v;
        rep.first_at = {i, j};
      }
    }
  }
  for (const Triple& t : triples.triples(surface)) {
    const BPoint &xp = surface.node(t.xp), &xpp = surface.node(t.xpp), &y = surface.node(t.y);
    double q = std::abs(checked(K, xp, y) - checked(K, xpp, y)) * std::pow(dist(surface, t.xp, t.y), e.s2) /
               std::pow(dist(surface, t.xp, t.xpp), e.s3);
    ++rep.triples;
    if (q > rep.second) {
      rep.second = q;
      rep.second_at = {t.xp, t.xpp, t.y};
    }
  }
  return rep;
}

KernelNormReport sharp_norm(const BoundarySurface& surface, const KernelHandle& K, const KernelExponents& e,
                            const std::vector<double>& radii, const PairSampler& pairs,
                            const TripleSampler& triples) {
  KernelNormReport rep = norm_Ks1s2s3(surface, K, e, pairs, triples);
  TruncatedSup ts = truncated_sup(
      surface, [&](int i, int j) { return checked(K, surface.node(i), surface.node(j)); }, radii);
  rep.sharp = ts.value;
  rep.sharp_at = ts.at;
  rep.sharp_radius = ts.radius;
  return rep;
}

ProductCheck check_product_inequality(const BoundarySurface& surface, const KernelHandle& K1,
                                      const KernelExponents& e1, const KernelHandle& K2,
                                      const KernelExponents& e2, const std::vector<Triple>& triples,
                                      const KernelNormReport& n1, const KernelNormReport& n2, double inflate) {
  ProductCheck pc;
  const double c = inflate * n1.norm() * inflate * n2.norm();
  for (const Triple& t : triples) {
    const BPoint &xp = surface.node(t.xp), &xpp = surface.node(t.xpp), &y = surface.node(t.y);
    double dpy = dist(surface, t.xp, t.y), dpp = dist(surface, t.xp, t.xpp);
    double lhs = std::abs(K1.eval(xp, y) * K2.eval(xp, y) - K1.eval(xpp, y) * K2.eval(xpp, y));
    double rhs = c * (std::pow(dpp, e1.s3) / std::pow(dpy, e1.s2 + e2.s1) +
                      std::pow(2.0, std::abs(e1.s1)) * std::pow(dpp, e2.s3) / std::pow(dpy, e2.s2 + e1.s1));
    ++pc.samples;
    if (lhs > rhs) ++pc.violations;
    if (rhs > 0) pc.worst_ratio = std::max(pc.worst_ratio, lhs / rhs);
    else if (lhs > 0) pc.worst_ratio = INFINITY;
  }
  return pc;
}

ProductCheck check_embedding(const BoundarySurface& surface, const KernelHandle& K, const KernelExponents& e,
                             double a, const std::vector<Triple>& triples) {
  ProductCheck pc;
  const double bound = std::pow(2.0, -a);
  for (const Triple& t : triples) {
    double dpy = dist(surface, t.xp, t.y), dpp = dist(surface, t.xp, t.xpp);
    double diff = std::abs(K.eval(surface.node(t.xp), surface.node(t.y)) -
                           K.eval(surface.node(t.xpp), surface.node(t.y)));
    double orig = diff * std::pow(dpy, e.s2) / std::pow(dpp, e.s3);
    double lowered = diff * std::pow(dpy, e.s2 - a) / std::pow(dpp, e.s3 - a);
    ++pc.samples;
    if (lowered > bound * orig * (1 + 1e-12)) ++pc.violations;
    if (orig > 0) pc.worst_ratio = std::max(pc.worst_ratio, lowered / (bound * orig));
  }
  return pc;
}

ProductCheck check_frozen_direction(const BoundarySurface& surface,
                                    const std::function<double(const Vec3& dir, double r)>& F, double lip,
                                    const std::vector<Triple>& triples) {
  ProductCheck pc;
  const double bound = lip * (2 + surface.diameter());
  for (const Triple& t : triples) {
    Vec3 u = surface.node(t.xp).x - surface.node(t.y).x, v = surface.node(t.xpp).x - surface.node(t.y).x;
    double ru = u.norm(), rv = v.norm();
    double q = std::abs(F(u / ru, ru) - F(v / rv, rv)) * ru / dist(surface, t.xp, t.xpp);
    ++pc.samples;
    if (q > bound) ++pc.violations;
    pc.worst_ratio = std::max(pc.worst_ratio, q / bound);
  }
  return pc;
}

std::string KernelNormReport::to_json(const BoundarySurface& surface) const {
  auto coords = [&](int i) {
    const Vec3& x = surface.node(i).x;
    return i < 0 ? nlohmann::json() : nlohmann::json::array({x[0], x[1], x[2]});
  };
  nlohmann::json j;
  j["kernel"] = name;
  j["exponents"] = {exps.s1, exps.s2, exps.s3};
  j["first"] = first;
  j["second"] = second;
  j["first_at"] = {coords(first_at[0]), coords(first_at[1])};
  j["second_at"] = {coords(second_at[0]), coords(second_at[1]), coords(second_at[2])};
  if (sharp) {
    j["sharp"] = *sharp;
    j["sharp_at"] = coords(sharp_at);
    j["sharp_radius"] = sharp_radius;
  }
  j["pairs"] = pairs;
  j["triples"] = triples;
  j["seed"] = seed;
  return j.dump();
}

}  // namespace layerlab
