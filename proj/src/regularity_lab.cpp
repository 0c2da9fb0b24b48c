#include "layerlab/regularity_lab.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <json.hpp>

#include "layerlab/errors.hpp"
#include "layerlab/kernel_classes.hpp"
#include "layerlab/layer_potentials.hpp"

namespace layerlab {

using nlohmann::json;

namespace {

json parse_config(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string operator_label(const json& op) {
  if (op.contains("name")) return op["name"].get<std::string>();
  if (op.contains("preset")) return op["preset"].get<std::string>();
  return "custom";
}

std::vector<int> ladder_of(const json& cfg, const char* key, std::vector<int> def) {
  std::vector<int> l = cfg.contains(key) ? cfg[key].get<std::vector<int>>() : def;
  if (l.empty()) throw Error(ErrorCode::InvalidConfig, std::string(key) + " is empty");
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i] <= l[i - 1]) throw Error(ErrorCode::InvalidConfig, "refinement ladder must be strictly increasing");
  return l;
}

double relative_delta(double coarse, double fine) {
  if (coarse == 0.0) return fine == 0.0 ? 0.0 : INFINITY;
  return std::abs(fine - coarse) / std::abs(coarse);
}

}  // namespace

// ---------------------------------------------------------------- reports

bool ExperimentReport::pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

Verdict& ExperimentReport::check_le(const std::string& name, double measured, double tol, const std::string& note) {
  verdicts.push_back({name, measured, "<=", tol, 0, measured <= tol, note});
  return verdicts.back();
}

Verdict& ExperimentReport::check_ge(const std::string& name, double measured, double tol, const std::string& note) {
  verdicts.push_back({name, measured, ">=", tol, 0, measured >= tol, note});
  return verdicts.back();
}

Verdict& ExperimentReport::check_in(const std::string& name, double measured, double lo, double hi,
                                    const std::string& note) {
  verdicts.push_back({name, measured, "in", lo, hi, measured >= lo && measured <= hi, note});
  return verdicts.back();
}

void ExperimentReport::add(const std::string& experiment, long N, const std::string& quantity, double value) {
  rows.push_back({experiment, N, quantity, value});
}

std::string ExperimentReport::to_json() const {
  json j;
  j["kind"] = kind;
  j["seed"] = seed;
  j["pass"] = pass();
  j["verdicts"] = json::array();
  for (const auto& v : verdicts) {
    json e = {{"name", v.name}, {"measured", v.measured}, {"op", v.op}, {"pass", v.pass}};
    if (v.op == "in")
      e["tolerance"] = {v.tolerance, v.upper};
    else
      e["tolerance"] = v.tolerance;
    if (!v.note.empty()) e["note"] = v.note;
    j["verdicts"].push_back(e);
  }
  j["config"] = config.empty() ? json() : json::parse(config);
  return j.dump(2);
}

std::string ExperimentReport::csv() const {
  std::string s = "experiment,N,quantity,value\n";
  for (const auto& r : rows)
    s += csv_field(r.experiment) + "," + std::to_string(r.N) + "," + csv_field(r.quantity) + "," +
         fmt_double(r.value) + "\n";
  return s;
}

void ExperimentReport::write(const std::string& out_dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "data", ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
  auto put = [](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
    f << text;
  };
  put(fs::path(out_dir) / "report.json", to_json() + "\n");
  put(fs::path(out_dir) / "data" / (kind + ".csv"), csv());
}

// ---------------------------------------------------------------- densities

Density rough_antiderivative(const BoundarySurface& surface, double beta, double theta0) {
  if (surface.dim() != 2)
    throw Error(ErrorCode::RoughDensityUnsupported, "rough antiderivative densities live on curves");
  if (!(beta > 0 && beta <= 1)) throw Error(ErrorCode::InvalidConfig, "beta must lie in (0, 1]");
  const double half_period = std::sqrt(kPi) * std::tgamma(0.5 * (beta + 1)) / std::tgamma(0.5 * beta + 1);
  const double mean = half_period / kPi;
  auto quad = std::make_shared<boost::math::quadrature::tanh_sinh<double>>();
  auto F = [quad, beta, half_period](double u) {
    double k = std::floor(u / kPi), r = u - k * kPi;
    double g = r > 0 ? quad->integrate([beta](double s) { return std::pow(std::sin(s), beta); }, 0.0, r, 1e-15)
                     : 0.0;
    return k * half_period + g;
  };
  const double F0 = F(-theta0);
  auto mu = [F, F0, mean, theta0](double t) { return F(t - theta0) - F0 - mean * t; };
  auto nodes = std::make_shared<std::vector<double>>(surface.size());
  for (std::size_t i = 0; i < surface.size(); ++i) (*nodes)[i] = mu(surface.node(i).t);
  auto dmu = [beta, theta0, mean](double t) { return std::pow(std::abs(std::sin(t - theta0)), beta) - mean; };
  return Density([nodes, mu](const BPoint& p) { return cplx(p.index >= 0 ? (*nodes)[p.index] : mu(p.t)); },
                 [dmu](const BPoint& p) { return (dmu(p.t) / p.speed * p.tangent.cast<cplx>()).eval(); });
}

Density make_density(const std::string& json_text, const BoundarySurface& surface) {
  json j = parse_config(json_text);
  const std::string kind = j.value("kind", "");
  const int dim = surface.dim();
  auto coord = [](int k) {
    return Density::ambient([k](const Vec3& x) { return cplx(x[k]); },
                            [k](const Vec3&) { return CVec3(CVec3::Unit(k)); });
  };
  if (kind == "zero") return Density::constant(0.0);
  if (kind == "one") return Density::constant(1.0);
  if (kind == "constant") return Density::constant(cplx(j.value("re", 0.0), j.value("im", 0.0)));
  if (kind == "x1") return coord(0);
  if (kind == "x2") return coord(1);
  if (kind == "x3") return coord(2);
  if (kind == "nu1") return Density::normal(0);
  if (kind == "nu2") return Density::normal(1);
  if (kind == "cos" || kind == "sin") {
    if (dim == 3) return coord(2);
    int k = j.value("k", 1);
    bool c = kind == "cos";
    return Density::parametric(
        [k, c](double t) { return cplx(c ? std::cos(k * t) : std::sin(k * t)); },
        [k, c](double t) { return cplx(c ? -k * std::sin(k * t) : k * std::cos(k * t)); });
  }
  if (kind == "abs_sin_power") {
    if (dim == 3) throw Error(ErrorCode::RoughDensityUnsupported, "abs_sin_power needs a curve");
    double beta = j.value("beta", 0.5), t0 = j.value("theta0", 0.3);
    return Density::parametric([beta, t0](double t) { return cplx(std::pow(std::abs(std::sin(t - t0)), beta)); },
                               nullptr);
  }
  if (kind == "abs_x_power") {
    double beta = j.value("beta", 0.5);
    Vec3 x0 = Vec3::Zero();
    if (j.contains("x0"))
      for (std::size_t k = 0; k < j["x0"].size() && k < 3; ++k) x0[k] = j["x0"][k].get<double>();
    return Density::ambient([beta, x0](const Vec3& x) { return cplx(std::pow((x - x0).norm(), beta)); }, nullptr);
  }
  if (kind == "rough_antiderivative")
    return rough_antiderivative(surface, j.value("beta", 0.5), j.value("theta0", 0.3));
  throw Error(ErrorCode::InvalidConfig, "unknown density kind '" + kind + "'");
}

// ---------------------------------------------------------------- band fits

BandStats band_statistics(const BoundarySurface& surface, const std::vector<cplx>& values, int kmin, int kmax,
                          const Modulus& modulus, Separation sep) {
  if (sep == Separation::Parameter && surface.dim() != 2)
    throw Error(ErrorCode::UnsupportedDimension, "parameter separation needs a curve");
  BandStats b;
  const int nb = kmax - kmin + 1;
  for (int k = kmin; k <= kmax; ++k) b.k.push_back(k);
  b.max_diff.assign(nb, 0.0);
  b.max_quot.assign(nb, 0.0);
  b.count.assign(nb, 0);
  const std::size_t N = surface.size();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      double d;
      if (sep == Separation::Parameter) {
        d = std::abs(surface.node(i).t - surface.node(j).t);
        d = std::min(d, 2 * kPi - d);
      } else {
        d = (surface.node(i).x - surface.node(j).x).norm();
      }
      int k = static_cast<int>(std::floor(-std::log2(d)));
      if (k < kmin || k > kmax) continue;
      double diff = std::abs(values[i] - values[j]);
      int q = k - kmin;
      b.max_diff[q] = std::max(b.max_diff[q], diff);
      b.max_quot[q] = std::max(b.max_quot[q], diff / modulus(d));
      ++b.count[q];
    }
  return b;
}

double fit_exponent(const BandStats& b, std::size_t min_pairs, std::size_t min_bands) {
  std::vector<double> xs, ys;
  for (std::size_t q = 0; q < b.k.size(); ++q) {
    if (b.count[q] < min_pairs || !(b.max_diff[q] > 0)) continue;
    xs.push_back(-b.k[q] * std::log(2.0));
    ys.push_back(std::log(b.max_diff[q]));
  }
  if (xs.size() < min_bands) return NAN;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------- experiments

ExperimentReport run_identity_suite(const std::string& config_json) {
  json cfg = parse_config(config_json);
  ExperimentReport rep;
  rep.kind = "verify-identities";
  rep.seed = cfg.value("seed", 0ull);
  rep.config = cfg.dump();
  const std::vector<int> ladder = ladder_of(cfg, "ladder", {64, 128, 256});
  const double tol = cfg.value("tolerance", 1e-5);
  const double min_order = cfg.value("min_order", 2.0);
  const double saturation = cfg.value("saturation", 1e-9);
  std::vector<std::string> identities = cfg.value("identities", std::vector<std::string>{"slay2", "wregn", "wstar", "gradQ", "pljr"});
  json ops = cfg.value("operators", json::array({{{"preset", "laplace"}, {"n", 2}}}));
  json geos = cfg.value("geometries", json::array({{{"kind", "circle"}}}));
  json dens = cfg.value("densities", json::array({{{"kind", "one"}}}));
  const json g_spec = cfg.value("g", json{{"kind", "nu1"}});

  for (const auto& op : ops) {
    CoefficientVector coeffs = coefficients_from_json(op.dump());
    for (const auto& geo : geos) {
      for (const auto& den : dens) {
        std::map<std::string, std::vector<double>> res;
        for (int N : ladder) {
          ShapeSpec spec = ShapeSpec::from_json(geo.dump());
          spec.nodes = N;
          BoundarySurface s = BoundarySurface::make(spec);
          if (coeffs.n != s.dim()) throw Error(ErrorCode::UnsupportedDimension, "operator and geometry dimensions differ");
          LayerContext ctx(coeffs, s);
          Density mu = make_density(den.dump(), s), g = make_density(g_spec.dump(), s);
          for (const auto& id : identities) {
            double r = 0;
            if (id == "slay2") {
              r = residual_slay2(ctx, mu, 0, 1);
            } else if (id == "wregn") {
              r = residual_wregn(ctx, mu, 0, 1);
            } else if (id == "wstar") {
              r = residual_wstar(ctx, mu);
            } else if (id == "gradQ") {
              for (int j = 0; j < s.dim(); ++j)
                for (int h = 0; h < s.dim(); ++h) r = std::max(r, residual_gradQ(ctx, g, mu, j, h));
            } else if (id == "pljr") {
              for (int q = 0; q < s.dim(); ++q) r = std::max(r, residual_pljr(ctx, g, mu, 0, 1, q));
            } else {
              throw Error(ErrorCode::InvalidConfig, "unknown identity '" + id + "'");
            }
            res[id].push_back(r);
          }
        }
        const std::string base = operator_label(op) + "/" + ShapeSpec::from_json(geo.dump()).label() + "/" +
                                 den.value("kind", std::string("?"));
        for (const auto& id : identities) {
          const auto& v = res[id];
          for (std::size_t k = 0; k < ladder.size(); ++k) rep.add(base + "/" + id, ladder[k], "residual", v[k]);
          rep.check_le(base + "/" + id + " residual at N=" + std::to_string(ladder.back()), v.back(), tol);
          if (ladder.size() >= 2) {
            double order = std::log2(v.front() / v.back()) / std::log2(double(ladder.back()) / ladder.front());
            rep.add(base + "/" + id, ladder.back(), "order", std::isfinite(order) ? order : 0.0);
            Verdict& vd = rep.check_ge(base + "/" + id + " empirical order", std::isfinite(order) ? order : 0.0,
                                       min_order);
            if (v.back() <= saturation) {
              vd.pass = true;
              vd.note = "saturated: final residual " + fmt_double(v.back()) + " <= " + fmt_double(saturation);
            }
          }
        }
      }
    }
  }
  return rep;
}

ExperimentReport measure_regularity_gain(const std::string& config_json) {
  json cfg = parse_config(config_json);
  ExperimentReport rep;
  rep.kind = "measure-gain";
  rep.seed = cfg.value("seed", 0ull);
  rep.config = cfg.dump();
  CoefficientVector coeffs = coefficients_from_json(cfg.value("operator", json{{"preset", "laplace"}, {"n", 2}}).dump());
  json geo = cfg.value("geometry", json{{"kind", "kite"}, {"N", 2048}});
  ShapeSpec spec = ShapeSpec::from_json(geo.dump());
  if (spec.kind == ShapeKind::Sphere || spec.kind == ShapeKind::Ellipsoid)
    throw Error(ErrorCode::RoughDensityUnsupported, "regularity measurements run on curves");
  BoundarySurface s = BoundarySurface::make(spec);
  LayerContext ctx(coeffs, s);
  const long N = static_cast<long>(s.size());
  const std::string tag = spec.label();
  const std::string sep_name = cfg.value("separation", std::string("parameter"));
  if (sep_name != "parameter" && sep_name != "euclidean")
    throw Error(ErrorCode::InvalidConfig, "separation must be 'parameter' or 'euclidean'");
  const Separation sep = sep_name == "parameter" ? Separation::Parameter : Separation::Euclidean;

  // C^{1,beta} input: exponent of the input derivative against that of M12 W mu
  json main = cfg.value("holder", json::object());
  json den = main.value("density", json{{"kind", "rough_antiderivative"}, {"beta", 0.5}, {"theta0", 0.39269908169872414}});
  const double beta = den.value("beta", 0.5);
  auto bands = main.value("bands", std::vector<int>{2, 6});
  Density mu = make_density(den.dump(), s);
  std::vector<cplx> dmu = tangential_M(s, 0, 1, mu);
  std::vector<cplx> w = ctx.W(mu);
  std::vector<cplx> dw = tangential_M(s, 0, 1, w);
  std::vector<cplx> ddw = tangential_M(s, 0, 1, dw);
  const Modulus pw = Modulus::power(beta);
  BandStats bin = band_statistics(s, dmu, bands[0], bands[1], pw, sep);
  BandStats bout = band_statistics(s, dw, bands[0], bands[1], pw, sep);
  BandStats bsec = band_statistics(s, ddw, bands[0], bands[1], pw, sep);
  for (std::size_t q = 0; q < bin.k.size(); ++q) {
    std::string kq = "band " + std::to_string(bin.k[q]);
    rep.add(tag + "/M12 mu", N, kq + " max diff", bin.max_diff[q]);
    rep.add(tag + "/M12 W mu", N, kq + " max diff", bout.max_diff[q]);
    rep.add(tag + "/M12 M12 W mu", N, kq + " max diff", bsec.max_diff[q]);
    rep.add(tag + "/M12 W mu", N, kq + " pairs", static_cast<double>(bout.count[q]));
  }
  double e_in = fit_exponent(bin), e_out = std::min(fit_exponent(bout), 1.0), e_sec = fit_exponent(bsec);
  rep.add(tag + "/M12 mu", N, "fitted exponent", e_in);
  rep.add(tag + "/M12 W mu", N, "fitted exponent", e_out);
  rep.add(tag + "/M12 M12 W mu", N, "fitted exponent (illustrative)", e_sec);
  rep.check_in("input M12 mu fitted exponent", e_in, beta - 0.05, beta + 0.05, "self-validation of the fit");
  rep.check_in("M12 W mu fitted exponent", e_out, beta - 0.1, 1.0);

  // C^{1,1} input: omega_1 quotients per band stay comparable
  json one = cfg.value("omega1", json::object());
  json den1 = one.value("density", json{{"kind", "rough_antiderivative"}, {"beta", 1.0}, {"theta0", 0.39269908169872414}});
  auto bands1 = one.value("bands", std::vector<int>{4, 7});
  Density mu1 = make_density(den1.dump(), s);
  std::vector<cplx> dw1 = tangential_M(s, 0, 1, ctx.W(mu1));
  BandStats b1 = band_statistics(s, dw1, bands1[0], bands1[1], Modulus::omega(1.0), sep);
  double qmax = 0, qmin = INFINITY;
  std::size_t used = 0;
  for (std::size_t q = 0; q < b1.k.size(); ++q) {
    rep.add(tag + "/M12 W mu1", N, "band " + std::to_string(b1.k[q]) + " omega1 quotient", b1.max_quot[q]);
    if (b1.count[q] < 30) continue;
    ++used;
    qmax = std::max(qmax, b1.max_quot[q]);
    qmin = std::min(qmin, b1.max_quot[q]);
  }
  double ratio = used >= 4 && qmin > 0 ? qmax / qmin : INFINITY;
  rep.add(tag + "/M12 W mu1", N, "omega1 band ratio", ratio);
  rep.check_le("omega1 band quotient ratio over " + std::to_string(used) + " bands", ratio, 2.0);
  return rep;
}

ExperimentReport kernel_norm_report(const std::string& config_json) {
  json cfg = parse_config(config_json);
  ExperimentReport rep;
  rep.kind = "kernel-norms";
  rep.seed = cfg.value("seed", 7ull);
  rep.config = cfg.dump();
  json geo = cfg.value("geometry", json{{"kind", "circle"}, {"N", 256}});
  CoefficientVector coeffs = coefficients_from_json(cfg.value("operator", json{{"preset", "laplace"}, {"n", 2}}).dump());
  const int refine = cfg.value("refine", 2);
  const double max_delta = cfg.value("max_delta", 0.05);
  TripleSampler ts;
  ts.seed = rep.seed;
  ts.count = cfg.value("triples", 10000);
  PairSampler ps;
  ps.seed = rep.seed;

  struct Entry {
    std::string name;
    KernelHandle K;
    bool sharp;
  };
  std::map<std::string, std::vector<double>> first, second, sharp;
  std::vector<std::string> order;
  const ShapeSpec spec0 = ShapeSpec::from_json(geo.dump());
  const std::string tag = spec0.label();
  for (int level = 0; level < 2; ++level) {
    ShapeSpec spec = spec0;
    if (level == 1) {
      if (spec.kind == ShapeKind::Sphere || spec.kind == ShapeKind::Ellipsoid)
        spec.level += 1;
      else
        spec.nodes *= refine;
    }
    BoundarySurface s = BoundarySurface::make(spec);
    const int n = s.dim();
    FundamentalSolution fs(coeffs);
    const double nn = n;
    std::vector<Entry> menu;
    menu.push_back({"zero", zero_kernel({nn - 1, nn, 1}), true});
    menu.push_back({"Xi[x1]", xi_kernel(make_density(R"({"kind":"x1"})", s), 1.0), false});
    menu.push_back({"dS/dx1", convolution_kernel([&fs](const Vec3& z) { return fs.grad(z)[0]; }, {nn - 1, nn, 1}, "dS/dx1"), false});
    menu.push_back({"d2S/dx1dx2", convolution_kernel([&fs](const Vec3& z) { return fs.hess(z)(0, 1); }, {nn, nn + 1, 1}, "d2S/dx1dx2"), false});
    menu.push_back({"gradT d1S", KernelHandle{[&fs](const BPoint& x, const BPoint& y) {
                                                CMat3 H = fs.hess(x.x - y.x);
                                                cplx k = H(0, 0);
                                                for (int l = 0; l < 3; ++l) k -= H(l, 0) * x.nu[l] * x.nu[0];
                                                return k;
                                              },
                                              {nn, nn + 1, 1}, {}, {}, "gradT d1S"},
                    false});
    if (n == 2) {
      menu.push_back({"odd z1/|z|^2", convolution_kernel([](const Vec3& z) { return cplx(z[0] / z.squaredNorm()); }, {1, 2, 1}, "odd z1/|z|^2", 1.0, -1), true});
      menu.push_back({"odd z1 z2^2/|z|^4", convolution_kernel([](const Vec3& z) { double r2 = z.squaredNorm(); return cplx(z[0] * z[1] * z[1] / (r2 * r2)); }, {1, 2, 1}, "odd z1 z2^2/|z|^4", 1.0, -1), true});
    }
    for (auto& e : menu) {
      if (level == 0) order.push_back(e.name);
      KernelNormReport r = e.sharp ? sharp_norm(s, e.K, e.K.exps, {}, ps, ts) : norm_Ks1s2s3(s, e.K, e.K.exps, ps, ts);
      first[e.name].push_back(r.first);
      second[e.name].push_back(r.second);
      rep.add(tag + "/" + e.name, static_cast<long>(s.size()), "first", r.first);
      rep.add(tag + "/" + e.name, static_cast<long>(s.size()), "second", r.second);
      if (r.sharp) {
        sharp[e.name].push_back(*r.sharp);
        rep.add(tag + "/" + e.name, static_cast<long>(s.size()), "sharp", *r.sharp);
      }
    }
    LayerContext ctx(coeffs, s);
    double g = 0;
    for (int z = 0; z < n; ++z)
      for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j) g = std::max(g, gauss_truncated_sup(ctx, z, h, j).value);
    sharp["gauss"].push_back(g);
    rep.add(tag + "/gauss", static_cast<long>(s.size()), "sharp", g);
  }
  rep.check_le("zero kernel norm", first["zero"][0] + second["zero"][0] + sharp["zero"][0], 0.0);
  rep.check_le("Xi[x1] first component", std::max(first["Xi[x1]"][0], first["Xi[x1]"][1]), 1.01);
  rep.check_le("Xi[x1] second component", std::max(second["Xi[x1]"][0], second["Xi[x1]"][1]), 1.01);
  for (const auto& name : order) {
    if (name == "zero") continue;
    rep.add(tag + "/" + name, 0, "first refinement delta", relative_delta(first[name][0], first[name][1]));
    rep.add(tag + "/" + name, 0, "second refinement delta", relative_delta(second[name][0], second[name][1]));
  }
  const std::string hs = "d2S/dx1dx2";
  rep.check_le(hs + " first refinement delta", relative_delta(first[hs][0], first[hs][1]), max_delta);
  rep.check_le(hs + " second refinement delta", relative_delta(second[hs][0], second[hs][1]), max_delta);
  for (const auto& [name, v] : sharp) {
    if (name == "zero") continue;
    double growth = (v[1] - v[0]) / v[0];
    rep.add(tag + "/" + name, 0, "sharp growth", growth);
    rep.check_le(name + " truncated-integral sup growth", growth, max_delta);
  }
  return rep;
}

ExperimentReport decomposition_probe(const std::string& config_json) {
  json cfg = parse_config(config_json);
  ExperimentReport rep;
  rep.kind = "decompose-fs";
  rep.seed = cfg.value("seed", 0ull);
  rep.config = cfg.dump();
  const double rmin = cfg.value("rmin", 1e-8), rmax = cfg.value("rmax", 1.0);
  const int points = cfg.value("points", 33);
  if (!(rmin > 0 && rmax > rmin && points >= 2)) throw Error(ErrorCode::InvalidConfig, "bad radius grid");
  json cases = cfg.value("cases", json::array({{{"name", "laplace2d"}, {"operator", {{"preset", "laplace"}, {"n", 2}}}}}));
  for (const auto& c : cases) {
    const std::string name = c.value("name", "case");
    CoefficientVector coeffs = coefficients_from_json(c.at("operator").dump());
    FundamentalSolution fs(coeffs);
    const int n = fs.dim();
    Vec3 dir(1, 0, 0);
    if (c.contains("direction"))
      for (int k = 0; k < n && k < static_cast<int>(c["direction"].size()); ++k) dir[k] = c["direction"][k].get<double>();
    if (n == 2) dir[2] = 0;
    dir.normalize();
    auto R = [&](double r) { return fs.remainder(r * dir); };
    double maxabs = 0, bound_ratio = 0;
    for (int k = 0; k < points; ++k) {
      double r = rmin * std::pow(rmax / rmin, double(k) / (points - 1));
      cplx v = R(r);
      rep.add(name, k, "r", r);
      rep.add(name, k, "Re remainder", v.real());
      rep.add(name, k, "Im remainder", v.imag());
      maxabs = std::max(maxabs, std::abs(v));
      if (r <= 0.1) bound_ratio = std::max(bound_ratio, std::abs(v) / ((1 + r) / (4 * kPi)));
    }
    const bool drift_free = coeffs.a1 == CVec3::Zero();
    switch (fs.family()) {
      case RadialFamily::Laplace:
        if (drift_free) rep.check_le(name + " max |remainder| (identically zero)", maxabs, 0.0);
        break;
      case RadialFamily::Helmholtz:
      case RadialFamily::ModifiedHelmholtz:
        if (n == 2) {
          double d = std::abs(R(1e-4) - R(1e-6));
          rep.add(name, 0, "|R(1e-4) - R(1e-6)|", d);
          rep.check_le(name + " finite limit |R(1e-4) - R(1e-6)|", d, 1e-3);
        } else if (fs.family() == RadialFamily::ModifiedHelmholtz && coeffs.a2 == Mat3::Identity() && drift_free) {
          rep.check_le(name + " max |R| / ((1+r)/(4 pi)) on r <= 0.1", bound_ratio, 1.0);
        }
        break;
    }
    rep.add(name, 0, "max |remainder|", maxabs);
  }
  return rep;
}

ExperimentReport run_experiment(const std::string& command, const std::string& config_json) {
  if (command == "verify-identities") return run_identity_suite(config_json);
  if (command == "measure-gain") return measure_regularity_gain(config_json);
  if (command == "kernel-norms") return kernel_norm_report(config_json);
  if (command == "decompose-fs") return decomposition_probe(config_json);
  throw Error(ErrorCode::InvalidConfig, "unknown experiment '" + command + "'");
}

}  // namespace layerlab
