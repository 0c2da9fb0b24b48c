#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "layerlab/errors.hpp"
#include "layerlab/regularity_lab.hpp"
#include "oracles.hpp"

using namespace layerlab;

namespace {

BoundarySurface shape(const std::string& json) { return BoundarySurface::make(ShapeSpec::from_json(json)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kSmallSuite = R"({
  "operators": [{"n": 2, "preset": "laplace"}, {"n": 2, "preset": "helmholtz", "kappa": 1.0}],
  "geometries": [{"kind": "circle"}],
  "densities": [{"kind": "one"}, {"kind": "cos"}],
  "identities": ["slay2", "wregn", "wstar", "gradQ", "pljr"],
  "g": {"kind": "nu1"},
  "ladder": [32, 64],
  "tolerance": 1e-5,
  "min_order": 2.0,
  "saturation": 1e-9
})";

}  // namespace

TEST_CASE("rough antiderivative against the closed form for beta = 1") {
  // int_0^u |sin s| ds = 2k + 1 - cos(u - k pi) with k = floor(u / pi); the mean slope is 2 / pi
  const double t0 = 0.7;
  auto F = [](double u) {
    double k = std::floor(u / oracle::pi);
    return 2 * k + 1 - std::cos(u - k * oracle::pi);
  };
  auto s = shape(R"({"kind":"kite","N":128})");
  Density mu = rough_antiderivative(s, 1.0, t0);
  for (std::size_t i = 0; i < s.size(); i += 5) {
    double t = s.node(i).t;
    double exact = F(t - t0) - F(-t0) - 2 / oracle::pi * t;
    CHECK(std::abs(mu(s.node(i)).real() - exact) < 1e-12);
    CHECK(std::abs(mu(s.at_param(t)) - mu(s.node(i))) < 1e-12);
  }
  // periodic
  CHECK(std::abs(mu(s.at_param(2 * oracle::pi - 1e-9)) - mu(s.node(0))) < 1e-8);
}

TEST_CASE("rough antiderivative gradient is the tangential derivative") {
  auto s = shape(R"({"kind":"ellipse","a":2,"b":1,"N":64})");
  Density mu = rough_antiderivative(s, 0.5, 0.3);
  for (double t : {0.1, 1.3, 4.0}) {
    const double h = 1e-5;
    BPoint p = s.at_param(t);
    cplx fd = (mu(s.at_param(t + h)) - mu(s.at_param(t - h))) / (2 * h * p.speed);
    CHECK(std::abs((mu.tgrad(p).transpose() * p.tangent.cast<cplx>())(0) - fd) < 1e-6);
  }
}

TEST_CASE("band fits recover known exponents") {
  auto s = shape(R"({"kind":"circle","N":1024})");
  auto pw = Modulus::power(0.5);
  auto rough = make_density(R"({"kind":"abs_sin_power","beta":0.5,"theta0":0.39269908169872414})", s).sample(s);
  double e = fit_exponent(band_statistics(s, rough, 2, 6, pw, Separation::Parameter));
  CHECK(e == doctest::Approx(0.5).epsilon(0.1));
  auto smooth = make_density(R"({"kind":"x1"})", s).sample(s);
  double e1 = fit_exponent(band_statistics(s, smooth, 2, 6, pw, Separation::Euclidean));
  CHECK(e1 == doctest::Approx(1.0).epsilon(0.05));
  // too few bands gives no fit
  CHECK(std::isnan(fit_exponent(band_statistics(s, smooth, 2, 4, pw))));
  auto b = band_statistics(s, smooth, 2, 6, pw);
  for (std::size_t q = 0; q < b.k.size(); ++q) {
    CHECK(b.count[q] > 0);
    CHECK(b.max_quot[q] >= b.max_diff[q]);
  }
}

TEST_CASE("density catalogue") {
  auto c = shape(R"({"kind":"circle","N":32})");
  auto cosd = make_density(R"({"kind":"cos","k":2})", c);
  for (const auto& p : c.nodes()) CHECK(std::abs(cosd(p) - std::cos(2 * p.t)) < 1e-15);
  auto k = make_density(R"({"kind":"constant","re":1.5,"im":-2})", c);
  CHECK(k.constant_value().value() == cplx(1.5, -2));
  auto sphere = shape(R"({"kind":"sphere","level":1})");
  auto cos3 = make_density(R"({"kind":"cos"})", sphere);
  CHECK(cos3(sphere.node(3)) == sphere.node(3).x[2]);
  CHECK(code_of([&] { make_density(R"({"kind":"rough_antiderivative"})", sphere); }) ==
        ErrorCode::RoughDensityUnsupported);
  CHECK(code_of([&] { make_density(R"({"kind":"abs_sin_power"})", sphere); }) == ErrorCode::RoughDensityUnsupported);
  CHECK(code_of([&] { make_density(R"({"kind":"mystery"})", c); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { make_density(R"({"kind":"rough_antiderivative","beta":1.5})", c); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("configuration errors") {
  CHECK(code_of([] { run_experiment("bogus", "{}"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { run_experiment("verify-identities", "[1, 2]"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { run_experiment("verify-identities", "{"); }) == ErrorCode::InvalidConfig);
  std::string bad_ladder = kSmallSuite;
  bad_ladder.replace(bad_ladder.find("[32, 64]"), 8, "[64, 32]");
  CHECK(code_of([&] { run_identity_suite(bad_ladder); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] {
          measure_regularity_gain(R"({"operator":{"n":3,"preset":"laplace"},"geometry":{"kind":"sphere"}})");
        }) == ErrorCode::RoughDensityUnsupported);
  CHECK(code_of([] {
          run_identity_suite(R"({"operators":[{"n":2,"preset":"laplace"}],"geometries":[{"kind":"sphere"}],
                                 "densities":[{"kind":"one"}],"identities":["wstar"],"ladder":[1]})");
        }) == ErrorCode::UnsupportedDimension);
  CHECK(code_of([] { decomposition_probe(R"({"rmin": 1.0, "rmax": 0.5})"); }) == ErrorCode::InvalidConfig);
  auto sphere = shape(R"({"kind":"sphere","level":1})");
  CHECK(code_of([&] {
          band_statistics(sphere, std::vector<cplx>(sphere.size()), 1, 3, Modulus::power(1), Separation::Parameter);
        }) == ErrorCode::UnsupportedDimension);
}

TEST_CASE("small identity suite passes with order verdicts") {
  ExperimentReport r = run_identity_suite(kSmallSuite);
  CHECK(r.kind == "verify-identities");
  CHECK(r.verdicts.size() == 2 * 2 * 5 * 2);
  for (const auto& v : r.verdicts) {
    CAPTURE(v.name);
    CHECK(v.pass);
  }
  CHECK(r.pass());
}

TEST_CASE("surface identity suite runs the adjoint check") {
  ExperimentReport r = run_identity_suite(R"({"operators":[{"n":3,"preset":"laplace"}],
      "geometries":[{"kind":"sphere"}],"densities":[{"kind":"one"},{"kind":"cos"}],
      "identities":["wstar"],"ladder":[1, 2],"tolerance":1e-5})");
  CHECK(r.pass());
}

TEST_CASE("decomposition probe verdicts") {
  std::string cfg = slurp(std::filesystem::path(LAYERLAB_CONFIG_DIR) / "decompose_fs.json");
  ExperimentReport r = decomposition_probe(cfg);
  CHECK(r.pass());
  CHECK(!r.rows.empty());
  ExperimentReport again = decomposition_probe(cfg);
  CHECK(r.csv() == again.csv());
  CHECK(r.to_json() == again.to_json());
}

TEST_CASE("kernel norm report is reproducible and seed dependent") {
  const std::string cfg = R"({"seed":3,"operator":{"n":2,"preset":"laplace"},
      "geometry":{"kind":"circle","N":64},"refine":2,"triples":500,"max_delta":0.2})";
  ExperimentReport a = kernel_norm_report(cfg), b = kernel_norm_report(cfg);
  CHECK(a.csv() == b.csv());
  std::string other = cfg;
  other.replace(other.find("\"seed\":3"), 8, "\"seed\":4");
  CHECK(kernel_norm_report(other).csv() != a.csv());
}

TEST_CASE("report files") {
  ExperimentReport r;
  r.kind = "probe";
  r.add("a,b", 64, "say \"hi\"", 0.1);
  r.add("plain", 128, "q", 1.0 / 3);
  r.check_le("small", 1e-10, 1e-8);
  r.check_in("range", 2.0, 0.0, 1.0);
  CHECK(!r.pass());
  std::string csv = r.csv();
  CHECK(csv == "experiment,N,quantity,value\n\"a,b\",64,\"say \"\"hi\"\"\",0.10000000000000001\n"
               "plain,128,q,0.33333333333333331\n");
  auto dir = std::filesystem::temp_directory_path() / "layerlab_report_test";
  std::filesystem::remove_all(dir);
  r.write(dir.string());
  CHECK(slurp(dir / "data" / "probe.csv") == csv);
  CHECK(slurp(dir / "report.json").find("\"pass\": false") != std::string::npos);
  std::filesystem::remove_all(dir);
}
