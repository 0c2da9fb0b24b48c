#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "layerlab/density.hpp"
#include "layerlab/holder.hpp"

namespace layerlab {

struct Verdict {
  std::string name;
  double measured = 0;
  std::string op;  // "<=", ">=", "in"
  double tolerance = 0, upper = 0;
  bool pass = false;
  std::string note;
};

struct DataRow {
  std::string experiment;
  long N = 0;
  std::string quantity;
  double value = 0;
};

struct ExperimentReport {
  std::string kind;
  std::uint64_t seed = 0;
  std::string config;
  std::vector<Verdict> verdicts;
  std::vector<DataRow> rows;

  bool pass() const;
  Verdict& check_le(const std::string& name, double measured, double tol, const std::string& note = "");
  Verdict& check_ge(const std::string& name, double measured, double tol, const std::string& note = "");
  Verdict& check_in(const std::string& name, double measured, double lo, double hi, const std::string& note = "");
  void add(const std::string& experiment, long N, const std::string& quantity, double value);

  std::string to_json() const;
  std::string csv() const;
  // Writes report.json and data/<kind>.csv below out_dir.
  void write(const std::string& out_dir) const;
};

// Named analytic densities, e.g. {"kind":"cos"} or
// {"kind":"rough_antiderivative","beta":0.5,"theta0":0.3}.
Density make_density(const std::string& json_text, const BoundarySurface& surface);

// mu(t) = int_0^t (|sin(s - t0)|^beta - mean) ds, a C^{1,beta} function on the parameter circle.
// Node values are tabulated once; off-node values are integrated on demand.
Density rough_antiderivative(const BoundarySurface& surface, double beta, double theta0);

// Separation of two nodes: Euclidean distance, or on curves the circular
// distance of their parameters (node density does not bias the bands).
enum class Separation { Euclidean, Parameter };

struct BandStats {
  std::vector<int> k;            // band [2^{-k-1}, 2^{-k})
  std::vector<double> max_diff;  // max |f(x) - f(y)| in the band
  std::vector<double> max_quot;  // max |f(x) - f(y)| / omega(|x - y|)
  std::vector<std::size_t> count;
};

BandStats band_statistics(const BoundarySurface& surface, const std::vector<cplx>& values, int kmin, int kmax,
                          const Modulus& modulus, Separation sep = Separation::Euclidean);
// Least-squares slope of log max_diff against log 2^{-k} over bands with >= min_pairs pairs.
double fit_exponent(const BandStats& b, std::size_t min_pairs = 30, std::size_t min_bands = 4);

ExperimentReport run_identity_suite(const std::string& config_json);
ExperimentReport measure_regularity_gain(const std::string& config_json);
ExperimentReport kernel_norm_report(const std::string& config_json);
ExperimentReport decomposition_probe(const std::string& config_json);

// Dispatches on the command names of the command-line tool.
ExperimentReport run_experiment(const std::string& command, const std::string& config_json);

}  // namespace layerlab
