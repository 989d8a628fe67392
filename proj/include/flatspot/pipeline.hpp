#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatspot/config.hpp"
#include "flatspot/flat_map.hpp"
#include "flatspot/geometry.hpp"
#include "flatspot/matrices.hpp"
#include "flatspot/orbit.hpp"
#include "flatspot/rotation.hpp"
#include "flatspot/scalings.hpp"

namespace flatspot {

// Receives progress records; the CLI stores the latest one as a checkpoint.
using ProgressSink = std::function<void(const nlohmann::json&)>;

// The validated map of the config, optionally with another exponent.
FlatSpotMap configured_map(const ExperimentConfig& config, const std::string& nu = "");

ContinuedFraction target_expansion(const ExperimentConfig& config, int depth);
Target target_value(const ExperimentConfig& config, Precision bits);

struct ParameterRun {
  FlatSpotMap map;  // validated, at the located parameter and its precision
  SearchResult search;
  ContinuedFraction cf;
};

// Locates t for the config target with an iteration budget sized for
// `depth`. A checkpoint record with stage "find-t" resumes the bisection.
ParameterRun locate_parameter(const ExperimentConfig& config, int depth, const std::string& nu = "",
                              const ProgressSink& progress = {},
                              const nlohmann::json* resume = nullptr);

struct TableRun {
  ParameterRun parameter;
  CriticalOrbit orbit;
  ScalingReport report;
};

TableRun run_table(const ExperimentConfig& config, const std::string& nu = "",
                   const ProgressSink& progress = {}, const nlohmann::json* resume = nullptr);

struct Classification {
  double nu = 0.0;
  std::string label;  // "decaying" or "bounded-below"
  bool slow = false;
  int window_from = 0;
  int window_to = 0;
  double sigma_last = 0.0;
  double mu_median = 0.0;
  int mu_count = 0;
  double ratio_median = 0.0;  // median sigma(n)/sigma(n-1) over the window
  double limit = 0.0;         // geometric-tail extrapolation of sigma
};

Classification classify(const ScalingReport& report, double nu, int window);

// Geometric-tail limit sigma_last + (sigma_last - sigma_prev) mu/(1 - mu),
// with mu the median over rows n_from..n_to of reliable mu values.
std::optional<double> extrapolated_limit(const ScalingReport& report, int n_from, int n_to);

struct DichotomyRun {
  std::vector<TableRun> runs;
  std::vector<Classification> classes;
};

DichotomyRun run_dichotomy(const ExperimentConfig& config, const ProgressSink& progress = {});

struct ChainRow {
  int level = 0;
  int steps = 0;
  ChainNonlinearity result;
};

struct GeometryRun {
  ParameterRun parameter;
  std::vector<Partition> partitions;
  DeficitReport deficit;
  HausdorffReport hausdorff;
  std::vector<ChainRow> chains;
};

GeometryRun run_geometry(const ExperimentConfig& config, const ProgressSink& progress = {});

struct MatrixRow {
  std::size_t n = 0;
  BigReal alpha, beta, norm;
};

struct MatricesRun {
  MatrixSeq sequence;
  std::vector<MatrixRow> rows;
  std::optional<BigReal> closed_form_deviation;
  std::optional<FindNResult> find_n;
  std::string find_n_error;  // set when find_N reached its cap
  std::optional<ZetaTrack> zeta;
};

MatrixSeq load_b_sequence(const std::string& path, const BigReal& nu);
MatricesRun run_matrices(const ExperimentConfig& config, const ProgressSink& progress = {});

struct ParamsRow {
  LockingInterval interval;
  std::optional<BigReal> delta;      // |I_n| / |I_{n-2}|
  std::optional<BigReal> predicted;  // sigma(n-1)^nu
  std::optional<double> ratio;       // delta / predicted
};

struct ParamsRun {
  TableRun table;
  std::vector<ParamsRow> rows;
};

ParamsRun run_params(const ExperimentConfig& config, const ProgressSink& progress = {});

}  // namespace flatspot
