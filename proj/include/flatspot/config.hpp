#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatspot/big_real.hpp"
#include "flatspot/flat_map.hpp"

namespace flatspot {

struct ExperimentConfig {
  MapSpec map{Family::canonical, "0.5", "0.3", "3"};
  Precision precision_bits = 256;
  Precision precision_ceiling = 4096;
  std::int64_t max_iters = 0;  // 0: derived from the depth

  std::string target = "golden";  // "golden" or "p/q"
  int t_tolerance_bits = 0;       // 0: ceiling - 16
  int rho_tolerance_bits = 30;
  std::int64_t orbit_length = 0;  // 0: q at depth + 2

  int n_from = 3;
  int depth = 20;
  bool extended = false;
  bool bracket_uncertainty = false;  // widen y errors by the search bracket

  std::vector<std::string> nu_list{"1.5", "2", "3"};
  int dichotomy_window = 8;

  int level_from = 2;
  int level_to = 10;
  std::vector<double> alpha_grid;  // empty: 0.5, 0.55, ..., 1.0
  bool refine_alpha = true;

  std::string matrices_nu = "3";
  std::string b_constant;       // empty: 1/nu
  std::string b_sequence_file;  // one decimal per line, b(0) first
  int compose_n = 10000;
  int trials = 64;
  int starts = 32;
  int cap = 200;
  std::uint64_t seed = 1;

  int params_from = 6;
  int params_to = 12;

  std::string out_dir = "out";
  bool paper_format = false;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// Throws Error(config) on invalid settings; `scaling` requires depth >= 3.
void check_config(const ExperimentConfig& config, bool scaling);

}  // namespace flatspot
