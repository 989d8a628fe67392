#include "flatspot/config.hpp"

#include <fstream>

#include "flatspot/errors.hpp"

namespace flatspot {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::config, std::string("config key '") + key + "': " + e.what());
  }
}

// Decimal strings are preferred; plain JSON numbers are accepted as written.
void read_decimal(const json& doc, const char* key, std::string& out) {
  if (!doc.contains(key)) return;
  const json& v = doc.at(key);
  if (v.is_string()) {
    out = v.get<std::string>();
  } else if (v.is_number()) {
    out = v.dump();
  } else {
    fail(ErrorKind::config, std::string("config key '") + key + "' must be a decimal string");
  }
}

void read_map(const json& doc, ExperimentConfig& c) {
  if (doc.contains("family")) {
    c.map.family = parse_family(doc.at("family").get<std::string>());
  }
  read_decimal(doc, "b", c.map.b);
  read_decimal(doc, "t", c.map.t);
  read_decimal(doc, "nu", c.map.nu);
  read(doc, "precision_bits", c.precision_bits);
  read(doc, "precision_ceiling_bits", c.precision_ceiling);
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::config, "config must be a JSON object");
  ExperimentConfig c;
  if (doc.contains("map")) read_map(doc.at("map"), c);
  read_map(doc, c);
  read(doc, "max_iters", c.max_iters);
  read(doc, "target", c.target);
  read(doc, "t_tolerance_bits", c.t_tolerance_bits);
  read(doc, "rho_tolerance_bits", c.rho_tolerance_bits);
  read(doc, "orbit_length", c.orbit_length);
  read(doc, "n_from", c.n_from);
  read(doc, "depth", c.depth);
  read(doc, "extended", c.extended);
  read(doc, "bracket_uncertainty", c.bracket_uncertainty);
  if (doc.contains("nu_list")) {
    c.nu_list.clear();
    for (const auto& v : doc.at("nu_list")) c.nu_list.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  read(doc, "dichotomy_window", c.dichotomy_window);
  read(doc, "level_from", c.level_from);
  read(doc, "level_to", c.level_to);
  read(doc, "alpha_grid", c.alpha_grid);
  read(doc, "refine_alpha", c.refine_alpha);
  read_decimal(doc, "matrices_nu", c.matrices_nu);
  read_decimal(doc, "b_constant", c.b_constant);
  read(doc, "b_sequence_file", c.b_sequence_file);
  read(doc, "compose_n", c.compose_n);
  read(doc, "trials", c.trials);
  read(doc, "starts", c.starts);
  read(doc, "cap", c.cap);
  read(doc, "seed", c.seed);
  read(doc, "params_from", c.params_from);
  read(doc, "params_to", c.params_to);
  read(doc, "out_dir", c.out_dir);
  read(doc, "paper_format", c.paper_format);
  return c;
}

json to_json(const ExperimentConfig& c) {
  return json{
      {"map",
       {{"family", to_string(c.map.family)},
        {"b", c.map.b},
        {"t", c.map.t},
        {"nu", c.map.nu},
        {"precision_bits", c.precision_bits},
        {"precision_ceiling_bits", c.precision_ceiling}}},
      {"max_iters", c.max_iters},
      {"target", c.target},
      {"t_tolerance_bits", c.t_tolerance_bits},
      {"rho_tolerance_bits", c.rho_tolerance_bits},
      {"orbit_length", c.orbit_length},
      {"n_from", c.n_from},
      {"depth", c.depth},
      {"extended", c.extended},
      {"bracket_uncertainty", c.bracket_uncertainty},
      {"nu_list", c.nu_list},
      {"dichotomy_window", c.dichotomy_window},
      {"level_from", c.level_from},
      {"level_to", c.level_to},
      {"alpha_grid", c.alpha_grid},
      {"refine_alpha", c.refine_alpha},
      {"matrices_nu", c.matrices_nu},
      {"b_constant", c.b_constant},
      {"b_sequence_file", c.b_sequence_file},
      {"compose_n", c.compose_n},
      {"trials", c.trials},
      {"starts", c.starts},
      {"cap", c.cap},
      {"seed", c.seed},
      {"params_from", c.params_from},
      {"params_to", c.params_to},
      {"out_dir", c.out_dir},
      {"paper_format", c.paper_format},
  };
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, "config file '" + path + "': " + e.what());
  }
  return config_from_json(doc);
}

void check_config(const ExperimentConfig& c, bool scaling) {
  if (c.precision_bits < 64) fail(ErrorKind::config, "precision_bits must be at least 64");
  if (c.precision_ceiling < c.precision_bits) {
    fail(ErrorKind::config, "precision ceiling is below the starting precision");
  }
  if (c.max_iters < 0) fail(ErrorKind::config, "max_iters must be positive");
  if (c.t_tolerance_bits < 0 || c.rho_tolerance_bits <= 0) {
    fail(ErrorKind::config, "tolerances must be positive");
  }
  if (scaling && c.depth < 3) fail(ErrorKind::config, "depth must be at least 3 for scaling commands");
  if (c.n_from < 1 || c.n_from > c.depth) fail(ErrorKind::config, "n_from must lie in [1, depth]");
  if (c.target != "golden" && c.target.find('/') == std::string::npos) {
    fail(ErrorKind::config, "target must be \"golden\" or \"p/q\"");
  }
  if (c.level_from < 2 || c.level_to < c.level_from) fail(ErrorKind::config, "bad geometry level range");
  for (double a : c.alpha_grid) {
    if (!(a >= 0.0) || a > 1.0) fail(ErrorKind::config, "alpha grid values must lie in [0, 1]");
  }
  if (c.compose_n < 1 || c.trials < 0 || c.starts < 1 || c.cap < 1) {
    fail(ErrorKind::config, "matrix settings must be positive");
  }
  if (c.params_from < 3 || c.params_to < c.params_from) fail(ErrorKind::config, "bad params level range");
  if (c.dichotomy_window < 3) fail(ErrorKind::config, "dichotomy_window must be at least 3");
}

}  // namespace flatspot
