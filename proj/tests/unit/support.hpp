#pragma once

#include <map>
#include <string>
#include <utility>

#include "flatspot/pipeline.hpp"

namespace test_support {

// Golden-mean table runs shared between test cases.
inline const flatspot::TableRun& golden_table(const std::string& nu, int depth, bool extended = false) {
  static std::map<std::tuple<std::string, int, bool>, flatspot::TableRun> cache;
  const auto key = std::make_tuple(nu, depth, extended);
  auto it = cache.find(key);
  if (it == cache.end()) {
    flatspot::ExperimentConfig config;
    config.map.nu = nu;
    config.depth = depth;
    config.extended = extended;
    it = cache.emplace(key, flatspot::run_table(config)).first;
  }
  return it->second;
}

}  // namespace test_support
