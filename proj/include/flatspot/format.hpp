#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "flatspot/big_real.hpp"
#include "flatspot/pipeline.hpp"

namespace flatspot {

// Engineering notation with four significant figures and a mantissa in
// [0.1, 100), e.g. "64.04·10⁻⁶" or ".7044·10⁻³".
std::string paper_length(const BigReal& x);
// Ratios as in the scaling table: ".2637", "1.683", "-25.9".
std::string paper_ratio(const BigReal& x);
// Scientific notation; digits <= 0 prints enough to round-trip.
std::string plain(const BigReal& x, int digits = 0);
std::string plain(long double x);

void write_table_csv(std::ostream& out, const ScalingReport& report, bool paper_format);
void write_extended_csv(std::ostream& out, const ScalingReport& report);
void write_residuals_csv(std::ostream& out, const ScalingReport& report);
std::string console_table(const ScalingReport& report, bool paper_format);

void write_closest_returns_csv(std::ostream& out, const CriticalOrbit& orbit, const ContinuedFraction& cf,
                               int n_from, int n_to);
void write_orbit_csv(std::ostream& out, const CriticalOrbit& orbit);

void write_dichotomy_csv(std::ostream& out, const DichotomyRun& run);
nlohmann::json to_json(const Classification& c);

void write_partitions_csv(std::ostream& out, const std::vector<Partition>& partitions);
void write_deficit_csv(std::ostream& out, const DeficitReport& deficit);
void write_hausdorff_csv(std::ostream& out, const HausdorffReport& report);
nlohmann::json to_json(const GeometryRun& run);

void write_matrices_csv(std::ostream& out, const MatricesRun& run);
void write_zeta_csv(std::ostream& out, const ZetaTrack& zeta);
nlohmann::json to_json(const MatricesRun& run);

void write_params_csv(std::ostream& out, const ParamsRun& run);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const RotationNumber& rho);
nlohmann::json to_json(const SearchResult& search);

}  // namespace flatspot
