#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatspot/big_real.hpp"
#include "flatspot/orbit.hpp"
#include "flatspot/rotation.hpp"
#include "flatspot/stats.hpp"

namespace flatspot {

// y_n = dist(U, q_n) and sigma(n) = y_n / y_{n-2}. sigma is reported from the
// first level whose q_{n-2} is a genuine return (n >= 3).
struct SigmaEntry {
  int n = 0;
  std::int64_t q = 0;
  BigReal y;
  long double y_error = 0.0L;
  int side = 0;
  std::optional<BigReal> sigma;
  long double sigma_error = 0.0L;
};

// `t_uncertainty` widens the error bounds by the orbit's sensitivity to t.
std::vector<SigmaEntry> sigma_series(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                                     int n_from, int n_to, long double t_uncertainty = 0.0L);

struct SigmaNi {
  int n = 0;
  std::int64_t a = 0;
  std::vector<BigReal> values;  // sigma(n, 1) ... sigma(n, a_n)
  BigReal product;
  BigReal sigma;
  double product_log_ratio = 0.0;  // ln(sigma / product)
};

SigmaNi sigma_ni(const CriticalOrbit& orbit, const ContinuedFraction& cf, int n);

struct MuEntry {
  BigReal value;
  bool reliable = true;   // both differences above the noise floor
  bool negative = false;  // sign anomaly
};

// mu_i = (s[i+2] - s[i+1]) / (s[i+1] - s[i]) for each i with s[i+2] known.
// Differences smaller than 10 times the summed error bounds are unreliable.
std::vector<MuEntry> mu_series(const std::vector<BigReal>& sigma,
                               const std::vector<long double>& errors);

struct DerivativeEntry {
  int n = 0;
  std::int64_t q = 0;
  BigReal D;          // product of Df along 1, ..., q_n
  BigReal log_D;      // sum of ln Df along the same points
  double relative_gap = 0.0;  // |exp(log_D) - D| / D
};

std::vector<DerivativeEntry> derivative_series(const CriticalOrbit& orbit,
                                               const ContinuedFraction& cf, int n_from, int n_to);

struct SEntry {
  int n = 0;
  BigReal s;                         // -nu^{a_n} ln sigma(n, 1)
  std::optional<BigReal> residual;   // recursion residual at n (needs n - 1, n + 1)
};

// sigma1[k] is sigma(n_from + k, 1).
std::vector<SEntry> s_sequence(const std::vector<BigReal>& sigma1, const ContinuedFraction& cf,
                               double nu, int n_from);

struct GammaEntry {
  int n = 0;
  BigReal gamma;
};

std::vector<GammaEntry> gamma_series(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                                     int n_from, int n_to);

// R_n: log ratio of the relative growth of B = [a_n q_n, q_{n-2}] and
// A = [boundary of U, a_n q_n] under q_{n-1} - 1 further iterates.
BigReal nonlinearity_R(const CriticalOrbit& orbit, const ContinuedFraction& cf, int n);

struct RelationResidual {
  std::string id;  // "3.1", "3.4[i=1]", "P3.1", ...
  int n = 0;
  BigReal lhs;
  BigReal rhs;
  double log_ratio = 0.0;  // ln(lhs / rhs)
};

struct RelationSummary {
  std::string id;
  int count = 0;
  double max_abs_log_ratio = 0.0;
  std::optional<LinearFit> trend;  // |log ratio| against n
};

struct RelationInputs {
  const CriticalOrbit* orbit = nullptr;
  const ContinuedFraction* cf = nullptr;
  const BackwardOrbit* backward = nullptr;  // needed for 3.1
  int n_from = 3;
  int n_to = 3;
};

// Residuals of the approximate relations and of the sigma(n, 1) recursion
// ("P3.1", with the unknown factor nu^p omitted). The last relation is
// reported with a discrepancy note in `notes`.
std::vector<RelationResidual> relation_residuals(const RelationInputs& in,
                                                 std::vector<std::string>* notes = nullptr);

// Strips an index suffix: "3.4[i=1]" -> "3.4".
std::string relation_family(const std::string& id);

std::vector<RelationSummary> summarize_relations(const std::vector<RelationResidual>& residuals,
                                                 int n_from, int n_to);

// Full per-level report over [n_from, n_to].
struct ScalingRow {
  int n = 0;
  std::int64_t q = 0;
  std::int64_t a = 0;
  BigReal y;
  long double y_error = 0.0L;
  int side = 0;
  std::optional<BigReal> sigma;
  long double sigma_error = 0.0L;
  std::optional<MuEntry> mu;
  std::vector<BigReal> sigma_ni;
  std::optional<BigReal> D;
  std::optional<BigReal> s;
  std::optional<BigReal> s_residual;
  std::optional<BigReal> gamma;
  std::optional<BigReal> R;
};

struct ReportOptions {
  int n_from = 3;
  int n_to = 20;
  bool extended = false;   // D, s, Gamma, R and relation residuals
  long double t_uncertainty = 0.0L;
};

struct ScalingReport {
  std::string base_convention;
  std::vector<ScalingRow> rows;
  std::vector<RelationResidual> residuals;
  std::vector<std::string> notes;
};

// Orbit length a report over [n_from, n_to] needs.
std::int64_t required_orbit_length(const ContinuedFraction& cf, const ReportOptions& options);

ScalingReport build_report(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                           const ReportOptions& options);

}  // namespace flatspot
