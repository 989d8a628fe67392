#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flatspot/big_real.hpp"
#include "flatspot/circle.hpp"
#include "flatspot/flat_map.hpp"
#include "flatspot/orbit.hpp"
#include "flatspot/rotation.hpp"
#include "flatspot/stats.hpp"

namespace flatspot {

struct Hole {
  enum class Kind { box, circ };
  Kind kind = Kind::box;
  std::int64_t index = 0;
  Arc arc;
  // Preimages -left_preimage and -right_preimage bound the hole.
  std::int64_t left_preimage = 0;
  std::int64_t right_preimage = 0;
  long double error = 0.0L;
};

const char* to_string(Hole::Kind kind) noexcept;

// Level-n partition: the arcs F^{-i}(U), 0 <= i < q_{n+1} + q_n, and the holes
// between them, Box^n_i (0 <= i < q_{n+1}) and Circ^n_j (0 <= j < q_n).
struct Partition {
  int n = 0;
  std::int64_t q = 0;       // q_n
  std::int64_t q_next = 0;  // q_{n+1}
  int side = 0;             // -1 when -q_n lies left of U, +1 when right
  std::vector<Arc> preimages;
  std::vector<long double> preimage_errors;
  std::vector<Hole> boxes;
  std::vector<Hole> circs;

  BigReal preimage_total() const;
  BigReal hole_total() const;
  long double error_bound() const;
  // Holes in circular order starting from the hole right of U.
  std::vector<const Hole*> holes() const;
};

Partition build_partition(const FlatSpotMap& map, const ContinuedFraction& cf, int n);

struct DeficitReport {
  std::vector<int> levels;
  std::vector<BigReal> totals;
  std::vector<double> ratios;  // totals[k + 1] / totals[k]
  LinearFit fit;               // log(total) against n
  double rate = 0.0;           // exp(slope)
};

DeficitReport lebesgue_deficit(const std::vector<Partition>& partitions);

// Sum of |h|^alpha over the holes of one partition.
BigReal hausdorff_sum(const Partition& partition, double alpha);

std::vector<double> default_alpha_grid();

struct HausdorffReport {
  std::vector<int> levels;
  std::vector<double> alphas;
  std::vector<std::vector<BigReal>> sums;  // [level][alpha]
  std::optional<double> alpha_star;
  std::string verdict;  // "bounded" or "inconclusive"
  std::string caveat = "finite-level evidence";
};

// Scans the grid (refined near the first monotone alpha when `refine` is set)
// without failing when no alpha below 1 qualifies.
HausdorffReport hausdorff_scan(const std::vector<Partition>& partitions,
                               std::vector<double> alphas, bool refine = true);
// As hausdorff_scan, but throws InconclusiveWindow without an alpha* < 1.
HausdorffReport hausdorff_upper(const std::vector<Partition>& partitions,
                                std::vector<double> alphas, bool refine = true);

struct Quadruple {
  BigReal a, b, c, d;
};

// |(a,b)| |(c,d)| / (|(a,c)| |(b,d)|) along counter-clockwise arcs.
BigReal cross_ratio(const Quadruple& q);

struct DcrResult {
  BigReal product;
  std::vector<BigReal> factors;
  int multiplicity = 0;  // largest overlap of the arcs (a_i, d_i)
};

DcrResult dcr_product(const FlatSpotMap& map, const Quadruple& q, int iters);

struct PowerLawQuotient {
  BigReal r;
  BigReal limit;  // z -> b from above
};

PowerLawQuotient power_law_quotient(const BigReal& a, const BigReal& b, const BigReal& z,
                                    const BigReal& nu);

// I_0, ..., I_n with I_{j+1} = F^{-1}(I_j).
struct IntervalChain {
  std::vector<Arc> intervals;
  int steps() const { return static_cast<int>(intervals.size()) - 1; }
};

IntervalChain build_chain(const FlatSpotMap& map, const Arc& first, int steps);

struct ChainNonlinearity {
  BigReal sup;           // sup |g''/g'| of the rescaled F^{-n}: I_0 -> I_n
  BigReal total_length;  // sum of |I_j|
  BigReal distortion;    // DCr of F^n on the thirds quadruple of I_n
  int samples = 0;
};

ChainNonlinearity rescaled_nonlinearity(const FlatSpotMap& map, const IntervalChain& chain,
                                        int samples = 257);

}  // namespace flatspot
