#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flatspot/big_real.hpp"
#include "flatspot/rotation.hpp"
#include "flatspot/scalings.hpp"

namespace flatspot {

struct Mat2 {
  BigReal a, b, c, d;  // [[a, b], [c, d]]

  static Mat2 identity(Precision bits);
  BigReal det() const;
  BigReal trace() const;
  bool nonnegative() const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x, const Mat2& y);

// Largest singular value, from the closed form for 2x2 matrices.
BigReal spectral_norm(const Mat2& m);
// Largest eigenvalue modulus.
BigReal spectral_radius(const Mat2& m);

// B(n) = [[(1 - b(n))/(nu - 1), b(n - 1)], [1, 0]] for n >= 1; b holds
// b(0), b(1), ...
struct MatrixSeq {
  BigReal nu;
  std::vector<BigReal> b;

  static MatrixSeq constant(const BigReal& nu, const BigReal& value, std::size_t count);
  // b(k) = nu^{-a} at level first_level - 1 + k, so that B(1) is the matrix
  // of level first_level.
  static MatrixSeq from_continued_fraction(const BigReal& nu, const ContinuedFraction& cf,
                                           int first_level = 3);

  std::size_t length() const { return b.empty() ? 0 : b.size() - 1; }  // last usable n
  Mat2 matrix(std::size_t n) const;
  void check_admissible() const;  // throws InadmissibleSequence
};

struct Product {
  Mat2 m;  // [[alpha(n), beta(n)], [alpha(n-1), beta(n-1)]]
  std::size_t n = 0;
  // For nu = 2: largest deviation from the alternating-sum closed forms.
  std::optional<BigReal> closed_form_deviation;

  const BigReal& alpha() const { return m.a; }
  const BigReal& beta() const { return m.b; }
  const BigReal& alpha_prev() const { return m.c; }
  const BigReal& beta_prev() const { return m.d; }
};

// B(n) ... B(1).
Product compose(const MatrixSeq& seq, std::size_t n);
// B(from + count - 1) ... B(from).
Mat2 window(const MatrixSeq& seq, std::size_t from, std::size_t count);

// Alternating sums for nu = 2.
BigReal closed_form_alpha(const MatrixSeq& seq, std::size_t n);
BigReal closed_form_beta(const MatrixSeq& seq, std::size_t n);

BigReal contraction_factor(const Mat2& product);

struct FindNOptions {
  int trials = 64;
  int starts = 32;  // window start positions per sequence
  int cap = 200;
  double threshold = 0.8;
  std::uint64_t seed = 1;
  Precision precision = 128;
};

struct FindNResult {
  double nu = 0.0;
  int N = 0;
  BigReal worst_norm;
  int trials = 0;
  std::vector<double> worst_by_length;  // index k: windows of length k + 1
};

// Smallest window length whose products all have operator norm below the
// threshold, over random admissible sequences and the constant b = 1/nu.
// Throws NotFound past the cap.
FindNResult find_N(const BigReal& nu, const FindNOptions& options = {});

struct ZetaTrack {
  std::vector<int> levels;
  std::vector<BigReal> norms;      // |zeta(n)|
  std::vector<BigReal> residuals;  // |zeta(n + 1) - B(n) zeta(n)|, indexed like levels
  BigReal max_norm;
  BigReal max_residual;
};

ZetaTrack zeta_track(const std::vector<SEntry>& s, const ContinuedFraction& cf, const BigReal& nu);

}  // namespace flatspot
