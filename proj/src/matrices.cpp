#include "flatspot/matrices.hpp"

#include <algorithm>
#include <random>

#include "flatspot/errors.hpp"

namespace flatspot {

Mat2 Mat2::identity(Precision bits) {
  return Mat2{BigReal(1.0, bits), BigReal(bits), BigReal(bits), BigReal(1.0, bits)};
}

BigReal Mat2::det() const { return a * d - b * c; }
BigReal Mat2::trace() const { return a + d; }

bool Mat2::nonnegative() const { return !(a < 0.0) && !(b < 0.0) && !(c < 0.0) && !(d < 0.0); }

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
              x.c * y.b + x.d * y.d};
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
  return Mat2{x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

BigReal spectral_norm(const Mat2& m) {
  BigReal s = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
  BigReal det = m.det();
  BigReal disc = s * s - det * det * 4L;
  if (disc < 0.0) disc = BigReal(disc.precision());
  return sqrt((s + sqrt(disc)) / 2L);
}

BigReal spectral_radius(const Mat2& m) {
  BigReal tr = m.trace();
  BigReal disc = tr * tr - m.det() * 4L;
  if (disc < 0.0) return sqrt(abs(m.det()));
  BigReal root = sqrt(disc);
  return max(abs((tr + root) / 2L), abs((tr - root) / 2L));
}

MatrixSeq MatrixSeq::constant(const BigReal& nu, const BigReal& value, std::size_t count) {
  return MatrixSeq{nu, std::vector<BigReal>(count + 1, value)};
}

MatrixSeq MatrixSeq::from_continued_fraction(const BigReal& nu, const ContinuedFraction& cf,
                                             int first_level) {
  MatrixSeq seq{nu, {}};
  for (int level = first_level - 1; level <= cf.max_level(); ++level) {
    const std::int64_t a = cf.level_a(level);
    seq.b.push_back(1L / pow(nu, static_cast<unsigned long>(a)));
  }
  return seq;
}

Mat2 MatrixSeq::matrix(std::size_t n) const {
  if (n < 1 || n >= b.size()) {
    fail(ErrorKind::length_mismatch, "B(" + std::to_string(n) + ") is outside the sequence");
  }
  const Precision bits = nu.precision();
  return Mat2{(1L - b[n]) / (nu - 1L), b[n - 1], BigReal(1.0, bits), BigReal(bits)};
}

void MatrixSeq::check_admissible() const {
  if (!(nu > 1.0)) fail(ErrorKind::inadmissible_sequence, "nu must exceed 1");
  if (b.size() < 2) fail(ErrorKind::inadmissible_sequence, "empty b sequence");
  BigReal bound = 1L / nu;
  for (std::size_t n = 0; n < b.size(); ++n) {
    if (!(b[n] > 0.0) || b[n] > bound) {
      fail(ErrorKind::inadmissible_sequence,
           "b(" + std::to_string(n) + ") = " + b[n].to_string(8) + " is outside (0, 1/nu]");
    }
  }
}

Mat2 window(const MatrixSeq& seq, std::size_t from, std::size_t count) {
  Mat2 p = Mat2::identity(seq.nu.precision());
  for (std::size_t k = 0; k < count; ++k) p = seq.matrix(from + k) * p;
  return p;
}

BigReal closed_form_alpha(const MatrixSeq& seq, std::size_t n) {
  BigReal sum(1.0, seq.nu.precision());
  BigReal term(1.0, seq.nu.precision());
  for (std::size_t k = 1; k <= n; ++k) {
    term *= -seq.b.at(n - k + 1);
    sum += term;
  }
  return sum;
}

BigReal closed_form_beta(const MatrixSeq& seq, std::size_t n) {
  if (n == 0) return BigReal(seq.nu.precision());
  BigReal sum(1.0, seq.nu.precision());
  BigReal term(1.0, seq.nu.precision());
  for (std::size_t k = 1; k <= n - 1; ++k) {
    term *= -seq.b.at(n - k + 1);
    sum += term;
  }
  return seq.b.at(0) * sum;
}

Product compose(const MatrixSeq& seq, std::size_t n) {
  seq.check_admissible();
  if (n < 1 || n > seq.length()) {
    fail(ErrorKind::length_mismatch, "compose needs 1 <= n <= " + std::to_string(seq.length()));
  }
  Product out;
  out.n = n;
  out.m = window(seq, 1, n);
  if (seq.nu == BigReal(2.0, seq.nu.precision())) {
    BigReal dev = max(abs(out.m.a - closed_form_alpha(seq, n)), abs(out.m.b - closed_form_beta(seq, n)));
    dev = max(dev, abs(out.m.c - closed_form_alpha(seq, n - 1)));
    dev = max(dev, abs(out.m.d - closed_form_beta(seq, n - 1)));
    out.closed_form_deviation = dev;
  }
  return out;
}

BigReal contraction_factor(const Mat2& product) { return spectral_norm(product); }

FindNResult find_N(const BigReal& nu_in, const FindNOptions& options) {
  if (options.cap < 1 || options.trials < 0 || options.starts < 1) {
    fail(ErrorKind::config, "find_N needs a positive cap and start count");
  }
  const Precision bits = options.precision;
  BigReal nu = nu_in.with_precision(bits);
  const std::size_t length = static_cast<std::size_t>(options.cap + options.starts + 1);
  std::vector<MatrixSeq> sequences;
  sequences.push_back(MatrixSeq::constant(nu, 1L / nu, length));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < options.trials; ++t) {
    MatrixSeq seq{nu, {}};
    for (std::size_t k = 0; k <= length; ++k) {
      seq.b.push_back(BigReal(1.0 - unit(rng), bits) / nu);
    }
    sequences.push_back(std::move(seq));
  }

  std::vector<BigReal> worst(static_cast<std::size_t>(options.cap), BigReal(bits));
  for (const auto& seq : sequences) {
    seq.check_admissible();
    for (int s = 1; s <= options.starts; ++s) {
      Mat2 p = Mat2::identity(bits);
      for (int len = 1; len <= options.cap; ++len) {
        p = seq.matrix(static_cast<std::size_t>(s + len - 1)) * p;
        BigReal norm = spectral_norm(p);
        auto& w = worst[static_cast<std::size_t>(len - 1)];
        if (norm > w) w = std::move(norm);
      }
    }
  }

  FindNResult out;
  out.nu = nu.to_double();
  out.trials = options.trials;
  for (const auto& w : worst) out.worst_by_length.push_back(w.to_double());
  for (int len = 1; len <= options.cap; ++len) {
    if (worst[static_cast<std::size_t>(len - 1)] < options.threshold) {
      out.N = len;
      out.worst_norm = worst[static_cast<std::size_t>(len - 1)];
      return out;
    }
  }
  fail(ErrorKind::not_found, "no window length up to " + std::to_string(options.cap) +
                                 " contracts below " + std::to_string(options.threshold) +
                                 " (worst norm at the cap " + worst.back().to_string(6) + ")");
}

ZetaTrack zeta_track(const std::vector<SEntry>& s, const ContinuedFraction& cf, const BigReal& nu) {
  if (!(nu > 1.0)) fail(ErrorKind::config, "zeta_track needs nu > 1");
  if (s.size() < 2) fail(ErrorKind::length_mismatch, "zeta_track needs two or more s values");
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k].n != s[k - 1].n + 1) fail(ErrorKind::length_mismatch, "s levels are not consecutive");
  }
  if (s.back().n > cf.max_level()) {
    fail(ErrorKind::length_mismatch, "continued fraction is shorter than the s sequence");
  }
  const Precision bits = s.front().s.precision();
  ZetaTrack out;
  out.max_norm = BigReal(bits);
  out.max_residual = BigReal(bits);
  for (std::size_t k = 1; k < s.size(); ++k) {
    const int n = s[k].n;
    out.levels.push_back(n);
    out.norms.push_back(sqrt(s[k].s * s[k].s + s[k - 1].s * s[k - 1].s));
    if (out.norms.back() > out.max_norm) out.max_norm = out.norms.back();
    if (k + 1 < s.size()) {
      BigReal c1 = (1L - 1L / pow(nu, static_cast<unsigned long>(cf.level_a(n)))) / (nu - 1L);
      BigReal c2 = 1L / pow(nu, static_cast<unsigned long>(cf.level_a(n - 1)));
      BigReal first = s[k + 1].s - (c1 * s[k].s + c2 * s[k - 1].s);
      // The second component of zeta(n + 1) - B(n) zeta(n) vanishes.
      out.residuals.push_back(abs(first));
      if (out.residuals.back() > out.max_residual) out.max_residual = out.residuals.back();
    }
  }
  return out;
}

}  // namespace flatspot
