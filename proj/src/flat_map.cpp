#include "flatspot/flat_map.hpp"

#include <cmath>
#include <sstream>

#include "flatspot/errors.hpp"
#include "flatspot/stats.hpp"

namespace flatspot {

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::canonical: return "canonical";
    case Family::appendix_b: return "appendixB";
    case Family::rigid: return "rigid";
    case Family::custom: return "custom";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "canonical") return Family::canonical;
  if (name == "appendixB" || name == "appendix_b") return Family::appendix_b;
  if (name == "rigid") return Family::rigid;
  fail(ErrorKind::config, "unknown map family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- branches

long double Branch::slope_estimate(const BigReal& u) const {
  return slope(u.with_precision(64)).to_long_double();
}

BigReal Branch::inverse(const BigReal& v) const {
  const Precision bits = v.precision();
  BigReal lo(0.0, bits), hi(1.0, bits);
  if (v <= 0.0) return lo;
  if (v >= 1.0) return hi;
  BigReal u = v;
  const BigReal eps = BigReal::power_of_two(-static_cast<long>(bits) + 2, bits);
  for (int iter = 0; iter < 4 * bits + 64; ++iter) {
    BigReal g = value(u) - v;
    if (g.is_zero()) return u;
    if (g.sign() < 0) lo = u; else hi = u;
    if (hi - lo <= eps) break;
    BigReal d = slope(u);
    BigReal next = d.sign() > 0 ? u - g / d : BigReal(bits);
    if (d.sign() <= 0 || !(next > lo && next < hi)) next = (lo + hi) / 2;
    if (abs(next - u) <= eps * u) {
      u = next;
      break;
    }
    u = std::move(next);
  }
  return u;
}

BridgeBranch::BridgeBranch(const BigReal& nu, double nu_value) : nu_(nu), nu_value_(nu_value) {
  const double twice = 2.0 * nu_value;
  if (nu_value == std::floor(nu_value) && nu == BigReal(nu_value, nu.precision())) {
    integer_ = static_cast<long>(nu_value);
  } else if (twice == std::floor(twice) && nu == BigReal(nu_value, nu.precision())) {
    half_integer_ = static_cast<long>(std::floor(nu_value));
  }
}

BigReal BridgeBranch::power(const BigReal& u) const {
  if (u.is_zero()) return u;
  if (integer_ >= 0) return pow(u, static_cast<unsigned long>(integer_));
  if (half_integer_ >= 0) return pow(u, static_cast<unsigned long>(half_integer_)) * sqrt(u);
  return pow(u, nu_);
}

BigReal BridgeBranch::value(const BigReal& u) const {
  BigReal p = power(u);
  BigReal q = power(1 - u);
  return p / (p + q);
}

BigReal BridgeBranch::slope(const BigReal& u) const {
  BigReal w = 1 - u;
  if (integer_ == 1) return BigReal(1.0, u.precision());
  if (u.is_zero() || w.is_zero()) {
    return BigReal(nu_value_ < 1.0 ? INFINITY : 0.0, u.precision());
  }
  BigReal p = power(u);
  BigReal q = power(w);
  BigReal s = p + q;
  // nu u^(nu-1) (1-u)^(nu-1) / (p + q)^2 written through p and q.
  return nu_ * p * q / (u * w * s * s);
}

BigReal BridgeBranch::curvature(const BigReal& u) const {
  BigReal w = 1 - u;
  if (integer_ == 1) return BigReal(u.precision());
  BigReal p = power(u);
  BigReal q = power(w);
  BigReal first = (nu_ - 1L) * (1L / u - 1L / w);
  BigReal second = 2L * nu_ * (p / u - q / w) / (p + q);
  return first - second;
}

long double BridgeBranch::slope_estimate(const BigReal& u) const {
  const long double x = u.to_long_double();
  const long double w = 1.0L - x;
  if (integer_ == 1) return 1.0L;
  if (x <= 0.0L || w <= 0.0L) return 0.0L;
  const long double nu = nu_value_;
  const long double p = std::pow(x, nu);
  const long double q = std::pow(w, nu);
  const long double s = p + q;
  return nu * std::pow(x, nu - 1) * std::pow(w, nu - 1) / (s * s);
}

namespace {

class IdentityBranch final : public Branch {
 public:
  BigReal value(const BigReal& u) const override { return u; }
  BigReal slope(const BigReal& u) const override { return BigReal(1.0, u.precision()); }
  BigReal curvature(const BigReal& u) const override { return BigReal(u.precision()); }
  long double slope_estimate(const BigReal&) const override { return 1.0L; }
  BigReal inverse(const BigReal& v) const override { return v; }
};

// The printed experimental family in the branch coordinate s = x - 1:
// g(s) = v^3 (1 - 3w + 6w^2 - 10w^3 + s^3), v = s/b, w = v + 1.
class PrintedBranch final : public Branch {
 public:
  PrintedBranch(const BigReal& b, const BigReal& span) : b_(b), span_(span) {}

  BigReal value(const BigReal& u) const override {
    BigReal s = u * span_;
    BigReal v = s / b_;
    return pow(v, 3UL) * h(s, v);
  }

  BigReal slope(const BigReal& u) const override { return dg(u * span_) * span_; }

  BigReal curvature(const BigReal& u) const override {
    BigReal s = u * span_;
    BigReal v = s / b_;
    BigReal w = v + 1L;
    BigReal h0 = h(s, v);
    BigReal h1 = dh(s, v);
    BigReal h2 = (12L - 60L * w) / (b_ * b_) + 6L * s;
    BigReal g2 = 6L * v / (b_ * b_) * h0 + 6L * v * v / b_ * h1 + pow(v, 3UL) * h2;
    return g2 / dg(s) * span_;
  }

 private:
  BigReal h(const BigReal& s, const BigReal& v) const {
    BigReal w = v + 1L;
    return 1L - 3L * w + 6L * w * w - 10L * pow(w, 3UL) + pow(s, 3UL);
  }
  BigReal dh(const BigReal& s, const BigReal& v) const {
    BigReal w = v + 1L;
    return (-3L + 12L * w - 30L * w * w) / b_ + 3L * s * s;
  }
  BigReal dg(const BigReal& s) const {
    BigReal v = s / b_;
    return 3L * v * v / b_ * h(s, v) + pow(v, 3UL) * dh(s, v);
  }

  BigReal b_;
  BigReal span_;
};

BigReal parse_param(const std::string& text, Precision bits, const char* name,
                    long double& error) {
  bool exact = false;
  BigReal value = BigReal::parse(text, bits, &exact);
  (void)name;
  if (!exact) error += std::ldexp(1.0L, static_cast<int>(value.exponent() - bits));
  return value;
}

}  // namespace

// ---------------------------------------------------------------- the map

FlatSpotMap FlatSpotMap::build(const MapSpec& spec, Precision bits,
                               std::shared_ptr<const Branch> custom_branch) {
  if (bits < 64) fail(ErrorKind::config, "precision must be at least 64 bits");
  FlatSpotMap m;
  m.spec_ = spec;
  m.precision_ = bits;
  long double error = 0.0L;
  m.t_ = parse_param(spec.t, bits, "t", error);
  const long double t_error = error;
  if (spec.family == Family::rigid) {
    m.b_ = BigReal(bits);
    m.nu_ = BigReal(1.0, bits);
    m.spec_.b = "0";
    m.spec_.nu = "1";
  } else {
    m.b_ = parse_param(spec.b, bits, "b", error);
    m.nu_ = BigReal::parse(spec.nu, bits);
    if (!(m.b_ > 0.0) || !(m.b_ < 1.0)) fail(ErrorKind::config, "flat spot length b must lie in (0, 1)");
  }
  if (!(m.nu_ > 0.0)) fail(ErrorKind::config, "critical exponent nu must be positive");
  m.nu_value_ = m.nu_.to_double();
  m.parameter_error_ = error;
  m.b_error_ = error - t_error;
  m.span_ = 1 - m.b_;

  switch (spec.family) {
    case Family::canonical:
      m.l_ = BigReal(bits);
      m.branch_ = std::make_shared<BridgeBranch>(m.nu_, m.nu_value_);
      break;
    case Family::appendix_b:
      // Flat on [1 - b, 1]; the printed branch starts at x = 1.
      m.l_ = 1 - m.b_;
      m.nu_ = BigReal(3.0, bits);
      m.nu_value_ = 3.0;
      m.spec_.nu = "3";
      m.branch_ = std::make_shared<PrintedBranch>(m.b_, m.span_);
      break;
    case Family::rigid:
      m.l_ = BigReal(bits);
      m.branch_ = std::make_shared<IdentityBranch>();
      break;
    case Family::custom:
      if (!custom_branch) fail(ErrorKind::config, "custom family needs a branch");
      m.l_ = BigReal(bits);
      m.branch_ = custom_branch;
      m.custom_ = custom_branch;
      break;
  }
  m.r_ = m.l_ + m.b_;
  return m;
}

FlatSpotMap FlatSpotMap::from_spec(const MapSpec& spec, Precision bits) {
  if (spec.family == Family::custom) fail(ErrorKind::config, "custom family cannot be built from a spec");
  return build(spec, bits, nullptr);
}

FlatSpotMap FlatSpotMap::canonical(std::string_view b, std::string_view t, std::string_view nu,
                                   Precision bits) {
  return build(MapSpec{Family::canonical, std::string(b), std::string(t), std::string(nu)}, bits,
               nullptr);
}

FlatSpotMap FlatSpotMap::appendix_b(std::string_view b, std::string_view t, Precision bits) {
  return build(MapSpec{Family::appendix_b, std::string(b), std::string(t), "3"}, bits, nullptr);
}

FlatSpotMap FlatSpotMap::rigid(std::string_view t, Precision bits) {
  return build(MapSpec{Family::rigid, "0", std::string(t), "1"}, bits, nullptr);
}

FlatSpotMap FlatSpotMap::custom(std::shared_ptr<const Branch> branch, std::string_view b,
                                std::string_view t, std::string_view nu, Precision bits) {
  return build(MapSpec{Family::custom, std::string(b), std::string(t), std::string(nu)}, bits,
               std::move(branch));
}

FlatSpotMap FlatSpotMap::with_t(const BigReal& t) const {
  FlatSpotMap m = *this;
  m.spec_.t = t.to_exact_string();
  bool exact = false;
  m.t_ = BigReal::parse(m.spec_.t, precision_, &exact);
  m.parameter_error_ = b_error_ + (exact ? 0.0L : ulp(m.t_));
  return m;
}

FlatSpotMap FlatSpotMap::at_precision(Precision bits) const {
  FlatSpotMap m = build(spec_, bits, custom_);
  m.validated_ = validated_;
  return m;
}

void FlatSpotMap::require_validated() const {
  if (!validated_) fail(ErrorKind::unvalidated_map, "map has not passed validate()");
}

void FlatSpotMap::reduce(const BigReal& x, BigReal& cell, BigReal& offset) const {
  cell = floor(x - l_);
  offset = x - cell - r_;  // <= 0 on U, in (0, 1 - b) on the branch
}

BigReal FlatSpotMap::eval_unchecked(const BigReal& x) const {
  BigReal cell(precision_), offset(precision_);
  reduce(x, cell, offset);
  if (offset.sign() <= 0) return t_ + cell;
  return t_ + cell + branch_->value(offset / span_);
}

BigReal FlatSpotMap::deriv_unchecked(const BigReal& x) const {
  BigReal cell(precision_), offset(precision_);
  reduce(x, cell, offset);
  if (offset.sign() <= 0 && !b_.is_zero()) return BigReal(precision_);
  BigReal u = offset / span_;
  if (u >= 1.0 && !b_.is_zero()) return BigReal(precision_);
  return branch_->slope(u) / span_;
}

BigReal FlatSpotMap::eval(const BigReal& x) const {
  require_validated();
  return eval_unchecked(x);
}

BigReal FlatSpotMap::deriv(const BigReal& x) const {
  require_validated();
  return deriv_unchecked(x);
}

BigReal FlatSpotMap::nonlinearity(const BigReal& x) const {
  require_validated();
  BigReal cell(precision_), offset(precision_);
  reduce(x, cell, offset);
  BigReal u = offset / span_;
  if (!b_.is_zero() && (offset.sign() <= 0 || u >= 1.0)) {
    fail(ErrorKind::flat_spot_domain, "nonlinearity undefined on the closed flat spot");
  }
  return branch_->curvature(u) / span_;
}

long double FlatSpotMap::deriv_estimate(const BigReal& x) const {
  BigReal cell(precision_), offset(precision_);
  reduce(x, cell, offset);
  if (offset.sign() <= 0 && !b_.is_zero()) return 0.0L;
  return branch_->slope_estimate(offset / span_) / span_.to_long_double();
}

BigReal FlatSpotMap::preimage(const BigReal& y) const {
  require_validated();
  BigReal shifted = y - t_;
  BigReal cell = floor(shifted);
  BigReal v = shifted - cell;
  if (v.is_zero()) return cell + r_;
  return cell + r_ + branch_->inverse(v) * span_;
}

bool FlatSpotMap::in_flat_spot(const BigReal& x) const {
  if (b_.is_zero()) return ccw_length(l_, x).is_zero();
  return ccw_length(l_, x) <= b_;
}

BigReal FlatSpotMap::distance_to_flat_spot(const BigReal& x) const { return flat_spot().distance(x); }

Arc FlatSpotMap::flat_spot() const { return Arc{frac(l_), b_}; }

// ---------------------------------------------------------------- validation

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << (usable ? "usable" : "rejected");
  for (const auto& f : failures) out << "; " << f;
  if (has_flat_spot) {
    out << "; exponent right " << right_edge.estimate << " [" << right_edge.lo << ", "
        << right_edge.hi << "], left " << left_edge.estimate << " [" << left_edge.lo << ", "
        << left_edge.hi << "]";
  }
  return out.str();
}

namespace {

ExponentFit fit_exponent(const FlatSpotMap& map, bool right_edge, std::vector<std::string>& failures) {
  const Precision bits = map.precision();
  std::vector<double> xs, ys;
  for (long k = 10; k <= static_cast<long>(bits) / 4; ++k) {
    BigReal h = BigReal::power_of_two(-k, bits);
    BigReal x = right_edge ? map.r() + h : map.l() + 1L - h;
    BigReal d = map.deriv_unchecked(x);
    if (!(d > 0.0)) {
      failures.push_back(std::string("Df not positive near the ") + (right_edge ? "right" : "left") +
                         " edge of U at offset 2^-" + std::to_string(k));
      return ExponentFit{};
    }
    xs.push_back(-static_cast<double>(k) * std::log(2.0));
    ys.push_back(log(d.with_precision(64)).to_double());
  }
  if (xs.size() < 3) return ExponentFit{};
  LinearFit fit = fit_line(xs, ys);
  return ExponentFit{fit.slope + 1.0, fit.slope_lo + 1.0, fit.slope_hi + 1.0, fit.r_squared};
}

}  // namespace

ValidationReport FlatSpotMap::validate() const {
  ValidationReport report;
  const Precision bits = precision_;
  const BigReal tol = BigReal::power_of_two(-static_cast<long>(bits) / 2, bits);
  report.has_flat_spot = !b_.is_zero();

  // Degree one: the branch must run from f(r) = t to f(l + 1) = t + 1.
  BigReal g0 = branch_->value(BigReal(bits));
  BigReal g1 = branch_->value(BigReal(1.0, bits));
  if (abs(g0) > tol || abs(g1 - 1L) > tol) {
    report.failures.push_back("degree one violated: branch spans [" + g0.to_string(8) + ", " +
                              g1.to_string(8) + "] instead of [0, 1]");
  }

  // Monotonicity and positivity of Df on a dense grid of one period.
  const int grid = 4096;
  BigReal prev = eval_unchecked(l_);
  bool monotone = true, positive = true;
  for (int i = 1; i <= grid; ++i) {
    BigReal x = l_ + BigReal::from_int(i, bits) / static_cast<long>(grid);
    BigReal fx = eval_unchecked(x);
    if (monotone && fx < prev - tol) {
      report.failures.push_back("monotonicity violated at x = " + x.to_string(10));
      monotone = false;
    }
    BigReal offset = x - r_;
    if (positive && offset > 0.0 && x < l_ + 1L) {
      if (!(deriv_unchecked(x) > 0.0)) {
        report.failures.push_back("Df not positive at x = " + x.to_string(10));
        positive = false;
      }
    }
    prev = std::move(fx);
  }

  // Degree-one identity on sample points.
  for (int i = 0; i < 64; ++i) {
    BigReal x = BigReal::from_int(i, bits) / 64L + BigReal(0.0078125, bits);
    BigReal d = eval_unchecked(x + 1L) - eval_unchecked(x) - 1L;
    if (abs(d) > tol) {
      report.failures.push_back("f(x + 1) - f(x) != 1 at x = " + x.to_string(10));
      break;
    }
  }

  if (report.has_flat_spot) {
    // Flat exactly on U.
    for (int i = 0; i <= 16; ++i) {
      BigReal x = l_ + b_ * BigReal::from_int(i, bits) / 16L;
      if (eval_unchecked(x) != t_) {
        report.failures.push_back("not flat on U at x = " + x.to_string(10));
        break;
      }
    }
    BigReal h = BigReal::power_of_two(-20, bits);
    if (!(eval_unchecked(r_ + h) > t_) || !(eval_unchecked(l_ - h) < t_)) {
      report.failures.push_back("flat beyond the closure of U");
    }
    report.right_edge = fit_exponent(*this, true, report.failures);
    report.left_edge = fit_exponent(*this, false, report.failures);
    const double allowed = 0.02 * nu_value_ + 0.01;
    for (const auto* fit : {&report.right_edge, &report.left_edge}) {
      if (std::abs(fit->estimate - nu_value_) > allowed) {
        report.failures.push_back("local exponent " + std::to_string(fit->estimate) + " at " +
                                  (fit == &report.right_edge ? "right" : "left") +
                                  " edge differs from nu = " + std::to_string(nu_value_));
      }
    }
  }

  report.usable = report.failures.empty();
  return report;
}

FlatSpotMap FlatSpotMap::accept() const {
  ValidationReport report = validate();
  if (!report.usable) {
    std::string message = std::string(to_string(spec_.family)) + " map rejected";
    for (const auto& f : report.failures) message += "; " + f;
    fail(ErrorKind::validation_rejected, message);
  }
  FlatSpotMap m = *this;
  m.validated_ = true;
  return m;
}

}  // namespace flatspot
