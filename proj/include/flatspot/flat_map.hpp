#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flatspot/big_real.hpp"
#include "flatspot/circle.hpp"

namespace flatspot {

enum class Family { canonical, appendix_b, rigid, custom };

const char* to_string(Family family) noexcept;
Family parse_family(std::string_view name);  // throws Error(config)

// Parameters of a map as decimal strings, so that a map can be rebuilt at any
// precision without inheriting binary rounding from a previous one.
struct MapSpec {
  Family family = Family::canonical;
  std::string b = "0.5";
  std::string t = "0";
  std::string nu = "3";
};

// The increasing branch of a lift in the normalised coordinate u in [0, 1].
// A well-formed branch satisfies G(0) = 0, G(1) = 1 and G' > 0 on (0, 1).
class Branch {
 public:
  virtual ~Branch() = default;
  virtual BigReal value(const BigReal& u) const = 0;
  virtual BigReal slope(const BigReal& u) const = 0;
  // G''/G' at u; only called for u in the open interval.
  virtual BigReal curvature(const BigReal& u) const = 0;
  // Cheap approximation of G'(u) used for error propagation.
  virtual long double slope_estimate(const BigReal& u) const;
  // Solves G(u) = v for v in [0, 1] by safeguarded Newton iteration.
  virtual BigReal inverse(const BigReal& v) const;
};

// Monotone branch with two-sided power-law exponent nu:
// B(u) = u^nu / (u^nu + (1 - u)^nu).
class BridgeBranch final : public Branch {
 public:
  BridgeBranch(const BigReal& nu, double nu_value);
  BigReal value(const BigReal& u) const override;
  BigReal slope(const BigReal& u) const override;
  BigReal curvature(const BigReal& u) const override;
  long double slope_estimate(const BigReal& u) const override;

 private:
  BigReal power(const BigReal& u) const;  // u^nu, u >= 0

  BigReal nu_;
  double nu_value_;
  long integer_ = -1;     // nu when integral
  long half_integer_ = -1;  // floor(nu) when nu is a half-integer
};

struct ExponentFit {
  double estimate = 0.0;  // slope of log Df against log h, plus one
  double lo = 0.0;
  double hi = 0.0;
  double r_squared = 0.0;
};

struct ValidationReport {
  bool usable = false;
  std::vector<std::string> failures;
  ExponentFit right_edge;
  ExponentFit left_edge;
  bool has_flat_spot = true;

  std::string summary() const;
};

// Lift f of a degree-one circle map, flat on U = [l, r] (|U| = b) and equal to
// t + G((x - r) / (1 - b)) on [r, l + 1], extended by f(x + 1) = f(x) + 1.
class FlatSpotMap {
 public:
  static FlatSpotMap from_spec(const MapSpec& spec, Precision bits);
  static FlatSpotMap canonical(std::string_view b, std::string_view t, std::string_view nu,
                               Precision bits);
  static FlatSpotMap appendix_b(std::string_view b, std::string_view t, Precision bits);
  static FlatSpotMap rigid(std::string_view t, Precision bits);
  // User-supplied branch with flat spot [0, b].
  static FlatSpotMap custom(std::shared_ptr<const Branch> branch, std::string_view b,
                            std::string_view t, std::string_view nu, Precision bits);

  // Same map with translation t (taken exactly); keeps the validation status.
  FlatSpotMap with_t(const BigReal& t) const;
  // Same map rebuilt from its decimal parameters at another precision.
  FlatSpotMap at_precision(Precision bits) const;

  ValidationReport validate() const;
  // Validated copy; throws Error(validation_rejected) naming the failures.
  FlatSpotMap accept() const;
  bool validated() const { return validated_; }

  BigReal eval(const BigReal& x) const;
  BigReal deriv(const BigReal& x) const;
  // D^2 f / Df; throws Error(flat_spot_domain) on the closure of U.
  BigReal nonlinearity(const BigReal& x) const;
  // Fast Df(x) in long double precision for error bookkeeping.
  long double deriv_estimate(const BigReal& x) const;
  // The point x of the branch cell with f(x) = y (lift coordinates). For y on
  // the critical value returns the right end of the corresponding copy of U.
  BigReal preimage(const BigReal& y) const;

  bool in_flat_spot(const BigReal& x) const;  // closed U, circle coordinates
  BigReal distance_to_flat_spot(const BigReal& x) const;
  Arc flat_spot() const;

  Family family() const { return spec_.family; }
  const MapSpec& spec() const { return spec_; }
  Precision precision() const { return precision_; }
  const BigReal& l() const { return l_; }
  const BigReal& r() const { return r_; }
  const BigReal& b() const { return b_; }
  const BigReal& t() const { return t_; }
  const BigReal& nu_exact() const { return nu_; }
  double nu() const { return nu_value_; }
  // Absolute rounding committed when the decimal parameters were read.
  long double parameter_error() const { return parameter_error_; }
  const Branch& branch() const { return *branch_; }

  // Evaluation without the validation guard; used by validate() itself.
  BigReal eval_unchecked(const BigReal& x) const;
  BigReal deriv_unchecked(const BigReal& x) const;

 private:
  FlatSpotMap() = default;
  void require_validated() const;
  void reduce(const BigReal& x, BigReal& cell, BigReal& offset) const;
  static FlatSpotMap build(const MapSpec& spec, Precision bits,
                           std::shared_ptr<const Branch> custom_branch);

  MapSpec spec_;
  Precision precision_ = kDefaultPrecision;
  BigReal l_, r_, b_, t_, nu_, span_;  // span = 1 - b
  double nu_value_ = 1.0;
  long double parameter_error_ = 0.0L;
  long double b_error_ = 0.0L;
  std::shared_ptr<const Branch> branch_;
  std::shared_ptr<const Branch> custom_;
  bool validated_ = false;
};

}  // namespace flatspot
