#include "flatspot/scalings.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "flatspot/circle.hpp"
#include "flatspot/errors.hpp"

namespace flatspot {

namespace {

bool has_level(const ContinuedFraction& cf, int n) { return n >= 1 && n <= cf.max_level(); }

void require_level(const ContinuedFraction& cf, int n) {
  if (!has_level(cf, n) || cf.level_q(n) < 1) {
    fail(ErrorKind::undefined_at_level, "level " + std::to_string(n) + " is not available");
  }
}

// Exponent (1 - nu^a) / (1 - nu), equal to a when nu = 1.
BigReal geometric_sum(const BigReal& nu, std::int64_t a) {
  if (nu == BigReal(1.0, nu.precision())) return BigReal::from_int(a, nu.precision());
  return (1L - pow(nu, static_cast<unsigned long>(a))) / (1L - nu);
}

BigReal nu_power(const BigReal& nu, std::int64_t a) {
  if (a >= 0) return pow(nu, static_cast<unsigned long>(a));
  return 1L / pow(nu, static_cast<unsigned long>(-a));
}

}  // namespace

std::vector<SigmaEntry> sigma_series(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                                     int n_from, int n_to, long double t_uncertainty) {
  std::vector<SigmaEntry> out;
  std::map<int, std::size_t> index;
  auto entry_for = [&](int n) -> SigmaEntry {
    require_level(cf, n);
    SigmaEntry e;
    e.n = n;
    e.q = cf.level_q(n);
    orbit.require(e.q);
    e.y = orbit.distance_to_flat_spot(e.q);
    e.y_error = orbit.error(e.q) + orbit.sensitivity(e.q) * t_uncertainty;
    e.side = orbit.side(e.q);
    return e;
  };
  for (int n = n_from; n <= n_to; ++n) {
    SigmaEntry e = entry_for(n);
    if (n >= 3 && cf.level_q(n - 2) >= 1) {
      SigmaEntry base = entry_for(n - 2);
      e.sigma = e.y / base.y;
      const long double rel = e.y_error / e.y.to_long_double() + base.y_error / base.y.to_long_double();
      e.sigma_error = e.sigma->to_long_double() * rel;
    }
    out.push_back(std::move(e));
  }
  return out;
}

SigmaNi sigma_ni(const CriticalOrbit& orbit, const ContinuedFraction& cf, int n) {
  require_level(cf, n);
  if (n < 3 || cf.level_q(n - 2) < 1) {
    fail(ErrorKind::undefined_at_level, "sigma(n, i) needs q_{n-2} at level " + std::to_string(n));
  }
  SigmaNi out;
  out.n = n;
  out.a = cf.level_a(n);
  const std::int64_t q = cf.level_q(n);
  const std::int64_t q2 = cf.level_q(n - 2);
  orbit.require(std::max(out.a * q, q2));
  out.product = BigReal(1.0, orbit.precision);
  for (std::int64_t i = 1; i <= out.a; ++i) {
    BigReal num = orbit.gap((i - 1) * q, i * q);
    BigReal den = i < out.a ? orbit.gap(i * q, (i + 1) * q) : orbit.gap(out.a * q, q2);
    out.values.push_back(num / den);
    out.product *= out.values.back();
  }
  out.sigma = orbit.distance_to_flat_spot(q) / orbit.distance_to_flat_spot(q2);
  out.product_log_ratio = log(out.sigma / out.product).to_double();
  return out;
}

std::vector<MuEntry> mu_series(const std::vector<BigReal>& sigma,
                               const std::vector<long double>& errors) {
  if (sigma.size() != errors.size()) {
    fail(ErrorKind::length_mismatch, "mu_series: sigma and error lists differ in length");
  }
  std::vector<MuEntry> out;
  for (std::size_t i = 0; i + 2 < sigma.size(); ++i) {
    BigReal num = sigma[i + 2] - sigma[i + 1];
    BigReal den = sigma[i + 1] - sigma[i];
    MuEntry m;
    const long double noise_den = 10.0L * (errors[i] + errors[i + 1]);
    const long double noise_num = 10.0L * (errors[i + 1] + errors[i + 2]);
    m.reliable = abs(den).to_long_double() > noise_den && abs(num).to_long_double() > noise_num;
    if (den.is_zero()) {
      m.value = BigReal(NAN, sigma[i].precision());
      m.reliable = false;
    } else {
      m.value = num / den;
    }
    m.negative = m.value < 0.0;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<DerivativeEntry> derivative_series(const CriticalOrbit& orbit,
                                               const ContinuedFraction& cf, int n_from, int n_to) {
  std::vector<DerivativeEntry> out;
  std::int64_t q_max = 0;
  for (int n = n_from; n <= n_to; ++n) {
    require_level(cf, n);
    q_max = std::max(q_max, cf.level_q(n));
  }
  orbit.require(q_max);
  std::map<std::int64_t, std::pair<BigReal, BigReal>> at;
  BigReal product(1.0, orbit.precision);
  BigReal log_sum(orbit.precision);
  for (std::int64_t k = 1; k <= q_max; ++k) {
    BigReal d = orbit.map.deriv(orbit.points[static_cast<std::size_t>(k)]);
    if (!(d > 0.0)) {
      fail(ErrorKind::flat_spot_domain, "Df vanishes at orbit point " + std::to_string(k));
    }
    product *= d;
    log_sum += log(d);
    at.insert_or_assign(k, std::make_pair(product, log_sum));
    if (at.size() > 1) {
      // Keep only the running values needed at the requested levels.
      bool wanted = false;
      for (int n = n_from; n <= n_to; ++n) wanted = wanted || cf.level_q(n) == k;
      if (!wanted) at.erase(k);
    }
  }
  for (int n = n_from; n <= n_to; ++n) {
    DerivativeEntry e;
    e.n = n;
    e.q = cf.level_q(n);
    const auto& [D, L] = at.at(e.q);
    e.D = D;
    e.log_D = L;
    e.relative_gap = (abs(exp(L) - D) / D).to_double();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<SEntry> s_sequence(const std::vector<BigReal>& sigma1, const ContinuedFraction& cf,
                               double nu, int n_from) {
  std::vector<SEntry> out;
  if (sigma1.empty()) return out;
  const Precision bits = sigma1.front().precision();
  BigReal nu_big(nu, bits);
  for (std::size_t k = 0; k < sigma1.size(); ++k) {
    const int n = n_from + static_cast<int>(k);
    if (!(sigma1[k] > 0.0)) {
      fail(ErrorKind::nonpositive_scaling, "sigma(" + std::to_string(n) + ", 1) is not positive");
    }
    SEntry e;
    e.n = n;
    e.s = -nu_power(nu_big, cf.level_a(n)) * log(sigma1[k]);
    out.push_back(std::move(e));
  }
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const int n = out[k].n;
    BigReal coeff = nu == 1.0 ? BigReal::from_int(cf.level_a(n), bits)
                              : (1L - nu_power(nu_big, -cf.level_a(n))) / (nu_big - 1L);
    out[k].residual = out[k + 1].s - coeff * out[k].s - nu_power(nu_big, -cf.level_a(n - 1)) * out[k - 1].s;
  }
  return out;
}

std::vector<GammaEntry> gamma_series(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                                     int n_from, int n_to) {
  std::vector<GammaEntry> out;
  for (int n = n_from; n <= n_to; ++n) {
    require_level(cf, n);
    const std::int64_t q = cf.level_q(n);
    orbit.require(3 * q);
    out.push_back(GammaEntry{n, orbit.gap(3 * q, q) / orbit.distance_to_flat_spot(q)});
  }
  return out;
}

BigReal nonlinearity_R(const CriticalOrbit& orbit, const ContinuedFraction& cf, int n) {
  require_level(cf, n);
  if (n < 3 || cf.level_q(n - 2) < 1) {
    fail(ErrorKind::undefined_at_level, "R_n needs q_{n-2} at level " + std::to_string(n));
  }
  const std::int64_t q = cf.level_q(n);
  const std::int64_t q1 = cf.level_q(n - 1);
  const std::int64_t q2 = cf.level_q(n - 2);
  const std::int64_t aq = cf.level_a(n) * q;
  orbit.require(std::max(aq + q1, q2 + q1));

  std::int64_t shift_a = 0, shift_b = 0;
  BigReal xa = orbit.lift_near_flat_spot(aq, &shift_a);
  (void)orbit.lift_near_flat_spot(q2, &shift_b);
  const bool right = xa > orbit.map.r();
  // Lengths of f^j(A) and f^j(B), j >= 1, from lifts along the orbit.
  auto length_a = [&](std::int64_t j) {
    BigReal end = orbit.lift(aq + j) - shift_a;
    return right ? end - orbit.lift(j) : orbit.lift(j) - end;
  };
  auto length_b = [&](std::int64_t j) {
    return abs((orbit.lift(q2 + j) - shift_b) - (orbit.lift(aq + j) - shift_a));
  };
  BigReal ratio_b = length_b(q1) / length_b(1);
  BigReal ratio_a = length_a(q1) / length_a(1);
  return log(ratio_b / ratio_a);
}

// ---------------------------------------------------------------- relations

std::string relation_family(const std::string& id) {
  const auto pos = id.find('[');
  return pos == std::string::npos ? id : id.substr(0, pos);
}

std::vector<RelationResidual> relation_residuals(const RelationInputs& in,
                                                 std::vector<std::string>* notes) {
  if (in.orbit == nullptr || in.cf == nullptr) fail(ErrorKind::config, "relation inputs incomplete");
  const CriticalOrbit& orbit = *in.orbit;
  const ContinuedFraction& cf = *in.cf;
  const Precision bits = orbit.precision;
  const BigReal nu = orbit.map.nu_exact();
  std::vector<RelationResidual> out;

  auto add = [&](std::string id, int n, BigReal lhs, BigReal rhs) {
    RelationResidual r;
    r.id = std::move(id);
    r.n = n;
    r.log_ratio = (lhs > 0.0 && rhs > 0.0) ? log(lhs / rhs).to_double() : NAN;
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    out.push_back(std::move(r));
  };
  auto indexed = [](const char* id, std::int64_t i) {
    return std::string(id) + "[i=" + std::to_string(i) + "]";
  };

  std::map<int, SigmaNi> sni;
  auto sigma_at = [&](int n) -> const SigmaNi& {
    auto it = sni.find(n);
    if (it == sni.end()) it = sni.emplace(n, sigma_ni(orbit, cf, n)).first;
    return it->second;
  };
  std::map<int, BigReal> derivs;
  {
    auto ds = derivative_series(orbit, cf, in.n_from, in.n_to);
    for (auto& d : ds) derivs.emplace(d.n, d.D);
  }

  bool flagged_39 = false;
  for (int n = in.n_from; n <= in.n_to; ++n) {
    require_level(cf, n);
    const std::int64_t q = cf.level_q(n);
    const std::int64_t a = cf.level_a(n);
    const std::int64_t a_prev = cf.level_a(n - 1);

    // 3.1: |-q_n| against dist(q_{n-1}, U).
    if (in.backward != nullptr && in.backward->size() >= q && cf.level_q(n - 1) >= 1) {
      add("3.1", n, in.backward->length(q), orbit.distance_to_flat_spot(cf.level_q(n - 1)));
    }

    for (std::int64_t i = 1; i <= a; ++i) {
      BigReal step = orbit.gap((i - 1) * q, i * q);
      BigReal image = orbit.gap(1, i * q + 1);  // |f(i q_n)| = |(1, f(i q_n))|
      if (i >= 2) {
        add(indexed("3.2", i), n, step, orbit.distance_to_flat_spot(i * q));
        add(indexed("3.3", i), n, orbit.gap((i - 1) * q + 1, i * q + 1), image);
      }
      BigReal df = orbit.map.deriv(orbit.points[static_cast<std::size_t>(i * q)]);
      add(indexed("3.4", i), n, step / image * df, nu);
    }

    if (n < 3 || cf.level_q(n - 2) < 1) continue;
    const SigmaNi& s = sigma_at(n);
    const BigReal& D = derivs.at(n);
    if (a > 1) add("3.5a", n, D, nu / s.values[0]);
    for (std::int64_t i = 2; i <= a - 1; ++i) {
      add(indexed("3.5b", i), n, s.values[i - 1], pow(s.values[i - 2], nu));
    }
    for (std::int64_t i = 1; i <= std::max<std::int64_t>(1, a - 1); ++i) {
      add(indexed("3.6", i), n, s.values[i - 1], pow(s.values[0], nu_power(nu, i - 1)));
    }
    BigReal nu_prev = nu_power(nu, a_prev);
    if (a == 1) {
      add("3.7", n, D, nu_prev * nu / s.values[0]);
    } else {
      BigReal rhs = nu_prev * nu / s.values[a - 1];
      for (std::int64_t i = 1; i <= a - 1; ++i) rhs *= pow(s.values[i - 1], nu - 1L);
      add("3.8", n, D, rhs);
      add("3.9", n, s.values[a - 1], nu_prev * pow(s.values[0], nu_power(nu, a - 1)));
      flagged_39 = true;
    }

    // Recursion: sigma(n+1,1)^{nu^{a_{n+1}}} against
    // sigma(n,1)^{(1 - nu^{a_n})/(1 - nu)} sigma(n-1,1), without nu^p.
    if (n - 1 >= 3 && has_level(cf, n + 1) && cf.level_q(n - 3) >= 1) {
      const SigmaNi& next = sigma_at(n + 1);
      const SigmaNi& prev = sigma_at(n - 1);
      BigReal lhs = pow(next.values[0], nu_power(nu, cf.level_a(n + 1)));
      BigReal rhs = pow(s.values[0], geometric_sum(nu, a)) * prev.values[0];
      add("P3.1", n, lhs, rhs);
    }
  }
  (void)bits;
  if (notes != nullptr && flagged_39) {
    notes->push_back(
        "3.9: prefactor nu^{a_{n-1}} does not follow from 3.5a/3.6/3.8 as printed; both sides reported");
  }
  return out;
}

std::vector<RelationSummary> summarize_relations(const std::vector<RelationResidual>& residuals,
                                                 int n_from, int n_to) {
  std::map<std::string, std::vector<const RelationResidual*>> groups;
  for (const auto& r : residuals) {
    if (r.n >= n_from && r.n <= n_to && std::isfinite(r.log_ratio)) groups[relation_family(r.id)].push_back(&r);
  }
  std::vector<RelationSummary> out;
  for (const auto& [id, rs] : groups) {
    RelationSummary s;
    s.id = id;
    s.count = static_cast<int>(rs.size());
    std::vector<double> xs, ys;
    for (const auto* r : rs) {
      s.max_abs_log_ratio = std::max(s.max_abs_log_ratio, std::abs(r->log_ratio));
      xs.push_back(r->n);
      ys.push_back(std::abs(r->log_ratio));
    }
    const bool varied = std::any_of(xs.begin(), xs.end(), [&](double x) { return x != xs.front(); });
    if (xs.size() >= 3 && varied) s.trend = fit_line(xs, ys);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- report

std::int64_t required_orbit_length(const ContinuedFraction& cf, const ReportOptions& options) {
  std::int64_t need = cf.level_q(options.n_to + 2);
  if (options.extended) {
    for (int n = std::max(1, options.n_from - 1); n <= options.n_to + 1; ++n) {
      const std::int64_t q = cf.level_q(n);
      const std::int64_t a = cf.level_a(n);
      need = std::max({need, a * q + 1, 3 * q});
      if (n >= 2) need = std::max(need, a * q + cf.level_q(n - 1));
      if (n >= 3) need = std::max(need, cf.level_q(n - 2) + cf.level_q(n - 1));
    }
  }
  return need;
}

ScalingReport build_report(const CriticalOrbit& orbit, const ContinuedFraction& cf,
                           const ReportOptions& options) {
  if (options.n_to < options.n_from) fail(ErrorKind::config, "empty level range");
  if (options.n_to < 3) fail(ErrorKind::config, "scaling reports need depth at least 3");
  ScalingReport report;
  report.base_convention =
      "level n uses q_n = q(n-1) of the convergents (golden mean: q_1 = q_2 = 1, q_10 = 55); "
      "y_n = shortest-arc distance from U to q_n; sigma(n) = y_n/y_{n-2} from n = 3";

  auto sig = sigma_series(orbit, cf, options.n_from, options.n_to + 2, options.t_uncertainty);
  std::vector<BigReal> sigmas;
  std::vector<long double> errors;
  std::vector<int> sigma_levels;
  for (const auto& e : sig) {
    if (e.sigma) {
      sigmas.push_back(*e.sigma);
      errors.push_back(e.sigma_error);
      sigma_levels.push_back(e.n);
    }
  }
  auto mus = mu_series(sigmas, errors);
  std::map<int, MuEntry> mu_at;
  for (std::size_t i = 0; i < mus.size(); ++i) mu_at.emplace(sigma_levels[i], mus[i]);

  for (const auto& e : sig) {
    if (e.n > options.n_to) break;
    ScalingRow row;
    row.n = e.n;
    row.q = e.q;
    row.a = cf.level_a(e.n);
    row.y = e.y;
    row.y_error = e.y_error;
    row.side = e.side;
    row.sigma = e.sigma;
    row.sigma_error = e.sigma_error;
    if (auto it = mu_at.find(e.n); it != mu_at.end()) row.mu = it->second;
    report.rows.push_back(std::move(row));
  }

  if (!options.extended) return report;

  const int first = std::max(3, options.n_from);
  std::vector<BigReal> sigma1;
  const int s_from = std::max(3, first - 1);
  for (int n = s_from; n <= options.n_to + 1; ++n) sigma1.push_back(sigma_ni(orbit, cf, n).values[0]);
  auto s_seq = s_sequence(sigma1, cf, orbit.map.nu(), s_from);
  auto derivs = derivative_series(orbit, cf, options.n_from, options.n_to);
  auto gammas = gamma_series(orbit, cf, options.n_from, options.n_to);

  for (auto& row : report.rows) {
    if (row.n >= 3 && cf.level_q(row.n - 2) >= 1) {
      row.sigma_ni = sigma_ni(orbit, cf, row.n).values;
      row.R = nonlinearity_R(orbit, cf, row.n);
    }
    for (const auto& d : derivs) if (d.n == row.n) row.D = d.D;
    for (const auto& g : gammas) if (g.n == row.n) row.gamma = g.gamma;
    for (const auto& s : s_seq) {
      if (s.n == row.n) {
        row.s = s.s;
        row.s_residual = s.residual;
      }
    }
  }

  BackwardOrbit backward = backward_orbit(orbit.map, cf.level_q(options.n_to));
  RelationInputs in{&orbit, &cf, &backward, first, options.n_to};
  report.residuals = relation_residuals(in, &report.notes);
  return report;
}

}  // namespace flatspot
