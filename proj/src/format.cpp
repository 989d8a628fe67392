#include "flatspot/format.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace flatspot {

namespace {

using nlohmann::json;

std::string superscript(long e) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out = e < 0 ? "⁻" : "";
  const std::string text = std::to_string(std::labs(e));
  for (char c : text) out += digits[c - '0'];
  return out;
}

// Decimal digits and exponent of |x| rounded to `sig` significant figures.
std::pair<std::string, long> significant(const BigReal& x, int sig) {
  std::string s = abs(x).to_string(sig);  // d.ddde±X
  const auto e_pos = s.find('e');
  std::string digits;
  for (char c : s.substr(0, e_pos)) {
    if (c != '.') digits += c;
  }
  return {digits, std::stol(s.substr(e_pos + 1))};
}

// Places the decimal point so that `int_digits` digits precede it; a
// non-positive count gives a leading point without a zero.
std::string place_point(const std::string& digits, long int_digits) {
  if (int_digits <= 0) return "." + std::string(static_cast<std::size_t>(-int_digits), '0') + digits;
  if (static_cast<std::size_t>(int_digits) >= digits.size()) {
    return digits + std::string(static_cast<std::size_t>(int_digits) - digits.size(), '0');
  }
  return digits.substr(0, static_cast<std::size_t>(int_digits)) + "." +
         digits.substr(static_cast<std::size_t>(int_digits));
}

std::string opt(const std::optional<BigReal>& x) { return x ? plain(*x) : ""; }

}  // namespace

std::string paper_length(const BigReal& x) {
  if (!x.is_finite()) return x.to_string();
  if (x.is_zero()) return "0";
  auto [digits, e] = significant(x, 4);
  const long e3 = 3 * static_cast<long>(std::floor((e + 1) / 3.0));
  std::string out = (x < 0.0 ? "-" : "") + place_point(digits, e - e3 + 1);
  if (e3 != 0) out += "·10" + superscript(e3);
  return out;
}

std::string paper_ratio(const BigReal& x) {
  if (!x.is_finite()) return x.to_string();
  if (x.is_zero()) return "0";
  const bool negative = x < 0.0;
  auto [digits, e] = significant(x, negative ? 3 : 4);
  if (e < -3 || e > 3) return plain(x, 4);
  return (negative ? "-" : "") + place_point(digits, e + 1);
}

std::string plain(const BigReal& x, int digits) { return x.to_string(digits); }

std::string plain(long double x) {
  std::ostringstream s;
  s << std::setprecision(6) << std::scientific << static_cast<double>(x);
  return s.str();
}

// ---------------------------------------------------------------- tables

void write_table_csv(std::ostream& out, const ScalingReport& report, bool paper_format) {
  out << "# " << report.base_convention << "\n";
  out << "n,y_n,sigma_n,mu_n,q_n,side,y_error,sigma_error,mu_reliable\n";
  for (const auto& r : report.rows) {
    out << r.n << ",";
    out << (paper_format ? paper_length(r.y) : plain(r.y)) << ",";
    if (r.sigma) out << (paper_format ? paper_ratio(*r.sigma) : plain(*r.sigma));
    out << ",";
    if (r.mu) out << (paper_format ? paper_ratio(r.mu->value) : plain(r.mu->value));
    out << "," << r.q << "," << r.side << "," << plain(r.y_error) << ",";
    if (r.sigma) out << plain(r.sigma_error);
    out << ",";
    if (r.mu) out << (r.mu->reliable ? "yes" : "no");
    out << "\n";
  }
}

void write_extended_csv(std::ostream& out, const ScalingReport& report) {
  out << "n,q_n,a_n,y_n,sigma_n,D_qn,s_n,s_residual,Gamma_n,R_n,sigma_ni\n";
  for (const auto& r : report.rows) {
    out << r.n << "," << r.q << "," << r.a << "," << plain(r.y) << "," << opt(r.sigma) << ","
        << opt(r.D) << "," << opt(r.s) << "," << opt(r.s_residual) << "," << opt(r.gamma) << ","
        << opt(r.R) << ",";
    for (std::size_t i = 0; i < r.sigma_ni.size(); ++i) {
      out << (i ? ";" : "") << plain(r.sigma_ni[i]);
    }
    out << "\n";
  }
}

void write_residuals_csv(std::ostream& out, const ScalingReport& report) {
  out << "relation,n,lhs,rhs,log_ratio\n";
  for (const auto& r : report.residuals) {
    out << r.id << "," << r.n << "," << plain(r.lhs) << "," << plain(r.rhs) << ","
        << std::setprecision(17) << r.log_ratio << "\n";
  }
}

std::string console_table(const ScalingReport& report, bool paper_format) {
  std::ostringstream out;
  out << std::left << std::setw(5) << "n" << std::setw(16) << "y_n" << std::setw(12) << "sigma(n)"
      << "mu_n\n";
  for (const auto& r : report.rows) {
    auto len = [&](const BigReal& x) { return paper_format ? paper_length(x) : plain(x, 4); };
    auto rat = [&](const BigReal& x) { return paper_format ? paper_ratio(x) : plain(x, 4); };
    std::string y = len(r.y);
    // setw counts bytes; pad by display width instead.
    std::size_t width = 0;
    for (unsigned char c : y) width += (c & 0xC0) != 0x80;
    out << std::setw(5) << r.n << y << std::string(width < 16 ? 16 - width : 1, ' ');
    out << std::setw(12) << (r.sigma ? rat(*r.sigma) : "-");
    if (r.mu) {
      out << rat(r.mu->value) << (r.mu->reliable ? "" : " (unreliable)");
    } else {
      out << "-";
    }
    out << "\n";
  }
  return out.str();
}

void write_closest_returns_csv(std::ostream& out, const CriticalOrbit& orbit, const ContinuedFraction& cf,
                               int n_from, int n_to) {
  out << "n,q_n,y_n,error,side\n";
  for (const auto& c : closest_returns(orbit, cf, n_from, n_to)) {
    out << c.n << "," << c.q << "," << plain(c.y) << "," << plain(c.error) << "," << c.side << "\n";
  }
}

void write_orbit_csv(std::ostream& out, const CriticalOrbit& orbit) {
  out << "i,x,winding,error\n";
  for (std::int64_t i = 1; i <= orbit.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out << i << "," << plain(orbit.points[k]) << "," << orbit.windings[k] << "," << plain(orbit.errors[k])
        << "\n";
  }
}

// ---------------------------------------------------------------- dichotomy

void write_dichotomy_csv(std::ostream& out, const DichotomyRun& run) {
  out << "n";
  for (const auto& c : run.classes) out << ",sigma_nu=" << c.nu << ",mu_nu=" << c.nu;
  out << "\n";
  if (run.runs.empty()) return;
  for (std::size_t k = 0; k < run.runs.front().report.rows.size(); ++k) {
    out << run.runs.front().report.rows[k].n;
    for (const auto& r : run.runs) {
      const auto& row = r.report.rows.at(k);
      out << "," << opt(row.sigma) << ",";
      if (row.mu) out << plain(row.mu->value);
    }
    out << "\n";
  }
}

json to_json(const Classification& c) {
  auto number = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return json{{"nu", c.nu},
              {"classification", c.label},
              {"slow", c.slow},
              {"window", {c.window_from, c.window_to}},
              {"sigma_last", number(c.sigma_last)},
              {"mu_median", number(c.mu_median)},
              {"mu_count", c.mu_count},
              {"ratio_median", number(c.ratio_median)},
              {"extrapolated_limit", number(c.limit)}};
}

// ---------------------------------------------------------------- geometry

void write_partitions_csv(std::ostream& out, const std::vector<Partition>& partitions) {
  out << "level,kind,index,left,right,length\n";
  for (const auto& p : partitions) {
    for (std::size_t i = 0; i < p.preimages.size(); ++i) {
      const Arc& a = p.preimages[i];
      out << p.n << ",preimage," << i << "," << plain(a.start) << "," << plain(a.end()) << ","
          << plain(a.length) << "\n";
    }
    for (const auto* h : p.holes()) {
      out << p.n << "," << to_string(h->kind) << "," << h->index << "," << plain(h->arc.start) << ","
          << plain(h->arc.end()) << "," << plain(h->arc.length) << "\n";
    }
  }
}

void write_deficit_csv(std::ostream& out, const DeficitReport& deficit) {
  out << "level,hole_total,ratio\n";
  for (std::size_t k = 0; k < deficit.levels.size(); ++k) {
    out << deficit.levels[k] << "," << plain(deficit.totals[k]) << ",";
    if (k > 0) out << std::setprecision(17) << deficit.ratios[k - 1];
    out << "\n";
  }
}

void write_hausdorff_csv(std::ostream& out, const HausdorffReport& report) {
  out << "level,alpha,S\n";
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    for (std::size_t a = 0; a < report.alphas.size(); ++a) {
      out << report.levels[k] << "," << report.alphas[a] << "," << plain(report.sums[k][a]) << "\n";
    }
  }
}

json to_json(const GeometryRun& run) {
  json chains = json::array();
  for (const auto& c : run.chains) {
    chains.push_back({{"level", c.level},
                      {"steps", c.steps},
                      {"sup_nonlinearity", c.result.sup.to_double()},
                      {"total_length", c.result.total_length.to_double()},
                      {"distortion", c.result.distortion.to_double()}});
  }
  json h = {{"verdict", run.hausdorff.verdict}, {"caveat", run.hausdorff.caveat}};
  h["alpha_star"] = run.hausdorff.alpha_star ? json(*run.hausdorff.alpha_star) : json(nullptr);
  return json{{"t", run.parameter.map.t().to_exact_string()},
              {"deficit",
               {{"rate", run.deficit.rate},
                {"slope", run.deficit.fit.slope},
                {"slope_ci", {run.deficit.fit.slope_lo, run.deficit.fit.slope_hi}},
                {"r_squared", run.deficit.fit.r_squared}}},
              {"hausdorff", h},
              {"chains", chains}};
}

// ---------------------------------------------------------------- matrices

void write_matrices_csv(std::ostream& out, const MatricesRun& run) {
  out << "n,alpha_n,beta_n,opnorm_of_window\n";
  for (const auto& r : run.rows) {
    out << r.n << "," << plain(r.alpha) << "," << plain(r.beta) << "," << plain(r.norm) << "\n";
  }
}

void write_zeta_csv(std::ostream& out, const ZetaTrack& zeta) {
  out << "n,zeta_norm,residual\n";
  for (std::size_t k = 0; k < zeta.levels.size(); ++k) {
    out << zeta.levels[k] << "," << plain(zeta.norms[k]) << ",";
    if (k < zeta.residuals.size()) out << plain(zeta.residuals[k]);
    out << "\n";
  }
}

json to_json(const MatricesRun& run) {
  json out;
  out["nu"] = run.sequence.nu.to_double();
  out["trials"] = run.find_n ? run.find_n->trials : 0;
  if (run.find_n) {
    out["N"] = run.find_n->N;
    out["worst_norm"] = run.find_n->worst_norm.to_double();
  } else {
    out["N"] = nullptr;
    out["worst_norm"] = nullptr;
    out["status"] = run.find_n_error;
  }
  if (run.closed_form_deviation) out["closed_form_deviation"] = run.closed_form_deviation->to_double();
  if (!run.rows.empty()) {
    BigReal max_alpha = run.rows.front().alpha, max_beta = run.rows.front().beta;
    for (const auto& r : run.rows) {
      if (r.alpha > max_alpha) max_alpha = r.alpha;
      if (r.beta > max_beta) max_beta = r.beta;
    }
    out["max_alpha"] = max_alpha.to_double();
    out["max_beta"] = max_beta.to_double();
  }
  if (run.zeta) {
    out["zeta_max_norm"] = run.zeta->max_norm.to_double();
    out["zeta_max_residual"] = run.zeta->max_residual.to_double();
  }
  return out;
}

// ---------------------------------------------------------------- params

void write_params_csv(std::ostream& out, const ParamsRun& run) {
  out << "n,fraction,t_left,t_right,width,delta_n,sigma_prev_pow_nu,ratio\n";
  for (const auto& r : run.rows) {
    const auto& li = r.interval;
    out << li.n << "," << li.fraction.p << "/" << li.fraction.q << "," << plain(li.t_left) << ","
        << plain(li.t_right) << "," << plain(li.width) << "," << opt(r.delta) << "," << opt(r.predicted)
        << ",";
    if (r.ratio) out << std::setprecision(17) << *r.ratio;
    out << "\n";
  }
}

// ---------------------------------------------------------------- small reports

json to_json(const ValidationReport& report) {
  auto fit = [](const ExponentFit& f) {
    return json{{"estimate", f.estimate}, {"ci", {f.lo, f.hi}}, {"r_squared", f.r_squared}};
  };
  json out{{"usable", report.usable}, {"failures", report.failures}, {"has_flat_spot", report.has_flat_spot}};
  if (report.has_flat_spot) {
    out["exponent_right"] = fit(report.right_edge);
    out["exponent_left"] = fit(report.left_edge);
  }
  return out;
}

json to_json(const RotationNumber& rho) {
  json out{{"kind", rho.kind == RotationNumber::Kind::rational ? "rational" : "irrational"},
           {"lower", std::to_string(rho.lower.p) + "/" + std::to_string(rho.lower.q)},
           {"upper", std::to_string(rho.upper.p) + "/" + std::to_string(rho.upper.q)},
           {"value", rho.value.to_string()},
           {"error", rho.error.to_string(6)},
           {"iterations", rho.iterations},
           {"precision", rho.precision}};
  if (rho.kind == RotationNumber::Kind::rational) {
    out["fraction"] = std::to_string(rho.fraction.p) + "/" + std::to_string(rho.fraction.q);
    out["witness"] = rho.witness;
  }
  return out;
}

json to_json(const SearchResult& search) {
  return json{{"t", search.t.to_exact_string()},
              {"lo", search.lo.to_exact_string()},
              {"hi", search.hi.to_exact_string()},
              {"steps", search.steps},
              {"budget_limited", search.budget_limited},
              {"deepest", search.deepest},
              {"precision", search.precision}};
}

}  // namespace flatspot
