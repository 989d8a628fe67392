#include "flatspot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "flatspot/errors.hpp"
#include "flatspot/stats.hpp"

namespace flatspot {

namespace {

using nlohmann::json;

Rational parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    Rational r{std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
    if (r.q <= 0) fail(ErrorKind::config, "target denominator must be positive");
    return reduced(r);
  } catch (const std::logic_error&) {
    fail(ErrorKind::config, "target '" + text + "' is not of the form p/q");
  }
}

void emit(const ProgressSink& sink, json record) {
  if (sink) sink(record);
}

}  // namespace

FlatSpotMap configured_map(const ExperimentConfig& config, const std::string& nu) {
  MapSpec spec = config.map;
  if (!nu.empty()) spec.nu = nu;
  return FlatSpotMap::from_spec(spec, config.precision_bits).accept();
}

ContinuedFraction target_expansion(const ExperimentConfig& config, int depth) {
  if (config.target == "golden") return ContinuedFraction::golden(depth);
  return ContinuedFraction::of_rational(parse_fraction(config.target));
}

Target target_value(const ExperimentConfig& config, Precision bits) {
  if (config.target == "golden") return Target::golden(bits);
  return Target::of(parse_fraction(config.target), bits);
}

ParameterRun locate_parameter(const ExperimentConfig& config, int depth, const std::string& nu,
                              const ProgressSink& progress, const json* resume) {
  const FlatSpotMap family = configured_map(config, nu);
  ContinuedFraction cf = target_expansion(config, depth + 8);
  const Precision bits = config.precision_bits;

  SearchOptions so;
  so.orbit.precision = bits;
  so.orbit.ceiling = config.precision_ceiling;
  if (config.max_iters > 0) {
    so.max_iters = config.max_iters;
  } else if (cf.finite()) {
    so.max_iters = 4 * cf.level_q(cf.max_level()) + 16;
  } else {
    so.max_iters = cf.level_q(depth + 5);
  }
  const long tol_bits = config.t_tolerance_bits > 0 ? config.t_tolerance_bits
                                                    : static_cast<long>(config.precision_ceiling) - 16;
  so.tol_t = BigReal::power_of_two(-tol_bits, bits);
  const std::string nu_text = nu.empty() ? config.map.nu : nu;

  if (resume != nullptr && resume->value("stage", "") == "find-t" &&
      resume->value("nu", "") == nu_text && resume->value("depth", -1) == depth) {
    const Precision p = resume->at("precision").get<Precision>();
    so.orbit.precision = p;
    so.lo = BigReal::parse(resume->at("lo").get<std::string>(), p);
    so.hi = BigReal::parse(resume->at("hi").get<std::string>(), p);
  }
  if (progress) {
    so.progress = [&](const BigReal& lo, const BigReal& hi, Precision p, int steps) {
      progress(json{{"stage", "find-t"},
                    {"nu", nu_text},
                    {"depth", depth},
                    {"lo", lo.to_exact_string()},
                    {"hi", hi.to_exact_string()},
                    {"precision", p},
                    {"steps", steps}});
    };
  }

  ParameterRun run{family, {}, cf};
  run.search = find_parameter(family, target_value(config, std::max(bits, so.orbit.precision)), so);
  run.map = family.at_precision(run.search.precision).with_t(run.search.t);
  return run;
}

TableRun run_table(const ExperimentConfig& config, const std::string& nu, const ProgressSink& progress,
                   const json* resume) {
  check_config(config, true);
  const std::string nu_text = nu.empty() ? config.map.nu : nu;
  ParameterRun p = locate_parameter(config, config.depth + 2, nu, progress, resume);

  ReportOptions ro;
  ro.n_from = config.n_from;
  ro.n_to = config.depth;
  ro.extended = config.extended;
  if (config.bracket_uncertainty) {
    ro.t_uncertainty = ((p.search.hi - p.search.lo) / 2L).to_long_double();
  }
  if (config.depth + 2 > p.cf.max_level()) {
    fail(ErrorKind::config, "depth exceeds the levels of the target expansion");
  }
  std::int64_t need = required_orbit_length(p.cf, ro);
  if (config.orbit_length > need) need = config.orbit_length;
  emit(progress, json{{"stage", "orbit"}, {"nu", nu_text}, {"length", need}, {"precision", p.search.precision}});

  OrbitOptions oo;
  oo.precision = p.search.precision;
  oo.ceiling = std::max(config.precision_ceiling, p.search.precision);
  TableRun run{p, critical_orbit(p.map, need, oo), {}};
  if (run.orbit.size() < need) {
    fail(ErrorKind::budget_exceeded,
         "critical orbit fell into U at step " + std::to_string(run.orbit.size() + 1) +
             " before reaching " + std::to_string(need) + "; raise max_iters");
  }
  run.report = build_report(run.orbit, p.cf, ro);
  emit(progress, json{{"stage", "table-done"}, {"nu", nu_text}});
  return run;
}

std::optional<double> extrapolated_limit(const ScalingReport& report, int n_from, int n_to) {
  std::vector<double> mus;
  const ScalingRow* last = nullptr;
  const ScalingRow* prev = nullptr;
  for (const auto& row : report.rows) {
    if (row.n < n_from || row.n > n_to || !row.sigma) continue;
    if (row.mu && row.mu->reliable) mus.push_back(row.mu->value.to_double());
    prev = last;
    last = &row;
  }
  if (mus.empty() || last == nullptr || prev == nullptr) return std::nullopt;
  const double mu = median(mus);
  if (!(mu < 1.0)) return -std::numeric_limits<double>::infinity();
  const double s = last->sigma->to_double();
  const double delta = s - prev->sigma->to_double();
  return s + delta * mu / (1.0 - mu);
}

Classification classify(const ScalingReport& report, double nu, int window) {
  Classification c;
  c.nu = nu;
  std::vector<const ScalingRow*> rows;
  for (const auto& row : report.rows) {
    if (row.sigma) rows.push_back(&row);
  }
  if (rows.size() < 3) fail(ErrorKind::config, "classification needs three or more scalings");
  c.window_to = rows.back()->n;
  c.window_from = std::max(rows.front()->n, c.window_to - window + 1);

  std::vector<double> mus, ratios;
  const ScalingRow* before = nullptr;
  for (const auto* row : rows) {
    if (row->n >= c.window_from) {
      if (row->mu && row->mu->reliable) mus.push_back(row->mu->value.to_double());
      if (before != nullptr) ratios.push_back((*row->sigma / *before->sigma).to_double());
    }
    before = row;
  }
  c.sigma_last = rows.back()->sigma->to_double();
  c.mu_count = static_cast<int>(mus.size());
  c.mu_median = mus.empty() ? NAN : median(mus);
  c.ratio_median = ratios.empty() ? NAN : median(ratios);
  auto limit = extrapolated_limit(report, c.window_from, c.window_to);
  c.limit = limit ? *limit : NAN;

  bool decaying;
  if (!mus.empty()) {
    decaying = !(c.mu_median < 1.0) || c.limit <= 0.5 * c.sigma_last;
  } else {
    // No reliable mu: fall back to the level-to-level ratio.
    decaying = c.ratio_median < 0.5;
  }
  c.label = decaying ? "decaying" : "bounded-below";
  c.slow = decaying && c.ratio_median >= 0.5;
  return c;
}

DichotomyRun run_dichotomy(const ExperimentConfig& config, const ProgressSink& progress) {
  check_config(config, true);
  if (config.nu_list.empty()) fail(ErrorKind::config, "nu_list is empty");
  DichotomyRun out;
  for (const auto& nu : config.nu_list) {
    out.runs.push_back(run_table(config, nu, progress));
    out.classes.push_back(classify(out.runs.back().report, std::stod(nu), config.dichotomy_window));
    emit(progress, json{{"stage", "dichotomy"}, {"done", out.runs.size()}, {"nu", nu}});
  }
  return out;
}

GeometryRun run_geometry(const ExperimentConfig& config, const ProgressSink& progress) {
  check_config(config, false);
  GeometryRun out{locate_parameter(config, config.level_to + 3, "", progress), {}, {}, {}, {}};
  const FlatSpotMap& map = out.parameter.map;
  for (int n = config.level_from; n <= config.level_to; ++n) {
    out.partitions.push_back(build_partition(map, out.parameter.cf, n));
    emit(progress, json{{"stage", "partition"}, {"level", n}});
  }
  out.deficit = lebesgue_deficit(out.partitions);
  std::vector<double> grid = config.alpha_grid.empty() ? default_alpha_grid() : config.alpha_grid;
  if (out.partitions.size() >= 2) out.hausdorff = hausdorff_scan(out.partitions, grid, config.refine_alpha);
  for (const auto& p : out.partitions) {
    const int steps = static_cast<int>(p.q_next) - 1;
    IntervalChain chain = build_chain(map, p.boxes.front().arc, steps);
    out.chains.push_back(ChainRow{p.n, steps, rescaled_nonlinearity(map, chain, 65)});
  }
  return out;
}

MatrixSeq load_b_sequence(const std::string& path, const BigReal& nu) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot read b sequence '" + path + "'");
  MatrixSeq seq{nu, {}};
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    seq.b.push_back(BigReal::parse(line.substr(begin, end - begin + 1), nu.precision()));
  }
  if (seq.b.size() < 2) fail(ErrorKind::config, "b sequence '" + path + "' needs b(0) and b(1)");
  return seq;
}

MatricesRun run_matrices(const ExperimentConfig& config, const ProgressSink& progress) {
  check_config(config, false);
  const Precision bits = config.precision_bits;
  BigReal nu = BigReal::parse(config.matrices_nu, bits);
  MatricesRun out;
  if (!config.b_sequence_file.empty()) {
    out.sequence = load_b_sequence(config.b_sequence_file, nu);
  } else {
    BigReal b = config.b_constant.empty() ? 1L / nu : BigReal::parse(config.b_constant, bits);
    out.sequence = MatrixSeq::constant(nu, b, static_cast<std::size_t>(config.compose_n));
  }
  out.sequence.check_admissible();
  const std::size_t n_max = std::min<std::size_t>(out.sequence.length(), config.compose_n);
  Mat2 p = Mat2::identity(bits);
  for (std::size_t n = 1; n <= n_max; ++n) {
    p = out.sequence.matrix(n) * p;
    out.rows.push_back(MatrixRow{n, p.a, p.b, spectral_norm(p)});
  }
  out.closed_form_deviation = compose(out.sequence, n_max).closed_form_deviation;
  emit(progress, json{{"stage", "compose"}, {"n", n_max}});

  FindNOptions fo;
  fo.trials = config.trials;
  fo.starts = config.starts;
  fo.cap = config.cap;
  fo.seed = config.seed;
  fo.precision = bits;
  try {
    out.find_n = find_N(nu, fo);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_found) throw;
    out.find_n_error = e.what();
  }
  emit(progress, json{{"stage", "find-N"}});

  if (config.extended) {
    ExperimentConfig tc = config;
    tc.extended = true;
    TableRun table = run_table(tc, config.matrices_nu, progress);
    std::vector<SEntry> s;
    for (const auto& row : table.report.rows) {
      if (row.s) s.push_back(SEntry{row.n, *row.s, row.s_residual});
    }
    out.zeta = zeta_track(s, table.parameter.cf, table.parameter.map.nu_exact());
  }
  return out;
}

ParamsRun run_params(const ExperimentConfig& config, const ProgressSink& progress) {
  check_config(config, false);
  ExperimentConfig tc = config;
  tc.depth = std::max(config.depth, config.params_to + 1);
  tc.n_from = 3;
  ParamsRun out{run_table(tc, "", progress), {}};
  const ContinuedFraction& cf = out.table.parameter.cf;
  const Precision bits = out.table.parameter.search.precision;
  FlatSpotMap family = configured_map(config).at_precision(bits);
  OrbitOptions oo;
  oo.precision = bits;
  oo.ceiling = config.precision_ceiling;
  BigReal tol = BigReal::power_of_two(-static_cast<long>(bits) + 16, bits);
  const BigReal& nu = family.nu_exact();

  std::vector<LockingInterval> intervals;
  for (int n = config.params_from - 2; n <= config.params_to; ++n) {
    intervals.push_back(locking_interval(family, cf, n, tol, oo));
    emit(progress, json{{"stage", "locking"}, {"level", n}});
  }
  for (std::size_t k = 2; k < intervals.size(); ++k) {
    ParamsRow row{intervals[k], {}, {}, {}};
    const int n = row.interval.n;
    if (intervals[k - 2].width > 0.0) row.delta = row.interval.width / intervals[k - 2].width;
    for (const auto& r : out.table.report.rows) {
      if (r.n == n - 1 && r.sigma) row.predicted = pow(*r.sigma, nu);
    }
    if (row.delta && row.predicted) row.ratio = (*row.delta / *row.predicted).to_double();
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace flatspot
