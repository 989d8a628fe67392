#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <gmp.h>
#include <json.hpp>
#include <mpfr.h>

#include "flatspot/config.hpp"
#include "flatspot/errors.hpp"
#include "flatspot/format.hpp"
#include "flatspot/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flatspot;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Overrides {
  std::string config_path;
  std::optional<Precision> precision_bits, precision_ceiling;
  std::optional<std::int64_t> max_iters, orbit_length;
  std::optional<std::string> out_dir, family, b, t, nu, target, b_file, b_constant;
  std::optional<int> depth, n_from, level_from, level_to, compose_n, params_from, params_to, cap;
  std::optional<int> t_tolerance_bits;
  std::vector<std::string> nu_list;
  bool paper_format = false;
  bool extended = false;
  bool fresh = false;
};

ExperimentConfig build_config(const Overrides& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.precision_bits) c.precision_bits = *o.precision_bits;
  if (o.precision_ceiling) c.precision_ceiling = *o.precision_ceiling;
  if (o.max_iters) c.max_iters = *o.max_iters;
  if (o.orbit_length) c.orbit_length = *o.orbit_length;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.family) c.map.family = parse_family(*o.family);
  if (o.b) c.map.b = *o.b;
  if (o.t) c.map.t = *o.t;
  if (o.nu) c.map.nu = *o.nu;
  if (o.target) c.target = *o.target;
  if (o.b_file) c.b_sequence_file = *o.b_file;
  if (o.b_constant) c.b_constant = *o.b_constant;
  if (o.depth) c.depth = *o.depth;
  if (o.n_from) c.n_from = *o.n_from;
  if (o.level_from) c.level_from = *o.level_from;
  if (o.level_to) c.level_to = *o.level_to;
  if (o.compose_n) c.compose_n = *o.compose_n;
  if (o.params_from) c.params_from = *o.params_from;
  if (o.params_to) c.params_to = *o.params_to;
  if (o.cap) c.cap = *o.cap;
  if (o.t_tolerance_bits) c.t_tolerance_bits = *o.t_tolerance_bits;
  if (!o.nu_list.empty()) c.nu_list = o.nu_list;
  if (o.paper_format) c.paper_format = true;
  if (o.extended) c.extended = true;
  return c;
}

void write_json(const fs::path& path, const json& doc) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorKind::config, "cannot write '" + tmp.string() + "'");
    out << doc.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::config, "cannot write '" + path.string() + "'");
  writer(out);
}

// Latest progress record of a command, tied to the config that produced it.
class Checkpoint {
 public:
  Checkpoint(fs::path path, std::string command, json config, bool fresh)
      : path_(std::move(path)), command_(std::move(command)), config_(std::move(config)) {
    if (fresh || !fs::exists(path_)) return;
    std::ifstream in(path_);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || doc.value("done", true)) return;
    if (doc.value("command", "") != command_ || doc.value("config", json()) != config_) return;
    if (doc.contains("progress")) resume_ = doc["progress"];
  }

  const json* resume() const { return resume_.is_null() ? nullptr : &resume_; }

  ProgressSink sink() {
    return [this](const json& record) { save(record, false); };
  }

  void finish() { save(last_, true); }

 private:
  void save(const json& record, bool done) {
    last_ = record;
    write_json(path_, json{{"command", command_}, {"config", config_}, {"progress", record}, {"done", done}});
  }

  fs::path path_;
  std::string command_;
  json config_;
  json resume_;
  json last_;
};

struct Context {
  ExperimentConfig config;
  fs::path out;
  Checkpoint* checkpoint = nullptr;
  Precision precision_used = 0;
  json summary;
};

int cmd_validate(Context& ctx) {
  const FlatSpotMap map = FlatSpotMap::from_spec(ctx.config.map, ctx.config.precision_bits);
  const ValidationReport report = map.validate();
  ctx.precision_used = map.precision();
  ctx.summary = to_json(report);
  write_json(ctx.out / "validation.json", ctx.summary);
  std::cout << to_string(map.family()) << ": " << report.summary() << "\n";
  if (!report.usable) {
    json err{{"error", to_string(ErrorKind::validation_rejected)}, {"failures", report.failures}};
    if (map.family() != Family::canonical) err["hint"] = "use family canonical";
    std::cerr << err.dump() << "\n";
    return exit_code(ErrorKind::validation_rejected);
  }
  return 0;
}

int cmd_rho(Context& ctx) {
  const FlatSpotMap map = configured_map(ctx.config);
  OrbitOptions oo;
  oo.precision = ctx.config.precision_bits;
  oo.ceiling = ctx.config.precision_ceiling;
  const std::int64_t iters = ctx.config.max_iters > 0 ? ctx.config.max_iters : 100000;
  const RotationNumber rho = rotation_number(
      map, BigReal::power_of_two(-ctx.config.rho_tolerance_bits, map.precision()), iters, oo);
  ctx.precision_used = rho.precision;
  ctx.summary = to_json(rho);
  write_json(ctx.out / "rho.json", ctx.summary);
  std::cout << ctx.summary.dump(2) << "\n";
  return 0;
}

int cmd_find_t(Context& ctx) {
  check_config(ctx.config, true);
  const ParameterRun run = locate_parameter(ctx.config, ctx.config.depth, "", ctx.checkpoint->sink(),
                                            ctx.checkpoint->resume());
  ctx.precision_used = run.search.precision;
  ctx.summary = to_json(run.search);
  ctx.summary["target"] = ctx.config.target;
  write_json(ctx.out / "find_t.json", ctx.summary);
  std::cout << "t = " << run.search.t.to_string(30) << "\n";
  return 0;
}

int cmd_orbit(Context& ctx) {
  const FlatSpotMap map = configured_map(ctx.config);
  OrbitOptions oo;
  oo.precision = ctx.config.precision_bits;
  oo.ceiling = ctx.config.precision_ceiling;
  const std::int64_t length = ctx.config.orbit_length > 0 ? ctx.config.orbit_length : 1000;
  const CriticalOrbit orbit = critical_orbit(map, length, oo);
  ctx.precision_used = orbit.precision;
  write_file(ctx.out / "orbit.csv", [&](std::ostream& out) { write_orbit_csv(out, orbit); });
  ctx.summary = json{{"length", orbit.size()}, {"restarts", orbit.restarts}};
  if (orbit.absorbed_at) {
    ctx.summary["absorbed_at"] = *orbit.absorbed_at;
    ctx.summary["rotation"] = std::to_string(orbit.rotation->p) + "/" + std::to_string(orbit.rotation->q);
  }
  std::cout << ctx.summary.dump(2) << "\n";
  return 0;
}

int cmd_table(Context& ctx) {
  const TableRun run = run_table(ctx.config, "", ctx.checkpoint->sink(), ctx.checkpoint->resume());
  ctx.precision_used = run.orbit.precision;
  const bool paper = ctx.config.paper_format;
  write_file(ctx.out / "table.csv",
             [&](std::ostream& out) { write_table_csv(out, run.report, paper); });
  write_file(ctx.out / "closest_returns.csv", [&](std::ostream& out) {
    write_closest_returns_csv(out, run.orbit, run.parameter.cf, ctx.config.n_from, ctx.config.depth);
  });
  if (ctx.config.extended) {
    write_file(ctx.out / "extended.csv", [&](std::ostream& out) { write_extended_csv(out, run.report); });
    write_file(ctx.out / "residuals.csv", [&](std::ostream& out) { write_residuals_csv(out, run.report); });
  }
  std::cout << console_table(run.report, paper);
  const auto limit = extrapolated_limit(run.report, std::max(ctx.config.n_from, ctx.config.depth - 7),
                                        ctx.config.depth);
  ctx.summary = json{{"t", run.parameter.search.t.to_exact_string()}, {"notes", run.report.notes}};
  ctx.summary["extrapolated_limit"] = limit ? json(*limit) : json(nullptr);
  if (limit) std::cout << "extrapolated limit " << *limit << "\n";
  return 0;
}

int cmd_dichotomy(Context& ctx) {
  check_config(ctx.config, true);
  const DichotomyRun run = run_dichotomy(ctx.config, ctx.checkpoint->sink());
  for (const auto& r : run.runs) ctx.precision_used = std::max(ctx.precision_used, r.orbit.precision);
  write_file(ctx.out / "dichotomy.csv", [&](std::ostream& out) { write_dichotomy_csv(out, run); });
  json classes = json::array();
  for (const auto& c : run.classes) {
    classes.push_back(to_json(c));
    std::cout << "nu = " << c.nu << ": " << c.label << (c.slow ? " (slow)" : "") << "\n";
  }
  ctx.summary = json{{"classes", classes}};
  write_json(ctx.out / "dichotomy.json", ctx.summary);
  return 0;
}

int cmd_geometry(Context& ctx) {
  const GeometryRun run = run_geometry(ctx.config, ctx.checkpoint->sink());
  ctx.precision_used = run.parameter.search.precision;
  write_file(ctx.out / "partitions.csv", [&](std::ostream& out) { write_partitions_csv(out, run.partitions); });
  write_file(ctx.out / "deficit.csv", [&](std::ostream& out) { write_deficit_csv(out, run.deficit); });
  write_file(ctx.out / "hausdorff.csv", [&](std::ostream& out) { write_hausdorff_csv(out, run.hausdorff); });
  ctx.summary = to_json(run);
  write_json(ctx.out / "geometry.json", ctx.summary);
  std::cout << "deficit rate " << run.deficit.rate << ", hausdorff " << run.hausdorff.verdict;
  if (run.hausdorff.alpha_star) std::cout << " alpha* = " << *run.hausdorff.alpha_star;
  std::cout << " (" << run.hausdorff.caveat << ")\n";
  return 0;
}

int cmd_matrices(Context& ctx) {
  const MatricesRun run = run_matrices(ctx.config, ctx.checkpoint->sink());
  ctx.precision_used = run.sequence.nu.precision();
  write_file(ctx.out / "matrices.csv", [&](std::ostream& out) { write_matrices_csv(out, run); });
  if (run.zeta) write_file(ctx.out / "zeta.csv", [&](std::ostream& out) { write_zeta_csv(out, *run.zeta); });
  ctx.summary = to_json(run);
  write_json(ctx.out / "find_n.json", ctx.summary);
  std::cout << ctx.summary.dump(2) << "\n";
  if (!run.find_n) {
    std::cerr << json{{"error", to_string(ErrorKind::not_found)}, {"message", run.find_n_error}}.dump()
              << "\n";
    return exit_code(ErrorKind::not_found);
  }
  return 0;
}

int cmd_params(Context& ctx) {
  const ParamsRun run = run_params(ctx.config, ctx.checkpoint->sink());
  ctx.precision_used = run.table.orbit.precision;
  write_file(ctx.out / "params.csv", [&](std::ostream& out) { write_params_csv(out, run); });
  write_file(ctx.out / "table.csv",
             [&](std::ostream& out) { write_table_csv(out, run.table.report, ctx.config.paper_format); });
  json rows = json::array();
  for (const auto& r : run.rows) {
    std::cout << "n = " << r.interval.n << "  " << r.interval.fraction.p << "/" << r.interval.fraction.q;
    if (r.ratio) std::cout << "  delta/sigma^nu = " << *r.ratio;
    std::cout << "\n";
    rows.push_back({{"n", r.interval.n}, {"ratio", r.ratio ? json(*r.ratio) : json(nullptr)}});
  }
  ctx.summary = json{{"rows", rows}};
  return 0;
}

void write_manifest(const Context& ctx, const std::string& command, double seconds, int status) {
  json versions{{"flatspot", kVersion}, {"mpfr", mpfr_get_version()}, {"gmp", gmp_version}};
  write_json(ctx.out / "manifest.json", json{{"command", command},
                                             {"config", to_json(ctx.config)},
                                             {"versions", versions},
                                             {"precision_used", ctx.precision_used},
                                             {"wall_time_seconds", seconds},
                                             {"exit_code", status},
                                             {"summary", ctx.summary}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalings of circle maps with a flat spot"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--precision-bits", o.precision_bits, "starting working precision");
  app.add_option("--precision-ceiling", o.precision_ceiling, "largest precision a run may escalate to");
  app.add_option("--max-iters", o.max_iters, "iteration budget of the parameter search");
  app.add_option("--out", o.out_dir, "output directory");
  app.add_flag("--paper-format", o.paper_format, "format tables like the paper");
  app.add_flag("--fresh", o.fresh, "ignore an existing checkpoint");
  app.add_option("--family", o.family, "canonical, appendixB or rigid");
  app.add_option("--b", o.b, "flat spot length");
  app.add_option("--t", o.t, "translation parameter");
  app.add_option("--nu", o.nu, "critical exponent");
  app.add_option("--target", o.target, "golden or p/q");
  app.add_option("--depth", o.depth, "deepest level");
  app.add_option("--t-tolerance-bits", o.t_tolerance_bits, "bisection tolerance 2^-k");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(Context&);
  };
  const Command commands[] = {
      {"validate", "check a map against the admissibility conditions", cmd_validate},
      {"rho", "rotation number at the configured t", cmd_rho},
      {"find-t", "parameter with the target rotation number", cmd_find_t},
      {"orbit", "critical orbit at the configured t", cmd_orbit},
      {"table", "closest returns, scalings and their ratios", cmd_table},
      {"dichotomy", "scaling trend across critical exponents", cmd_dichotomy},
      {"geometry", "partitions, Lebesgue deficit and Hausdorff sums", cmd_geometry},
      {"matrices", "recursion matrices and the contraction length", cmd_matrices},
      {"params", "locking intervals and parameter scalings", cmd_params},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    if (std::string(c.name) == "orbit") sub->add_option("--length", o.orbit_length, "orbit length");
    if (std::string(c.name) == "table") {
      sub->add_option("--n-from", o.n_from, "first level");
      sub->add_flag("--extended", o.extended, "D, s, Gamma, R and relation residuals");
    }
    if (std::string(c.name) == "dichotomy") sub->add_option("--nu-list", o.nu_list, "exponents")->delimiter(',');
    if (std::string(c.name) == "geometry") {
      sub->add_option("--level-from", o.level_from, "first level");
      sub->add_option("--level-to", o.level_to, "last level");
    }
    if (std::string(c.name) == "matrices") {
      sub->add_option("--b-file", o.b_file, "b sequence, one decimal per line");
      sub->add_option("--b-constant", o.b_constant, "constant b");
      sub->add_option("--compose-n", o.compose_n, "product length");
      sub->add_option("--cap", o.cap, "largest N tried");
      sub->add_flag("--extended", o.extended, "track zeta along the golden s sequence");
    }
    if (std::string(c.name) == "params") {
      sub->add_option("--from", o.params_from, "first level");
      sub->add_option("--to", o.params_to, "last level");
    }
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  int status = 0;
  try {
    ctx.config = build_config(o);
    if (command == "matrices" && o.nu) ctx.config.matrices_nu = *o.nu;
    check_config(ctx.config, false);
    ctx.out = ctx.config.out_dir;
    fs::create_directories(ctx.out);
    Checkpoint checkpoint(ctx.out / "checkpoint.json", command, to_json(ctx.config), o.fresh);
    ctx.checkpoint = &checkpoint;
    for (const auto& c : commands) {
      if (command == c.name) status = c.run(ctx);
    }
    checkpoint.finish();
  } catch (const Error& e) {
    status = exit_code(e.kind());
    json err{{"error", to_string(e.kind())}, {"message", e.what()}};
    if (e.kind() == ErrorKind::validation_rejected && ctx.config.map.family != Family::canonical) {
      err["hint"] = "use family canonical";
    }
    std::cerr << err.dump() << "\n";
  } catch (const std::exception& e) {
    status = 3;
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
  }
  if (!ctx.out.empty() && fs::exists(ctx.out)) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(ctx, command, seconds, status);
  }
  return status;
}
