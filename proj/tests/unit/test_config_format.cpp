#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flatspot/config.hpp"
#include "flatspot/errors.hpp"
#include "flatspot/format.hpp"
#include "flatspot/pipeline.hpp"

using namespace flatspot;
namespace fs = std::filesystem;

namespace {

BigReal big(const char* s) { return BigReal::parse(s, 128); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::config;
}

}  // namespace

TEST_CASE("paper table notation") {
  CHECK(paper_length(big("3.010e-3")) == "3.010·10⁻³");
  CHECK(paper_length(big("1.544e-3")) == "1.544·10⁻³");
  CHECK(paper_length(big("0.7044e-3")) == ".7044·10⁻³");
  CHECK(paper_length(big("0.1460e-3")) == ".1460·10⁻³");
  CHECK(paper_length(big("64.04e-6")) == "64.04·10⁻⁶");
  CHECK(paper_length(big("42.07e-9")) == "42.07·10⁻⁹");
  CHECK(paper_length(big("0.8677e-9")) == ".8677·10⁻⁹");
  CHECK(paper_length(big("0.15272")) == ".1527");
  CHECK(paper_ratio(big("0.26371")) == ".2637");
  CHECK(paper_ratio(big("1.6834")) == "1.683");
  CHECK(paper_ratio(big("-2.5412")) == "-2.54");
  CHECK(paper_ratio(big("-25.93")) == "-25.9");
  CHECK(paper_ratio(big("0.069142")) == ".06914");
}

TEST_CASE("config round trip and checks") {
  ExperimentConfig c;
  c.depth = 12;
  c.map.nu = "2.5";
  c.nu_list = {"2", "3"};
  auto back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  auto flat = config_from_json(nlohmann::json{{"family", "canonical"}, {"b", 0.25}, {"nu", "2"}, {"depth", 9}});
  CHECK(flat.map.b == "0.25");
  CHECK(flat.depth == 9);
  ExperimentConfig shallow;
  shallow.depth = 2;
  shallow.n_from = 1;
  CHECK(kind_of([&] { check_config(shallow, true); }) == ErrorKind::config);
  check_config(shallow, false);
  ExperimentConfig tol;
  tol.rho_tolerance_bits = 0;
  CHECK(kind_of([&] { check_config(tol, false); }) == ErrorKind::config);
  CHECK(kind_of([&] { config_from_json(nlohmann::json{{"depth", "deep"}}); }) == ErrorKind::config);
  CHECK(kind_of([&] { load_config("/nonexistent/config.json"); }) == ErrorKind::config);
  // A scaling command with depth below 3 stops before any computation.
  CHECK(kind_of([&] { run_table(shallow); }) == ErrorKind::config);
}

TEST_CASE("b sequence files") {
  const fs::path dir = fs::temp_directory_path() / "flatspot_bseq";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "empty.txt") << "# nothing here\n";
    std::ofstream(dir / "ok.txt") << "# b(0), b(1), ...\n0.3\n0.25\n0.2\n";
  }
  CHECK(kind_of([&] { load_b_sequence((dir / "empty.txt").string(), big("3")); }) == ErrorKind::config);
  auto seq = load_b_sequence((dir / "ok.txt").string(), big("3"));
  CHECK(seq.b.size() == 3);
  CHECK(seq.length() == 2);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::config) == 2);
  CHECK(exit_code(ErrorKind::undefined_at_level) == 2);
  CHECK(exit_code(ErrorKind::validation_rejected) == 4);
  CHECK(exit_code(ErrorKind::unvalidated_map) == 4);
  CHECK(exit_code(ErrorKind::precision_exhausted) == 3);
  CHECK(exit_code(ErrorKind::budget_exceeded) == 3);
  CHECK(exit_code(ErrorKind::not_found) == 3);
  CHECK(std::string(to_string(ErrorKind::precision_exhausted)) == "PrecisionExhausted");
}

TEST_CASE("table csv layout") {
  ExperimentConfig c;
  c.depth = 12;
  auto run = run_table(c);
  std::ostringstream plain_out, paper_out;
  write_table_csv(plain_out, run.report, false);
  write_table_csv(paper_out, run.report, true);
  std::istringstream lines(plain_out.str());
  std::string comment, header, first;
  std::getline(lines, comment);
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(comment.rfind("# ", 0) == 0);
  CHECK(header.rfind("n,y_n,sigma_n,mu_n", 0) == 0);
  CHECK(first.rfind("3,", 0) == 0);
  CHECK(paper_out.str().find("·10⁻") != std::string::npos);
  CHECK(plain_out.str().find("·10⁻") == std::string::npos);
}
