#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "proxsamp/cli.hpp"
#include "proxsamp/config.hpp"

using namespace proxsamp;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::path("cli_test_out");

std::string write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) { return cli::run_command(args); }

}  // namespace

TEST_CASE("config parser") {
  const auto cfg = ConfigFile::parse_text(
      "# comment\n[target]\nname = iso_gaussian\ndim = 4\n\n[run]\ndelta = 0.1  # inline\n");
  CHECK(cfg.get_string("target", "name") == "iso_gaussian");
  CHECK(cfg.get_long("target", "dim") == 4);
  CHECK(cfg.get_double("run", "delta") == 0.1);
  CHECK(cfg.get_double("run", "missing", 7.0) == 7.0);

  CHECK_THROWS_AS(ConfigFile::parse_text("key_without_section_or_eq\n"), InputError);
  CHECK_THROWS_AS(ConfigFile::parse_text("[sec\n"), InputError);
  CHECK_THROWS_AS(ConfigFile::parse_text("[s]\nk = 1\nk = 2\n"), InputError);

  const auto vec_cfg = ConfigFile::parse_text("[t]\nv = [1, 2.5, -3]\n");
  const Vec v = vec_cfg.get_vec("t", "v");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == 2.5);

  // unknown keys are hard errors that carry the line number
  const auto bad = ConfigFile::parse_text("[target]\nname = zero\ntypo_key = 3\n");
  try {
    bad.validate_keys({{"target", {"name", "dim"}}});
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("typo_key") != std::string::npos);
  }
}

TEST_CASE("plan command writes a self-consistent plan.csv") {
  const std::string cfg = write_config("plan.cfg",
                                       "[target]\n"
                                       "name = iso_gaussian\n"
                                       "dim = 4\n"
                                       "[assumption]\n"
                                       "regime = strongly_log_concave\n"
                                       "beta = 1.0\n"
                                       "kl_init = 4.0\n"
                                       "[run]\n"
                                       "delta = 0.1\n"
                                       "metric = tv\n"
                                       "mode = exact\n"
                                       "seed = 42\n");
  const std::string out = (kTmp / "plan_out").string();
  CHECK(run({"plan", "--config", cfg, "--out", out}) == 0);
  const std::string text = slurp(fs::path(out) / "plan.csv");
  CHECK(text.rfind("# config_digest=", 0) == 0);
  CHECK(text.find("regime,eta,T,zeta,delta,metric,mode") != std::string::npos);

  // zeta column equals delta / (2 T)
  std::istringstream lines(text);
  std::string line, data;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line.find("regime,") != 0) data = line;
  REQUIRE_FALSE(data.empty());
  std::vector<std::string> cells;
  std::istringstream ls(data);
  std::string cell;
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() == 7);
  const double eta = std::stod(cells[1]);
  const long t_steps = std::stol(cells[2]);
  const double zeta = std::stod(cells[3]);
  const double delta = std::stod(cells[4]);
  CHECK(zeta == delta / (2.0 * double(t_steps)));
  CHECK(eta > 0.0);
}

TEST_CASE("usage and config errors exit with code 1") {
  CHECK(run({}) == 1);
  CHECK(run({"no-such-command", "--config", "x"}) == 1);
  CHECK(run({"plan"}) == 1);
  CHECK(run({"plan", "--config", "does_not_exist.cfg"}) == 1);
  const std::string bad = write_config("bad.cfg",
                                       "[target]\nname = iso_gaussian\ndim = 2\n"
                                       "unknown_knob = 5\n"
                                       "[assumption]\nregime = lsi\nc_lsi = 1\nkl_init = 1\n"
                                       "[run]\ndelta = 0.1\n");
  CHECK(run({"plan", "--config", bad}) == 1);
}

TEST_CASE("sample command produces deterministic trace and summary") {
  const std::string cfg = write_config("sample.cfg",
                                       "[target]\n"
                                       "name = aniso_quadratic\n"
                                       "diag = [1, 4]\n"
                                       "[run]\n"
                                       "mode = exact\n"
                                       "seed = 7\n"
                                       "[sample]\n"
                                       "eta = 0.05\n"
                                       "t_steps = 200\n"
                                       "x0 = [2, 2]\n"
                                       "record_stride = 20\n");
  const std::string out1 = (kTmp / "s1").string();
  const std::string out2 = (kTmp / "s2").string();
  CHECK(run({"sample", "--config", cfg, "--out", out1}) == 0);
  CHECK(run({"sample", "--config", cfg, "--out", out2}) == 0);
  CHECK(slurp(fs::path(out1) / "trace.csv") == slurp(fs::path(out2) / "trace.csv"));
  CHECK(slurp(fs::path(out1) / "summary.csv") == slurp(fs::path(out2) / "summary.csv"));

  // a different seed changes the trace
  const std::string out3 = (kTmp / "s3").string();
  CHECK(run({"sample", "--config", cfg, "--out", out3, "--seed", "8"}) == 0);
  CHECK(slurp(fs::path(out1) / "trace.csv") != slurp(fs::path(out3) / "trace.csv"));
}

TEST_CASE("verify-rgo passes on the isotropic Gaussian and is jobs-invariant") {
  const std::string cfg = write_config("rgo.cfg",
                                       "[target]\n"
                                       "name = iso_gaussian\n"
                                       "dim = 4\n"
                                       "[run]\n"
                                       "mode = exact\n"
                                       "seed = 3\n"
                                       "[rgo]\n"
                                       "y_fill = 1.0\n"
                                       "zeta = 0.05\n"
                                       "n_draws = 20000\n");
  const std::string out1 = (kTmp / "r1").string();
  const std::string out2 = (kTmp / "r2").string();
  CHECK(run({"verify-rgo", "--config", cfg, "--out", out1, "--jobs", "1"}) == 0);
  CHECK(run({"verify-rgo", "--config", cfg, "--out", out2, "--jobs", "3"}) == 0);
  const std::string rep = slurp(fs::path(out1) / "rgo_report.csv");
  CHECK(rep == slurp(fs::path(out2) / "rgo_report.csv"));
  CHECK(rep.find("mean_proposals") != std::string::npos);
  CHECK(rep.find("false") == std::string::npos);  // every check passed
}

TEST_CASE("verify-conc reruns are byte-identical and dominance holds") {
  const std::string cfg = write_config("conc.cfg",
                                       "[target]\n"
                                       "name = iso_gaussian\n"
                                       "dim = 8\n"
                                       "[run]\n"
                                       "seed = 5\n"
                                       "[conc]\n"
                                       "variant = standard\n"
                                       "eta = 0.01\n"
                                       "epsilon = 0.5\n"
                                       "n_samples = 50000\n"
                                       "quantiles = [0.5, 0.9, 0.99]\n");
  const std::string out1 = (kTmp / "c1").string();
  const std::string out2 = (kTmp / "c2").string();
  CHECK(run({"verify-conc", "--config", cfg, "--out", out1, "--seed", "7"}) == 0);
  CHECK(run({"verify-conc", "--config", cfg, "--out", out2, "--seed", "7", "--jobs", "4"}) == 0);
  const std::string rep = slurp(fs::path(out1) / "tail_report.csv");
  CHECK(rep == slurp(fs::path(out2) / "tail_report.csv"));
  CHECK(rep.find("r,empirical,ci_upper,bound,dominated") != std::string::npos);
  CHECK(rep.find("false") == std::string::npos);

  // falsification control: an impossible bound must fail and exit 2
  const std::string cfg_f = write_config("conc_f.cfg",
                                         "[target]\n"
                                         "name = iso_gaussian\n"
                                         "dim = 8\n"
                                         "[run]\n"
                                         "seed = 5\n"
                                         "[conc]\n"
                                         "variant = standard\n"
                                         "eta = 0.01\n"
                                         "epsilon = 0.5\n"
                                         "n_samples = 50000\n"
                                         "quantiles = [0.5, 0.9, 0.99]\n"
                                         "falsify_rate = 1e9\n");
  // with rate 1e9 the control fails dominance, which is what the flag demands
  CHECK(run({"verify-conc", "--config", cfg_f, "--out", (kTmp / "c3").string()}) == 0);
}

TEST_CASE("a failing check exits with code 2") {
  // eta far above the step-size bound: the truncated acceptance ratio biases
  // the draws and the conditional-moment checks must fail
  const std::string cfg = write_config("rgo_fail.cfg",
                                       "[target]\n"
                                       "name = iso_gaussian\n"
                                       "dim = 2\n"
                                       "[run]\n"
                                       "mode = exact\n"
                                       "seed = 3\n"
                                       "[rgo]\n"
                                       "y_fill = 1.0\n"
                                       "eta = 10.0\n"
                                       "n_draws = 20000\n");
  CHECK(run({"verify-rgo", "--config", cfg, "--out", (kTmp / "rf").string()}) == 2);
}

TEST_CASE("benchmark writes the comparison table") {
  const std::string cfg = write_config("bench.cfg",
                                       "[target]\n"
                                       "name = iso_gaussian\n"
                                       "dim = 2\n"
                                       "[run]\n"
                                       "seed = 99\n"
                                       "[benchmark]\n"
                                       "eta = 0.1\n"
                                       "t_steps = 100\n"
                                       "chains = 64\n"
                                       "n_directions = 32\n");
  const std::string out = (kTmp / "bench").string();
  CHECK(run({"benchmark", "--config", cfg, "--out", out}) == 0);
  const std::string rep = slurp(fs::path(out) / "baselines.csv");
  CHECK(rep.find("proximal") != std::string::npos);
  CHECK(rep.find("ula") != std::string::npos);
  CHECK(rep.find("mala") != std::string::npos);
}
