#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qbattery/config.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/experiments.hpp"
#include "qbattery/output.hpp"

using namespace qbattery;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const std::string& name) {
  RunConfig c;
  c.model.positions = {-1.0, 0.0, 1.0};
  c.fock_dim = 10;
  c.boson = {{3, 1.0}};
  c.t_max = 4.0;
  c.dt = 0.1;
  c.window_end = 4.0;
  c.output_dir = (fs::temp_directory_path() / "qbattery_tests" / name).string();
  fs::remove_all(c.output_dir);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("evolution output files") {
  const RunConfig c = small_config("evolve");
  const EvolutionTrace trace = run_evolution(c);
  const std::string csv = slurp(fs::path(c.output_dir) / "evolution.csv");
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header == "t,E,E_c,E_e,S,sigma_1,sigma_2,sigma_3,n_exc,parity,leakage,norm_error,energy_drift");
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == trace.records.size() + 1);

  const auto meta = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "evolution.json"));
  CHECK(meta["command"] == "evolve");
  CHECK(meta["method"] == "dense");
  CHECK(meta["config"]["fock_dim"] == "10");
  CHECK(meta.contains("diagnostics"));

  SUBCASE("rerunning from the recorded config reproduces the table bit for bit") {
    RunConfig again = parse_config(meta["config_text"].get<std::string>());
    CHECK(again == c);
    again.output_dir = small_config("evolve_rerun").output_dir;
    run_evolution(again);
    CHECK(slurp(fs::path(again.output_dir) / "evolution.csv") == csv);
  }
}

TEST_CASE("no coupling means no charging") {
  RunConfig c = small_config("uncoupled");
  c.model.lambda = 0.0;
  c.model.j_hop = 0.6;
  for (const EvolutionRecord& r : evolve(c).records) {
    CHECK(std::abs(r.charging) <= 1e-12);
    CHECK(std::abs(r.entropy) <= 1e-10);
    CHECK(r.ergotropy <= 1e-12);
  }
}

TEST_CASE("RWA runs keep the excitation number") {
  RunConfig c = small_config("rwa");
  c.model.coupling_mode = CouplingMode::rotating_only;
  c.model.hopping_mode = HoppingMode::excitation_conserving;
  c.model.lambda = 0.5;
  const EvolutionTrace trace = evolve(c);
  for (const EvolutionRecord& r : trace.records)
    CHECK(r.n_exc == doctest::Approx(trace.records[0].n_exc).epsilon(1e-10));
}

TEST_CASE("a one-point max scan equals the window maxima of the single run") {
  RunConfig c = small_config("maxscan");
  c.window_start = 1.0;
  c.window_end = 3.0;
  c.sweep.param = SweepParam::lambda;
  c.sweep.values = {0.35};
  const MaxScanTable table = run_max_scan(c);
  REQUIRE(table.points.size() == 1);

  RunConfig single = c;
  single.sweep = {};
  single.model.lambda = 0.35;
  const MaxScanPoint ref = window_maxima(evolve(single), 1.0, 3.0);
  CHECK(table.points[0].max_charging == ref.max_charging);
  CHECK(table.points[0].t_max_charging == ref.t_max_charging);
  CHECK(table.points[0].max_ergotropy == ref.max_ergotropy);
  CHECK(table.points[0].t_max_charging >= 1.0 - 1e-12);
  CHECK(table.points[0].t_max_charging <= 3.0 + 1e-12);
  CHECK(table.points[0].max_charging >= table.points[0].max_ergotropy - 1e-9);

  const std::string csv = slurp(fs::path(c.output_dir) / "maxscan.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "lambda,max_E_c,t_max_E_c,max_E_e,t_max_E_e,max_leakage,leakage_warning");
}

TEST_CASE("concurrent sweeps match serial sweeps exactly") {
  RunConfig c = small_config("sweep_serial");
  c.sweep.param = SweepParam::j_hop;
  c.sweep.values = {0.0, 0.5, 1.0, 1.5};
  c.sweep.reduction = Reduction::trace;
  const auto serial = run_trace_sweep(c);
  RunConfig p = c;
  p.workers = 3;
  p.output_dir = small_config("sweep_parallel").output_dir;
  const auto parallel = run_trace_sweep(p);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    const std::string name = "evolution_000" + std::to_string(i) + ".csv";
    CHECK(slurp(fs::path(c.output_dir) / name) == slurp(fs::path(p.output_dir) / name));
  }
  CHECK(slurp(fs::path(c.output_dir) / "sweep.csv") == slurp(fs::path(p.output_dir) / "sweep.csv"));
}

TEST_CASE("spectrum tables") {
  RunConfig c = small_config("spectrum");
  c.model = ModelParams{};
  c.sweep.param = SweepParam::j_hop;
  c.sweep.values = {0.0, 1.0};
  const auto scans = run_spectrum_scan(c);
  REQUIRE(scans.size() == 2);
  CHECK(scans[0].mode == HoppingMode::full);
  CHECK(scans[1].mode == HoppingMode::excitation_conserving);
  // Without hopping the two modes are the same operator.
  CHECK((scans[0].eigenvalues[0] - scans[1].eigenvalues[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(scans[0].m_z[0] == scans[1].m_z[0]);
  CHECK(fs::exists(fs::path(c.output_dir) / "spectrum_full.csv"));
  CHECK(fs::exists(fs::path(c.output_dir) / "spectrum_excitation_conserving.csv"));
  const std::string csv = slurp(fs::path(c.output_dir) / "spectrum_full.csv");
  CHECK(csv.rfind("j_hop,e_1,", 0) == 0);

  c.sweep.param = SweepParam::lambda;
  CHECK_THROWS_AS(spectrum(c), ConfigError);
}

TEST_CASE("commands reject the wrong sweep shape") {
  RunConfig c = small_config("shape");
  CHECK_THROWS_AS(max_scan(c), ConfigError);
  c.sweep.param = SweepParam::lambda;
  c.sweep.values = {0.1};
  CHECK_THROWS_AS(evolve(c), ConfigError);
  CHECK_THROWS_AS(trace_sweep(c), ConfigError);
}

TEST_CASE("parallel_for propagates the first failing index") {
  std::vector<int> hits(6, 0);
  CHECK_THROWS_WITH_AS(parallel_for(6, 3,
                                    [&](std::size_t i) {
                                      hits[i] = 1;
                                      if (i == 2 || i == 4) throw ParameterError("point " + std::to_string(i));
                                    }),
                       "point 2", ParameterError);
  CHECK(std::count(hits.begin(), hits.end(), 1) == 6);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678})
    CHECK(std::stod(format_double(v)) == v);
}
