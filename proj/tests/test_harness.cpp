#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dunkl/config.hpp"
#include "dunkl/experiments.hpp"
#include "dunkl/function_spaces.hpp"
#include "dunkl/report.hpp"
#include "dunkl/semigroup.hpp"

using namespace dunkl;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string csv_of(const ExperimentReport& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dunkl_lab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(DUNKL_LAB_EXE) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// Small weak-type configuration for determinism checks.
ExperimentConfig small_weak() {
  ExperimentConfig c = default_config("exp_weak_11");
  c.seed = 1;
  c.grid.resolution = 96;
  c.ops.t_count = 16;
  c.ops.names = {"maximal", "variation"};
  c.weak.lambda_count = 5;
  c.weak.scales = {0.4, 0.8};
  c.weak.position_scale = 0.4;
  return c;
}

}  // namespace

TEST_CASE("config: defaults validate and round trip") {
  for (const auto& name : experiment_names()) {
    ExperimentConfig c = default_config(name);
    c.seed = 42;
    validate_config(c);
    std::ostringstream a;
    write_config(a, c);
    std::ostringstream b;
    write_config(b, parse(a.str()));
    CHECK(a.str() == b.str());
  }
  CHECK_THROWS(default_config("exp_nope"));
}

TEST_CASE("config: overrides and errors") {
  const auto c = parse("[experiment]\nname = exp_bmo_blo\nseed = 7\n[operators]\nsigma = 2.5\n");
  CHECK(c.experiment == "exp_bmo_blo");
  CHECK(*c.seed == 7);
  CHECK(c.ops.sigma == 2.5);
  CHECK(c.ops.t_max == 1.0);  // from the experiment's reference config

  CHECK_THROWS(parse("[experiment]\nname = exp_weak_11\nbogus = 1\n"));
  CHECK_THROWS(parse("[nosuchsection]\nx = 1\n"));
  CHECK_THROWS(parse("[operators]\nsigma = 3\n"));  // no experiment name
  CHECK_THROWS(parse("[experiment]\nname = exp_weak_11\n[operators]\nsigma = 2\n"));
  CHECK_THROWS(parse("[experiment]\nname = exp_weak_11\n[operators]\nsigma = abc\n"));
  CHECK_THROWS(parse("[experiment]\nname = exp_weak_11\n[grid]\nresolution = -4\n"));
  CHECK_THROWS(parse("[experiment]\nname = exp_weak_11\n[root_system]\nmultiplicities = -1\n"));
  CHECK_THROWS(parse("[experiment]\nname = exp_weak_11\nseed = -3\n"));
  CHECK_THROWS(parse("[experiment\nname = exp_weak_11\n"));
}

TEST_CASE("report: CSV layout") {
  ExperimentReport r;
  r.experiment = "x";
  r.param_columns = {"a", "b"};
  r.add_row("c1", {"1", "2"}, "q", 0.1);
  r.add_row("c2", {"3", ""}, "q", 2.0, 3.0, "info");
  r.check("one", true, "fine");
  CHECK(csv_of(r) == "case_id,a,b,quantity,value,fitted_constant,status\nc1,1,2,q,0.1,,ok\nc2,3,,q,2,3,info\n");
  CHECK(r.passed());
  r.check("two", false, "case c2");
  CHECK_FALSE(r.passed());
}

TEST_CASE("run requires a seed and is deterministic") {
  ExperimentConfig c = default_config("exp_kernel_bounds");
  CHECK_THROWS(run(c));
  c.seed = 5;
  CHECK(csv_of(run(c)) == csv_of(run(c)));

  setenv("DUNKL_LAB_WORKERS", "1", 1);
  const std::string one = csv_of(run(small_weak()));
  setenv("DUNKL_LAB_WORKERS", "3", 1);
  const std::string three = csv_of(run(small_weak()));
  unsetenv("DUNKL_LAB_WORKERS");
  CHECK(one == three);
  CHECK(one == csv_of(run(small_weak())));
}

TEST_CASE("weak-type rows never exceed the fitted constant") {
  const auto r = run(small_weak());
  for (const auto& row : r.rows)
    if (row.quantity == "weak_constant") CHECK(row.value <= row.fitted_constant);
}

TEST_CASE("one atom under different worker counts") {
  const ExperimentConfig c = default_config("exp_h1_atoms");
  const RootSystem R = build_root_system(c.root);
  const auto grid = build_grid(R, c.grid.half_width, c.grid.resolution);
  const HeatKernelModel model(R);
  const HeatSemigroup S(model, grid);
  const std::vector<SampledFunction> a{make_atom_laplacian(model, grid, Ball{Vec{0.8}, 1.0}, 77).values};
  const auto T = TimeGrid::log_uniform(c.ops.t_min, c.ops.t_max, 24);
  const auto l1 = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::abs(v[i]) * grid->quad_weights()[i];
    return s;
  };
  setenv("DUNKL_LAB_WORKERS", "1", 1);
  const double n1 = l1(variation_from(S.trajectories(a, T.times, 1)[0], 3.0));
  setenv("DUNKL_LAB_WORKERS", "4", 1);
  const double n4 = l1(variation_from(S.trajectories(a, T.times, 1)[0], 3.0));
  unsetenv("DUNKL_LAB_WORKERS");
  CHECK(std::abs(n1 - n4) <= 1e-12 * n1);
}

TEST_CASE("BMO-BLO guards and homogeneity") {
  ExperimentConfig c = default_config("exp_bmo_blo");
  c.seed = 1;
  c.grid.resolution = 128;
  c.ops.t_count = 16;
  c.ops.names = {"maximal"};
  c.bmo.info_orders = {};
  c.bmo.battery = {"constant", "log"};
  const auto r = run(c);
  bool excluded = false, finite = false;
  for (const auto& row : r.rows) {
    if (row.case_id.rfind("maximal_m0_constant", 0) == 0) excluded = excluded || row.status == "excluded: zero norm";
    if (row.case_id == "maximal_m0_log_n128" && row.quantity == "ratio")
      finite = std::isfinite(row.value) && row.value > 0.0;
  }
  CHECK(excluded);
  CHECK(finite);

  // blo(V(2f)) / bmo_rho(2f) = blo(Vf) / bmo_rho(f)
  const RootSystem R = build_root_system(c.root);
  const auto G = generate_group(R);
  const auto grid = build_grid(R, 8.0, 128);
  const HeatSemigroup S(HeatKernelModel(R), grid);
  const auto fam = lattice_ball_family(1, 2.0, 17, 0.25, 3);
  const auto T = TimeGrid::log_uniform(1e-3, 1.0, 16);
  const auto f = battery_function("log", grid);
  std::vector<double> twice(f.values().begin(), f.values().end());
  for (double& v : twice) v *= 2.0;
  const SampledFunction f2(grid, twice);
  const auto ratio = [&](const SampledFunction& h) {
    return blo_norm(variation_operator(S, h, T, 3.0, 0), fam).value / bmo_rho_norm(h, fam, G).value;
  };
  CHECK(ratio(f2) == doctest::Approx(ratio(f)).epsilon(1e-6));
}

TEST_CASE("CLI contract") {
  const fs::path out = scratch_dir("cli");
  const fs::path bad = out / "bad.ini";
  std::ofstream(bad) << "[experiment]\nname = exp_kernel_bounds\n[operators]\nsigma = 1.5\n";
  CHECK(run_cli("run --config " + bad.string() + " --seed 1 --out " + (out / "r").string()) != 0);
  CHECK_FALSE(fs::exists(out / "r" / "exp_kernel_bounds.csv"));

  const std::string good = std::string(CONFIG_DIR) + "/exp_kernel_bounds.ini";
  CHECK(run_cli("run --config " + good + " --out " + (out / "a").string()) == 0);
  CHECK(run_cli("run --config " + good + " --out " + (out / "b").string()) == 0);
  std::ifstream a(out / "a" / "exp_kernel_bounds.csv"), b(out / "b" / "exp_kernel_bounds.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK_FALSE(sa.str().empty());
  CHECK(sa.str() == sb.str());

  const fs::path noseed = out / "noseed.ini";
  std::ofstream(noseed) << "[experiment]\nname = exp_kernel_bounds\n";
  CHECK(run_cli("run --config " + noseed.string() + " --out " + (out / "c").string()) != 0);
  CHECK(run_cli("defaults") == 0);
  CHECK(run_cli("rootsys describe") == 0);
  CHECK(run_cli("grid build --out " + (out / "g").string()) == 0);
  CHECK(run_cli("grid check --table " + (out / "g" / "grid.txt").string()) == 0);
  CHECK(run_cli("kernel check-normalization") == 0);
  CHECK(run_cli("nosuchcommand") != 0);
  fs::remove_all(out);
}
