// dunkl-lab: command-line front end for the experiment harness and the
// individual building blocks.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dunkl/config.hpp"
#include "dunkl/discretization.hpp"
#include "dunkl/experiments.hpp"
#include "dunkl/function_spaces.hpp"
#include "dunkl/heat_kernel.hpp"
#include "dunkl/numeric.hpp"
#include "dunkl/operators.hpp"
#include "dunkl/reflection.hpp"
#include "dunkl/report.hpp"
#include "dunkl/semigroup.hpp"

namespace fs = std::filesystem;
using namespace dunkl;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

ExperimentConfig load(const Common& c, const std::string& fallback = "exp_weak_11") {
  ExperimentConfig cfg = c.config.empty() ? default_config(fallback) : load_config(c.config);
  if (c.seed) cfg.seed = c.seed;
  return cfg;
}

// Writes the whole file next to its destination and renames it into place.
std::string write_file(const std::string& dir, const std::string& name, const std::string& body) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  const fs::path tmp = fs::path(dir) / (name + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << body;
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
  return path.string();
}

std::string vec_str(std::span<const double> v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + format_number(v[i]);
  return s;
}

std::string coord_header(int d) {
  std::string s;
  for (int j = 0; j < d; ++j) s += "x" + std::to_string(j) + ",";
  return s;
}

SampledFunction input_function(const std::string& name, const GridPtr& grid) {
  if (name == "bump") {
    return SampledFunction::from(grid, [](std::span<const double> x) {
      double v = 1.0;
      for (double xi : x) {
        const double u = xi / 0.5;
        v *= std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 6) : 0.0;
      }
      return v;
    });
  }
  return battery_function(name, grid);
}

void describe(const ExperimentConfig& cfg) {
  const RootSystem R = build_root_system(cfg.root);
  const WeylGroup G = generate_group(R);
  const auto inv = scalar_invariants(R, G);
  std::cout << "family     " << to_string(R.family()) << "\n"
            << "dimension  " << R.dimension() << "\n"
            << "gamma      " << format_number(inv.gamma) << "\n"
            << "D          " << format_number(inv.homogeneous_dimension) << "\n"
            << "#G         " << inv.group_order << "\n"
            << "#R         " << 2 * R.positive_roots().size() << "\n\n"
            << "positive root                multiplicity\n";
  for (std::size_t i = 0; i < R.positive_roots().size(); ++i) {
    std::string root = "(" + vec_str(R.positive_roots()[i], ", ") + ")";
    root.resize(std::max<std::size_t>(root.size(), 28), ' ');
    std::cout << root << " " << format_number(R.multiplicity(i)) << "\n";
  }
}

int grid_build(const ExperimentConfig& cfg, const std::string& out) {
  const RootSystem R = build_root_system(cfg.root);
  const GridPtr g = build_grid(R, cfg.grid.half_width, cfg.grid.resolution, cfg.grid.grading);
  std::ostringstream os;
  write_grid_table(os, *g);
  std::cout << write_file(out, "grid.txt", os.str()) << "\n";
  return 0;
}

int grid_check(const ExperimentConfig& cfg, const std::string& table) {
  const RootSystem R = build_root_system(cfg.root);
  const GridPtr g = build_grid(R, cfg.grid.half_width, cfg.grid.resolution, cfg.grid.grading);
  const GridCheck c = check_grid(*g);
  bool ok = c.weights_positive && c.avoids_hyperplanes && !(c.relative_mass_error > 1e-4);
  std::cout << "nodes               " << g->size() << "\n"
            << "weights_positive    " << c.weights_positive << "\n"
            << "avoids_hyperplanes  " << c.avoids_hyperplanes << "\n"
            << "total_mass          " << format_number(c.total_mass) << "\n"
            << "exact_mass          " << format_number(c.exact_mass) << "\n"
            << "relative_mass_error " << format_number(c.relative_mass_error) << "\n";
  if (!table.empty()) {
    std::ifstream is(table);
    if (!is) throw std::runtime_error("cannot read " + table);
    const auto rows = read_grid_table(is);
    double worst = rows.size() == g->size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < rows.size() && i < g->size(); ++i) {
      worst = std::max(worst, distance(rows[i].node, g->node(i)));
      worst = std::max(worst, std::abs(rows[i].weight - g->quad_weights()[i]) / g->quad_weights()[i]);
    }
    std::cout << "table_mismatch      " << format_number(worst) << "\n";
    ok = ok && worst <= 1e-12;
  }
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

int kernel_eval(const ExperimentConfig& cfg, double t, const std::vector<double>& x, const std::vector<double>& y,
                int m, const std::string& out) {
  const RootSystem R = build_root_system(cfg.root);
  const HeatKernelModel model(R, cfg.derivative);
  const std::size_t d = static_cast<std::size_t>(R.dimension());
  if (!x.empty() || !y.empty()) {
    if (x.size() != d || y.size() != d) throw std::invalid_argument("--x and --y need one value per axis");
    const auto v = kernel_time_derivative(model, m, t, x, y);
    std::cout << format_number(v.value) << " (error estimate " << format_number(v.error) << ")\n";
    return 0;
  }
  // Table along the first axis: x, y in a lattice on [-3 sqrt t, 3 sqrt t].
  const auto pts = linspace(-3.0 * std::sqrt(t), 3.0 * std::sqrt(t), 25);
  std::ostringstream os;
  os << "t,x,y,value,m\n";
  for (double a : pts)
    for (double b : pts) {
      Vec xv(d, 0.0), yv(d, 0.0);
      xv[0] = a;
      yv[0] = b;
      os << format_number(t) << "," << format_number(a) << "," << format_number(b) << ","
         << format_number(kernel_time_derivative(model, m, t, xv, yv).value) << "," << m << "\n";
    }
  std::cout << write_file(out, "kernel.csv", os.str()) << "\n";
  return 0;
}

int kernel_normalization(const ExperimentConfig& cfg) {
  const RootSystem R = build_root_system(cfg.root);
  const HeatKernelModel model(R, cfg.derivative);
  const std::size_t d = static_cast<std::size_t>(R.dimension());
  double worst = 0.0;
  std::cout << "t       x       mass                deviation\n";
  for (double t : {0.1, 1.0, 10.0})
    for (double a : {0.0, 0.7, 2.0}) {
      const Vec x(d, a);
      const double mass = kernel_mass(model, t, x);
      worst = std::max(worst, std::abs(mass - 1.0));
      std::printf("%-7g %-7g %-19.15g %.3g\n", t, a, mass, std::abs(mass - 1.0));
    }
  const bool ok = worst <= 1e-5;
  std::cout << (ok ? "PASS" : "FAIL") << " max deviation " << format_number(worst) << "\n";
  return ok ? 0 : 1;
}

int emit_report(ExperimentConfig cfg, const std::string& out) {
  if (!cfg.seed) throw std::invalid_argument("--seed is required (or experiment.seed in the config)");
  const ExperimentReport rep = run(cfg);
  const auto [csv, summary] = write_report_files(out, rep);
  write_summary(std::cout, rep);
  std::cout << csv << "\n" << summary << "\n";
  return rep.passed() ? 0 : 1;
}

struct OpArgs {
  std::string function = "bump";
  int m = 0;
  std::optional<double> sigma, t_min, t_max;
  std::optional<std::size_t> t_count, stride;
};

int op_command(const std::string& name, ExperimentConfig cfg, const OpArgs& a, const std::string& out) {
  if (a.sigma) cfg.ops.sigma = *a.sigma;
  if (a.t_min) cfg.ops.t_min = *a.t_min;
  if (a.t_max) cfg.ops.t_max = *a.t_max;
  if (a.t_count) cfg.ops.t_count = *a.t_count;
  if (a.stride) cfg.ops.bracket_stride = *a.stride;
  validate_config(cfg);
  const RootSystem R = build_root_system(cfg.root);
  const GridPtr grid = build_grid(R, cfg.grid.half_width, cfg.grid.resolution, cfg.grid.grading);
  const HeatSemigroup S(HeatKernelModel(R, cfg.derivative), grid);
  const TimeGrid times = TimeGrid::log_uniform(cfg.ops.t_min, cfg.ops.t_max, cfg.ops.t_count);
  const auto br = strided_brackets(times, cfg.ops.bracket_stride);
  const SampledFunction f = input_function(a.function, grid);
  const std::vector<SampledFunction> one{f};
  const auto tr = S.trajectories(one, times.times, a.m);
  const auto v = operator_values(OperatorCase{name, a.m}, tr[0], times, cfg.ops.sigma, br);
  std::ostringstream os;
  os << coord_header(grid->dimension()) << "value\n";
  for (std::size_t i = 0; i < grid->size(); ++i) os << vec_str(grid->node(i), ",") << "," << format_number(v[i]) << "\n";
  std::cout << write_file(out, "op_" + name + ".csv", os.str()) << "\n";
  return 0;
}

int space_norm(const std::string& which, const ExperimentConfig& cfg, const std::string& function) {
  const RootSystem R = build_root_system(cfg.root);
  const WeylGroup G = generate_group(R);
  const GridPtr grid = build_grid(R, cfg.grid.half_width, cfg.grid.resolution, cfg.grid.grading);
  const BallFamily fam = lattice_ball_family(R.dimension(), cfg.bmo.extent, cfg.bmo.centers_per_axis,
                                             cfg.bmo.r_min, cfg.bmo.scales);
  const SampledFunction f = input_function(function, grid);
  NormValue n;
  if (which == "bmo")
    n = bmo_norm(f, fam);
  else if (which == "bmorho")
    n = bmo_rho_norm(f, fam, G);
  else
    n = blo_norm(f, fam);
  const Ball& b = fam.balls[n.argmax];
  std::cout << which << " " << format_number(n.value) << "\n"
            << "argmax ball center (" << vec_str(b.center, ", ") << ") radius " << format_number(b.radius) << "\n"
            << "admissible balls " << n.admissible << " of " << fam.balls.size() << "\n";
  return 0;
}

int space_atoms(const ExperimentConfig& cfg, const std::string& out, const std::string& kind, double q,
                std::size_t count) {
  if (!cfg.seed) throw std::invalid_argument("--seed is required");
  const RootSystem R = build_root_system(cfg.root);
  const WeylGroup G = generate_group(R);
  const GridPtr grid = build_grid(R, cfg.grid.half_width, cfg.grid.resolution, cfg.grid.grading);
  const HeatKernelModel model(R, cfg.derivative);
  const std::size_t d = static_cast<std::size_t>(R.dimension());
  std::mt19937_64 rng(*cfg.seed);
  std::uniform_real_distribution<double> ur(cfg.atoms.r_min, cfg.atoms.r_max), uc(-2.0, 2.0);
  std::ostringstream values, manifest;
  values << "atom," << coord_header(grid->dimension()) << "value\n";
  manifest << "atom,kind,q,seed,center,radius,mean,norm,bound,residual,status\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < count; ++i) {
    Ball B{Vec(d), ur(rng)};
    for (auto& c : B.center) c = uc(rng);
    const std::uint64_t seed = rng();
    std::string status;
    try {
      const Atom a = kind == "laplacian" ? make_atom_laplacian(model, grid, B, seed) : make_atom_1q(grid, B, q, seed);
      const AtomCheck c = check_atom(a, G);
      status = c.ok ? "ok" : "FAIL";
      all_ok = all_ok && c.ok;
      manifest << i << "," << kind << "," << format_number(a.q) << "," << seed << "," << vec_str(B.center)
               << "," << format_number(B.radius) << "," << format_number(c.mean) << "," << format_number(c.norm)
               << "," << format_number(c.bound) << "," << format_number(c.residual) << "," << status << "\n";
      for (std::size_t j = 0; j < grid->size(); ++j)
        if (a.values[j] != 0.0)
          values << i << "," << vec_str(grid->node(j), ",") << "," << format_number(a.values[j]) << "\n";
    } catch (const std::exception& e) {
      manifest << i << "," << kind << "," << format_number(q) << "," << seed << "," << vec_str(B.center) << ","
               << format_number(B.radius) << ",,,,,skipped: " << e.what() << "\n";
    }
  }
  std::cout << write_file(out, "atoms.csv", values.str()) << "\n"
            << write_file(out, "atoms_manifest.csv", manifest.str()) << "\n";
  return all_ok ? 0 : 1;
}

int space_czd(const ExperimentConfig& cfg, const std::string& out, const std::string& function, double lambda) {
  const RootSystem R = build_root_system(cfg.root);
  const GridPtr grid = build_grid(R, cfg.grid.half_width, cfg.grid.resolution, cfg.grid.grading);
  const SampledFunction f = input_function(function, grid);
  const CZDecomposition cz = cz_decompose(f, lambda);
  const CZCheck c = check_cz(cz);
  std::ostringstream cubes, manifest;
  cubes << "cube,level,lo,hi,ball_radius,nodes\n";
  for (std::size_t i = 0; i < cz.cubes.size(); ++i)
    cubes << i << "," << cz.cubes[i].level << "," << vec_str(cz.cubes[i].lo) << "," << vec_str(cz.cubes[i].hi)
          << "," << format_number(cz.balls[i].radius) << "," << cz.cubes[i].nodes.size() << "\n";
  manifest << "quantity,value\n"
           << "lambda," << format_number(cz.lambda) << "\nalpha_star," << format_number(cz.alpha_star)
           << "\nidentity_error," << format_number(cz.identity_error) << "\ngood_constant,"
           << format_number(cz.good_constant) << "\nbad_constant," << format_number(cz.bad_constant)
           << "\nball_constant," << format_number(cz.ball_constant) << "\nmax_overlap," << cz.max_overlap
           << "\nmax_bad_mean," << format_number(cz.max_bad_mean) << "\ndoubling_constant,"
           << format_number(cz.doubling_constant) << "\nball_cube_ratio," << format_number(cz.ball_cube_ratio)
           << "\ncube_ball_ratio," << format_number(cz.cube_ball_ratio) << "\nchecks_pass," << c.all() << "\n";
  std::cout << write_file(out, "czd_cubes.csv", cubes.str()) << "\n"
            << write_file(out, "czd_manifest.csv", manifest.str()) << "\n"
            << "identity " << c.identity << ", good " << c.good_bounded << ", supports " << c.supports << ", bad "
            << c.bad_bounded << ", balls " << c.balls_bounded << "\n";
  return c.all() ? 0 : 1;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Config file (flat key = value with [section] headers)");
  app->add_option("--seed", c.seed, "Seed (u64)");
  app->add_option("--out", c.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl heat semigroup laboratory"};
  app.require_subcommand(1);
  Common common;
  int status = 0;

  auto* rootsys = app.add_subcommand("rootsys", "Root systems");
  rootsys->require_subcommand(1);
  auto* describe_cmd = rootsys->add_subcommand("describe", "Print R, R+, gamma, D and #G");
  add_common(describe_cmd, common);
  describe_cmd->callback([&] { describe(load(common)); });

  auto* grid = app.add_subcommand("grid", "Weighted grids");
  grid->require_subcommand(1);
  auto* gbuild = grid->add_subcommand("build", "Write the grid table to <out>/grid.txt");
  add_common(gbuild, common);
  gbuild->callback([&] { status = grid_build(load(common), common.out); });
  std::string table;
  auto* gcheck = grid->add_subcommand("check", "Grid diagnostics; compares against --table if given");
  add_common(gcheck, common);
  gcheck->add_option("--table", table, "Grid table written by grid build");
  gcheck->callback([&] { status = grid_check(load(common), table); });

  auto* kernel = app.add_subcommand("kernel", "Heat kernel");
  kernel->require_subcommand(1);
  double t = 1.0;
  int m = 0;
  std::vector<double> kx, ky;
  auto* keval = kernel->add_subcommand("eval", "t^m d^m T_t(x,y); without --x/--y writes a table");
  add_common(keval, common);
  keval->add_option("--t", t)->check(CLI::PositiveNumber);
  keval->add_option("--m", m)->check(CLI::Range(0, 4));
  keval->add_option("--x", kx);
  keval->add_option("--y", ky);
  keval->callback([&] { status = kernel_eval(load(common), t, kx, ky, m, common.out); });
  auto* knorm = kernel->add_subcommand("check-normalization", "Kernel mass against 1");
  add_common(knorm, common);
  knorm->callback([&] { status = kernel_normalization(load(common)); });
  auto* kfit = kernel->add_subcommand("fit-bound", "Fit the Gaussian bound constants");
  add_common(kfit, common);
  kfit->callback([&] {
    ExperimentConfig cfg = load(common, "exp_kernel_bounds");
    cfg.experiment = "exp_kernel_bounds";
    if (!cfg.seed) cfg.seed = 0;
    status = emit_report(cfg, common.out);
  });

  auto* op = app.add_subcommand("op", "Square-function operators");
  op->require_subcommand(1);
  OpArgs oa;
  for (const char* name : {"maximal", "gfunc", "variation", "oscillation"}) {
    auto* sub = op->add_subcommand(name, std::string("Evaluate the ") + name + " operator");
    add_common(sub, common);
    sub->add_option("--function", oa.function, "bump or a battery function name");
    sub->add_option("--m", oa.m)->check(CLI::Range(0, 4));
    sub->add_option("--sigma", oa.sigma);
    sub->add_option("--t-min", oa.t_min);
    sub->add_option("--t-max", oa.t_max);
    sub->add_option("--t-count", oa.t_count);
    sub->add_option("--bracket-stride", oa.stride);
    sub->callback([&, name] { status = op_command(name, load(common), oa, common.out); });
  }

  auto* space = app.add_subcommand("space", "Function spaces");
  space->require_subcommand(1);
  std::string function = "log";
  for (const char* name : {"bmo", "bmorho", "blo"}) {
    auto* sub = space->add_subcommand(name, std::string("Compute the ") + name + " norm");
    add_common(sub, common);
    sub->add_option("--function", function);
    sub->callback([&, name] { status = space_norm(name, load(common), function); });
  }
  std::string kind = "1q";
  double q = 2.0;
  std::size_t count = 10;
  auto* atoms = space->add_subcommand("atoms", "Generate and check atoms");
  add_common(atoms, common);
  atoms->add_option("--kind", kind)->check(CLI::IsMember({"1q", "laplacian"}));
  atoms->add_option("--q", q);
  atoms->add_option("--count", count);
  atoms->callback([&] { status = space_atoms(load(common, "exp_h1_atoms"), common.out, kind, q, count); });
  double lambda = 1.0;
  auto* czd = space->add_subcommand("czd", "Calderon-Zygmund decomposition");
  add_common(czd, common);
  czd->add_option("--function", function);
  czd->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
  czd->callback([&] { status = space_czd(load(common), common.out, function, lambda); });

  auto* run_cmd = app.add_subcommand("run", "Run the experiment named in the config");
  add_common(run_cmd, common);
  run_cmd->get_option("--config")->required();
  run_cmd->callback([&] { status = emit_report(load(common), common.out); });

  std::string which;
  auto* defaults = app.add_subcommand("defaults", "Print the reference configuration of every experiment");
  defaults->add_option("--experiment", which);
  defaults->callback([&] {
    for (const auto& name : experiment_names()) {
      if (!which.empty() && which != name) continue;
      write_config(std::cout, default_config(name));
      std::cout << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
