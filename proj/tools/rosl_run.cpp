// Batch driver for the inclusion solver: runs the built-in elliptic
// experiments (bsp1, bsp2) or a seeded generic finite-dimensional instance,
// and exports residual tables and iterate snapshots.

#include <algorithm>
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

#include <CLI11.hpp>
#include <json.hpp>

#include "rosl/elliptic.hpp"
#include "rosl/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sig5(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.5g", v);
  return buf;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  std::string experiment = "bsp1";
  int N = 1024;
  double lf = -1.0;
  std::optional<double> R;
  int steps = 8;
  double inner_tol = 1e-9;
  double outer_tol = 1e-6;
  uint64_t seed = 0;
  std::string out = "out";
  std::string u0;  // builtin name or samples file; default = experiment
  bool allow_unjustified = false;
};

void apply_config_file(const std::string& path, const CLI::App& app,
                       RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  json j;
  in >> j;
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");

  const auto set_if_unset = [&](const char* key, auto& field, auto parse) {
    if (!j.contains(key)) return;
    // config keys use underscores; the corresponding flags use hyphens
    std::string flag = std::string("--") + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (app.count(flag) == 0) field = parse(j.at(key));
    j.erase(key);
  };
  set_if_unset("experiment", cfg.experiment,
               [](const json& v) { return v.get<std::string>(); });
  set_if_unset("N", cfg.N, [](const json& v) { return v.get<int>(); });
  set_if_unset("lf", cfg.lf, [](const json& v) { return v.get<double>(); });
  if (j.contains("R")) {
    if (app.count("--R") == 0) cfg.R = j.at("R").get<double>();
    j.erase("R");
  }
  set_if_unset("steps", cfg.steps, [](const json& v) { return v.get<int>(); });
  set_if_unset("inner_tol", cfg.inner_tol,
               [](const json& v) { return v.get<double>(); });
  set_if_unset("outer_tol", cfg.outer_tol,
               [](const json& v) { return v.get<double>(); });
  set_if_unset("seed", cfg.seed,
               [](const json& v) { return v.get<uint64_t>(); });
  set_if_unset("out", cfg.out,
               [](const json& v) { return v.get<std::string>(); });
  set_if_unset("u0", cfg.u0,
               [](const json& v) { return v.get<std::string>(); });
  set_if_unset("allow_unjustified", cfg.allow_unjustified,
               [](const json& v) { return v.get<bool>(); });
  if (!j.empty())
    throw std::runtime_error("unknown config key '" + j.begin().key() + "'");
}

rosl::Vector load_u0_file(const std::string& path, const rosl::GelfandGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open u0 file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("u0 file '" + path + "' is empty");
  rosl::Vector u(grid.dim());
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= grid.nodes)
      throw std::runtime_error("u0 file has more rows than grid nodes");
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, u1, u2;
    if (!(ss >> x >> u1 >> u2))
      throw std::runtime_error("u0 file: malformed row " + std::to_string(row));
    u[row] = u1;
    u[grid.nodes + row] = u2;
    ++row;
  }
  if (row != grid.nodes)
    throw std::runtime_error("u0 file has " + std::to_string(row) +
                             " rows, expected " + std::to_string(grid.nodes));
  return u;
}

void write_residual_table(const fs::path& dir,
                          const std::vector<double>& residuals) {
  std::ofstream txt(dir / "residuals.txt");
  txt << "steps residual\n";
  std::ostringstream table;
  for (size_t n = 0; n < residuals.size(); ++n)
    table << n << " " << sig5(residuals[n]) << "\n";
  txt << table.str();
  std::cout << "steps residual\n" << table.str();
}

void write_residual_csv(const fs::path& dir,
                        const std::vector<double>& residuals,
                        const std::vector<int>& inner_iters,
                        const std::vector<double>& eta,
                        const std::vector<double>& dist_set) {
  std::ofstream csv(dir / "residuals.csv");
  csv << "n,residual,ratio,inner_iters,eta_bound,dist_set_bound\n";
  for (size_t n = 0; n < residuals.size(); ++n) {
    const double ratio = n == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : residuals[n] / residuals[n - 1];
    csv << n << "," << g17(residuals[n]) << "," << g17(ratio) << ","
        << (n < inner_iters.size() ? inner_iters[n] : 0) << ","
        << g17(n < eta.size() ? eta[n]
                              : std::numeric_limits<double>::quiet_NaN())
        << ","
        << g17(n < dist_set.size()
                   ? dist_set[n]
                   : std::numeric_limits<double>::quiet_NaN())
        << "\n";
  }
}

int run_elliptic(const RunConfig& cfg) {
  if (cfg.N < 4) throw std::runtime_error("N must be >= 4");
  if (cfg.steps < 0) throw std::runtime_error("steps must be >= 0");

  rosl::RhsParams params;
  params.l_f = cfg.lf;
  params.R = cfg.R;
  rosl::GelfandGrid grid =
      rosl::build_grid(cfg.N, rosl::builtin_rhs(cfg.experiment, params));

  const std::string u0spec = cfg.u0.empty() ? cfg.experiment : cfg.u0;
  rosl::Vector u0 = fs::exists(u0spec) ? load_u0_file(u0spec, grid)
                                       : rosl::builtin_initial_data(grid, u0spec);

  rosl::PdiOptions opts;
  opts.inner_tol = cfg.inner_tol;
  opts.outer_tol = cfg.outer_tol;
  opts.max_steps = cfg.steps;
  opts.record_iterates = true;
  opts.allow_unjustified = cfg.allow_unjustified;

  const fs::path dir(cfg.out);
  fs::create_directories(dir / "iterates");

  rosl::PdiReport rep;
  try {
    rep = rosl::solve_pdi(grid, u0, opts);
  } catch (const rosl::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  // a-priori distance bounds from the implicit inner-solve errors
  std::vector<double> eta, dist_set;
  if (rep.kappa_certified) {
    for (size_t n = 0; n < rep.residuals.size(); ++n) {
      const auto b = rosl::apriori_bounds(rep.residuals[0], -1.0,
                                          2.0 * rep.kappa, rep.xi_norm_bounds,
                                          static_cast<int>(n));
      eta.push_back(b.eta_n);
      dist_set.push_back(b.dist_set_bound);
    }
  }

  write_residual_table(dir, rep.residuals);
  write_residual_csv(dir, rep.residuals, rep.inner_iters, eta, dist_set);

  for (size_t n = 0; n < rep.iterates.size(); ++n) {
    std::ofstream it(dir / "iterates" / ("step_" + std::to_string(n) + ".csv"));
    it << "x,u1,u2\n";
    for (int i = 0; i < grid.nodes; ++i)
      it << g17(grid.node_x[i]) << "," << g17(rep.iterates[n][i]) << ","
         << g17(rep.iterates[n][grid.nodes + i]) << "\n";
  }
  return 0;
}

int run_generic(const RunConfig& cfg) {
  if (cfg.N < 1) throw std::runtime_error("N must be >= 1 for generic runs");
  if (cfg.steps < 0) throw std::runtime_error("steps must be >= 0");
  const int d = cfg.N;
  const double r = cfg.R.value_or(1.0);

  // seeded instance F(x) = A x + Ball(0, r), A symmetric negative definite
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd Q(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Q(i, j) = gauss(rng);
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ();
  Eigen::VectorXd eigs(d);
  std::uniform_real_distribution<double> unif(1.0, 3.0);
  for (int i = 0; i < d; ++i) eigs[i] = -unif(rng);
  const Eigen::MatrixXd A = Q * eigs.asDiagonal() * Q.transpose();
  rosl::Vector ybar(d);
  for (int i = 0; i < d; ++i) ybar[i] = gauss(rng);

  const rosl::GramSpace space = rosl::GramSpace::euclidean(d);
  rosl::SetValuedMap map{space, space,
                         [A, r, &space](const rosl::Vector& x) {
                           return rosl::make_ball(A * x, r, space);
                         },
                         eigs.maxCoeff(), eigs.cwiseAbs().maxCoeff()};

  rosl::SolveOptions opts;
  opts.max_iters = cfg.steps;
  opts.tol_residual = cfg.outer_tol;
  opts.record_iterates = true;

  const fs::path dir(cfg.out);
  fs::create_directories(dir / "iterates");

  rosl::SolveReport rep =
      rosl::solve(map, ybar, rosl::Vector::Zero(d), opts);

  std::vector<double> eta, dist_set;
  for (size_t n = 0; n < rep.residuals.size(); ++n) {
    const auto b = rosl::apriori_bounds(rep.residuals[0], rep.l, rep.L, {},
                                        static_cast<int>(n));
    eta.push_back(b.eta_n);
    dist_set.push_back(b.dist_set_bound);
  }

  write_residual_table(dir, rep.residuals);
  write_residual_csv(dir, rep.residuals, {}, eta, dist_set);

  if (rep.iterates) {
    for (size_t n = 0; n < rep.iterates->size(); ++n) {
      std::ofstream it(dir / "iterates" /
                       ("step_" + std::to_string(n) + ".csv"));
      it << "i,x\n";
      for (int i = 0; i < d; ++i)
        it << i << "," << g17((*rep.iterates)[n][i]) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"Damped projection solver for elliptic differential inclusions"};
  app.add_option("--experiment", cfg.experiment, "bsp1 | bsp2 | generic")
      ->check(CLI::IsMember({"bsp1", "bsp2", "generic"}));
  app.add_option("--N", cfg.N, "grid cells (elliptic) or dimension (generic)");
  app.add_option("--lf", cfg.lf, "pointwise one-sided constant (bsp1)");
  app.add_option("--R", cfg.R, "perturbation ball radius");
  app.add_option("--steps", cfg.steps, "outer iteration steps");
  app.add_option("--inner-tol", cfg.inner_tol, "inner solver tolerance");
  app.add_option("--outer-tol", cfg.outer_tol, "stop when residual <= this");
  app.add_option("--seed", cfg.seed, "seed for generic instances");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--u0", cfg.u0, "initial data: builtin name or CSV file");
  app.add_option("--config", config_path, "JSON config (flags win)");
  app.add_flag("--allow-unjustified", cfg.allow_unjustified,
               "run maps without a certified contraction factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, app, cfg);
    if (cfg.experiment == "generic") return run_generic(cfg);
    return run_elliptic(cfg);
  } catch (const rosl::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
