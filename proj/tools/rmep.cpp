#include "rmep/io.hpp"
#include "rmep/linear_rmep.hpp"
#include "rmep/macaulay.hpp"
#include "rmep/poly_rmep.hpp"
#include "rmep/timeseries.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

namespace {

using namespace rmep;

struct CommonOpts {
  double tol_rank = 1e-10;
  double tol_staircase = 1e-10;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--tol-rank", o.tol_rank, "Rank drop acceptance threshold")
      ->capture_default_str();
  cmd->add_option("--tol-staircase", o.tol_staircase, "Staircase rank threshold")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for the randomized steps");
  cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
}

ToleranceConfig to_config(const CommonOpts& o) {
  ToleranceConfig cfg;
  cfg.rank_tol = o.tol_rank;
  cfg.stair_tol = o.tol_staircase;
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

/// foo.csv -> foo-stationary.csv; extensionless names get the suffix appended.
std::string stationary_path(const std::string& out) {
  const std::size_t dot = out.find_last_of('.');
  const std::size_t slash = out.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out + "-stationary";
  return out.substr(0, dot) + "-stationary" + out.substr(dot);
}

std::size_t memory_cap() {
  if (const char* env = std::getenv("RMEP_MEM_CAP_BYTES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 31;
}

QuadR2EP quad_from_problem(const ProblemFile& pf) {
  if (pf.kind != "quad-r2ep")
    throw std::invalid_argument("expected a quad-r2ep problem, got '" + pf.kind + "'");
  const RectPencil p = pencil_from_problem(pf);
  return {p.term_or_zero({0, 0}), p.term_or_zero({1, 0}), p.term_or_zero({0, 1}),
          p.term_or_zero({2, 0}), p.term_or_zero({1, 1}), p.term_or_zero({0, 2})};
}

std::vector<Matrix> arma21_from_problem(const ProblemFile& pf) {
  if (pf.kind != "arma21-matrices")
    throw std::invalid_argument("expected an arma21-matrices problem, got '" + pf.kind + "'");
  const RectPencil p = pencil_from_problem(pf);
  return {p.term_or_zero({0, 0, 0}), p.term_or_zero({1, 0, 0}), p.term_or_zero({0, 1, 0}),
          p.term_or_zero({0, 0, 1}), p.term_or_zero({0, 0, 2})};
}

void report_model(const ModelSolveResult& res) {
  std::cerr << res.eigenvalues.size() << " eigenvalues from operators of size "
            << res.stats.compressed_size << ", " << res.stationary.size()
            << " real stationary points";
  if (res.global_min >= 0) {
    const StationaryPoint& p = res.stationary[static_cast<std::size_t>(res.global_min)];
    std::cerr << ", best admissible minimum (" << format_real(p.params[0]) << ", "
              << format_real(p.params[1]) << ") with objective " << format_real(p.objective);
  }
  std::cerr << "\n";
}

void write_model_result(const ModelSolveResult& res, const CommonOpts& opts) {
  emit(opts.out, eigenvalues_csv(res.eigenvalues, 2));
  const std::string stationary = stationary_csv(res.stationary);
  if (opts.out.empty())
    std::cout << "\n" << stationary;
  else
    write_text(stationary_path(opts.out), stationary);
  report_model(res);
}

std::string key_of(const std::vector<int>& w) {
  std::string key;
  for (int e : w) key += static_cast<char>('0' + e);
  return key;
}

ProblemFile generate(const std::string& kind, Index n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const auto random_matrix = [&](Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
    return m;
  };

  ProblemFile pf;
  pf.kind = kind;
  if (kind == "arma11" || kind == "lti2") {
    if (n < 4) throw std::invalid_argument("gen: series kinds need --n of at least 4");
    pf.k = 2;
    pf.n = n;
    pf.y = RealVector(n);
    for (Index i = 0; i < n; ++i) pf.y[i] = dist(rng);
    return pf;
  }
  if (n < 1) throw std::invalid_argument("gen: need --n of at least 1");

  std::vector<std::vector<int>> exponents;
  Index rows = 0;
  if (kind == "linear-rmep") {
    if (k < 1) throw std::invalid_argument("gen: need --k of at least 1");
    exponents.emplace_back(k, 0);
    for (int i = 0; i < k; ++i) {
      std::vector<int> w(k, 0);
      w[i] = 1;
      exponents.push_back(w);
    }
    rows = n + k - 1;
    pf.k = k;
  } else if (kind == "quad-r2ep") {
    exponents = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    rows = n + 1;
    pf.k = 2;
  } else if (kind == "arma21-matrices") {
    exponents = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 2}};
    rows = n + 2;
    pf.k = 3;
  } else {
    throw std::invalid_argument("gen: unknown kind '" + kind + "'");
  }
  pf.n = n;
  for (const std::vector<int>& w : exponents) pf.terms.emplace(key_of(w), random_matrix(rows, n));
  return pf;
}

int run(int argc, char** argv) {
  CLI::App app{"Rectangular multiparameter eigenvalue solvers"};
  app.require_subcommand(1);
  const std::size_t cap = memory_cap();

  std::string problem_path;
  std::string series_path;

  CommonOpts linear_opts;
  CLI::App* solve_linear = app.add_subcommand(
      "solve-linear", "All eigenvalues of a linear rectangular problem");
  solve_linear->add_option("problem", problem_path, "Problem JSON")->required();
  add_common(solve_linear, linear_opts);
  solve_linear->callback([&] {
    const ProblemFile pf = read_problem(problem_path);
    if (pf.kind != "linear-rmep")
      throw std::invalid_argument("solve-linear expects a linear-rmep problem");
    const RectPencil p = pencil_from_problem(pf);
    const EigSet eigs = solve_linear_compressed(p, to_config(linear_opts), linear_opts.seed);
    emit(linear_opts.out, eigenvalues_csv(eigs, p.k));
  });

  CommonOpts quad_opts;
  std::string method = "vandermonde";
  CLI::App* solve_quadratic = app.add_subcommand(
      "solve-quadratic", "All eigenvalues of a quadratic two-parameter problem");
  solve_quadratic->add_option("problem", problem_path, "Problem JSON")->required();
  solve_quadratic
      ->add_option("--method", method,
                   "project: square subproblems; rect: compressed linearization; "
                   "vandermonde: structure-aware compression")
      ->check(CLI::IsMember({"project", "rect", "vandermonde"}))
      ->capture_default_str();
  add_common(solve_quadratic, quad_opts);
  solve_quadratic->callback([&] {
    const QuadR2EP q = quad_from_problem(read_problem(problem_path));
    const ToleranceConfig cfg = to_config(quad_opts);
    EigSet eigs;
    if (method == "project")
      eigs = solve_quadratic_projected(q, cfg, quad_opts.seed);
    else if (method == "rect")
      eigs = solve_quadratic_linearized(q, cfg, quad_opts.seed);
    else
      eigs = solve_quadratic_vandermonde(q, cfg, quad_opts.seed);
    emit(quad_opts.out, eigenvalues_csv(eigs, 2));
  });

  CommonOpts arma_opts;
  CLI::App* arma11 = app.add_subcommand(
      "arma11", "Stationary points of the ARMA(1,1) objective for a series file");
  arma11->add_option("series", series_path, "Whitespace separated observations")->required();
  add_common(arma11, arma_opts);
  arma11->callback([&] {
    const TimeSeries ts = read_series(series_path);
    write_model_result(solve_arma11(ts, to_config(arma_opts), arma_opts.seed), arma_opts);
  });

  CommonOpts lti_opts;
  CLI::App* lti2 = app.add_subcommand(
      "lti2", "Stationary points of the LTI(2) objective for a series file");
  lti2->add_option("series", series_path, "Whitespace separated observations")->required();
  add_common(lti2, lti_opts);
  lti2->callback([&] {
    const TimeSeries ts = read_series(series_path);
    write_model_result(solve_lti2(ts, to_config(lti_opts), lti_opts.seed), lti_opts);
  });

  CommonOpts arma21_opts;
  CLI::App* arma21 = app.add_subcommand(
      "arma21", "Eigenvalue triples of a user supplied ARMA(2,1) system");
  arma21->add_option("problem", problem_path, "Problem JSON with the five coefficients")
      ->required();
  add_common(arma21, arma21_opts);
  arma21->callback([&] {
    const std::vector<Matrix> coeffs = arma21_from_problem(read_problem(problem_path));
    MixedSolveStats stats;
    const EigSet eigs =
        solve_arma21_pipeline(coeffs, to_config(arma21_opts), arma21_opts.seed, &stats);
    emit(arma21_opts.out, eigenvalues_csv(eigs, 3));
    std::cerr << eigs.size() << " eigenvalues from operators of size " << stats.compressed_size
              << "\n";
  });

  CLI::App* macaulay = app.add_subcommand("macaulay", "Shifted-copy baseline");
  macaulay->require_subcommand(1);

  Index mac_n = 0;
  int mac_k = 0;
  int mac_m = 0;
  std::string size_out;
  CLI::App* mac_size_cmd = macaulay->add_subcommand("size", "Dimensions of the layout");
  mac_size_cmd->add_option("--n", mac_n, "Pencil columns")->required();
  mac_size_cmd->add_option("--k", mac_k, "Parameters")->required();
  mac_size_cmd->add_option("--m", mac_m, "Degree")->required();
  mac_size_cmd->add_option("--out", size_out, "Output file (stdout when omitted)");
  mac_size_cmd->callback([&] {
    const auto [rows, cols] = mac_size(mac_n, mac_k, mac_m);
    emit(size_out, "rows,cols\n" + std::to_string(rows) + "," + std::to_string(cols) + "\n");
  });

  CommonOpts profile_opts;
  int m_max = 0;
  CLI::App* mac_profile = macaulay->add_subcommand("profile", "Nullity per degree");
  mac_profile->add_option("problem", problem_path, "Problem JSON")->required();
  mac_profile->add_option("--m-max", m_max, "Largest degree")->required();
  add_common(mac_profile, profile_opts);
  mac_profile->callback([&] {
    const RectPencil p = pencil_from_problem(read_problem(problem_path));
    const std::vector<Index> profile =
        nullspace_profile(p, m_max, to_config(profile_opts), cap);
    std::string text = "degree,nullity\n";
    for (std::size_t i = 0; i < profile.size(); ++i)
      text += std::to_string(p.degree + static_cast<int>(i)) + "," +
              std::to_string(profile[i]) + "\n";
    emit(profile_opts.out, text);
  });

  CommonOpts mac_solve_opts;
  int mac_solve_m = 0;
  CLI::App* mac_solve = macaulay->add_subcommand("solve", "Eigenvalues via the nullspace");
  mac_solve->add_option("problem", problem_path, "Problem JSON")->required();
  mac_solve->add_option("--m", mac_solve_m, "Degree of the layout")->required();
  add_common(mac_solve, mac_solve_opts);
  mac_solve->callback([&] {
    const RectPencil p = pencil_from_problem(read_problem(problem_path));
    const EigSet eigs =
        mac_solve_small(p, mac_solve_m, to_config(mac_solve_opts), mac_solve_opts.seed, cap);
    emit(mac_solve_opts.out, eigenvalues_csv(eigs, p.k));
  });

  std::string gen_kind;
  Index gen_n = 3;
  int gen_k = 2;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Seeded random problem files");
  gen->add_option("--kind", gen_kind, "linear-rmep | quad-r2ep | arma21-matrices | arma11 | lti2")
      ->required();
  gen->add_option("--n", gen_n, "Columns (or series length)")->capture_default_str();
  gen->add_option("--k", gen_k, "Parameters (linear-rmep only)")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");
  gen->callback([&] { emit(gen_out, serialize_problem(generate(gen_kind, gen_n, gen_k, gen_seed))); });

  std::string grid_model;
  Index grid_steps = 51;
  double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
  std::string grid_out;
  CLI::App* grid = app.add_subcommand("grid", "Objective samples on a parameter grid");
  grid->add_option("--model", grid_model, "arma11 | lti2")
      ->check(CLI::IsMember({"arma11", "lti2"}))
      ->required();
  grid->add_option("series", series_path, "Whitespace separated observations")->required();
  grid->add_option("--grid-steps", grid_steps, "Samples per axis")->capture_default_str();
  grid->add_option("--x-min", x_min, "First parameter lower bound")->capture_default_str();
  grid->add_option("--x-max", x_max, "First parameter upper bound")->capture_default_str();
  grid->add_option("--y-min", y_min, "Second parameter lower bound")->capture_default_str();
  grid->add_option("--y-max", y_max, "Second parameter upper bound")->capture_default_str();
  grid->add_option("--out", grid_out, "Grid CSV; axes go to <out>.axes.json")->required();
  grid->callback([&] {
    const TimeSeries ts = read_series(series_path);
    const auto f = grid_model == "arma11"
                       ? std::function<double(double, double)>(
                             [&ts](double a, double g) { return arma11_objective(ts, a, g); })
                       : std::function<double(double, double)>(
                             [&ts](double a, double b) { return lti2_objective(ts, a, b); });
    const RealMatrix g = contour_grid(f, x_min, x_max, y_min, y_max, grid_steps);
    write_text(grid_out, grid_csv(g));
    std::string axes = "{\n  \"model\": \"" + grid_model + "\",\n  \"x\": [";
    for (Index i = 0; i < grid_steps; ++i) {
      if (i > 0) axes += ", ";
      axes += format_real(x_min + static_cast<double>(i) * (x_max - x_min) /
                                      static_cast<double>(grid_steps - 1));
    }
    axes += "],\n  \"y\": [";
    for (Index j = 0; j < grid_steps; ++j) {
      if (j > 0) axes += ", ";
      axes += format_real(y_min + static_cast<double>(j) * (y_max - y_min) /
                                      static_cast<double>(grid_steps - 1));
    }
    axes += "]\n}\n";
    write_text(grid_out + ".axes.json", axes);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
