// Command-line front end: mesh generation/inspection, single runs,
// convergence studies, and named presets reproducing the benchmark
// tables.
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 numerical
// failure. Error messages go to stderr as "error: <category>: <text>".

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mfv/analysis.hpp"
#include "mfv/errors.hpp"
#include "mfv/mesh.hpp"
#include "mfv/problem.hpp"
#include "mfv/scheme.hpp"

namespace {

using namespace mfv;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Mesh specs. A spec is either a generator string
//   squares:N
//   triangles:N[:diagonal|crisscross][:circumcenter]
//   distorted:N[:seed=S][:map=A][:jitter=J]
//   refined:N:F            (N x N base grid, central quarter refined F x F)
// or a path to an `mfv-mesh v1` file.

bool looks_like_generator(const std::string& spec) {
  return spec.rfind("squares:", 0) == 0 || spec.rfind("triangles:", 0) == 0 ||
         spec.rfind("distorted:", 0) == 0 || spec.rfind("refined:", 0) == 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "' as an integer");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "' as a number");
  }
}

Mesh mesh_from_spec(const std::string& spec) {
  if (!looks_like_generator(spec)) return read_mesh(spec);
  std::vector<std::string> parts = split(spec, ':');
  const std::string& family = parts[0];
  if (parts.size() < 2) throw ConfigError("mesh spec '" + spec + "' is missing a resolution");
  int n = parse_int(parts[1], "mesh resolution");

  if (family == "squares") {
    if (parts.size() > 2) throw ConfigError("mesh spec '" + spec + "': unexpected extra fields");
    return gen_uniform_squares(n);
  }
  if (family == "triangles") {
    TrianglePattern pattern = TrianglePattern::Diagonal;
    CellPointPolicy points = CellPointPolicy::Centroid;
    for (std::size_t i = 2; i < parts.size(); ++i) {
      if (parts[i] == "diagonal")
        pattern = TrianglePattern::Diagonal;
      else if (parts[i] == "crisscross")
        pattern = TrianglePattern::Crisscross;
      else if (parts[i] == "circumcenter")
        points = CellPointPolicy::Circumcenter;
      else if (parts[i] == "centroid")
        points = CellPointPolicy::Centroid;
      else
        throw ConfigError("mesh spec '" + spec + "': unknown option '" + parts[i] + "'");
    }
    return gen_uniform_triangles(n, pattern, points);
  }
  if (family == "distorted") {
    Distortion d{0.15, 0.1, 0};
    for (std::size_t i = 2; i < parts.size(); ++i) {
      auto kv = split(parts[i], '=');
      if (kv.size() != 2)
        throw ConfigError("mesh spec '" + spec + "': expected key=value, got '" + parts[i] + "'");
      if (kv[0] == "seed")
        d.seed = static_cast<std::uint64_t>(parse_int(kv[1], "seed"));
      else if (kv[0] == "map")
        d.map_amplitude = parse_double(kv[1], "map amplitude");
      else if (kv[0] == "jitter")
        d.jitter_amplitude = parse_double(kv[1], "jitter amplitude");
      else
        throw ConfigError("mesh spec '" + spec + "': unknown key '" + kv[0] + "'");
    }
    return gen_distorted_quads(n, d);
  }
  if (family == "refined") {
    if (parts.size() != 3) throw ConfigError("mesh spec '" + spec + "': expected refined:N:F");
    int f = parse_int(parts[2], "refinement factor");
    int i0 = n / 4, i1 = 3 * n / 4 - 1;
    if (i1 < i0) throw ConfigError("mesh spec '" + spec + "': base grid too coarse to refine");
    return gen_refined_nonconforming(n, {{i0, i0, i1, i1, f}});
  }
  throw ConfigError("unknown mesh family in spec '" + spec + "'");
}

void print_mesh_summary(const Mesh& mesh, std::ostream& out) {
  out << "cells " << mesh.cell_count() << "\n";
  out << "edges " << mesh.edge_count() << " (interior " << mesh.interior_edge_count()
      << ", boundary " << mesh.edge_count() - mesh.interior_edge_count() << ")\n";
  out << "size " << fmt17(mesh.size()) << "\n";
  out << "regul " << fmt17(mesh.regularity()) << "\n";
  out << "area " << fmt17(mesh.domain_area()) << "\n";
  out << "simplicial " << (mesh.all_simplicial() ? "yes" : "no") << "\n";
}

// ---------------------------------------------------------------------------
// Run configuration, accepted from flags and/or a one-key-per-line file.

struct RunConfig {
  std::string case_name;
  std::string mesh_spec;
  std::string nu_mode = "fixed";  // fixed | power | zero
  double nu0 = 1e-9;
  double beta = -1.0;
  int quad_order = 2;
  std::string solver = "auto";  // auto | cholesky | pcg
  double tol = 1e-12;
  std::string out_solution;
  std::string out_csv;
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key, value;
    if (!(ss >> key >> value))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected '<key> <value>'");
    std::string rest;
    if (ss >> rest)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": trailing content '" + rest + "'");
    if (key == "case")
      cfg.case_name = value;
    else if (key == "mesh")
      cfg.mesh_spec = value;
    else if (key == "nu")
      cfg.nu_mode = value;
    else if (key == "nu0")
      cfg.nu0 = parse_double(value, "nu0");
    else if (key == "beta")
      cfg.beta = parse_double(value, "beta");
    else if (key == "quad")
      cfg.quad_order = parse_int(value, "quad");
    else if (key == "solver")
      cfg.solver = value;
    else if (key == "tol")
      cfg.tol = parse_double(value, "tol");
    else if (key == "out-solution")
      cfg.out_solution = value;
    else if (key == "out-csv")
      cfg.out_csv = value;
    else
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

PenalizationPolicy policy_from(const RunConfig& cfg) {
  if (cfg.nu_mode == "fixed") return PenalizationPolicy::fixed_over_measure(cfg.nu0);
  if (cfg.nu_mode == "power")
    return PenalizationPolicy::power_of_diameter(cfg.nu0 == 1e-9 ? 1.0 : cfg.nu0, cfg.beta);
  if (cfg.nu_mode == "zero") return PenalizationPolicy::zero();
  throw ConfigError("unknown penalization mode '" + cfg.nu_mode + "' (fixed, power or zero)");
}

SolverOptions solver_from(const RunConfig& cfg) {
  SolverOptions opt;
  opt.tol = cfg.tol;
  if (cfg.solver == "auto")
    opt.method = SolverOptions::Method::Auto;
  else if (cfg.solver == "cholesky")
    opt.method = SolverOptions::Method::Cholesky;
  else if (cfg.solver == "pcg")
    opt.method = SolverOptions::Method::Pcg;
  else
    throw ConfigError("unknown solver '" + cfg.solver + "' (auto, cholesky or pcg)");
  return opt;
}

void validate_config(const RunConfig& cfg, const Mesh& mesh) {
  if (cfg.nu_mode == "zero" && !mesh.all_simplicial())
    throw ConfigError("penalization zero requires simplicial mesh");
  if (cfg.quad_order != 1 && cfg.quad_order != 2 && cfg.quad_order != 4)
    throw ConfigError("quadrature order must be 1, 2 or 4");
}

ErrorReport run_one(const RunConfig& cfg, const Mesh& mesh, ConvergenceTable& table) {
  ProblemCase pc = case_by_name(cfg.case_name);
  validate_config(cfg, mesh);
  Solution sol = solve_mfv(mesh, pc, policy_from(cfg), solver_from(cfg), cfg.quad_order);

  if (!cfg.out_solution.empty()) {
    std::ofstream f(cfg.out_solution);
    if (!f) throw ConfigError("cannot open solution output: " + cfg.out_solution);
    write_solution(mesh, sol, f);
  }

  if (!pc.exact) throw AnalysisError("case '" + cfg.case_name + "' has no exact solution");
  ErrorReport report = measure_errors(mesh, sol, *pc.exact);
  table.case_name = cfg.case_name;
  table.rows.push_back({cfg.mesh_spec, report});
  return report;
}

void emit_csv(const ConvergenceTable& table, const std::string& path) {
  if (path.empty()) {
    write_csv(table, std::cout);
  } else {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open CSV output: " + path);
    write_csv(table, f);
  }
}

void print_orders(const ConvergenceTable& table) {
  std::vector<double> h, eu, eg;
  for (const ConvergenceRow& r : table.rows) {
    h.push_back(r.report.h);
    eu.push_back(r.report.e2_u);
    eg.push_back(r.report.e2_grad);
  }
  try {
    std::fprintf(stderr, "order_u %.4f\norder_grad %.4f\n", convergence_order(h, eu),
                 convergence_order(h, eg));
  } catch (const AnalysisError& e) {
    std::fprintf(stderr, "order undefined: %s\n", e.what());
  }
}

int run_convergence(RunConfig cfg, const std::string& family, const std::vector<int>& levels,
                    int jobs) {
  if (levels.size() < 2) throw ConfigError("convergence needs at least two levels");
  ConvergenceTable table;
  table.case_name = cfg.case_name;
  table.with_orders = true;
  table.rows.resize(levels.size());

  std::vector<std::string> specs;
  for (int n : levels) specs.push_back(family + ":" + std::to_string(n));

  std::vector<std::exception_ptr> errors(levels.size());
  auto work = [&](std::size_t i) {
    try {
      Mesh mesh = mesh_from_spec(specs[i]);
      ProblemCase pc = case_by_name(cfg.case_name);
      RunConfig local = cfg;
      local.mesh_spec = specs[i];
      validate_config(local, mesh);
      Solution sol = solve_mfv(mesh, pc, policy_from(local), solver_from(local), local.quad_order);
      if (!pc.exact) throw AnalysisError("case '" + cfg.case_name + "' has no exact solution");
      table.rows[i] = {specs[i], measure_errors(mesh, sol, *pc.exact)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < levels.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) pool.emplace_back(work, i);
    (void)next;
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  emit_csv(table, cfg.out_csv);
  print_orders(table);
  return 0;
}

int run_preset(const std::string& name, const RunConfig& base) {
  RunConfig cfg = base;
  if (name == "lepotier-dq4" || name == "lepotier-dq5" || name == "lepotier-dq6") {
    cfg.case_name = "lepotier";
    cfg.mesh_spec = name == "lepotier-dq4"   ? "squares:40"
                    : name == "lepotier-dq5" ? "squares:80"
                                             : "squares:200";
    ConvergenceTable table;
    run_one(cfg, mesh_from_spec(cfg.mesh_spec), table);
    emit_csv(table, cfg.out_csv);
    return 0;
  }
  if (name == "isotropic-squares") {
    cfg.case_name = "isotropic";
    return run_convergence(cfg, "squares", {8, 16, 32, 64}, 1);
  }
  if (name == "isotropic-triangles") {
    cfg.case_name = "isotropic";
    return run_convergence(cfg, "triangles", {8, 16, 32}, 1);
  }
  if (name == "patch-affine") {
    cfg.case_name = "patch-affine";
    ConvergenceTable table;
    table.case_name = cfg.case_name;
    for (const char* spec : {"distorted:8:seed=7", "refined:8:2"}) {
      cfg.mesh_spec = spec;
      run_one(cfg, mesh_from_spec(spec), table);
    }
    emit_csv(table, cfg.out_csv);
    return 0;
  }
  throw ConfigError("unknown preset '" + name +
                    "' (available: lepotier-dq4, lepotier-dq5, lepotier-dq6, isotropic-squares, "
                    "isotropic-triangles, patch-affine)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite volume solver for anisotropic diffusion on polygonal meshes"};
  app.require_subcommand(1);

  // ---- mesh ----
  auto* mesh_cmd = app.add_subcommand("mesh", "Generate, inspect or validate meshes");
  mesh_cmd->require_subcommand(1);

  std::string gen_family, gen_output;
  int gen_n = 0;
  std::string gen_pattern = "diagonal", gen_points = "centroid";
  auto* gen_cmd = mesh_cmd->add_subcommand("gen", "Generate a mesh");
  gen_cmd->add_option("family", gen_family,
                      "Mesh family (squares, triangles, distorted, refined) or full spec string")
      ->required();
  gen_cmd->add_option("--n", gen_n, "Grid resolution");
  gen_cmd->add_option("--pattern", gen_pattern, "Triangle pattern (diagonal|crisscross)");
  gen_cmd->add_option("--points", gen_points, "Cell points (centroid|circumcenter)");
  gen_cmd->add_option("-o,--output", gen_output, "Output file (default stdout)");

  std::string inspect_path;
  auto* inspect_cmd = mesh_cmd->add_subcommand("inspect", "Read a mesh and print its metrics");
  inspect_cmd->add_option("file", inspect_path, "Mesh file or generator spec")->required();

  std::string validate_path;
  auto* validate_cmd =
      mesh_cmd->add_subcommand("validate", "Run the full admissibility check and print metrics");
  validate_cmd->add_option("file", validate_path, "Mesh file")->required();

  // ---- run ----
  RunConfig cfg;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Solve one case on one mesh, emit a CSV error row");
  run_cmd->add_option("--config", config_path, "Config file, one '<key> <value>' per line");
  auto* opt_case = run_cmd->add_option("--case", cfg.case_name, "Problem case name");
  auto* opt_mesh = run_cmd->add_option("--mesh", cfg.mesh_spec, "Mesh spec or file");
  auto* opt_nu = run_cmd->add_option("--nu", cfg.nu_mode, "Penalization mode (fixed|power|zero)");
  auto* opt_nu0 = run_cmd->add_option("--nu0", cfg.nu0, "Penalization coefficient");
  auto* opt_beta = run_cmd->add_option("--beta", cfg.beta, "Power-of-diameter exponent");
  auto* opt_quad = run_cmd->add_option("--quad", cfg.quad_order, "Quadrature order (1, 2 or 4)");
  auto* opt_solver = run_cmd->add_option("--solver", cfg.solver, "Solver (auto|cholesky|pcg)");
  auto* opt_tol = run_cmd->add_option("--tol", cfg.tol, "Iterative solver tolerance");
  auto* opt_osol = run_cmd->add_option("--out-solution", cfg.out_solution, "Solution dump path");
  auto* opt_ocsv = run_cmd->add_option("--out-csv", cfg.out_csv, "CSV path (default stdout)");

  // ---- convergence ----
  std::string conv_family = "squares";
  std::vector<int> conv_levels;
  int conv_jobs = 1;
  auto* conv_cmd = app.add_subcommand("convergence", "Refinement study with fitted orders");
  conv_cmd->add_option("--case", cfg.case_name, "Problem case name")->required();
  conv_cmd->add_option("--family", conv_family, "Mesh family prefix for the spec strings");
  conv_cmd->add_option("--levels", conv_levels, "Grid resolutions (at least two)")
      ->required()
      ->delimiter(',');
  conv_cmd->add_option("--jobs", conv_jobs, "Parallel refinement levels");
  conv_cmd->add_option("--nu", cfg.nu_mode, "Penalization mode (fixed|power|zero)");
  conv_cmd->add_option("--nu0", cfg.nu0, "Penalization coefficient");
  conv_cmd->add_option("--beta", cfg.beta, "Power-of-diameter exponent");
  conv_cmd->add_option("--quad", cfg.quad_order, "Quadrature order (1, 2 or 4)");
  conv_cmd->add_option("--solver", cfg.solver, "Solver (auto|cholesky|pcg)");
  conv_cmd->add_option("--out-csv", cfg.out_csv, "CSV path (default stdout)");

  // ---- preset ----
  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "Run a named benchmark preset");
  preset_cmd->add_option("name", preset_name, "Preset name")->required();
  preset_cmd->add_option("--out-csv", cfg.out_csv, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) {
      std::string spec = gen_family;
      if (!looks_like_generator(spec)) {
        if (gen_n < 1) throw ConfigError("mesh gen needs --n or a full spec string");
        spec = gen_family + ":" + std::to_string(gen_n);
        if (gen_family == "triangles") {
          spec += ":" + gen_pattern;
          if (gen_points != "centroid") spec += ":" + gen_points;
        }
        if (gen_family == "refined") spec += ":2";
      }
      Mesh mesh = mesh_from_spec(spec);
      if (gen_output.empty()) {
        write_mesh(mesh, std::cout);
      } else {
        write_mesh(mesh, gen_output);
        print_mesh_summary(mesh, std::cout);
      }
      return 0;
    }
    if (inspect_cmd->parsed()) {
      print_mesh_summary(mesh_from_spec(inspect_path), std::cout);
      return 0;
    }
    if (validate_cmd->parsed()) {
      // read_mesh runs the full admissibility check in Mesh::build.
      Mesh mesh = read_mesh(validate_path);
      std::cout << "valid\n";
      print_mesh_summary(mesh, std::cout);
      return 0;
    }
    if (run_cmd->parsed()) {
      if (!config_path.empty()) {
        // Flag values win over config-file values: re-read the flags after
        // applying the file.
        RunConfig flags = cfg;
        apply_config_file(cfg, config_path);
        if (opt_case->count()) cfg.case_name = flags.case_name;
        if (opt_mesh->count()) cfg.mesh_spec = flags.mesh_spec;
        if (opt_nu->count()) cfg.nu_mode = flags.nu_mode;
        if (opt_nu0->count()) cfg.nu0 = flags.nu0;
        if (opt_beta->count()) cfg.beta = flags.beta;
        if (opt_quad->count()) cfg.quad_order = flags.quad_order;
        if (opt_solver->count()) cfg.solver = flags.solver;
        if (opt_tol->count()) cfg.tol = flags.tol;
        if (opt_osol->count()) cfg.out_solution = flags.out_solution;
        if (opt_ocsv->count()) cfg.out_csv = flags.out_csv;
      }
      if (cfg.case_name.empty()) throw ConfigError("run needs --case (or 'case' in the config)");
      if (cfg.mesh_spec.empty()) throw ConfigError("run needs --mesh (or 'mesh' in the config)");
      ConvergenceTable table;
      run_one(cfg, mesh_from_spec(cfg.mesh_spec), table);
      emit_csv(table, cfg.out_csv);
      return 0;
    }
    if (conv_cmd->parsed()) return run_convergence(cfg, conv_family, conv_levels, conv_jobs);
    if (preset_cmd->parsed()) return run_preset(preset_name, cfg);
  } catch (const Error& e) {
    const char* category = e.kind() == Error::Kind::Validation ? "validation" : "numerical";
    std::fprintf(stderr, "error: %s: %s\n", category, e.what());
    return e.kind() == Error::Kind::Validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 3;
  }
  return 1;
}
