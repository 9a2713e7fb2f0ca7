#include "cli.hpp"

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "lsopr/bounds.hpp"
#include "lsopr/io.hpp"
#include "lsopr/oracle.hpp"

namespace lsopr {

namespace {

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return 0;
    case SolveStatus::Infeasible: return 2;
    case SolveStatus::IterationLimit: return 3;
    case SolveStatus::Unbounded: return 1;
  }
  return 1;
}

std::string status_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "?";
}

Report build_report(const Instance& inst, const Solution& sol, const Solution& reduced,
                    double wall_ms) {
  Report r;
  r.objective = reduced.objective;
  r.dual_bound = sol.dual_bound;
  r.gap = sol.gap;
  r.rank = sol.rank;
  r.reduced_rank = reduced.rank;
  const BoundReport bounds = bound_report(inst);
  r.bound_theoretical = bounds.bound;
  r.mtilde = bounds.mtilde;
  r.iterations = sol.iterations;
  r.columns_generated = sol.columns_generated;
  r.branch = reduced.branch ? reduced.branch : sol.branch;
  r.wall_time_ms = wall_ms;
  r.eigenvalues = domain_spectrum(reduced.x, inst.domain);
  r.x = reduced.x;
  r.n = inst.domain.space.n;
  r.p = inst.domain.space.p;
  r.m = inst.num_rows();
  r.k = inst.domain.k;
  r.status = status_string(reduced.status);
  return r;
}

void emit(const Report& report, const std::string& out_path, const std::string& format) {
  const std::string text =
      format == "csv" ? report_to_csv(report) : report_to_json(report);
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
}

bool needs_branch_solver(const Instance& inst) {
  const auto kind = inst.domain.space.kind;
  return (kind == SpaceKind::Sym || kind == SpaceKind::Diag) &&
         !inst.domain.f.sign_invariant();
}

int cmd_solve(const std::string& instance_path, double epsilon, double rank_tol,
              bool no_reduce, const std::string& out_path, const std::string& format) {
  const ProblemFile problem = problem_from_json(read_file(instance_path));
  const auto t0 = std::chrono::steady_clock::now();
  SolveOptions opts;
  opts.epsilon = epsilon;
  opts.rank_tol = rank_tol;

  if (problem.is_mc) {
    McResult mc = solve_matrix_completion(problem.mc, problem.mc_delta_lb, opts);
    const Instance final_inst = mc_inner_instance(problem.mc, mc.z);
    const auto t1 = std::chrono::steady_clock::now();
    Report r = build_report(final_inst, mc.reduced, mc.reduced,
                            std::chrono::duration<double, std::milli>(t1 - t0).count());
    r.rank = numeric_rank(sorted_svd(mc.x).values, rank_tol);
    emit(r, out_path, format);
    return exit_code_for(mc.reduced.status);
  }

  const Instance& inst = problem.instance;
  Solution sol = needs_branch_solver(inst) ? solve_lsopr_indef(inst, opts)
                                           : solve_lsopr(inst, opts);
  if (sol.status == SolveStatus::Infeasible || sol.status == SolveStatus::Unbounded) {
    std::cerr << "solve: " << status_string(sol.status) << "\n";
    return exit_code_for(sol.status);
  }
  Solution reduced = sol;
  if (!no_reduce) {
    ReduceOptions ropts;
    ropts.rank_tol = rank_tol;
    reduced = reduce_rank(sol, inst, ropts);
  }
  const auto t1 = std::chrono::steady_clock::now();
  Report r = build_report(inst, sol, reduced,
                          std::chrono::duration<double, std::milli>(t1 - t0).count());
  emit(r, out_path, format);
  return exit_code_for(reduced.status);
}

int cmd_reduce(const std::string& instance_path, const std::string& solution_path,
               double rank_tol, const std::string& out_path, const std::string& format) {
  const ProblemFile problem = problem_from_json(read_file(instance_path));
  if (problem.is_mc) {
    std::cerr << "reduce: expected a plain instance file\n";
    return 64;
  }
  const Report in_report = report_from_json(read_file(solution_path));
  Solution sol;
  sol.x = in_report.x;
  sol.objective = in_report.objective;
  sol.dual_bound = in_report.dual_bound;
  sol.gap = in_report.gap;
  sol.rank = in_report.rank;
  sol.branch = in_report.branch;
  const auto t0 = std::chrono::steady_clock::now();
  ReduceOptions ropts;
  ropts.rank_tol = rank_tol;
  Solution reduced = reduce_rank(sol, problem.instance, ropts);
  const auto t1 = std::chrono::steady_clock::now();
  Report r = build_report(problem.instance, sol, reduced,
                          std::chrono::duration<double, std::milli>(t1 - t0).count());
  emit(r, out_path, format);
  return exit_code_for(reduced.status);
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               double rank_tol) {
  const ProblemFile problem = problem_from_json(read_file(instance_path));
  if (problem.is_mc) {
    std::cerr << "verify: expected a plain instance file\n";
    return 64;
  }
  const Instance& inst = problem.instance;
  const Report report = report_from_json(read_file(solution_path));
  bool ok = true;

  Vector aux = Vector::Zero(static_cast<int>(inst.aux_vars.size()));
  // Rows may involve aux variables; recover the tightest feasible aux value
  // for the single-aux case used by the drivers.
  if (inst.aux_vars.size() == 1) {
    double needed = inst.aux_vars[0].lb;
    for (int i = 0; i < inst.num_rows(); ++i) {
      const double coeff = inst.aux_vars[0].row_coeffs(i);
      const double v = frobenius_inner(inst.constraints[i].a, report.x);
      if (std::abs(coeff) < 1e-14) continue;
      if (inst.constraints[i].bl) needed = std::max(needed, (*inst.constraints[i].bl - v) / coeff);
      if (inst.constraints[i].bu) needed = std::max(needed, (v - *inst.constraints[i].bu) / -coeff);
    }
    aux(0) = needed;
  }
  const double violation = inst.row_violation(report.x, aux);
  if (violation > Tolerances::row_feasibility) {
    std::cout << "[FAIL] rows: violation " << violation << "\n";
    ok = false;
  } else {
    std::cout << "[ok] rows: violation " << violation << "\n";
  }

  auto cert = hull_certificate(report.x, inst.domain);
  if (!cert || cert->f_value > Tolerances::membership) {
    std::cout << "[FAIL] hull: no certificate at tolerance\n";
    ok = false;
  } else {
    std::cout << "[ok] hull: certificate f-value " << cert->f_value << "\n";
  }

  const int rank = numeric_rank(domain_spectrum(report.x, inst.domain), rank_tol);
  std::cout << (rank == report.reduced_rank || rank == report.rank ? "[ok]" : "[FAIL]")
            << " rank: recomputed " << rank << " (reported " << report.rank << "/"
            << report.reduced_rank << ")\n";
  if (rank != report.reduced_rank && rank != report.rank) ok = false;
  if (report.bound_theoretical > 0 && rank > report.bound_theoretical) {
    std::cout << "[FAIL] rank exceeds theoretical bound " << report.bound_theoretical << "\n";
    ok = false;
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"low-rank spectral optimization via partial convexification"};
  app.require_subcommand(1);

  std::string instance_path, solution_path, out_path, format = "json", space = "psd",
              app_name;
  double epsilon = 1e-4, rank_tol = 1e-10;
  bool no_reduce = false, sign_invariant = false;
  int n = 10, p = 0, m = 3, k = 2, r = 2, obs = 20, ktilde = 0, mtilde = -1;
  double noise = 1e-4, delta_lb = 1e-4;
  std::uint64_t seed = 1;

  auto* solve = app.add_subcommand("solve", "solve an instance and reduce its rank");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--epsilon", epsilon);
  solve->add_option("--rank-tol", rank_tol);
  solve->add_flag("--no-reduce", no_reduce);
  solve->add_option("--out", out_path);
  solve->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* reduce = app.add_subcommand("reduce", "rank-reduce a solved instance");
  reduce->add_option("--instance", instance_path)->required();
  reduce->add_option("--solution", solution_path)->required();
  reduce->add_option("--rank-tol", rank_tol);
  reduce->add_option("--out", out_path);
  reduce->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* bound = app.add_subcommand("bound", "evaluate the theoretical rank bound");
  bound->add_option("--space", space)->check(CLI::IsMember({"psd", "nonsym", "sym", "diag"}));
  bound->add_flag("--sign-invariant", sign_invariant);
  bound->add_option("--k", k);
  bound->add_option("--ktilde", ktilde);
  bound->add_option("--mtilde", mtilde);
  bound->add_option("--instance", instance_path);

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--app", app_name)->required()->check(CLI::IsMember({"mimo", "opf", "mc", "fixture"}));
  gen->add_option("--n", n);
  gen->add_option("--p", p);
  gen->add_option("--m", m);
  gen->add_option("--k", k);
  gen->add_option("--r", r);
  gen->add_option("--obs", obs);
  gen->add_option("--noise", noise);
  gen->add_option("--delta-lb", delta_lb);
  gen->add_option("--seed", seed);
  gen->add_option("--space", space)->check(CLI::IsMember({"psd", "nonsym", "sym", "diag"}));
  gen->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "check a (instance, solution) pair");
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--solution", solution_path)->required();
  verify->add_option("--rank-tol", rank_tol);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(instance_path, epsilon, rank_tol, no_reduce, out_path, format);
    }
    if (reduce->parsed()) {
      return cmd_reduce(instance_path, solution_path, rank_tol, out_path, format);
    }
    if (bound->parsed()) {
      BoundReport report;
      if (!instance_path.empty()) {
        const ProblemFile problem = problem_from_json(read_file(instance_path));
        if (problem.is_mc) {
          AppParams params;
          params.omega = static_cast<int>(problem.mc.observations.size());
          const int b = app_bound(AppKind::MatrixCompletion, params);
          std::cout << "{ \"bound\": " << b << ", \"omega\": " << params.omega << " }\n";
          return 0;
        }
        report = bound_report(problem.instance);
      } else {
        if (mtilde < 0) {
          std::cerr << "bound: --mtilde or --instance required\n";
          return 64;
        }
        const SpaceKind sk = space == "psd" ? SpaceKind::Psd
                             : space == "nonsym" ? SpaceKind::NonSym
                             : space == "sym" ? SpaceKind::Sym
                                              : SpaceKind::Diag;
        const bool si = sk == SpaceKind::Psd || sk == SpaceKind::NonSym ? true : sign_invariant;
        report = bound_report(sk, si, sk == SpaceKind::Diag, k, ktilde > 0 ? ktilde : k,
                              mtilde, mtilde);
      }
      std::cout << "{ \"space\": \"" << to_string(report.space) << "\", \"k\": " << report.k
                << ", \"ktilde\": " << report.ktilde << ", \"mtilde\": " << report.mtilde
                << ", \"bound\": " << report.bound
                << ", \"exactness\": " << (report.exactness ? "true" : "false")
                << ", \"formula\": \"" << report.formula_id << "\" }\n";
      return 0;
    }
    if (gen->parsed()) {
      std::string text;
      if (app_name == "mimo") {
        text = instance_to_json(gen_mimo(n, m, k, seed).instance);
      } else if (app_name == "opf") {
        text = instance_to_json(gen_opf(n, m, seed).instance);
      } else if (app_name == "mc") {
        if (p <= 0) p = n;
        text = mc_to_json(gen_matrix_completion(n, p, k, obs, noise, seed), delta_lb);
      } else {
        if (space == "diag") {
          text = instance_to_json(tightness_fixture_diag(k, m, n).instance);
        } else {
          const SpaceKind sk = space == "psd" ? SpaceKind::Psd
                               : space == "nonsym" ? SpaceKind::NonSym
                                                   : SpaceKind::Sym;
          text = instance_to_json(tightness_fixture(sk, k, r, n).instance);
        }
      }
      if (out_path.empty()) std::cout << text;
      else write_file(out_path, text);
      return 0;
    }
    if (verify->parsed()) {
      return cmd_verify(instance_path, solution_path, rank_tol);
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}

}  // namespace lsopr
