#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "moprox/artifacts.hpp"
#include "moprox/criticality.hpp"
#include "moprox/oracle.hpp"
#include "moprox/ppa.hpp"
#include "moprox/problem_io.hpp"
#include "moprox/rng.hpp"
#include "moprox/version.hpp"

namespace fs = std::filesystem;
using namespace moprox;

namespace {

std::string resolve_problem_path(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  if (arg.find('/') == std::string::npos) {
    if (const char* dir = std::getenv("MOPROX_CORPUS")) {
      fs::path base(dir);
      for (const auto& candidate : {base / arg, base / (arg + ".json")}) {
        if (fs::exists(candidate)) return candidate.string();
      }
    }
  }
  throw std::runtime_error("problem file not found: " + arg);
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "artifacts";
  std::optional<std::uint64_t> seed;
  std::optional<double> step_tol;
  std::optional<double> lambda;
  std::optional<int> max_iters;
  std::optional<int> starts;
};

PpaConfig build_config(const CommonOpts& o) {
  PpaConfig cfg;
  if (!o.config_path.empty()) {
    cfg = parse_config(ordered_json::parse(read_text_file(o.config_path)));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.step_tol) cfg.step_tol = *o.step_tol;
  if (o.lambda) {
    cfg.lambda_schedule.rule = *o.lambda;
    cfg.a = *o.lambda;
    cfg.b = *o.lambda;
  }
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  if (o.starts) cfg.starts = *o.starts;
  return cfg;
}

ordered_json certificates_json(const Trajectory& traj) {
  ordered_json j;
  j["criticality"] = serialize_criticality(traj.final_criticality);
  j["fritz_john"] = serialize_fritz_john(traj.final_fritz_john);
  j["hull_stationarity"] = serialize_hull_stationarity(
      hull_stationarity(traj.F, traj.S, traj.final_point(), kCertificateTol));
  return j;
}

RunManifest execute_run(const ProblemFile& problem, const PpaConfig& cfg,
                        const std::string& out_dir) {
  fs::create_directories(out_dir);
  Trajectory traj = run(problem.F, problem.feasible_set, problem.x0, cfg);

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.timestamp = utc_timestamp();
  manifest.seed = cfg.seed;
  manifest.problem = problem;
  manifest.config = cfg;
  fs::path base(out_dir);
  manifest.trajectory_json_path =
      (base / (problem.name + "_trajectory.json")).string();
  manifest.trajectory_csv_path =
      (base / (problem.name + "_trajectory.csv")).string();
  manifest.certificates_json_path =
      (base / (problem.name + "_certificates.json")).string();

  write_text_file(manifest.trajectory_json_path,
                  serialize_trajectory(traj, problem.name).dump(2) + "\n");
  write_text_file(manifest.trajectory_csv_path, trajectory_csv(traj));
  write_text_file(manifest.certificates_json_path,
                  certificates_json(traj).dump(2) + "\n");
  write_text_file((base / (problem.name + "_manifest.json")).string(),
                  serialize_manifest(manifest).dump(2) + "\n");

  const auto& last = traj.iterates.back();
  std::cout << problem.name << ": terminated by "
            << termination_name(traj.termination) << " after "
            << traj.iterates.size() - 1 << " steps\n";
  std::cout << "  final point:";
  for (int i = 0; i < last.x.size(); ++i) {
    std::cout << " " << format_double(last.x[i]);
  }
  std::cout << "\n  final F:";
  for (int i = 0; i < last.F_values.size(); ++i) {
    std::cout << " " << format_double(last.F_values[i]);
  }
  std::cout << "\n  criticality residual: "
            << format_double(traj.final_criticality.residual)
            << "\n  certificate residual: "
            << format_double(traj.final_fritz_john.residual) << "\n";
  if (traj.termination == Termination::subsolver_failure) {
    throw std::runtime_error("subsolver failed to return an acceptable step");
  }
  return manifest;
}

int cmd_run(const std::string& problem_arg, const std::string& replay_path,
            const CommonOpts& opts) {
  ProblemFile problem;
  PpaConfig cfg;
  if (!replay_path.empty()) {
    RunManifest m =
        parse_manifest(ordered_json::parse(read_text_file(replay_path)));
    problem = m.problem;
    cfg = m.config;
    cfg.seed = m.seed;
  } else {
    problem = load_problem(resolve_problem_path(problem_arg));
    cfg = build_config(opts);
  }
  execute_run(problem, cfg, opts.out_dir);
  return 0;
}

int cmd_certify(const std::string& problem_arg, const std::vector<double>& pt,
                double tol, const std::string& out_dir) {
  ProblemFile problem = load_problem(resolve_problem_path(problem_arg));
  VectorXd x(pt.size());
  for (std::size_t i = 0; i < pt.size(); ++i) x[i] = pt[i];
  if (x.size() != problem.dimension) {
    throw std::runtime_error("point dimension mismatch");
  }
  if (!problem.feasible_set.contains(x, 1e-8 * (1.0 + x.norm()))) {
    throw std::runtime_error("point is infeasible");
  }

  CriticalityCertificate crit =
      is_pareto_critical(problem.F, problem.feasible_set, x, tol);
  FritzJohnCertificate fj =
      fritz_john_residual(problem.F, {}, problem.feasible_set, x);
  HullStationarityCertificate hull =
      hull_stationarity(problem.F, problem.feasible_set, x, tol);

  ordered_json j;
  j["problem"] = problem.name;
  ordered_json xp = ordered_json::array();
  for (int i = 0; i < x.size(); ++i) xp.push_back(x[i]);
  j["point"] = std::move(xp);
  j["tolerance"] = tol;
  j["criticality"] = serialize_criticality(crit);
  j["fritz_john"] = serialize_fritz_john(fj);
  j["hull_stationarity"] = serialize_hull_stationarity(hull);

  fs::create_directories(out_dir);
  std::string path =
      (fs::path(out_dir) / (problem.name + "_certify.json")).string();
  write_text_file(path, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return crit.verdict == Verdict::critical ? 0 : 1;
}

GridSpec grid_for(const ProblemFile& problem, int points_per_axis) {
  GridSpec grid;
  problem.feasible_set.bounding_box(&grid.lower, &grid.upper);
  grid.points_per_axis = points_per_axis;
  return grid;
}

int cmd_oracle(const std::string& problem_arg, int points_per_axis,
               const std::string& out_dir) {
  ProblemFile problem = load_problem(resolve_problem_path(problem_arg));
  GridSpec grid = grid_for(problem, points_per_axis);
  std::vector<GridPoint> front =
      grid_weak_pareto(problem.F, grid, &problem.feasible_set);

  std::ostringstream csv;
  csv << "index";
  for (int i = 0; i < problem.dimension; ++i) csv << ",x" << i;
  for (int i = 0; i < problem.F.m(); ++i) csv << ",f" << i;
  csv << "\n";
  for (const auto& gp : front) {
    csv << gp.index;
    for (int i = 0; i < gp.x.size(); ++i) {
      csv << "," << format_double(gp.x[i]);
    }
    for (int i = 0; i < gp.F_values.size(); ++i) {
      csv << "," << format_double(gp.F_values[i]);
    }
    csv << "\n";
  }
  fs::create_directories(out_dir);
  std::string path =
      (fs::path(out_dir) / (problem.name + "_front.csv")).string();
  write_text_file(path, csv.str());
  std::cout << problem.name << ": " << front.size()
            << " weak Pareto grid points -> " << path << "\n";
  return 0;
}

struct SweepRun {
  VectorXd x0;
  VectorXd terminal;
  std::string termination;
  double fj_residual = 0.0;
  bool certificate_pass = false;
  double dist_critical_set = 0.0;
  double dist_front = 0.0;
  std::string error;
};

int cmd_sweep(const std::string& problem_arg, int starts,
              int points_per_axis, const CommonOpts& opts) {
  ProblemFile problem = load_problem(resolve_problem_path(problem_arg));
  PpaConfig base_cfg = build_config(opts);
  std::uint64_t base_seed = base_cfg.seed;

  // starting points: uniform over the bounding box, projected
  VectorXd lo, hi;
  problem.feasible_set.bounding_box(&lo, &hi);
  SplitMix64 rng(base_seed);
  std::vector<VectorXd> x0s;
  for (int s = 0; s < starts; ++s) {
    VectorXd x(problem.dimension);
    for (int d = 0; d < problem.dimension; ++d) {
      x[d] = rng.uniform(lo[d], hi[d]);
    }
    x0s.push_back(problem.feasible_set.project(x));
  }

  // oracle reference sets (n <= 3): grid weak Pareto front and the grid
  // hull-stationarity set
  GridSpec grid = grid_for(problem, points_per_axis);
  std::vector<GridPoint> front =
      grid_weak_pareto(problem.F, grid, &problem.feasible_set);
  std::vector<VectorXd> critical_set;
  {
    long total = 1;
    for (int d = 0; d < problem.dimension; ++d) total *= grid.points_per_axis;
    VectorXd x(problem.dimension);
    for (long idx = 0; idx < total; ++idx) {
      long r = idx;
      for (int d = problem.dimension - 1; d >= 0; --d) {
        int i = int(r % grid.points_per_axis);
        r /= grid.points_per_axis;
        x[d] = grid.points_per_axis == 1
                   ? grid.lower[d]
                   : grid.lower[d] + (grid.upper[d] - grid.lower[d]) * i /
                                         (grid.points_per_axis - 1);
      }
      if (!problem.feasible_set.contains(x, 1e-9 * (1.0 + x.norm()))) continue;
      if (hull_stationarity(problem.F, problem.feasible_set, x, kCriticalityTol)
              .stationary) {
        critical_set.push_back(x);
      }
    }
  }

  auto dist_to = [](const VectorXd& x, const std::vector<VectorXd>& set) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& y : set) d = std::min(d, (x - y).norm());
    return d;
  };

  std::vector<SweepRun> runs(starts);
  auto work = [&](int i) {
    SweepRun& out = runs[i];
    out.x0 = x0s[i];
    try {
      PpaConfig cfg = base_cfg;
      cfg.seed = base_seed + std::uint64_t(i);
      Trajectory traj = run(problem.F, problem.feasible_set, x0s[i], cfg);
      out.terminal = traj.final_point();
      out.termination = termination_name(traj.termination);
      out.fj_residual = traj.final_fritz_john.residual;
      out.certificate_pass = traj.final_fritz_john.residual <= 1e-5;
      out.dist_critical_set = dist_to(out.terminal, critical_set);
      double df = std::numeric_limits<double>::infinity();
      for (const auto& gp : front) df = std::min(df, (out.terminal - gp.x).norm());
      out.dist_front = df;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  // concurrent across starts; each run is deterministic, aggregation is by
  // start index so the report is order-independent
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  for (int begin = 0; begin < starts; begin += int(hw)) {
    std::vector<std::thread> pool;
    for (int i = begin; i < std::min(starts, begin + int(hw)); ++i) {
      pool.emplace_back(work, i);
    }
    for (auto& t : pool) t.join();
  }

  int passes = 0, failures = 0;
  double worst_dist = 0.0, worst_front = 0.0;
  ordered_json per_run = ordered_json::array();
  for (const auto& r : runs) {
    ordered_json rj;
    ordered_json x0j = ordered_json::array();
    for (int i = 0; i < r.x0.size(); ++i) x0j.push_back(r.x0[i]);
    rj["x0"] = std::move(x0j);
    if (!r.error.empty()) {
      rj["error"] = r.error;
      ++failures;
      per_run.push_back(std::move(rj));
      continue;
    }
    ordered_json tj = ordered_json::array();
    for (int i = 0; i < r.terminal.size(); ++i) tj.push_back(r.terminal[i]);
    rj["terminal"] = std::move(tj);
    rj["termination"] = r.termination;
    rj["fritz_john_residual"] = r.fj_residual;
    rj["certificate_pass"] = r.certificate_pass;
    rj["distance_to_critical_set"] = r.dist_critical_set;
    rj["distance_to_front"] = r.dist_front;
    per_run.push_back(std::move(rj));
    if (r.certificate_pass) ++passes;
    worst_dist = std::max(worst_dist, r.dist_critical_set);
    worst_front = std::max(worst_front, r.dist_front);
  }

  ordered_json j;
  j["problem"] = problem.name;
  j["starts"] = starts;
  j["seed"] = base_seed;
  j["certificate_pass_rate"] =
      starts > 0 ? double(passes) / double(starts) : 0.0;
  j["max_distance_to_critical_set"] = worst_dist;
  j["max_distance_to_front"] = worst_front;
  j["oracle_critical_points"] = critical_set.size();
  j["oracle_front_points"] = front.size();
  j["run_errors"] = failures;
  j["runs"] = std::move(per_run);

  fs::create_directories(opts.out_dir);
  std::string path =
      (fs::path(opts.out_dir) / (problem.name + "_sweep.json")).string();
  write_text_file(path, j.dump(2) + "\n");
  std::cout << problem.name << " sweep: " << passes << "/" << starts
            << " certificates pass, max distance to critical set "
            << format_double(worst_dist) << " -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proximal point toolkit for multiobjective problems"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string problem_arg, replay_path;
  std::vector<double> point;
  double certify_tol = kCertificateTol;
  int points_per_axis = 201;
  int sweep_starts = 20;

  auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
    cmd->add_option("--out", opts.out_dir, "artifact output directory");
    if (with_run_flags) {
      cmd->add_option("--config", opts.config_path, "JSON config file");
      cmd->add_option_function<std::uint64_t>(
          "--seed", [&](std::uint64_t v) { opts.seed = v; }, "RNG seed");
      cmd->add_option_function<double>(
          "--step-tol", [&](double v) { opts.step_tol = v; },
          "termination step tolerance");
      cmd->add_option_function<double>(
          "--lambda", [&](double v) { opts.lambda = v; },
          "constant proximal weight (sets a = b)");
      cmd->add_option_function<int>(
          "--max-iters", [&](int v) { opts.max_iters = v; },
          "iteration cap");
      cmd->add_option_function<int>(
          "--starts", [&](int v) { opts.starts = v; },
          "subsolver scalarization starts per step");
    }
  };

  auto* run_cmd =
      app.add_subcommand("run", "run the proximal point algorithm");
  run_cmd->add_option("problem", problem_arg, "problem file or corpus name");
  run_cmd->add_option("--replay", replay_path,
                      "re-execute a run manifest (ignores other inputs)");
  add_common(run_cmd, true);

  auto* certify_cmd =
      app.add_subcommand("certify", "criticality certificates at a point");
  certify_cmd->add_option("problem", problem_arg, "problem file or corpus name")
      ->required();
  certify_cmd->add_option("--point", point, "point coordinates")
      ->required()
      ->delimiter(',');
  certify_cmd->add_option("--tol", certify_tol, "criticality tolerance");
  add_common(certify_cmd, false);

  auto* oracle_cmd =
      app.add_subcommand("oracle", "grid weak Pareto front (n <= 3)");
  oracle_cmd->add_option("problem", problem_arg, "problem file or corpus name")
      ->required();
  oracle_cmd->add_option("--points-per-axis", points_per_axis,
                         "grid resolution");
  add_common(oracle_cmd, false);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "multi-start runs with oracle comparison");
  sweep_cmd->add_option("problem", problem_arg, "problem file or corpus name")
      ->required();
  sweep_cmd->add_option("--runs", sweep_starts, "number of starting points");
  sweep_cmd->add_option("--points-per-axis", points_per_axis,
                        "oracle grid resolution");
  add_common(sweep_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      if (problem_arg.empty() && replay_path.empty()) {
        std::cerr << "error: run needs a problem file or --replay\n";
        return 2;
      }
      return cmd_run(problem_arg, replay_path, opts);
    }
    if (certify_cmd->parsed()) {
      return cmd_certify(problem_arg, point, certify_tol, opts.out_dir);
    }
    if (oracle_cmd->parsed()) {
      return cmd_oracle(problem_arg, points_per_axis, opts.out_dir);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(problem_arg, sweep_starts, points_per_axis, opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
