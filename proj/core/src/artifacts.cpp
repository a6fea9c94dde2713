#include "moprox/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace moprox {

namespace {

ordered_json vec_to_json(const VectorXd& v) {
  ordered_json j = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

VectorXd json_to_vec(const ordered_json& j) {
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::critical:
      return "critical";
    case Verdict::not_critical:
      return "not_critical";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

}  // namespace

ordered_json serialize_config(const PpaConfig& cfg) {
  if (cfg.lambda_schedule.is_callback() || cfg.eps_schedule.is_callback()) {
    throw std::invalid_argument(
        "config with callback schedules cannot be serialized");
  }
  ordered_json j;
  if (auto* v = std::get_if<double>(&cfg.lambda_schedule.rule)) {
    j["lambda"] = *v;
  } else {
    j["lambda"] = std::get<std::vector<double>>(cfg.lambda_schedule.rule);
  }
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  if (cfg.eps_schedule.defaulted) {
    j["eps"] = "default";
  } else if (auto* v = std::get_if<VectorXd>(&cfg.eps_schedule.rule)) {
    j["eps"] = vec_to_json(*v);
  } else {
    ordered_json seq = ordered_json::array();
    for (const auto& e : std::get<std::vector<VectorXd>>(cfg.eps_schedule.rule)) {
      seq.push_back(vec_to_json(e));
    }
    j["eps"] = std::move(seq);
  }
  j["c"] = cfg.c;
  j["max_iters"] = cfg.max_iters;
  j["step_tol"] = cfg.step_tol;
  j["criticality_tol"] = cfg.criticality_tol;
  j["starts"] = cfg.starts;
  j["seed"] = cfg.seed;
  j["subsolver_budget"] = cfg.subsolver_budget;
  return j;
}

PpaConfig parse_config(const ordered_json& j) {
  PpaConfig cfg;
  if (j.contains("lambda")) {
    const auto& lj = j.at("lambda");
    if (lj.is_number()) {
      cfg.lambda_schedule.rule = lj.get<double>();
    } else {
      cfg.lambda_schedule.rule = lj.get<std::vector<double>>();
    }
  }
  if (j.contains("a")) cfg.a = j.at("a").get<double>();
  if (j.contains("b")) cfg.b = j.at("b").get<double>();
  if (j.contains("eps")) {
    const auto& ej = j.at("eps");
    if (ej.is_string()) {
      cfg.eps_schedule.defaulted = true;
    } else if (ej.is_array() && !ej.empty() && ej[0].is_array()) {
      std::vector<VectorXd> seq;
      for (const auto& e : ej) seq.push_back(json_to_vec(e));
      cfg.eps_schedule.rule = std::move(seq);
      cfg.eps_schedule.defaulted = false;
    } else if (ej.is_array()) {
      cfg.eps_schedule.rule = json_to_vec(ej);
      cfg.eps_schedule.defaulted = false;
    }
  }
  if (j.contains("c")) cfg.c = j.at("c").get<double>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<int>();
  if (j.contains("step_tol")) cfg.step_tol = j.at("step_tol").get<double>();
  if (j.contains("criticality_tol")) {
    cfg.criticality_tol = j.at("criticality_tol").get<double>();
  }
  if (j.contains("starts")) cfg.starts = j.at("starts").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("subsolver_budget")) {
    cfg.subsolver_budget = j.at("subsolver_budget").get<int>();
  }
  return cfg;
}

ordered_json serialize_criticality(const CriticalityCertificate& cert) {
  ordered_json j;
  j["verdict"] = verdict_name(cert.verdict);
  j["residual"] = finite_or_null(cert.residual);
  j["witness_index"] = cert.witness_index;
  j["witness_piece"] = cert.witness_piece;
  j["witness_subgradient"] = vec_to_json(cert.witness_subgradient);
  j["hull_coefficients"] = vec_to_json(cert.hull_coefficients);
  j["cone_multipliers"] = vec_to_json(cert.cone_multipliers);
  return j;
}

ordered_json serialize_fritz_john(const FritzJohnCertificate& cert) {
  ordered_json j;
  j["complete"] = cert.complete;
  j["residual"] = finite_or_null(cert.residual);
  j["alphas"] = vec_to_json(cert.alphas);
  j["betas"] = vec_to_json(cert.betas);
  j["tau"] = cert.tau;
  j["selections"] = cert.selections;
  ordered_json sel = ordered_json::array();
  for (const auto& g : cert.selected_subgradients) sel.push_back(vec_to_json(g));
  j["selected_subgradients"] = std::move(sel);
  j["cone_element"] = vec_to_json(cert.cone_element);
  return j;
}

ordered_json serialize_hull_stationarity(
    const HullStationarityCertificate& cert) {
  ordered_json j;
  j["stationary"] = cert.stationary;
  j["residual"] = finite_or_null(cert.residual);
  j["hull_coefficients"] = vec_to_json(cert.hull_coefficients);
  j["cone_multipliers"] = vec_to_json(cert.cone_multipliers);
  return j;
}

ordered_json serialize_trajectory(const Trajectory& traj,
                                  const std::string& problem_name) {
  ordered_json j;
  j["problem"] = problem_name;
  j["termination"] = termination_name(traj.termination);
  j["steps"] = int(traj.iterates.size()) - 1;
  j["final_point"] = vec_to_json(traj.final_point());
  j["final_F"] = vec_to_json(traj.iterates.back().F_values);
  j["final_criticality"] = serialize_criticality(traj.final_criticality);
  j["final_fritz_john"] = serialize_fritz_john(traj.final_fritz_john);
  ordered_json its = ordered_json::array();
  for (const auto& rec : traj.iterates) {
    ordered_json r;
    r["k"] = rec.k;
    r["x"] = vec_to_json(rec.x);
    r["F"] = vec_to_json(rec.F_values);
    r["step_norm"] = rec.step_norm;
    r["dominance_defect"] = rec.dominance_defect;
    r["fritz_john_residual"] = finite_or_null(rec.fritz_john_residual);
    r["z"] = vec_to_json(rec.z);
    r["chosen_start"] = rec.chosen_start;
    r["lambda"] = rec.lambda;
    r["eps"] = vec_to_json(rec.eps);
    r["gamma"] = finite_or_null(rec.gamma);
    r["theta"] = finite_or_null(rec.theta);
    its.push_back(std::move(r));
  }
  j["iterates"] = std::move(its);
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  int n = traj.iterates.empty() ? 0 : int(traj.iterates.front().x.size());
  int m = traj.iterates.empty() ? 0 : int(traj.iterates.front().F_values.size());
  out << "k";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  for (int i = 0; i < m; ++i) out << ",f" << i;
  out << ",step_norm,dominance_defect,fj_residual\n";
  for (const auto& rec : traj.iterates) {
    out << rec.k;
    for (int i = 0; i < n; ++i) out << "," << format_double(rec.x[i]);
    for (int i = 0; i < m; ++i) out << "," << format_double(rec.F_values[i]);
    out << "," << format_double(rec.step_norm);
    out << "," << format_double(rec.dominance_defect);
    out << "," << format_double(rec.fritz_john_residual);
    out << "\n";
  }
  return out.str();
}

ordered_json serialize_manifest(const RunManifest& m) {
  ordered_json j;
  j["tool_version"] = m.tool_version;
  j["timestamp"] = m.timestamp;
  j["seed"] = m.seed;
  j["problem"] = serialize_problem(m.problem);
  j["config"] = serialize_config(m.config);
  j["trajectory_json_path"] = m.trajectory_json_path;
  j["trajectory_csv_path"] = m.trajectory_csv_path;
  j["certificates_json_path"] = m.certificates_json_path;
  return j;
}

RunManifest parse_manifest(const ordered_json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  if (j.contains("timestamp")) m.timestamp = j.at("timestamp").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.problem = parse_problem(j.at("problem"));
  m.config = parse_config(j.at("config"));
  m.trajectory_json_path = j.at("trajectory_json_path").get<std::string>();
  m.trajectory_csv_path = j.at("trajectory_csv_path").get<std::string>();
  m.certificates_json_path = j.at("certificates_json_path").get<std::string>();
  return m;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace moprox
