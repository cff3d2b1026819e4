// Copyright 2026 The qahsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qahsim/error.hpp"
#include "qahsim/runner.hpp"

#ifndef QAHSIM_VERSION
#define QAHSIM_VERSION "0.0.0"
#endif

namespace qahsim {

using nlohmann::json;

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::sse: return "sse";
    case RunMode::oracle: return "oracle";
    case RunMode::both: return "both";
  }
  return "oracle";
}

namespace runner {
namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ConfigInvalid, field + ": " + why);
}

void check_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) invalid(where.empty() ? "<root>" : where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) invalid(where + (where.empty() ? "" : ".") + it.key(), "unknown field");
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(path + key, "wrong type");
  }
}

json momentum_json(const Momentum& k) { return json::array({k.kx, k.ky}); }

Momentum momentum_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    invalid(path, "expected [kx, ky]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json noise_json(const NoiseStrengths& w) { return {{"wx", w.wx}, {"wy", w.wy}, {"wz", w.wz}}; }

NoiseStrengths noise_from(const json& j, const std::string& path) {
  check_keys(j, path, {"wx", "wy", "wz"});
  return {get<double>(j, "wx", path + ".", 0.0), get<double>(j, "wy", path + ".", 0.0),
          get<double>(j, "wz", path + ".", 0.0)};
}

json axis_json(const GridAxis& a) { return {{"min", a.min}, {"max", a.max}, {"n", a.n}}; }

GridAxis axis_from(const json& j, const std::string& path) {
  check_keys(j, path, {"min", "max", "n"});
  GridAxis a;
  a.min = get<double>(j, "min", path + ".", a.min);
  a.max = get<double>(j, "max", path + ".", a.max);
  a.n = get<int>(j, "n", path + ".", a.n);
  return a;
}

json vec3_json(const Eigen::Vector3d& v) { return json::array({v(0), v(1), v(2)}); }

Eigen::Vector3d vec3_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json config_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["model"] = {{"xi0", c.model.xi0}, {"xi_so", c.model.xi_so}};
  j["quench_mz"] = c.model.mz;
  j["noise"] = noise_json(c.noise);
  j["grid"] = {{"kx", axis_json(c.kx)}, {"ky", axis_json(c.ky)}};
  j["schedule"] = {{"t_total", c.schedule.t_total},
                   {"n_steps", c.schedule.n_steps},
                   {"sample_stride", c.schedule.sample_stride}};
  j["n_configs"] = c.n_configs;
  j["seed"] = c.seed;
  j["mode"] = to_string(c.mode);
  j["outputs"] = c.outputs;
  j["workers"] = c.workers;
  j["dbis_threshold"] = c.dbis_threshold;
  j["ep_grid_n"] = c.ep_grid_n;
  j["time_average"] = c.average == TimeAverage::analytic ? "analytic" : "samples";
  json conv;
  conv["sweep_momentum"] = momentum_json(c.convergence.sweep_momentum);
  conv["m_list"] = c.convergence.m_list;
  conv["sweep_configs"] = c.convergence.sweep_configs;
  conv["rms_momentum"] = momentum_json(c.convergence.rms_momentum);
  conv["rms_noise"] = c.convergence.rms_noise ? noise_json(*c.convergence.rms_noise) : json(nullptr);
  conv["config_counts"] = c.convergence.config_counts;
  conv["replicas"] = c.convergence.replicas;
  j["convergence"] = conv;
  j["sweep"] = {{"direction", noise_json(c.sweep.direction)}, {"magnitudes", c.sweep.magnitudes}};
  json members = json::array();
  for (const auto& t : c.transitions) members.push_back(config_json(t));
  j["transitions"] = members;
  return j;
}

RunConfig config_from(const json& j, const std::string& base_dir);

RunConfig member_from(const json& j, const std::string& base_dir, const std::string& path) {
  if (j.is_string()) {
    std::string file = j.get<std::string>();
    if (!file.empty() && file[0] != '/' && !base_dir.empty()) file = base_dir + "/" + file;
    return load_config(file);
  }
  try {
    return config_from(j, base_dir);
  } catch (const Error& e) {
    invalid(path, e.what());
  }
}

RunConfig config_from(const json& j, const std::string& base_dir) {
  check_keys(j, "", {"schema_version", "name", "model", "quench_mz", "noise", "grid", "schedule",
                     "n_configs", "seed", "mode", "outputs", "workers", "dbis_threshold",
                     "ep_grid_n", "time_average", "convergence", "sweep", "transitions"});
  RunConfig c;
  c.schema_version = get<int>(j, "schema_version", "", 1);
  if (c.schema_version != 1) invalid("schema_version", "unsupported version");
  c.name = get<std::string>(j, "name", "", c.name);
  if (j.contains("model")) {
    check_keys(j["model"], "model", {"xi0", "xi_so"});
    c.model.xi0 = get<double>(j["model"], "xi0", "model.", c.model.xi0);
    c.model.xi_so = get<double>(j["model"], "xi_so", "model.", c.model.xi_so);
  }
  c.model.mz = get<double>(j, "quench_mz", "", c.model.mz);
  if (j.contains("noise")) c.noise = noise_from(j["noise"], "noise");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (g.is_object() && (g.contains("kx") || g.contains("ky"))) {
      check_keys(g, "grid", {"kx", "ky"});
      if (g.contains("kx")) c.kx = axis_from(g["kx"], "grid.kx");
      if (g.contains("ky")) c.ky = axis_from(g["ky"], "grid.ky");
    } else {
      c.kx = c.ky = axis_from(g, "grid");
    }
  }
  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    check_keys(s, "schedule", {"t_total", "n_steps", "sample_stride"});
    c.schedule.t_total = get<double>(s, "t_total", "schedule.", c.schedule.t_total);
    c.schedule.n_steps = get<int>(s, "n_steps", "schedule.", c.schedule.n_steps);
    c.schedule.sample_stride = get<int>(s, "sample_stride", "schedule.", c.schedule.sample_stride);
  }
  c.n_configs = get<int>(j, "n_configs", "", c.n_configs);
  c.seed = get<std::uint64_t>(j, "seed", "", c.seed);
  const std::string mode = get<std::string>(j, "mode", "", to_string(c.mode));
  if (mode == "sse") {
    c.mode = RunMode::sse;
  } else if (mode == "oracle") {
    c.mode = RunMode::oracle;
  } else if (mode == "both") {
    c.mode = RunMode::both;
  } else {
    invalid("mode", "expected sse, oracle or both");
  }
  c.outputs = get<std::string>(j, "outputs", "", c.outputs);
  c.workers = get<int>(j, "workers", "", c.workers);
  c.dbis_threshold = get<double>(j, "dbis_threshold", "", c.dbis_threshold);
  c.ep_grid_n = get<int>(j, "ep_grid_n", "", c.ep_grid_n);
  const std::string avg = get<std::string>(j, "time_average", "", "samples");
  if (avg == "samples") {
    c.average = TimeAverage::samples;
  } else if (avg == "analytic") {
    c.average = TimeAverage::analytic;
  } else {
    invalid("time_average", "expected samples or analytic");
  }
  if (j.contains("convergence")) {
    const json& v = j["convergence"];
    check_keys(v, "convergence", {"sweep_momentum", "m_list", "sweep_configs", "rms_momentum",
                                  "rms_noise", "config_counts", "replicas"});
    auto& cv = c.convergence;
    if (v.contains("sweep_momentum")) cv.sweep_momentum = momentum_from(v["sweep_momentum"], "convergence.sweep_momentum");
    cv.m_list = get<std::vector<int>>(v, "m_list", "convergence.", cv.m_list);
    cv.sweep_configs = get<int>(v, "sweep_configs", "convergence.", cv.sweep_configs);
    if (v.contains("rms_momentum")) cv.rms_momentum = momentum_from(v["rms_momentum"], "convergence.rms_momentum");
    if (v.contains("rms_noise") && !v["rms_noise"].is_null()) {
      cv.rms_noise = noise_from(v["rms_noise"], "convergence.rms_noise");
    }
    cv.config_counts = get<std::vector<int>>(v, "config_counts", "convergence.", cv.config_counts);
    cv.replicas = get<int>(v, "replicas", "convergence.", cv.replicas);
  }
  if (j.contains("sweep")) {
    const json& v = j["sweep"];
    check_keys(v, "sweep", {"direction", "magnitudes"});
    if (v.contains("direction")) c.sweep.direction = noise_from(v["direction"], "sweep.direction");
    c.sweep.magnitudes = get<std::vector<double>>(v, "magnitudes", "sweep.", c.sweep.magnitudes);
  }
  if (j.contains("transitions")) {
    if (!j["transitions"].is_array()) invalid("transitions", "expected an array");
    std::size_t i = 0;
    for (const auto& m : j["transitions"]) {
      c.transitions.push_back(member_from(m, base_dir, "transitions[" + std::to_string(i++) + "]"));
    }
  }
  c.validate();
  return c;
}

json decomposition_json(const ModeDecomposition& d) {
  return {{"s0", vec3_json(d.s0)},
          {"s_plus_re", vec3_json(d.s_plus.real())},
          {"s_plus_im", vec3_json(d.s_plus.imag())},
          {"s_minus_re", vec3_json(d.s_minus.real())},
          {"s_minus_im", vec3_json(d.s_minus.imag())},
          {"lambda0", d.lambda0},
          {"lambda1", d.lambda1},
          {"lambda2", d.lambda2},
          {"omega", d.omega},
          {"overdamped", d.overdamped}};
}

ModeDecomposition decomposition_from(const json& j) {
  ModeDecomposition d;
  d.s0 = vec3_from(j.at("s0"));
  const Eigen::Vector3d pr = vec3_from(j.at("s_plus_re")), pi = vec3_from(j.at("s_plus_im"));
  const Eigen::Vector3d mr = vec3_from(j.at("s_minus_re")), mi = vec3_from(j.at("s_minus_im"));
  for (int c = 0; c < 3; ++c) {
    d.s_plus(c) = {pr(c), pi(c)};
    d.s_minus(c) = {mr(c), mi(c)};
  }
  d.lambda0 = j.at("lambda0").get<double>();
  d.lambda1 = j.at("lambda1").get<double>();
  d.lambda2 = j.at("lambda2").get<double>();
  d.omega = j.at("omega").get<double>();
  d.overdamped = j.at("overdamped").get<bool>();
  return d;
}

json winding_json(const WindingResult& w) {
  return {{"value", w.value},
          {"raw", w.raw},
          {"residual", w.residual},
          {"precision_warning", w.precision_warning}};
}

WindingResult winding_from(const json& j) {
  WindingResult w;
  w.value = j.at("value").get<int>();
  w.raw = j.at("raw").get<double>();
  w.residual = j.at("residual").get<double>();
  w.precision_warning = j.at("precision_warning").get<bool>();
  return w;
}

json points_json(const std::vector<Eigen::Vector2d>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(json::array({p.x(), p.y()}));
  return a;
}

std::vector<Eigen::Vector2d> points_from(const json& j) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& p : j) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return pts;
}

json curves_json(const std::vector<DbisCurve>& curves) {
  json a = json::array();
  for (const auto& c : curves) {
    a.push_back({{"points", points_json(c.points)},
                 {"normals", points_json(c.normals)},
                 {"closed", c.closed},
                 {"interrupted", c.interrupted},
                 {"hits_boundary", c.hits_boundary},
                 {"max_residual", c.max_residual}});
  }
  return a;
}

Phase phase_from(const std::string& s) {
  if (s == "type_I") return Phase::type_I;
  if (s == "type_II") return Phase::type_II;
  if (s == "trivial") return Phase::trivial;
  return Phase::stable;
}

json evidence_json(const TransitionEvidence& ev) {
  json eps = json::array();
  for (const auto& e : ev.exceptional_points) {
    json members = json::array();
    for (const auto& m : e.members) members.push_back(momentum_json(m));
    eps.push_back({{"centroid", momentum_json(e.centroid)},
                   {"members", members},
                   {"min_omega", e.min_omega},
                   {"max_angle", e.max_angle}});
  }
  json ne = json::array();
  for (const auto& l : ev.ne) {
    ne.push_back({{"center", momentum_json(l.center)},
                  {"radius", l.radius},
                  {"around", l.around},
                  {"winding", winding_json(l.winding)}});
  }
  return {{"phase", to_string(ev.phase)},
          {"dbis_status", ev.dbis_status},
          {"ep_on_dbis", ev.ep_on_dbis},
          {"ep_at_charge", ev.ep_at_charge},
          {"exceptional_points", eps},
          {"dbis", curves_json(ev.dbis)},
          {"ne", ne},
          {"w", ev.w ? winding_json(*ev.w) : json(nullptr)},
          {"w_status", ev.w_status}};
}

TransitionEvidence evidence_from(const json& j) {
  TransitionEvidence ev;
  ev.phase = phase_from(j.at("phase").get<std::string>());
  ev.dbis_status = j.at("dbis_status").get<std::string>();
  ev.ep_on_dbis = j.at("ep_on_dbis").get<bool>();
  ev.ep_at_charge = j.at("ep_at_charge").get<bool>();
  for (const auto& e : j.at("exceptional_points")) {
    ExceptionalPoint ep;
    ep.centroid = momentum_from(e.at("centroid"), "centroid");
    for (const auto& m : e.at("members")) ep.members.push_back(momentum_from(m, "members"));
    ep.min_omega = e.at("min_omega").get<double>();
    ep.max_angle = e.at("max_angle").get<double>();
    ev.exceptional_points.push_back(ep);
  }
  for (const auto& c : j.at("dbis")) {
    DbisCurve d;
    d.points = points_from(c.at("points"));
    d.normals = points_from(c.at("normals"));
    d.closed = c.at("closed").get<bool>();
    d.interrupted = c.at("interrupted").get<bool>();
    d.hits_boundary = c.at("hits_boundary").get<bool>();
    d.max_residual = c.at("max_residual").get<double>();
    ev.dbis.push_back(d);
  }
  for (const auto& l : j.at("ne")) {
    LoopWinding lw;
    lw.center = momentum_from(l.at("center"), "center");
    lw.radius = l.at("radius").get<double>();
    lw.around = l.at("around").get<std::string>();
    lw.winding = winding_from(l.at("winding"));
    ev.ne.push_back(lw);
  }
  if (!j.at("w").is_null()) ev.w = winding_from(j.at("w"));
  ev.w_status = j.at("w_status").get<std::string>();
  return ev;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  f << text;
}

}  // namespace

const char* version() { return QAHSIM_VERSION; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("<root>: ") + e.what());
  }
  return config_from(j, "");
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ConfigInvalid, path + ": cannot open");
  std::stringstream ss;
  ss << f.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, path + ": " + e.what());
  }
  const auto slash = path.find_last_of('/');
  return config_from(j, slash == std::string::npos ? "." : path.substr(0, slash));
}

std::string config_to_json(const RunConfig& cfg) { return dump(config_json(cfg)); }

std::string summary_to_json(const RunSummary& s) {
  json cells = json::array();
  for (const auto& c : s.cells) {
    cells.push_back({{"k", momentum_json(c.k)},
                     {"s_bar", vec3_json(c.s_bar)},
                     {"omega", c.omega},
                     {"defined", c.defined},
                     {"fit_failed", c.fit_failed},
                     {"status", c.status},
                     {"residual_rms", c.residual_rms},
                     {"decomposition", decomposition_json(c.decomposition)}});
  }
  const topology::OmegaOnDbis& o = s.omega_on_dbis;
  json j;
  j["software_version"] = s.software_version;
  j["config"] = config_json(s.config);
  j["cells"] = cells;
  j["evidence"] = evidence_json(s.evidence);
  j["omega_on_dbis"] = {{"found", o.found},
                        {"lattice_min", o.lattice_min},
                        {"lattice_at", momentum_json(o.lattice_at)},
                        {"curve_min", o.curve_min},
                        {"curve_at", momentum_json(o.curve_at)}};
  j["n_failed"] = s.n_failed;
  j["n_masked"] = s.n_masked;
  j["cross_mode_rms"] = s.cross_mode_rms ? json(*s.cross_mode_rms) : json(nullptr);
  return dump(j);
}

RunSummary summary_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunSummary s;
  s.software_version = j.at("software_version").get<std::string>();
  s.config = config_from(j.at("config"), "");
  for (const auto& c : j.at("cells")) {
    CellResult r;
    r.k = momentum_from(c.at("k"), "k");
    r.s_bar = vec3_from(c.at("s_bar"));
    r.omega = c.at("omega").get<double>();
    r.defined = c.at("defined").get<bool>();
    r.fit_failed = c.at("fit_failed").get<bool>();
    r.status = c.at("status").get<std::string>();
    r.residual_rms = c.at("residual_rms").get<double>();
    r.decomposition = decomposition_from(c.at("decomposition"));
    s.cells.push_back(r);
  }
  s.evidence = evidence_from(j.at("evidence"));
  const json& o = j.at("omega_on_dbis");
  s.omega_on_dbis.found = o.at("found").get<bool>();
  s.omega_on_dbis.lattice_min = o.at("lattice_min").get<double>();
  s.omega_on_dbis.lattice_at = momentum_from(o.at("lattice_at"), "lattice_at");
  s.omega_on_dbis.curve_min = o.at("curve_min").get<double>();
  s.omega_on_dbis.curve_at = momentum_from(o.at("curve_at"), "curve_at");
  s.n_failed = j.at("n_failed").get<int>();
  s.n_masked = j.at("n_masked").get<int>();
  if (!j.at("cross_mode_rms").is_null()) s.cross_mode_rms = j.at("cross_mode_rms").get<double>();
  return s;
}

std::string texture_csv(const RunSummary& s) {
  std::string out = "kx,ky,sbar_x,sbar_y,sbar_z,omega,defined\n";
  for (const auto& c : s.cells) {
    out += format_double(c.k.kx) + "," + format_double(c.k.ky) + "," + format_double(c.s_bar(0)) +
           "," + format_double(c.s_bar(1)) + "," + format_double(c.s_bar(2)) + "," +
           format_double(c.omega) + "," + (c.defined ? "1" : "0") + "\n";
  }
  return out;
}

void write_texture_outputs(const RunSummary& s, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir + "/texture.csv", texture_csv(s));
  write_file(dir + "/dbis.json", dump(curves_json(s.evidence.dbis)));
  write_file(dir + "/summary.json", summary_to_json(s));
  write_file(dir + "/timing.json", dump({{"elapsed_seconds", s.elapsed_seconds}}));
}

std::string convergence_to_json(const ConvergenceReport& r) {
  json sweep = json::array();
  for (const auto& p : r.sweep) {
    sweep.push_back({{"n_steps", p.n_steps}, {"rss", p.rss}, {"fidelity", p.fidelity}});
  }
  json rms = json::array();
  for (const auto& row : r.rms) {
    rms.push_back({{"n_configs", row.n_configs}, {"rms", row.rms}, {"replica_rms", row.replica_rms}});
  }
  return dump({{"sweep", sweep}, {"rms", rms}, {"slope", r.slope}});
}

std::string transitions_to_json(const std::vector<RunSummary>& runs) {
  json table = json::array();
  for (const auto& s : runs) {
    json ne = json::array();
    for (const auto& l : s.evidence.ne) {
      ne.push_back({{"around", l.around}, {"center", momentum_json(l.center)}, {"value", l.winding.value}});
    }
    table.push_back({{"name", s.config.name},
                     {"phase", to_string(s.evidence.phase)},
                     {"dbis_status", s.evidence.dbis_status},
                     {"ep_on_dbis", s.evidence.ep_on_dbis},
                     {"n_exceptional", s.evidence.exceptional_points.size()},
                     {"w", s.evidence.w ? json(s.evidence.w->value) : json(nullptr)},
                     {"ne", ne}});
  }
  return dump(table);
}

std::string sweetspot_to_json(const SweetSpotReport& r) {
  json scan = json::array();
  for (const auto& p : r.scan) {
    scan.push_back({{"magnitude", p.magnitude},
                    {"dbis_stable", p.dbis_stable},
                    {"ep_on_dbis", p.ep_on_dbis},
                    {"phase", to_string(p.phase)}});
  }
  return dump({{"literal", r.literal}, {"scan", scan}});
}

}  // namespace runner
}  // namespace qahsim
