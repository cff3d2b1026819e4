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
// Command-line front end: texture, transitions, convergence, sweetspot, chern.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qahsim/error.hpp"
#include "qahsim/model.hpp"
#include "qahsim/runner.hpp"

namespace {

using namespace qahsim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartial = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--out", f.out, "output directory (default: $QAHSIM_OUT_DIR or ./qahsim_out)");
  app->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "64-bit RNG seed");
  app->add_option("--mode", f.mode, "sse, oracle or both")
      ->check(CLI::IsMember({"sse", "oracle", "both"}));
}

std::string default_out() {
  const char* env = std::getenv("QAHSIM_OUT_DIR");
  return env && *env ? env : "qahsim_out";
}

RunMode parse_mode(const std::string& m) {
  if (m == "sse") return RunMode::sse;
  if (m == "both") return RunMode::both;
  return RunMode::oracle;
}

void apply(RunConfig& c, const CommonFlags& f, const std::string& out) {
  c.outputs = out;
  if (f.workers) c.workers = *f.workers;
  if (f.seed) c.seed = *f.seed;
  if (f.mode) c.mode = parse_mode(*f.mode);
}

RunConfig resolve(const CommonFlags& f, std::string& out) {
  RunConfig c = f.config.empty() ? RunConfig{} : runner::load_config(f.config);
  out = !f.out.empty() ? f.out : (!c.outputs.empty() ? c.outputs : default_out());
  apply(c, f, out);
  for (auto& t : c.transitions) {
    apply(t, f, (std::filesystem::path(out) / t.name).string());
  }
  c.validate();
  return c;
}

void write_text(const std::string& dir, const std::string& file, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / file);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + file + " in " + dir);
  os << text;
}

void report_failures(const RunSummary& s) {
  for (const auto& c : s.cells) {
    if (!c.fit_failed) continue;
    std::fprintf(stderr, "fit failed at k = (%.6g, %.6g): %s\n", c.k.kx, c.k.ky, c.status.c_str());
  }
}

int cmd_texture(const CommonFlags& f) {
  std::string out;
  const RunConfig c = resolve(f, out);
  const RunSummary s = runner::run_texture(c);
  std::printf("phase %s  dbis %s  masked %d  failed %d", to_string(s.evidence.phase),
              s.evidence.dbis_status.c_str(), s.n_masked, s.n_failed);
  if (s.evidence.w) std::printf("  W %d", s.evidence.w->value);
  if (s.omega_on_dbis.found) {
    std::printf("  omega_min lattice %.6g curve %.6g", s.omega_on_dbis.lattice_min, s.omega_on_dbis.curve_min);
  }
  if (s.cross_mode_rms) std::printf("  cross_rms %.3g", *s.cross_mode_rms);
  std::printf("\n  -> %s\n", out.c_str());
  report_failures(s);
  return s.n_failed > 0 ? kExitPartial : kExitOk;
}

int cmd_transitions(const CommonFlags& f) {
  std::string out;
  const RunConfig c = resolve(f, out);
  const auto runs = runner::run_transition_suite(c.transitions);
  write_text(out, "transitions.json", runner::transitions_to_json(runs));
  int failed = 0;
  for (const auto& s : runs) {
    std::printf("%-16s %-8s", s.config.name.c_str(), to_string(s.evidence.phase));
    for (const auto& l : s.evidence.ne) std::printf("  N_E(%.3g,%.3g)=%d", l.center.kx, l.center.ky, l.winding.value);
    std::printf("\n");
    report_failures(s);
    failed += s.n_failed;
  }
  std::printf("  -> %s\n", out.c_str());
  return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_convergence(const CommonFlags& f) {
  std::string out;
  const RunConfig c = resolve(f, out);
  const ConvergenceReport r = runner::run_convergence(c);
  write_text(out, "convergence.json", runner::convergence_to_json(r));
  for (const auto& p : r.sweep) std::printf("M %5d  rss %.4g  fidelity %.6f\n", p.n_steps, p.rss, p.fidelity);
  for (const auto& row : r.rms) std::printf("N %6d  rms %.4g\n", row.n_configs, row.rms);
  std::printf("slope %.3f\n  -> %s\n", r.slope, out.c_str());
  return kExitOk;
}

int cmd_sweetspot(const CommonFlags& f) {
  std::string out;
  const RunConfig c = resolve(f, out);
  const SweetSpotReport r = runner::run_sweetspot(c);
  write_text(out, "sweetspot.json", runner::sweetspot_to_json(r));
  std::printf("literal condition %s\n", r.literal ? "satisfied" : "violated");
  for (const auto& p : r.scan) {
    std::printf("|w| %-6g phase %-8s ep_on_dbis %-3s stable %s\n", p.magnitude, to_string(p.phase),
                p.ep_on_dbis ? "yes" : "no", p.dbis_stable ? "yes" : "no");
  }
  std::printf("  -> %s\n", out.c_str());
  return kExitOk;
}

int cmd_chern(const CommonFlags& f, std::optional<double> mz, int grid_n) {
  RunConfig c = f.config.empty() ? RunConfig{} : runner::load_config(f.config);
  if (mz) c.model.mz = *mz;
  c.model.validate();
  std::printf("%d\n", model::chern_number(c.model, grid_n));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy quench dynamics of the quantum anomalous Hall model"};
  app.set_version_flag("--version", std::string(qahsim::runner::version()));
  app.require_subcommand(1);

  CommonFlags f;
  auto* texture = app.add_subcommand("texture", "time-averaged texture, dBIS and classification");
  auto* transitions = app.add_subcommand("transitions", "run the configured transition suite");
  auto* convergence = app.add_subcommand("convergence", "Trotter and ensemble convergence tables");
  auto* sweetspot = app.add_subcommand("sweetspot", "dBIS stability along a noise direction");
  auto* chern = app.add_subcommand("chern", "Chern number of the post-quench band");
  for (auto* sub : {texture, transitions, convergence, sweetspot, chern}) add_common(sub, f);
  std::optional<double> mz;
  int grid_n = 200;
  chern->add_option("--mz", mz, "override the post-quench mz");
  chern->add_option("--grid", grid_n, "lattice size")->check(CLI::Range(4, 4096));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (texture->parsed()) return cmd_texture(f);
    if (transitions->parsed()) return cmd_transitions(f);
    if (convergence->parsed()) return cmd_convergence(f);
    if (sweetspot->parsed()) return cmd_sweetspot(f);
    if (chern->parsed()) return cmd_chern(f, mz, grid_n);
  } catch (const qahsim::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.kind() == qahsim::ErrorKind::ConfigInvalid ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
