// knotopo command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotopo/knotopo.h"

namespace {

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kInvalid = 3 };

struct Overrides {
  std::optional<double> chi;
  std::vector<double> chi_list;
  std::string initial;
  std::string sta;
  std::optional<int> steps;
  std::optional<int> dim;
  std::string out;
  std::string format;
  std::optional<int> jobs;
};

int exit_for(kno_status s) {
  return (s == KNO_ERR_CONFIG || s == KNO_ERR_USAGE) ? kUsage : kRuntime;
}

int report(kno_status s, const char* what) {
  std::cerr << "knotopo: " << what << ": " << kno_last_error() << " [" << kno_status_name(s) << "]\n";
  return exit_for(s);
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--initial", o.initial, "Initial logical state")->check(CLI::IsMember({"ket0", "ket1"}));
  cmd->add_option("--sta", o.sta, "Counterdiabatic term")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--steps", o.steps, "Base number of integration steps (>= 100)");
  cmd->add_option("--dim", o.dim, "Fock truncation dimension");
  cmd->add_option("--out", o.out, "Output directory (overrides KNOTOPO_OUTPUT_DIR)");
  cmd->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", o.jobs, "Concurrent sweep workers (0 = all cores)")->check(CLI::NonNegativeNumber);
}

// Loads the target and applies flags; returns nullptr after printing the error.
kno_config* configure(const std::string& target, const Overrides& o, const char* protocol, int& code) {
  kno_config* cfg = nullptr;
  kno_status s = kno_config_load(target.c_str(), &cfg);
  if (s != KNO_OK) {
    code = report(s, "config");
    return nullptr;
  }
  auto apply = [&](kno_status st, const char* what) {
    if (st != KNO_OK && code == kOk) code = report(st, what);
  };
  code = kOk;
  if (protocol) apply(kno_config_set_protocol(cfg, protocol), "--protocol");
  if (o.chi) apply(kno_config_set_chi(cfg, *o.chi), "--chi");
  if (!o.chi_list.empty()) apply(kno_config_set_sweep_chi(cfg, o.chi_list.data(), o.chi_list.size()), "--chi");
  if (!o.initial.empty()) apply(kno_config_set_initial(cfg, o.initial.c_str()), "--initial");
  if (!o.sta.empty()) apply(kno_config_set_sta(cfg, o.sta == "on"), "--sta");
  if (o.steps) apply(kno_config_set_steps(cfg, *o.steps), "--steps");
  if (o.dim) apply(kno_config_set_dim(cfg, *o.dim), "--dim");
  if (!o.format.empty()) apply(kno_config_set_format(cfg, o.format.c_str()), "--format");
  if (o.jobs) apply(kno_config_set_jobs(cfg, *o.jobs), "--jobs");
  if (!o.out.empty()) {
    apply(kno_config_set_output_dir(cfg, o.out.c_str()), "--out");
  } else if (const char* env = std::getenv("KNOTOPO_OUTPUT_DIR"); env && *env) {
    apply(kno_config_set_output_dir(cfg, env), "KNOTOPO_OUTPUT_DIR");
  }
  if (code != kOk) {
    kno_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

int do_run(kno_config* cfg) {
  kno_result* res = nullptr;
  const kno_status s = kno_run(cfg, &res);
  if (s != KNO_OK) return report(s, "run");
  std::cout << "output: " << kno_result_output_dir(res) << "\n";
  for (size_t i = 0; i < kno_result_file_count(res); ++i) std::cout << "  " << kno_result_file(res, i) << "\n";
  double c1 = 0.0;
  if (kno_result_c1(res, &c1)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", c1);
    std::cout << "c1 = " << buf << "\n";
  }
  for (size_t i = 0; i < kno_result_warning_count(res); ++i) {
    std::cerr << "warning: " << kno_result_warning(res, i) << "\n";
  }
  kno_result_free(res);
  return kOk;
}

int do_validate(kno_config* cfg) {
  kno_report* rep = nullptr;
  const kno_status s = kno_validate(cfg, &rep);
  if (s != KNO_OK) return report(s, "validate");
  std::cout << kno_report_text(rep);
  const int code = kno_report_ok(rep) ? kOk : kInvalid;
  kno_report_free(rep);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological protocols on a driven Kerr nonlinear oscillator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kno_version()));

  std::string target;
  Overrides sim, swp, wig, val;

  auto* simulate = app.add_subcommand("simulate", "Run a preset (fig1, fig2-4) or JSON config");
  simulate->add_option("target", target, "Preset name or config path")->required();
  simulate->add_option("--chi", sim.chi, "Manifold offset delta_0 / delta_z");
  add_common(simulate, sim);

  auto* sweep = app.add_subcommand("sweep", "Chern number versus chi");
  sweep->add_option("target", target, "Preset name or config path")->required();
  sweep->add_option("--chi", swp.chi_list, "Comma-separated chi values")->delimiter(',');
  add_common(sweep, swp);

  auto* wigner = app.add_subcommand("wigner", "Wigner snapshots along an STA run");
  wigner->add_option("target", target, "Preset name or config path")->capture_default_str();
  wigner->add_option("--chi", wig.chi, "Manifold offset delta_0 / delta_z");
  add_common(wigner, wig);

  auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
  validate->add_option("target", target, "Preset name or config path")->required();
  validate->add_option("--chi", val.chi, "Manifold offset delta_0 / delta_z");
  add_common(validate, val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  int code = kOk;
  kno_config* cfg = nullptr;
  if (*simulate) {
    cfg = configure(target, sim, nullptr, code);
    if (cfg) code = do_run(cfg);
  } else if (*sweep) {
    cfg = configure(target, swp, "sweep", code);
    if (cfg) code = do_run(cfg);
  } else if (*wigner) {
    if (target.empty()) target = "fig2-4";
    cfg = configure(target, wig, "wigner_movie", code);
    if (cfg) code = do_run(cfg);
  } else if (*validate) {
    cfg = configure(target, val, nullptr, code);
    if (cfg) code = do_validate(cfg);
  }
  kno_config_free(cfg);
  return code;
}
