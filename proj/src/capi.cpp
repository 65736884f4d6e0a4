#include "knotopo/knotopo.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "knotopo/experiment.hpp"
#include "knotopo/twolevel.hpp"
#include "knotopo/version.hpp"

struct kno_config {
  kno::ExperimentConfig cfg;
};

struct kno_report {
  kno::ValidationReport rep;
  std::string text;
};

struct kno_result {
  kno::ExperimentResult res;
};

struct kno_trajectory {
  kno::Trajectory traj;
  kno::ModelParams params;
};

namespace {

thread_local std::string last_error;

template <class F>
kno_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return KNO_OK;
  } catch (const kno::Error& e) {
    last_error = e.what();
    return static_cast<kno_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KNO_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KNO_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return KNO_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw kno::Error(kno::ErrorCode::invalid_argument, std::string(what) + " is null");
}

std::string text_arg(const char* s, const char* what) {
  require(s, what);
  return s;
}

}  // namespace

extern "C" {

const char* kno_version(void) { return kno::kVersion; }

const char* kno_status_name(kno_status s) {
  if (s == KNO_OK) return "ok";
  if (s == KNO_ERR_INTERNAL) return "internal";
  if (s >= 1 && s <= 15) return kno::to_string(static_cast<kno::ErrorCode>(s));
  return "unknown";
}

const char* kno_last_error(void) { return last_error.c_str(); }

kno_status kno_config_load(const char* preset_or_path, kno_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<kno_config>();
    c->cfg = kno::load_config(text_arg(preset_or_path, "preset_or_path"));
    *out = c.release();
  });
}

kno_status kno_config_parse(const char* json_text, kno_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto c = std::make_unique<kno_config>();
    c->cfg = kno::parse_config(text_arg(json_text, "json_text"));
    *out = c.release();
  });
}

void kno_config_free(kno_config* c) { delete c; }

kno_status kno_config_preset_name(const kno_config* c, const char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = c->cfg.preset.c_str();
  });
}

kno_status kno_config_set_protocol(kno_config* c, const char* protocol) {
  return guarded([&] {
    require(c, "config");
    const std::string p = text_arg(protocol, "protocol");
    if (p == "linear_response") c->cfg.protocol = kno::Protocol::linear_response;
    else if (p == "sta") c->cfg.protocol = kno::Protocol::sta;
    else if (p == "sweep") c->cfg.protocol = kno::Protocol::sweep;
    else if (p == "wigner_movie") c->cfg.protocol = kno::Protocol::wigner_movie;
    else throw kno::Error(kno::ErrorCode::usage, "unknown protocol \"" + p + "\"");
  });
}

kno_status kno_config_set_chi(kno_config* c, double chi) {
  return guarded([&] {
    require(c, "config");
    if (c->cfg.model.delta_z == 0.0 && chi != 0.0) {
      throw kno::Error(kno::ErrorCode::invalid_argument, "chi undefined: delta_z = 0");
    }
    c->cfg.model.set_chi(chi);
  });
}

kno_status kno_config_set_initial(kno_config* c, const char* initial) {
  return guarded([&] {
    require(c, "config");
    const std::string s = text_arg(initial, "initial");
    if (s == "ket0") c->cfg.run.initial = kno::InitialState::ket0;
    else if (s == "ket1") c->cfg.run.initial = kno::InitialState::ket1;
    else throw kno::Error(kno::ErrorCode::usage, "initial must be ket0 or ket1, got \"" + s + "\"");
  });
}

kno_status kno_config_set_sta(kno_config* c, int on) {
  return guarded([&] {
    require(c, "config");
    c->cfg.run.sta = on != 0;
  });
}

kno_status kno_config_set_steps(kno_config* c, int n_steps) {
  return guarded([&] {
    require(c, "config");
    if (n_steps < 100) throw kno::Error(kno::ErrorCode::usage, "steps must be >= 100");
    c->cfg.run.n_steps = n_steps;
  });
}

kno_status kno_config_set_dim(kno_config* c, int dim) {
  return guarded([&] {
    require(c, "config");
    if (dim < 2) throw kno::Error(kno::ErrorCode::usage, "dim must be >= 2");
    c->cfg.model.dim = dim;
  });
}

kno_status kno_config_set_output_dir(kno_config* c, const char* dir) {
  return guarded([&] {
    require(c, "config");
    c->cfg.output.dir = text_arg(dir, "dir");
  });
}

kno_status kno_config_set_format(kno_config* c, const char* format) {
  return guarded([&] {
    require(c, "config");
    const std::string f = text_arg(format, "format");
    if (f == "csv") c->cfg.output.format = kno::OutputFormat::csv;
    else if (f == "json") c->cfg.output.format = kno::OutputFormat::json;
    else throw kno::Error(kno::ErrorCode::usage, "format must be csv or json, got \"" + f + "\"");
  });
}

kno_status kno_config_set_jobs(kno_config* c, int jobs) {
  return guarded([&] {
    require(c, "config");
    if (jobs < 0) throw kno::Error(kno::ErrorCode::usage, "jobs must be >= 0");
    c->cfg.jobs = jobs;
  });
}

kno_status kno_config_set_sweep_chi(kno_config* c, const double* chi, size_t n) {
  return guarded([&] {
    require(c, "config");
    if (n > 0) require(chi, "chi");
    c->cfg.sweep.chi.assign(chi, chi + n);
  });
}

kno_status kno_config_set_sweep_protocol(kno_config* c, const char* protocol) {
  return guarded([&] {
    require(c, "config");
    const std::string p = text_arg(protocol, "protocol");
    if (p == "linear_response") c->cfg.sweep.protocol = kno::SweepProtocol::linear_response;
    else if (p == "sta") c->cfg.sweep.protocol = kno::SweepProtocol::sta;
    else throw kno::Error(kno::ErrorCode::usage, "sweep protocol must be linear_response or sta");
  });
}

kno_status kno_config_to_json(const kno_config* c, char** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    const std::string s = kno::to_json(c->cfg);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void kno_string_free(char* s) { delete[] s; }

kno_status kno_validate(const kno_config* c, kno_report** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = nullptr;
    auto r = std::make_unique<kno_report>();
    r->rep = kno::validate(c->cfg);
    r->text = r->rep.text();
    *out = r.release();
  });
}

int kno_report_ok(const kno_report* r) { return r && r->rep.ok() ? 1 : 0; }
const char* kno_report_text(const kno_report* r) { return r ? r->text.c_str() : ""; }
double kno_report_stabilizer_ratio(const kno_report* r) { return r ? r->rep.stabilizer_ratio : 0.0; }
double kno_report_truncation_leakage(const kno_report* r) { return r ? r->rep.truncation_leakage : 0.0; }
void kno_report_free(kno_report* r) { delete r; }

kno_status kno_run(const kno_config* c, kno_result** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = nullptr;
    auto r = std::make_unique<kno_result>();
    r->res = kno::run_experiment(c->cfg);
    *out = r.release();
  });
}

const char* kno_result_output_dir(const kno_result* r) { return r ? r->res.output_dir.c_str() : ""; }
size_t kno_result_file_count(const kno_result* r) { return r ? r->res.files.size() : 0; }

const char* kno_result_file(const kno_result* r, size_t i) {
  return r && i < r->res.files.size() ? r->res.files[i].c_str() : nullptr;
}

int kno_result_c1(const kno_result* r, double* c1) {
  if (!r || !r->res.c1) return 0;
  if (c1) *c1 = *r->res.c1;
  return 1;
}

size_t kno_result_warning_count(const kno_result* r) { return r ? r->res.warnings.size() : 0; }

const char* kno_result_warning(const kno_result* r, size_t i) {
  return r && i < r->res.warnings.size() ? r->res.warnings[i].c_str() : nullptr;
}

void kno_result_free(kno_result* r) { delete r; }

kno_status kno_simulate(const kno_config* c, kno_trajectory** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = nullptr;
    const kno::KerrModel model(c->cfg.model);
    kno::RunOptions ro;
    ro.initial = c->cfg.run.initial;
    ro.sta = c->cfg.run.sta;
    ro.n_steps = c->cfg.run.n_steps;
    ro.n_samples = c->cfg.run.n_samples;
    ro.max_refinements = c->cfg.run.max_refinements;
    ro.convergence_tol = c->cfg.run.convergence_tol;
    auto t = std::make_unique<kno_trajectory>(kno_trajectory{kno::run(model, ro), c->cfg.model});
    *out = t.release();
  });
}

size_t kno_trajectory_size(const kno_trajectory* t) { return t ? t->traj.samples.size() : 0; }

kno_status kno_trajectory_sample(const kno_trajectory* t, size_t i, kno_sample* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "out");
    if (i >= t->traj.samples.size()) throw kno::Error(kno::ErrorCode::out_of_range, "sample index out of range");
    const kno::Sample& s = t->traj.samples[i];
    *out = kno_sample{s.t, s.theta, s.sx, s.sy, s.sz, s.pop, s.norm};
  });
}

int kno_trajectory_converged(const kno_trajectory* t) { return t && t->traj.converged ? 1 : 0; }
int kno_trajectory_steps(const kno_trajectory* t) { return t ? t->traj.n_steps : 0; }

kno_status kno_trajectory_chern_linear_response(const kno_trajectory* t, double* c1) {
  return guarded([&] {
    require(t, "trajectory");
    require(c1, "c1");
    *c1 = kno::chern_linear_response(kno::berry_curvature(t->traj, t->params)).c1;
  });
}

kno_status kno_trajectory_chern_sta(const kno_trajectory* t, double* c1) {
  return guarded([&] {
    require(t, "trajectory");
    require(c1, "c1");
    *c1 = kno::chern_sta(kno::theta_q_series(t->traj)).c1;
  });
}

void kno_trajectory_free(kno_trajectory* t) { delete t; }

kno_status kno_monopole_chern(double chi, double aspect, double* c1) {
  return guarded([&] {
    require(c1, "c1");
    *c1 = kno::twolevel::monopole_chern(chi, aspect);
  });
}

}  // extern "C"
