#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "knotopo/experiment.hpp"

namespace kno {

using json = nlohmann::ordered_json;

const char* to_string(Protocol p) noexcept {
  switch (p) {
    case Protocol::linear_response: return "linear_response";
    case Protocol::sta: return "sta";
    case Protocol::sweep: return "sweep";
    case Protocol::wigner_movie: return "wigner_movie";
  }
  return "unknown";
}

const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// P = 2K = 2 pi x 1000 rad/us, so alpha0 = sqrt(2).
void base_oscillator(ModelParams& m) {
  m.pump = kTwoPi * 1000.0;
  m.kerr = m.pump / 2.0;
  m.phi = 0.0;
  m.dim = 30;
  m.hx_prefactor = HxPrefactor::exact;
  m.orthogonalization = Orthogonalization::lowdin;
}

ExperimentConfig fig1() {
  ExperimentConfig c;
  c.preset = "fig1";
  c.protocol = Protocol::linear_response;
  base_oscillator(c.model);
  c.model.omega0 = c.model.pump / (10.0 * std::exp(4.0));
  c.model.delta_z = 2.0 * c.model.omega0;
  c.model.delta_0 = 0.0;
  c.model.tau = 40.0;
  c.model.schedule = Schedule::linear;
  c.run.sta = false;
  c.run.n_steps = 20000;
  c.sweep.chi = {-1.5, -0.5, 0.0, 0.5, 1.5};
  c.sweep.protocol = SweepProtocol::linear_response;
  return c;
}

ExperimentConfig fig2_4() {
  ExperimentConfig c;
  c.preset = "fig2-4";
  c.protocol = Protocol::sta;
  base_oscillator(c.model);
  c.model.omega0 = kTwoPi * 0.02;
  c.model.delta_z = c.model.omega0;
  c.model.delta_0 = 0.0;
  c.model.tau = 1.5;
  c.model.schedule = Schedule::cosine;
  c.run.sta = true;
  c.run.n_steps = 4000;
  c.sweep.chi = {-1.5, -1.2, -0.5, 0.0, 0.5, 1.2, 1.5};
  c.sweep.protocol = SweepProtocol::sta;
  return c;
}

int line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Line of the key at the end of path, found by walking the path's keys in
// textual order. 0 when not found.
int line_of_path(std::string_view text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const std::string& key : path) {
    const std::string quoted = "\"" + key + "\"";
    for (;;) {
      pos = text.find(quoted, pos);
      if (pos == std::string_view::npos) return 0;
      std::size_t after = pos + quoted.size();
      while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
      if (after < text.size() && text[after] == ':') break;
      pos += quoted.size();
    }
  }
  return line_of(text, pos);
}

std::string join_path(const std::vector<std::string>& path) {
  std::string s;
  for (const std::string& k : path) s += "/" + k;
  return s.empty() ? "/" : s;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    std::ostringstream os;
    os << "config";
    if (const int line = line_of_path(text_, path); line > 0) os << " line " << line;
    os << ", key " << join_path(path) << ": " << msg;
    throw Error(ErrorCode::config, os.str());
  }

  void allow(const json& obj, const std::vector<std::string>& path,
             std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        std::vector<std::string> p = path;
        p.push_back(k);
        fail(p, "unknown key");
      }
    }
  }

  template <class F>
  void with(const json& obj, std::vector<std::string> path, const char* key, F&& f) const {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    path.push_back(key);
    f(*it, path);
  }

  double number(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

  int integer(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      fail(path, "integer out of range");
    }
    return static_cast<int>(x);
  }

  bool boolean(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  template <class E>
  E choice(const json& v, const std::vector<std::string>& path,
           std::initializer_list<std::pair<const char*, E>> options) const {
    const std::string s = string(v, path);
    std::string names;
    for (const auto& [name, value] : options) {
      if (s == name) return value;
      names += names.empty() ? name : std::string(", ") + name;
    }
    fail(path, "expected one of {" + names + "}, got \"" + s + "\"");
  }

  std::vector<double> numbers(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::vector<std::string> p = path;
      p.push_back(std::to_string(i));
      if (!v[i].is_number()) fail(path, "element " + std::to_string(i) + " is not a number");
      out.push_back(number(v[i], p));
    }
    return out;
  }

 private:
  std::string_view text_;
};

// Rejects duplicate keys, which the DOM parser would silently collapse.
json parse_strict(std::string_view text) {
  std::vector<std::set<std::string>> seen;
  std::string duplicate;
  auto cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start: seen.emplace_back(); break;
      case json::parse_event_t::object_end: seen.pop_back(); break;
      case json::parse_event_t::key:
        if (!seen.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
          duplicate = parsed.get<std::string>();
        }
        break;
      default: break;
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), cb);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "config line " << line_of(text, e.byte > 0 ? e.byte - 1 : 0) << ": malformed JSON ("
       << e.what() << ")";
    throw Error(ErrorCode::config, os.str());
  }
  if (!duplicate.empty()) {
    std::ostringstream os;
    os << "config line " << line_of_path(text, {duplicate}) << ": duplicate key \"" << duplicate << "\"";
    throw Error(ErrorCode::config, os.str());
  }
  if (!doc.is_object()) throw Error(ErrorCode::config, "config line 1: top level must be an object");
  return doc;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig1", "fig2-4"}; }

ExperimentConfig preset(std::string_view name) {
  if (name == "fig1") return fig1();
  if (name == "fig2-4") return fig2_4();
  throw Error(ErrorCode::config, "unknown preset \"" + std::string(name) + "\" (expected fig1 or fig2-4)");
}

ExperimentConfig parse_config(std::string_view text) {
  const json doc = parse_strict(text);
  const Reader r(text);
  r.allow(doc, {}, {"preset", "protocol", "units", "model", "run", "sweep", "wigner", "output", "jobs"});

  ExperimentConfig c;
  r.with(doc, {}, "preset", [&](const json& v, const auto& p) {
    const std::string name = r.string(v, p);
    try {
      c = preset(name);
    } catch (const Error& e) {
      r.fail(p, e.what());
    }
  });

  double scale = 1.0;
  r.with(doc, {}, "units", [&](const json& v, const auto& p) {
    scale = r.choice<double>(v, p, {{"rad_per_us", 1.0}, {"mhz", kTwoPi}});
  });

  r.with(doc, {}, "protocol", [&](const json& v, const auto& p) {
    c.protocol = r.choice<Protocol>(v, p,
                                    {{"linear_response", Protocol::linear_response},
                                     {"sta", Protocol::sta},
                                     {"sweep", Protocol::sweep},
                                     {"wigner_movie", Protocol::wigner_movie}});
  });

  r.with(doc, {}, "model", [&](const json& m, const auto& mp) {
    r.allow(m, mp, {"kerr", "pump", "omega0", "delta_z", "delta_0", "chi", "tau", "schedule", "phi",
                    "hx_prefactor", "dim", "orthogonalization"});
    ModelParams& mod = c.model;
    r.with(m, mp, "kerr", [&](const json& v, const auto& p) { mod.kerr = scale * r.number(v, p); });
    r.with(m, mp, "pump", [&](const json& v, const auto& p) { mod.pump = scale * r.number(v, p); });
    r.with(m, mp, "omega0", [&](const json& v, const auto& p) { mod.omega0 = scale * r.number(v, p); });
    r.with(m, mp, "delta_z", [&](const json& v, const auto& p) { mod.delta_z = scale * r.number(v, p); });
    r.with(m, mp, "delta_0", [&](const json& v, const auto& p) { mod.delta_0 = scale * r.number(v, p); });
    r.with(m, mp, "tau", [&](const json& v, const auto& p) { mod.tau = r.number(v, p); });
    r.with(m, mp, "phi", [&](const json& v, const auto& p) { mod.phi = r.number(v, p); });
    r.with(m, mp, "dim", [&](const json& v, const auto& p) { mod.dim = r.integer(v, p); });
    r.with(m, mp, "schedule", [&](const json& v, const auto& p) {
      mod.schedule = r.choice<Schedule>(v, p, {{"linear", Schedule::linear}, {"cosine", Schedule::cosine}});
    });
    r.with(m, mp, "hx_prefactor", [&](const json& v, const auto& p) {
      mod.hx_prefactor =
          r.choice<HxPrefactor>(v, p, {{"exact", HxPrefactor::exact}, {"paper", HxPrefactor::paper}});
    });
    r.with(m, mp, "orthogonalization", [&](const json& v, const auto& p) {
      mod.orthogonalization = r.choice<Orthogonalization>(
          v, p, {{"lowdin", Orthogonalization::lowdin}, {"raw", Orthogonalization::raw}});
    });
    r.with(m, mp, "chi", [&](const json& v, const auto& p) {
      if (m.contains("delta_0")) r.fail(p, "chi and delta_0 are mutually exclusive");
      const double chi = r.number(v, p);
      if (mod.delta_z == 0.0 && chi != 0.0) r.fail(p, "chi undefined: delta_z = 0");
      mod.set_chi(chi);
    });
  });

  r.with(doc, {}, "run", [&](const json& o, const auto& op) {
    r.allow(o, op, {"initial", "sta", "n_steps", "n_samples", "max_refinements", "convergence_tol"});
    RunSettings& run = c.run;
    r.with(o, op, "initial", [&](const json& v, const auto& p) {
      run.initial = r.choice<InitialState>(v, p, {{"ket0", InitialState::ket0}, {"ket1", InitialState::ket1}});
    });
    r.with(o, op, "sta", [&](const json& v, const auto& p) { run.sta = r.boolean(v, p); });
    r.with(o, op, "n_steps", [&](const json& v, const auto& p) { run.n_steps = r.integer(v, p); });
    r.with(o, op, "n_samples", [&](const json& v, const auto& p) { run.n_samples = r.integer(v, p); });
    r.with(o, op, "max_refinements", [&](const json& v, const auto& p) { run.max_refinements = r.integer(v, p); });
    r.with(o, op, "convergence_tol", [&](const json& v, const auto& p) { run.convergence_tol = r.number(v, p); });
  });

  r.with(doc, {}, "sweep", [&](const json& o, const auto& op) {
    r.allow(o, op, {"chi", "protocol"});
    r.with(o, op, "chi", [&](const json& v, const auto& p) { c.sweep.chi = r.numbers(v, p); });
    r.with(o, op, "protocol", [&](const json& v, const auto& p) {
      c.sweep.protocol = r.choice<SweepProtocol>(
          v, p, {{"linear_response", SweepProtocol::linear_response}, {"sta", SweepProtocol::sta}});
    });
  });

  r.with(doc, {}, "wigner", [&](const json& o, const auto& op) {
    r.allow(o, op, {"half_width", "n_points", "times", "leakage_threshold"});
    WignerSettings& w = c.wigner;
    r.with(o, op, "half_width", [&](const json& v, const auto& p) { w.grid.half_width = r.number(v, p); });
    r.with(o, op, "n_points", [&](const json& v, const auto& p) { w.grid.n_points = r.integer(v, p); });
    r.with(o, op, "times", [&](const json& v, const auto& p) { w.times = r.numbers(v, p); });
    r.with(o, op, "leakage_threshold", [&](const json& v, const auto& p) { w.leakage_threshold = r.number(v, p); });
  });

  r.with(doc, {}, "output", [&](const json& o, const auto& op) {
    r.allow(o, op, {"dir", "format"});
    r.with(o, op, "dir", [&](const json& v, const auto& p) { c.output.dir = r.string(v, p); });
    r.with(o, op, "format", [&](const json& v, const auto& p) {
      c.output.format = r.choice<OutputFormat>(v, p, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}});
    });
  });

  r.with(doc, {}, "jobs", [&](const json& v, const auto& p) {
    c.jobs = r.integer(v, p);
    if (c.jobs < 0) r.fail(p, "jobs must be >= 0");
  });
  return c;
}

ExperimentConfig load_config(const std::string& preset_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), preset_or_path) != names.end()) return preset(preset_or_path);
  std::ifstream in(preset_or_path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::config, "cannot read config \"" + preset_or_path +
                                       "\" (not a preset: expected fig1, fig2-4 or a JSON file)");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), preset_or_path + ": " + e.what());
  }
}

std::string to_json(const ExperimentConfig& c) {
  const ModelParams& m = c.model;
  json doc = {
      {"preset", c.preset},
      {"protocol", to_string(c.protocol)},
      {"units", "rad_per_us"},
      {"model",
       {{"kerr", m.kerr},
        {"pump", m.pump},
        {"omega0", m.omega0},
        {"delta_z", m.delta_z},
        {"delta_0", m.delta_0},
        {"tau", m.tau},
        {"schedule", to_string(m.schedule)},
        {"phi", m.phi},
        {"hx_prefactor", to_string(m.hx_prefactor)},
        {"dim", m.dim},
        {"orthogonalization", to_string(m.orthogonalization)}}},
      {"run",
       {{"initial", to_string(c.run.initial)},
        {"sta", c.run.sta},
        {"n_steps", c.run.n_steps},
        {"n_samples", c.run.n_samples},
        {"max_refinements", c.run.max_refinements},
        {"convergence_tol", c.run.convergence_tol}}},
      {"sweep", {{"chi", c.sweep.chi}, {"protocol", to_string(c.sweep.protocol)}}},
      {"wigner",
       {{"half_width", c.wigner.grid.half_width},
        {"n_points", c.wigner.grid.n_points},
        {"times", c.wigner.times},
        {"leakage_threshold", c.wigner.leakage_threshold}}},
      {"output", {{"dir", c.output.dir}, {"format", to_string(c.output.format)}}},
      {"jobs", c.jobs},
  };
  return doc.dump(2);
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  os << "resolved configuration:\n" << resolved << "\n\n";
  for (const Check& c : checks) {
    os << (c.ok ? "[ok]   " : "[FAIL] ") << c.name << ": " << c.message << "\n";
  }
  os << "result: " << (ok() ? "ok" : "FAILED") << "\n";
  return os.str();
}

ValidationReport validate(const ExperimentConfig& c) {
  ValidationReport rep;
  rep.resolved = to_json(c);
  auto add = [&](std::string name, bool ok, std::string msg) {
    rep.checks.push_back({std::move(name), ok, std::move(msg)});
  };
  auto fmt = [](auto&&... xs) {
    std::ostringstream os;
    os.precision(6);
    (os << ... << xs);
    return os.str();
  };
  const ModelParams& m = c.model;

  bool params_ok = true;
  try {
    m.validate();
    add("parameters", true, fmt("alpha0 = ", m.alpha0(), ", tau = ", m.tau, " us, dim = ", m.dim));
  } catch (const Error& e) {
    params_ok = false;
    add("parameters", false, e.what());
  }

  try {
    add("chi", true, fmt("chi = delta_0 / delta_z = ", m.chi()));
  } catch (const Error&) {
    params_ok = false;
    add("chi", false, "chi undefined: delta_0 is set while delta_z = 0");
  }

  if (m.kerr > 0.0 && m.pump > 0.0) {
    rep.stabilizer_ratio = m.stabilizer_ratio();
    add("stabilizer", rep.stabilizer_ratio <= kStabilizerWarn,
        fmt("e^{2 alpha0^2} omega0 / P = ", rep.stabilizer_ratio, " (limit ", kStabilizerWarn, ")"));
  }

  if (m.kerr > 0.0 && m.pump > 0.0 && m.dim >= 2) {
    rep.truncation_leakage = coherent_state(cplx(m.alpha0(), 0.0), m.dim, 1.0).leakage;
    const bool ok = rep.truncation_leakage <= kDefaultMaxLeakage;
    add("truncation", ok,
        fmt("coherent-state leakage ", rep.truncation_leakage, " at dim ", m.dim, " (threshold ",
            kDefaultMaxLeakage, ok ? ")" : "; warning: truncation too small, recommended dim >= ",
            ok ? "" : std::to_string(recommended_dim(m.alpha0()))));
    if (!ok) params_ok = false;
  }

  const bool steps_ok = c.run.n_steps >= 100 && c.run.n_samples >= 10 && c.run.n_samples <= c.run.n_steps &&
                        c.run.max_refinements >= 1 && c.run.convergence_tol > 0.0;
  add("integration", steps_ok,
      fmt("n_steps = ", c.run.n_steps, ", n_samples = ", c.run.n_samples, ", max_refinements = ",
          c.run.max_refinements, steps_ok ? "" : " (need n_steps >= 100, 10 <= n_samples <= n_steps, "
                                                 "max_refinements >= 1, convergence_tol > 0)"));

  const bool uses_sta = c.run.sta || (c.protocol == Protocol::sweep && c.sweep.protocol == SweepProtocol::sta);
  if (uses_sta) {
    const double scale = std::max(std::abs(m.delta_z), std::abs(m.omega0));
    const bool ok = std::abs(m.delta_z - m.omega0) <= 1e-9 * scale && m.phi == 0.0;
    add("counterdiabatic", ok, ok ? "delta_z = omega0, phi = 0" : "CD term requires delta_z = omega0 and phi = 0");
  }

  std::vector<double> chis{0.0};
  if (c.protocol == Protocol::sweep) {
    chis = c.sweep.chi;
    add("sweep", !chis.empty(), chis.empty() ? "empty chi list" : fmt(chis.size(), " chi points"));
    const bool near_one = std::any_of(chis.begin(), chis.end(), [](double x) { return std::abs(std::abs(x) - 1.0) < 1e-9; });
    if (near_one) add("sweep", false, "chi = +-1 puts the degeneracy on the manifold");
  } else if (params_ok) {
    chis = {m.chi()};
  }

  if (c.protocol == Protocol::wigner_movie) {
    const WignerSettings& w = c.wigner;
    const double need = (m.kerr > 0.0 && m.pump > 0.0 ? m.alpha0() : 0.0) + 3.0;
    const bool times_ok = !w.times.empty() && std::all_of(w.times.begin(), w.times.end(),
                                                         [](double f) { return f >= 0.0 && f <= 1.0; });
    const bool ok = w.grid.half_width >= need && w.grid.n_points >= 41 && times_ok;
    add("wigner", ok,
        fmt("half_width = ", w.grid.half_width, " (need >= ", need, "), n_points = ", w.grid.n_points,
            " (need >= 41), ", w.times.size(), " snapshot times in [0, 1]", times_ok ? "" : " violated"));
  }

  // Runtime: time a handful of steps on the actual model and scale by the
  // minimum number of passes (n, 2n) per point.
  if (params_ok && steps_ok) {
    try {
      ModelParams mp = m;
      mp.set_chi(chis.empty() ? 0.0 : chis.front());
      const KerrModel model(mp);
      StateVector psi = model.frame().ket0();
      const bool sta_term = c.run.sta && std::abs(m.delta_z - m.omega0) <= 1e-9 * std::abs(m.omega0);
      const int probe = 40;
      const double dt = m.tau / c.run.n_steps;
      const auto t0 = std::chrono::steady_clock::now();
      for (int k = 0; k < probe; ++k) {
        psi = propagate_step(model.total_hamiltonian((k + 0.5) * dt, sta_term), psi, dt);
      }
      const double per_step = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / probe;
      rep.estimated_seconds = per_step * 3.0 * c.run.n_steps * std::max<std::size_t>(1, chis.size());
      add("runtime", true, fmt("estimated >= ", rep.estimated_seconds, " s single-threaded (",
                                std::max<std::size_t>(1, chis.size()), " run(s), 3 passes each)"));
    } catch (const std::exception& e) {
      add("runtime", false, fmt("model construction failed: ", e.what()));
    }
  }
  return rep;
}

}  // namespace kno
