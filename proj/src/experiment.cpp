#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "knotopo/experiment.hpp"
#include "knotopo/version.hpp"

namespace kno {

using json = nlohmann::ordered_json;

namespace {

using Cell = std::variant<double, long long, std::string>;

struct Column {
  std::string name;
  std::string unit;
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

struct OutputFile {
  std::string name;
  std::string content;
};

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << t.columns[i].name << " [" << t.columns[i].unit << "]";
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      std::visit([&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          os << format_double(v);
        } else if constexpr (std::is_same_v<V, std::string>) {
          // Quote anything that would break the row.
          if (v.find_first_of(",\"\n") == std::string::npos) {
            os << v;
          } else {
            os << '"';
            for (char ch : v) os << (ch == '"' ? "\"\"" : std::string(1, ch));
            os << '"';
          }
        } else {
          os << v;
        }
      }, row[i]);
    }
    os << "\n";
  }
  return os.str();
}

json cell_json(const Cell& c) {
  return std::visit([](const auto& v) -> json {
    using V = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<V, double>) {
      if (!std::isfinite(v)) return nullptr;
    }
    return v;
  }, c);
}

std::string to_json_table(const Table& t) {
  json cols = json::array();
  for (const Column& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  return json{{"columns", cols}, {"rows", rows}}.dump(1) + "\n";
}

class Outputs {
 public:
  explicit Outputs(OutputFormat fmt) : fmt_(fmt) {}

  void table(const std::string& stem, const Table& t) {
    if (fmt_ == OutputFormat::csv) {
      files_.push_back({stem + ".csv", to_csv(t)});
    } else {
      files_.push_back({stem + ".json", to_json_table(t)});
    }
  }

  void document(const std::string& name, const json& doc) { files_.push_back({name, doc.dump(2) + "\n"}); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const OutputFile& f : files_) out.push_back(f.name);
    return out;
  }

  void write(const std::filesystem::path& dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create output directory " + dir.string() + ": " + ec.message());
    for (const OutputFile& f : files_) {
      const auto path = dir / f.name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << f.content;
      out.close();
      if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    }
  }

 private:
  OutputFormat fmt_;
  std::vector<OutputFile> files_;
};

RunOptions run_options(const ExperimentConfig& c) {
  RunOptions ro;
  ro.initial = c.run.initial;
  ro.sta = c.run.sta;
  ro.n_steps = c.run.n_steps;
  ro.n_samples = c.run.n_samples;
  ro.max_refinements = c.run.max_refinements;
  ro.convergence_tol = c.run.convergence_tol;
  return ro;
}

Table trajectory_table(const Trajectory& traj) {
  Table t{{{"t", "us"}, {"theta", "rad"}, {"sx", "1"}, {"sy", "1"}, {"sz", "1"}, {"pop", "1"}, {"norm", "1"}}, {}};
  for (const Sample& s : traj.samples) t.rows.push_back({s.t, s.theta, s.sx, s.sy, s.sz, s.pop, s.norm});
  return t;
}

Table curvature_table(const CurvatureSeries& series) {
  Table t{{{"theta", "rad"}, {"b_theta", "1/rad"}}, {}};
  for (const CurvaturePoint& p : series) t.rows.push_back({p.theta, p.b_theta});
  return t;
}

Table theta_q_table(const std::vector<ThetaQPoint>& series) {
  Table t{{{"t", "us"}, {"theta", "rad"}, {"theta_q", "rad"}}, {}};
  for (const ThetaQPoint& p : series) t.rows.push_back({p.t, p.theta, p.theta_q});
  return t;
}

Table wigner_table(const WignerGrid& g) {
  Table t{{{"re_alpha", "1"}, {"im_alpha", "1"}, {"w", "1"}, {"low_confidence", "bool"}}, {}};
  const int n = static_cast<int>(g.axis.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      t.rows.push_back({g.axis[c], g.axis[r], g.values(r, c), static_cast<long long>(g.low_confidence(r, c))});
    }
  }
  return t;
}

// Run-quality metadata shared by chern.json and the manifest.
json run_summary(const Trajectory& traj, const ModelParams& p) {
  double min_pop = 1.0;
  double drift = 0.0;
  for (const Sample& s : traj.samples) {
    min_pop = std::min(min_pop, s.pop);
    drift = std::max(drift, std::abs(s.norm - 1.0));
  }
  json j = {{"initial", to_string(traj.initial)},
            {"sta", traj.sta},
            {"converged", traj.converged},
            {"n_steps", traj.n_steps},
            {"refinement_delta", traj.refinement_delta},
            {"min_pop", min_pop},
            {"max_norm_drift", drift},
            {"max_edge_population", traj.max_edge_population}};
  try {
    j["min_eigenstate_fidelity"] = instantaneous_eigenstate_fidelity(traj, p).minimum;
  } catch (const Error&) {
    j["min_eigenstate_fidelity"] = nullptr;
  }
  return j;
}

std::string snapshot_stem(double fraction) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "wigner_t" << std::fixed << std::setprecision(2) << fraction;
  return os.str();
}

}  // namespace

std::string resolve_output_dir(const ExperimentConfig& c) {
  if (!c.output.dir.empty()) return c.output.dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "out";
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  if (c.protocol == Protocol::sweep && c.sweep.chi.empty()) {
    throw Error(ErrorCode::usage, "sweep: empty chi list");
  }
  c.model.validate();

  ExperimentResult res;
  res.output_dir = resolve_output_dir(c);
  Outputs out(c.output.format);
  json results;
  const RunOptions ro = run_options(c);

  auto warn_convergence = [&](const Trajectory& traj) {
    if (!traj.converged) {
      std::ostringstream os;
      os << "not converged after " << c.run.max_refinements << " step doublings (last change "
         << traj.refinement_delta << ", tolerance " << c.run.convergence_tol << ")";
      res.warnings.push_back(os.str());
    }
  };

  switch (c.protocol) {
    case Protocol::linear_response:
    case Protocol::sta: {
      const KerrModel model(c.model);
      const Trajectory traj = run(model, ro);
      warn_convergence(traj);
      out.table("trajectory", trajectory_table(traj));
      ChernResult chern;
      json extra = json::object();
      if (c.protocol == Protocol::linear_response) {
        const CurvatureSeries curv = berry_curvature(traj, c.model);
        out.table("curvature", curvature_table(curv));
        chern = chern_linear_response(curv);
      } else {
        const auto tq = theta_q_series(traj);
        out.table("theta_q", theta_q_table(tq));
        chern = chern_sta(tq);
        extra = {{"integral_closed_form", chern.integral_closed_form},
                 {"integral_quadrature", chern.integral_quadrature},
                 {"theta_q_initial", tq.front().theta_q},
                 {"theta_q_final", tq.back().theta_q}};
      }
      chern.chi = c.model.chi();
      chern.initial = c.run.initial;
      res.c1 = chern.c1;
      res.warnings.insert(res.warnings.end(), chern.warnings.begin(), chern.warnings.end());
      json doc = {{"c1", chern.c1},
                  {"method", to_string(chern.method)},
                  {"chi", chern.chi},
                  {"stabilizer_ratio", c.model.stabilizer_ratio()},
                  {"convergence", run_summary(traj, c.model)},
                  {"warnings", res.warnings},
                  {"units", {{"c1", "1"}, {"chi", "1"}, {"theta_q", "rad"}}}};
      doc.update(extra);
      out.document("chern.json", doc);
      results = {{"c1", chern.c1}, {"converged", traj.converged}, {"n_steps", traj.n_steps}};
      break;
    }
    case Protocol::sweep: {
      SweepOptions so;
      so.protocol = c.sweep.protocol;
      so.run = ro;
      so.jobs = c.jobs;
      const auto points = sweep_chi(c.model, c.sweep.chi, so);
      Table t{{{"chi", "1"}, {"c1", "1"}, {"status", "text"}, {"converged", "bool"}, {"n_steps", "1"},
               {"min_pop", "1"}, {"max_norm_drift", "1"}},
              {}};
      json summary = json::array();
      for (const SweepPoint& p : points) {
        const double c1 = p.result ? p.result->c1 : std::nan("");
        t.rows.push_back({p.chi, c1, p.status, static_cast<long long>(p.converged),
                          static_cast<long long>(p.n_steps), p.min_pop, p.max_norm_drift});
        summary.push_back({{"chi", p.chi}, {"c1", p.result ? json(c1) : json(nullptr)}, {"status", p.status}});
        if (p.status != "ok") res.warnings.push_back("chi = " + format_double(p.chi) + ": " + p.status);
        if (p.result) {
          for (const std::string& w : p.result->warnings) {
            res.warnings.push_back("chi = " + format_double(p.chi) + ": " + w);
          }
        }
        if (p.status == "ok" && !p.converged) {
          res.warnings.push_back("chi = " + format_double(p.chi) + ": not converged");
        }
      }
      out.table("sweep", t);
      results = {{"points", summary}};
      break;
    }
    case Protocol::wigner_movie: {
      const KerrModel model(c.model);
      RunOptions wro = ro;
      wro.snapshot_fractions = c.wigner.times;
      const Trajectory traj = run(model, wro);
      warn_convergence(traj);
      out.table("trajectory", trajectory_table(traj));
      json snaps = json::array();
      for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const Snapshot& s = traj.snapshots[i];
        const WignerGrid g = wigner(s.state, c.wigner.grid, c.wigner.leakage_threshold);
        const std::string stem = snapshot_stem(c.wigner.times[i]);
        out.table(stem, wigner_table(g));
        snaps.push_back({{"file", stem},
                         {"t", s.t},
                         {"w_origin", wigner_at(s.state, 0.0)},
                         {"integrated_norm", g.integrated_norm()},
                         {"low_confidence_cells", g.low_confidence_count()},
                         {"fidelity_ket0", fidelity(s.state, model.frame().ket0())},
                         {"fidelity_ket1", fidelity(s.state, model.frame().ket1())}});
        if (g.low_confidence_count() > 0) {
          res.warnings.push_back(stem + ": " + std::to_string(g.low_confidence_count()) + " low-confidence cells");
        }
      }
      out.document("snapshots.json", {{"snapshots", snaps}, {"convergence", run_summary(traj, c.model)},
                                      {"units", {{"t", "us"}, {"w", "1"}}}});
      results = {{"snapshots", snaps.size()}, {"converged", traj.converged}, {"n_steps", traj.n_steps}};
      break;
    }
  }

  json modules = json::object();
  for (const char* m : {"fock", "logical", "model", "dynamics", "topology", "twolevel", "wigner", "cli"}) {
    modules[m] = kVersion;
  }
  json derived = {{"alpha0", c.model.alpha0()},
                  {"chi", c.model.chi()},
                  {"stabilizer_ratio", c.model.stabilizer_ratio()}};
  res.files = out.names();
  res.files.push_back("run-manifest.json");
  out.document("run-manifest.json", {{"knotopo_version", kVersion},
                                     {"modules", modules},
                                     {"config", json::parse(to_json(c))},
                                     {"derived", derived},
                                     {"output_dir", res.output_dir},
                                     {"files", res.files},
                                     {"results", results},
                                     {"warnings", res.warnings}});
  out.write(res.output_dir);
  return res;
}

}  // namespace kno
