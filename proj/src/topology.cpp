#include "knotopo/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace kno {

const char* to_string(ChernMethod m) noexcept {
  return m == ChernMethod::linear_response ? "linear_response" : "sta_polar";
}

const char* to_string(SweepProtocol p) noexcept {
  return p == SweepProtocol::linear_response ? "linear_response" : "sta";
}

namespace {

void sanity_band(ChernResult& r) {
  if (r.c1 < -0.2 || r.c1 > 1.2) {
    std::ostringstream os;
    os << "c1 = " << r.c1 << " outside the sanity band [-0.2, 1.2]";
    r.warnings.push_back(os.str());
  }
}

}  // namespace

CurvatureSeries berry_curvature(const Trajectory& traj, const ModelParams& p) {
  if (p.phi != 0.0) throw Error(ErrorCode::invalid_argument, "berry_curvature assumes phi = 0");
  const RampSchedule ramp(p.schedule, p.tau);
  CurvatureSeries out;
  out.reserve(traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    const double v = ramp.theta_dot(s.t);
    const double sin_theta = std::sin(s.theta);
    double b = 0.0;
    if (std::abs(v) < 1e-12 * (std::numbers::pi / p.tau)) {
      // The numerator vanishes with the velocity only at the ramp endpoints.
      if (std::abs(sin_theta) > 1e-6) {
        std::ostringstream os;
        os << "berry_curvature: zero ramp velocity at interior sample " << i << " (t = " << s.t << ")";
        throw Error(ErrorCode::invalid_argument, os.str());
      }
    } else {
      b = -p.omega0 * sin_theta * s.sy / (2.0 * v);
    }
    out.push_back({s.theta, b});
  }
  return out;
}

ChernResult chern_linear_response(const CurvatureSeries& series) {
  if (series.size() < 10) {
    throw Error(ErrorCode::insufficient_sampling, "chern_linear_response needs at least 10 points");
  }
  double c1 = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double h = series[i].theta - series[i - 1].theta;
    c1 += 0.5 * h * (series[i].b_theta + series[i - 1].b_theta);
  }
  ChernResult r;
  r.c1 = c1;
  r.method = ChernMethod::linear_response;
  sanity_band(r);
  return r;
}

std::vector<ThetaQPoint> theta_q_series(const Trajectory& traj) {
  std::vector<ThetaQPoint> out;
  out.reserve(traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    const double len = std::sqrt(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz);
    if (len < 1e-6) {
      std::ostringstream os;
      os << "theta_q: vanishing Bloch length at sample " << i << " (t = " << s.t << ")";
      throw Error(ErrorCode::degenerate_readout, os.str());
    }
    out.push_back({s.t, s.theta, std::acos(std::clamp(s.sz / len, -1.0, 1.0))});
  }
  return out;
}

ChernResult chern_sta(const std::vector<ThetaQPoint>& series) {
  if (series.size() < 2) {
    throw Error(ErrorCode::insufficient_sampling, "chern_sta needs at least 2 points");
  }
  const double first = series.front().theta_q;
  const double last = series.back().theta_q;
  double quad = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double a = series[i - 1].theta_q;
    const double b = series[i].theta_q;
    quad += 0.5 * (std::sin(a) + std::sin(b)) * (b - a);
  }
  ChernResult r;
  r.method = ChernMethod::sta_polar;
  r.integral_closed_form = 0.5 * (std::cos(first) - std::cos(last));
  r.integral_quadrature = 0.5 * quad;
  r.c1 = r.integral_closed_form + 0.5 * (1.0 - std::cos(first));
  if (std::abs(r.integral_closed_form - r.integral_quadrature) > 0.01) {
    std::ostringstream os;
    os << "non-monotone or coarse theta_q sampling: closed form " << r.integral_closed_form
       << " vs quadrature " << r.integral_quadrature;
    r.warnings.push_back(os.str());
  }
  sanity_band(r);
  return r;
}

std::vector<SweepPoint> sweep_chi(const ModelParams& base, std::span<const double> chis,
                                  const SweepOptions& opt) {
  std::vector<double> sorted(chis.begin(), chis.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepPoint> points(sorted.size());

  auto evaluate = [&](std::size_t i) {
    SweepPoint& pt = points[i];
    pt.chi = sorted[i];
    try {
      ModelParams p = base;
      p.set_chi(sorted[i]);
      const KerrModel model(p);
      RunOptions ro = opt.run;
      ro.sta = opt.protocol == SweepProtocol::sta;
      const Trajectory traj = run(model, ro);
      ChernResult r = opt.protocol == SweepProtocol::sta
                          ? chern_sta(theta_q_series(traj))
                          : chern_linear_response(berry_curvature(traj, p));
      r.chi = sorted[i];
      r.initial = ro.initial;
      pt.converged = traj.converged;
      pt.n_steps = traj.n_steps;
      for (const Sample& s : traj.samples) {
        pt.min_pop = std::min(pt.min_pop, s.pop);
        pt.max_norm_drift = std::max(pt.max_norm_drift, std::abs(s.norm - 1.0));
      }
      pt.result = std::move(r);
    } catch (const std::exception& e) {
      pt.status = e.what();
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(points.size(), opt.jobs > 0 ? static_cast<std::size_t>(opt.jobs) : hw);
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) evaluate(i);
    return points;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) evaluate(i);
    });
  }
  pool.clear();
  return points;
}

}  // namespace kno
