#include "slring/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "slring/hopf.hpp"

namespace slring {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = kB1 - 5179.0 / 57600, kE3 = kB3 - 7571.0 / 16695, kE4 = kB4 - 393.0 / 640,
                 kE5 = kB5 + 92097.0 / 339200, kE6 = kB6 - 187.0 / 2100, kE7 = -1.0 / 40;

double error_norm(const CVector& err, const CVector& y0, const CVector& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = std::abs(err[i]) / scale;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

SimulationTrace integrate_ode(const std::function<CVector(double, const CVector&)>& rhs, const CVector& z0,
                              double t_final, const IntegratorOptions& opts, double beta_hint) {
  if (!(t_final > 0.0)) throw std::invalid_argument("integrate: t_final must be positive");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
    throw std::invalid_argument("integrate: tolerances must be positive");
  if (opts.stride < 1) throw std::invalid_argument("integrate: stride must be >= 1");
  if (!z0.allFinite()) throw std::invalid_argument("integrate: initial state must be finite");

  SimulationTrace trace;
  trace.beta = beta_hint;
  trace.stride_effective = opts.stride;

  double t = 0.0;
  CVector y = z0;
  CVector k1 = rhs(t, y);

  const double d0 = y.cwiseAbs().maxCoeff();
  const double d1 = k1.cwiseAbs().maxCoeff();
  double h = (d0 > 1e-12 && d1 > 1e-12) ? 0.01 * d0 / d1 : 1e-6;
  h = std::min(h, t_final / 10.0);
  h = std::max(h, 1e-12);

  trace.times.push_back(0.0);
  trace.states.push_back(y);
  long since_sample = 0;
  long steps = 0;

  while (t < t_final) {
    if (++steps > opts.max_steps) throw NumericalError("integrate: step budget exhausted");
    bool last = false;
    if (t + h >= t_final) {
      h = t_final - t;
      last = true;
    }

    const CVector k2 = rhs(t + kA21 * h, y + h * (kA21 * k1));
    const CVector k3 = rhs(t + 0.3 * h, y + h * (kA31 * k1 + kA32 * k2));
    const CVector k4 = rhs(t + 0.8 * h, y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    const CVector k5 = rhs(t + 8.0 / 9.0 * h, y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    const CVector k6 = rhs(t + h, y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    const CVector y1 = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const CVector k7 = rhs(t + h, y1);
    const CVector err_vec = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

    if (!y1.allFinite()) {
      std::ostringstream msg;
      msg << "integrate: state became non-finite near t = " << t;
      throw NumericalError(msg.str());
    }
    const double err = error_norm(err_vec, y, y1, opts.atol, opts.rtol);
    const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = last ? t_final : t + h;
      y = y1;
      k1 = k7;  // first-same-as-last
      ++trace.stats.accepted;
      trace.stats.final_step = h;
      if (++since_sample >= trace.stride_effective || t >= t_final) {
        since_sample = 0;
        trace.times.push_back(t);
        trace.states.push_back(y);
        if (trace.times.size() > opts.max_samples) {
          // Decimate in place, keeping endpoints, and sample half as often.
          std::vector<double> ts;
          std::vector<CVector> ys;
          for (std::size_t i = 0; i < trace.times.size(); i += 2) {
            ts.push_back(trace.times[i]);
            ys.push_back(trace.states[i]);
          }
          if (ts.back() != trace.times.back()) {
            ts.push_back(trace.times.back());
            ys.push_back(trace.states.back());
          }
          trace.times.swap(ts);
          trace.states.swap(ys);
          trace.stride_effective *= 2;
        }
      }
    } else {
      ++trace.stats.rejected;
    }
    h *= factor;
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw NumericalError("integrate: step size underflow");
  }
  return trace;
}

SimulationTrace integrate(SystemKind kind, const CVector& z0, const RingParams& p, double t_final,
                          const IntegratorOptions& opts) {
  p.validate();
  std::function<CVector(double, const CVector&)> rhs;
  switch (kind) {
    case SystemKind::Full:
      rhs = [p](double, const CVector& z) { return rhs_full(z, p); };
      break;
    case SystemKind::TruncatedLargeS:
      rhs = [p](double, const CVector& z) { return rhs_truncated_large_s(z, p); };
      break;
    case SystemKind::Inhom:
      throw std::invalid_argument("integrate: use integrate_inhom for the reduced ring");
  }
  return integrate_ode(rhs, z0, t_final, opts, p.beta);
}

SimulationTrace integrate_inhom(const CVector& z0, const InhomRingParams& p, double t_final,
                                const IntegratorOptions& opts) {
  p.validate();
  return integrate_ode([p](double, const CVector& z) { return rhs_inhom(z, p); }, z0, t_final, opts,
                       p.beta);
}

MeasuredOrbit measure_orbit(const SimulationTrace& trace, double transient, double rel_tol) {
  if (trace.times.size() < 8) throw std::invalid_argument("measure_orbit: trace too short");
  const double t_end = trace.times.back();
  if (trace.beta > 0.0) {
    const double period = 2.0 * kPi / trace.beta;
    if (t_end < transient + 20.0 * period)
      throw std::invalid_argument("measure_orbit: need at least 20 estimated periods past the transient");
  } else if (!(transient < t_end)) {
    throw std::invalid_argument("measure_orbit: transient exceeds the trace");
  }

  std::size_t first = 0;
  while (first < trace.times.size() && trace.times[first] < transient) ++first;
  const std::size_t count = trace.times.size() - first;
  if (count < 8) throw std::invalid_argument("measure_orbit: too few tail samples");

  const Eigen::Index n = trace.states.front().size();

  // Tail-averaged amplitudes, and the two-window drift for the convergence flag.
  RVector amp = RVector::Zero(n), amp_w1 = RVector::Zero(n), amp_w2 = RVector::Zero(n);
  const std::size_t half = first + count / 2;
  for (std::size_t i = first; i < trace.times.size(); ++i) {
    const RVector a = trace.states[i].cwiseAbs();
    amp += a;
    (i < half ? amp_w1 : amp_w2) += a;
  }
  amp /= static_cast<double>(count);
  amp_w1 /= static_cast<double>(half - first);
  amp_w2 /= static_cast<double>(trace.times.size() - half);

  MeasuredOrbit out;
  out.amplitude_profile = amp;
  out.transient_discarded = transient;
  const double peak = amp.maxCoeff();
  out.converged = peak > 0.0 && ((amp_w2 - amp_w1).cwiseAbs().maxCoeff() / peak) <= rel_tol;

  // Phase node: first node unless it is silent relative to the loudest one.
  Eigen::Index node = 0;
  if (peak <= 0.0) throw NumericalError("measure_orbit: all nodes silent, phase undefined");
  if (amp[0] < 1e-3 * peak) amp.maxCoeff(&node);

  double phase = std::arg(trace.states[first][node]);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double prev_phase = phase;
  Complex prev = trace.states[first][node];
  for (std::size_t i = first; i < trace.times.size(); ++i) {
    const Complex cur = trace.states[i][node];
    if (std::abs(cur) == 0.0) throw NumericalError("measure_orbit: phase undefined at a tail sample");
    if (i > first) {
      prev_phase += std::arg(cur / prev);
      prev = cur;
    }
    const double x = trace.times[i] - trace.times[first];
    sx += x;
    sy += prev_phase;
    sxx += x * x;
    sxy += x * prev_phase;
  }
  const double m = static_cast<double>(count);
  out.frequency = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

double default_transient(const RingParams& p) {
  const double margin = std::abs(is_zero_stable(p).margin);
  if (margin <= 0.0) return 1e5;
  return std::min(200.0 / margin, 1e5);
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  const Eigen::Index n = trace.states.empty() ? 0 : trace.states.front().size();
  os << "t";
  for (Eigen::Index j = 1; j <= n; ++j) os << ",re_z" << j << ",im_z" << j;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.times[i]);
    os << buf;
    for (Eigen::Index j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", trace.states[i][j].real());
      os << ',' << buf;
      std::snprintf(buf, sizeof buf, "%.17g", trace.states[i][j].imag());
      os << ',' << buf;
    }
    os << "\n";
  }
}

}  // namespace slring
