#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "slring/ring.hpp"

namespace slring {

enum class SystemKind { Full, TruncatedLargeS, Inhom };

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  int stride = 1;                     // record every stride-th accepted step
  std::size_t max_samples = 200000;   // decimate (stride doubling) beyond this
  long max_steps = 50000000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  double final_step = 0.0;
};

struct SimulationTrace {
  std::vector<double> times;       // strictly increasing, ends at t_final
  std::vector<CVector> states;
  IntegratorStats stats;
  int stride_effective = 1;
  double beta = 0.0;               // carried along for period estimates
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) on a generic complex
/// vector field. Local error is controlled against atol + rtol * |state|
/// componentwise; throws NumericalError on blow-up or step underflow.
SimulationTrace integrate_ode(const std::function<CVector(double, const CVector&)>& rhs, const CVector& z0,
                              double t_final, const IntegratorOptions& opts, double beta_hint = 0.0);

SimulationTrace integrate(SystemKind kind, const CVector& z0, const RingParams& p, double t_final,
                          const IntegratorOptions& opts = {});
SimulationTrace integrate_inhom(const CVector& z0, const InhomRingParams& p, double t_final,
                                const IntegratorOptions& opts = {});

struct MeasuredOrbit {
  RVector amplitude_profile;     // per-node mean |z_j| over the tail
  double frequency = 0.0;        // least-squares slope of the unwrapped phase
  double transient_discarded = 0.0;
  bool converged = false;        // amplitude drift between the two tail halves <= rel_tol
};

/// Extracts frequency and amplitude profile from the tail of a trace. The
/// phase node is z_1 unless it stays near zero, in which case the
/// largest-amplitude node is used; throws NumericalError when no node
/// carries a usable phase.
MeasuredOrbit measure_orbit(const SimulationTrace& trace, double transient, double rel_tol = 1e-3);

/// Default transient: 200 / |equilibrium margin|, capped at 1e5 time units.
double default_transient(const RingParams& p);

/// CSV export, header t,re_z1,im_z1,...,re_zN,im_zN.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace);

}  // namespace slring
