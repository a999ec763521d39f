#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slring/hopf.hpp"
#include "slring/ring.hpp"

namespace slring {

/// Rotating-wave problem in normal form: n nodes, each row j < n couples to
/// node j+1 with weight 1; the last row couples back through tail_links.
/// Covers both the full ring (links (1,1) and (l,s)) and the reduced ring
/// (link (1,s)).
struct RotatingWaveSystem {
  int n = 0;
  Complex mu;
  std::vector<std::pair<int, double>> tail_links;  // (0-based column, weight)

  CVector residual_vector(const CVector& v, double omega) const;
  double residual_norm(const CVector& v, double omega) const;
};

RotatingWaveSystem rotating_wave_system(const RingParams& p);
RotatingWaveSystem rotating_wave_system(const InhomRingParams& p);

/// An exact rotating wave z(t) = e^{i omega t} profile. The profile carries
/// the physical amplitude (no separate sqrt(eps) scale) and the gauge
/// Im(profile[0]) = 0, Re(profile[0]) >= 0.
struct RelativeEquilibrium {
  CVector profile;
  double omega = 0.0;
  double residual = 0.0;
  int branch_k = -1;

  double mean_square_amplitude() const;  // |Z|^2 / N
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 50;
  int max_step_halvings = 8;
};

/// Damped Newton on the 2n+1 real unknowns (Re v, Im v, omega) with the
/// phase condition Im(v_1) = 0 appended. Steps that slash the profile norm
/// are rejected so the iteration cannot slide into the trivial solution.
/// Returns nothing on failure (non-convergence, collapse, singular system).
std::optional<RelativeEquilibrium> try_solve_rotating_wave(const RotatingWaveSystem& sys,
                                                           const RelativeEquilibrium& guess,
                                                           const NewtonOptions& opts = {});

/// Throwing wrappers with the spec'd error behavior.
RelativeEquilibrium solve_relative_equilibrium(const RingParams& p, const RelativeEquilibrium& guess,
                                               double tol = 1e-12);
RelativeEquilibrium solve_relative_equilibrium(const InhomRingParams& p, const RelativeEquilibrium& guess,
                                               double tol = 1e-12);

/// Exact plane wave of the unperturbed ring: v_j = a gamma^{j-1} with
/// a^2 = alpha + cos(2 pi k / N), omega = beta + sin(2 pi k / N).
RelativeEquilibrium plane_wave_s0(const RingParams& p, int k);

/// First-order expansion of the branch-k wave for small shortcut strength.
/// Profile is normalized to v_1 = 1; the physical orbit is
/// sqrt(eps) e^{i omega t} V with eps = alpha - alpha_onset.
struct SmallSOrbit {
  double omega = 0.0;
  CVector profile;
  double alpha_onset = 0.0;  // first-order critical alpha of the branch
};
SmallSOrbit orbit_small_s(const RingParams& p, int k, double eps);

/// Leading-order profile of the reduced ring's branch-k wave, valid for any
/// s > 0. |v_j|^2 = n s^{2(j-1)/n} (s^{2/n}-1)/(s^2-1), with the s -> 1
/// limit handled analytically; the first frequency correction vanishes.
struct LargeSProfile {
  int n = 0;
  RVector v0_sq;          // per-node |v_j^0|^2
  double omega0 = 0.0;    // beta + Im lambda_k
  double alpha0 = 0.0;    // -s^{1/n} cos(2 pi k / n)
  double alpha = 0.0;     // alpha0 + eps
  double v1_sq0 = 0.0;    // |v_1^0|^2
};
LargeSProfile orbit_large_s(const InhomRingParams& p, int k, double eps = 0.0);

/// Newton seed for the branch-k wave at distance eps above onset. The
/// amplitude is calibrated from the cubic normal form so the seed lands in
/// the orbit's basin even when the saturation is weak (large s).
RelativeEquilibrium seed_from_branch(const RingParams& p, int k, double eps);
RelativeEquilibrium seed_from_branch(const InhomRingParams& p, int k, double eps);

struct ContinuationRun {
  std::vector<RelativeEquilibrium> orbits;
  bool completed = false;
  std::string stop_reason;
};

/// Natural-parameter continuation of branch k over [alpha_begin, alpha_end],
/// reusing each solution as the next Newton seed. Stops and reports on
/// failure; throws if even the first point cannot be solved.
ContinuationRun continue_branch(const RingParams& p, int branch_k, double alpha_begin, double alpha_end,
                                double step);

/// Caching continuation helper: hands out the branch-k orbit at arbitrary
/// alpha, marching from the nearest previously computed point with adaptive
/// steps (smaller near onset, halved on Newton failure).
class BranchContinuator {
 public:
  BranchContinuator(const RingParams& p, int branch_k);
  BranchContinuator(const RingParams& p, int branch_k, Complex lambda);

  double alpha_crit() const { return alpha_crit_; }
  Complex eigenvalue() const { return lambda_; }
  /// Throws NumericalError when continuation stalls (fold or loss of
  /// existence).
  RelativeEquilibrium at(double alpha);

 private:
  RingParams base_;
  int k_;
  Complex lambda_;
  double alpha_crit_;
  std::map<double, RelativeEquilibrium> cache_;
};

}  // namespace slring
