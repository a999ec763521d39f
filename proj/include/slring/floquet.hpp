#pragma once

#include <optional>
#include <vector>

#include "slring/orbits.hpp"
#include "slring/simulate.hpp"

namespace slring {

enum class FloquetMethod { ApproxSmallS, ApproxLargeS, ExactJacobian, Monodromy };
const char* floquet_method_name(FloquetMethod m);

/// First-order variational matrix of the branch-k wave near onset, built
/// from the unperturbed mode lambda0 = gamma_{N,k} and its shortcut-dressed
/// value lambda~ = lambda0 + (s/N) lambda0^l. The shortcut block enters the
/// last row as +s M(lambda0^l) on column l and -s M(lambda0^l) on column 1.
RMatrix approx_matrix_small_s(const RingParams& p, int k, double eps);

/// First-order variational matrix of the reduced ring's branch-k wave,
/// valid for any s > 0, using the leading-order profile moduli.
RMatrix approx_matrix_large_s(const InhomRingParams& p, int k, double eps);

/// Rotating-frame linearization at an exact rotating wave; its eigenvalues
/// are the exact Floquet exponents. Throws when the orbit residual is stale.
RMatrix exact_jacobian(const RelativeEquilibrium& orbit, const RingParams& p);
RMatrix exact_jacobian(const RelativeEquilibrium& orbit, const InhomRingParams& p);

struct StabilityAssessment {
  std::vector<Complex> exponents;      // sorted by (Re, Im)
  int trivial_index = -1;              // the (approximately) zero exponent
  double trivial_abs = 0.0;
  double max_nontrivial_re = 0.0;
  bool stable = false;                 // max_nontrivial_re < -margin_tol
  FloquetMethod method = FloquetMethod::ExactJacobian;
};

struct AssessOptions {
  double zero_tol = 1e-6;     // exact methods must show a trivial exponent this small
  double margin_tol = 1e-9;
  bool validate_pairs = true;  // check |A x - lambda x| <= 1e-8 |A| per pair
};

/// Eigenvalues of an assembled variational matrix with the trivial exponent
/// identified as the one of smallest modulus. For the exact methods the
/// trivial exponent must lie within zero_tol of zero.
StabilityAssessment assess_matrix(const RMatrix& a, FloquetMethod method, const AssessOptions& opts = {});

StabilityAssessment assess_orbit(const RelativeEquilibrium& orbit, const RingParams& p,
                                 const AssessOptions& opts = {});
StabilityAssessment assess_orbit(const RelativeEquilibrium& orbit, const InhomRingParams& p,
                                 const AssessOptions& opts = {});

/// Floquet multipliers from one period of the time-dependent variational
/// equation around the periodic orbit (lab frame). For a rotating wave the
/// multipliers equal exp(T * exponent) with T = 2 pi / omega.
std::vector<Complex> monodromy_multipliers(const RelativeEquilibrium& orbit, const RingParams& p,
                                           const IntegratorOptions& opts = {});

/// Stabilization line of the unperturbed ring in the (alpha, |Z|^2/N) plane.
double eckhaus_line_s0(double alpha);

enum class ThresholdStatus { Stabilizes, StableFromOnset, NeverStabilizes, ContinuationFailed };
const char* threshold_status_name(ThresholdStatus s);

struct EckhausPoint {
  int branch_k = -1;
  ThresholdStatus status = ThresholdStatus::ContinuationFailed;
  double alpha_crit = 0.0;
  double omega_onset = 0.0;
  double alpha_star = 0.0;        // valid when status != NeverStabilizes/Failed
  double omega_star = 0.0;        // orbit frequency at the threshold
  double amplitude_at_star = 0.0; // |Z|^2 / N at the threshold
  FloquetMethod method = FloquetMethod::ExactJacobian;
  std::string note;
};

struct ThresholdOptions {
  FloquetMethod method = FloquetMethod::ExactJacobian;
  double alpha_lo_offset = 1e-2;  // first probe above onset
  double alpha_hi = 8.0;          // scan ceiling
  double scan_step = 0.1;
  double re_tol = 1e-8;           // |max nontrivial Re| at the reported threshold
};

/// Stabilization point of branch k: scans max_nontrivial_re upward in alpha
/// until the sign changes, then refines by bisection/secant until the
/// margin is within re_tol of zero. A branch already stable at the first
/// probe reports its onset; a branch that stays unstable up to alpha_hi
/// reports NeverStabilizes.
EckhausPoint stabilization_threshold(const RingParams& p, int k, const ThresholdOptions& opts = {});

/// Threshold per branch (parallel over branches, output sorted by k).
/// Per-branch failures are recorded in the row, not thrown.
std::vector<EckhausPoint> modulated_eckhaus_table(const RingParams& p, const std::vector<int>& branches,
                                                  const ThresholdOptions& opts = {});

struct ScanSample {
  double alpha = 0.0;
  bool exists = false;
  bool stable = false;
  double max_nontrivial_re = 0.0;
  double omega = 0.0;
  double amplitude_sq = 0.0;  // |Z|^2 / N
};

struct BranchScan {
  int branch_k = -1;
  RootClass root_class = RootClass::UnitCircleModulated;
  double alpha_crit = 0.0;
  double omega_onset = 0.0;
  std::vector<ScanSample> samples;
};

/// Sampled stability along every branch over alpha in
/// [alpha_crit + delta, max(span_factor |alpha_crit|, alpha_crit + 0.5)],
/// exact Floquet verdict per sample. This is the bifurcation-diagram data
/// behind the large-s figures.
std::vector<BranchScan> stability_scan(const RingParams& p, int samples_per_branch = 5,
                                       double span_factor = 3.0);

}  // namespace slring
