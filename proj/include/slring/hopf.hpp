#pragma once

#include <vector>

#include "slring/spectral.hpp"

namespace slring {

/// The 2N equilibrium eigenvalues {mu + lambda, conj(mu) + lambda} over the
/// coupling-matrix spectrum, sorted by (Re, Im).
std::vector<Complex> equilibrium_spectrum(const RingParams& p);

struct ZeroStability {
  bool stable = false;
  double margin = 0.0;  // -alpha - max Re(spectrum); positive when stable
};
ZeroStability is_zero_stable(const RingParams& p);

enum class ResonanceKind { Resonant, Antiphase, Generic };
const char* resonance_kind_name(ResonanceKind k);

struct ResonanceClass {
  ResonanceKind kind = ResonanceKind::Generic;
  double phase_mismatch = 0.0;  // circular distance in [0, pi] between the
                                // two input phases at the shortcut target
};

/// Phase relation of mode k between the ring input and the shortcut input to
/// the last node: resonant iff k(l-1)/N is an integer (decided in exact
/// integer arithmetic), antiphase when the mismatch is within
/// antiphase_delta of pi.
ResonanceClass resonance_class(int n_osc, int shortcut_from, int k, double antiphase_delta = kPi / 8.0);

/// Right eigenvector of the coupling matrix for root lambda, scaled so the
/// first component is exactly 1: (1, lambda, ..., lambda^{N-1}).
CVector eigenvector_profile(Complex lambda, const RingParams& p, double tol = 1e-8);

/// Right/left eigenvector pair of the 2N-dimensional equilibrium
/// linearization for the eigenvalue mu + lambda, normalized to <w,v> = 1.
struct AdjointPair {
  Eigen::VectorXcd v;  // right eigenvector
  Eigen::VectorXcd w;  // adjoint eigenvector, A^T w = conj(mu + lambda) w
  Complex kappa;       // normalization constant
};
AdjointPair adjoint_pair(Complex lambda, const RingParams& p);

/// Closed-form cubic normal-form inner product <w, C(v,v,vbar)>.
Complex cubic_inner_product(Complex lambda, const RingParams& p);

/// First Lyapunov coefficient Re<w,C>/(2 omega0^2); negative means the Hopf
/// bifurcation at alpha = -Re(lambda) is supercritical.
double first_lyapunov(Complex lambda, const RingParams& p);

/// <w, C(v,v,vbar)> for the ring whose single inhomogeneous link has weight
/// 1 + s: -8(1-(1+s)^2) / (N(1-(1+s)^{2/N})). Continuous limit -8 at s = 0.
double inhom_ring_lyapunov(int n_osc, double s);

struct HopfBranch {
  int index_k = -1;      // wavenumber label (continuation from s = 0)
  Complex eigenvalue;    // coupling-matrix root lambda(s)
  double alpha_crit = 0; // -Re lambda
  double omega_onset = 0;  // beta + Im lambda
  CVector profile;       // eigenvector, first component 1
  double lyapunov_l1 = 0;
  ResonanceClass resonance;
};

/// One branch per coupling-matrix eigenvalue (each conjugate pair of the 2N
/// equilibrium spectrum yields one rotating wave), sorted by alpha_crit
/// ascending. The first entry carries the leading real eigenvalue.
std::vector<HopfBranch> hopf_sequence(const RingParams& p);

}  // namespace slring
