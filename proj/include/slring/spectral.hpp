#pragma once

#include <vector>

#include "slring/ring.hpp"

namespace slring {

/// chi(lambda) = lambda^N - s lambda^(l-1) - 1, the characteristic polynomial
/// of the coupling matrix. Evaluated on the sparse trinomial directly.
Complex char_poly_eval(Complex lambda, const RingParams& p);
Complex char_poly_derivative(Complex lambda, const RingParams& p);

enum class RootClass {
  UnitCircleModulated,  // weakly perturbed unit-circle root (s <= 1 regime)
  InnerCircle,          // near radius s^{-1/(l-1)} for s > 1
  OuterCircle,          // near radius s^{1/(N-l+1)} for s > 1
  LeadingReal,          // the positive real root of maximal real part
};

const char* root_class_name(RootClass c);

struct SpectrumResult {
  std::vector<Complex> eigenvalues;  // sorted by (Re, Im)
  std::vector<double> residuals;     // |chi(lambda)| / max(1, |lambda|)^N
  std::vector<RootClass> classes;
  std::vector<int> mode_labels;  // wavenumber k carried by continuation from s = 0
  int leading_index = -1;        // position of the LeadingReal root
};

/// All N roots of the characteristic polynomial by Aberth-Ehrlich
/// simultaneous iteration plus per-root Newton polish. Residuals are
/// guaranteed <= tol; throws NumericalError (with the offending estimate)
/// on non-convergence.
SpectrumResult spectrum_exact(const RingParams& p, double tol = 1e-12);

/// First-order small-s root approximations, k = 0..N-1:
/// gamma_k + (s/N) gamma_k^l.
std::vector<Complex> spectrum_small_s(const RingParams& p);

struct LargeSRoots {
  std::vector<Complex> inner;  // l-1 roots
  std::vector<Complex> outer;  // N-l+1 roots
  std::vector<Complex> all() const;
};

/// Leading-order large-s families: inner roots (1/s)^{1/(l-1)} e^{i pi/(l-1)}
/// gamma_{l-1,k}, outer roots s^{1/(N-l+1)} gamma_{N-l+1,k}.
/// Requires s > 1 and l >= 2.
LargeSRoots spectrum_large_s_leading(const RingParams& p);

/// Same families with the first-order corrections: the inner roots gain
/// lambda0^{N-l+2} tau / (l-1), the outer roots gain the Newton step
/// 1/chi'(lambda0) (equivalently tau / dF, with F the tau-scaled polynomial).
LargeSRoots spectrum_large_s(const RingParams& p);

/// The unique real root >= 1 of chi; equals max Re over the exact spectrum.
/// Bracketed on [1, s+2], then polished by Newton.
double leading_real_eigenvalue(const RingParams& p);

struct ReducedSpectrum {
  int zero_multiplicity = 0;      // l-1
  std::vector<Complex> nonzero;   // the (N-l+1)-th roots of s
};

/// Spectrum of the reduced coupling matrix (ring with the wrap link from
/// node 1 to node N erased). Requires s > 0 and l >= 2.
ReducedSpectrum spectrum_reduced(const RingParams& p);

/// Dense coupling matrix of the perturbed ring (used by adjoint checks and
/// as the raw material for the test suite's eigensolver oracle).
RMatrix coupling_matrix(const RingParams& p);
/// Same with the node-1 -> node-N wrap link removed.
RMatrix reduced_coupling_matrix(const RingParams& p);

/// Exact roots indexed by wavenumber label k (continuation from s = 0, where
/// root k is the k-th root of unity). Labels are stable across s sweeps.
std::vector<Complex> mode_eigenvalues(const RingParams& p, double tol = 1e-12);

}  // namespace slring
