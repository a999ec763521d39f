#pragma once

#include "slring/common.hpp"

namespace slring {

/// Problem instance: a unidirectional ring of n_osc Stuart-Landau oscillators
/// with one extra link of weight shortcut_strength from node shortcut_from
/// into the last node. Indices are 1-based in the public interface.
struct RingParams {
  int n_osc = 0;                   // N >= 3
  int shortcut_from = 1;           // 1 <= l <= N-1 (l = 1 is the inhomogeneous-coupling configuration)
  double shortcut_strength = 0.0;  // s >= 0
  double alpha = 0.0;              // Re(mu), bifurcation parameter
  double beta = 1.0;               // Im(mu) > 0

  Complex mu() const { return Complex(alpha, beta); }

  RingParams with_alpha(double a) const {
    RingParams q = *this;
    q.alpha = a;
    return q;
  }

  /// Throws std::invalid_argument on a malformed instance.
  void validate() const;
};

/// Reduced ring of n_reduced nodes closed by a single weighted link from
/// node 1 into node n (the subsystem that dominates at large shortcut
/// strength).
struct InhomRingParams {
  int n_reduced = 0;    // n >= 2
  double strength = 0;  // s > 0
  double alpha = 0.0;
  double beta = 1.0;

  Complex mu() const { return Complex(alpha, beta); }

  InhomRingParams with_alpha(double a) const {
    InhomRingParams q = *this;
    q.alpha = a;
    return q;
  }

  void validate() const;
};

/// State of the ring plus time; z holds the complex oscillator amplitudes.
struct RingState {
  CVector z;
  double t = 0.0;
};

// Right-hand sides, complex form. All are pure functions.
CVector rhs_full(const CVector& z, const RingParams& p);
CVector rhs_truncated_large_s(const CVector& z, const RingParams& p);
CVector rhs_inhom(const CVector& z, const InhomRingParams& p);

// Canonical real form: x = (Re z_1, Im z_1, ..., Re z_N, Im z_N).
RVector to_real(const CVector& z);
CVector to_complex(const RVector& x);
RVector rhs_full_real(const RVector& x, const RingParams& p);

/// Scale factor of the large-s change of variables, s^{-1/(N-l+1)}.
double large_s_scale(const RingParams& p);

/// y_j = scale^j z_j. Requires s > 0; round-trip with the inverse is the
/// identity to machine precision.
CVector large_s_transform(const CVector& z, const RingParams& p);
CVector large_s_transform_inverse(const CVector& y, const RingParams& p);

}  // namespace slring
