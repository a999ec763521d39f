#include "slring/hopf.hpp"

#include <algorithm>
#include <cmath>

namespace slring {

std::vector<Complex> equilibrium_spectrum(const RingParams& p) {
  const SpectrumResult sp = spectrum_exact(p);
  std::vector<Complex> out;
  out.reserve(2 * sp.eigenvalues.size());
  const Complex mu = p.mu();
  for (const Complex& lam : sp.eigenvalues) {
    out.push_back(mu + lam);
    out.push_back(std::conj(mu) + lam);
  }
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

ZeroStability is_zero_stable(const RingParams& p) {
  // The leading real root maximizes Re over the coupling spectrum, so the
  // equilibrium margin reduces to -alpha - rho0.
  const double rho0 = leading_real_eigenvalue(p);
  ZeroStability out;
  out.margin = -p.alpha - rho0;
  out.stable = out.margin > 0.0;
  return out;
}

const char* resonance_kind_name(ResonanceKind k) {
  switch (k) {
    case ResonanceKind::Resonant: return "resonant";
    case ResonanceKind::Antiphase: return "antiphase";
    case ResonanceKind::Generic: return "generic";
  }
  return "?";
}

ResonanceClass resonance_class(int n_osc, int shortcut_from, int k, double antiphase_delta) {
  if (n_osc < 3 || shortcut_from < 1 || k < 0 || k >= n_osc)
    throw std::invalid_argument("resonance_class: bad arguments");
  // Reduce k(l-1) mod N in integers so exact resonance is decided exactly.
  const long long r = (static_cast<long long>(k) * (shortcut_from - 1)) % n_osc;
  const long long d = std::min(r, n_osc - r);
  ResonanceClass out;
  out.phase_mismatch = 2.0 * kPi * static_cast<double>(d) / static_cast<double>(n_osc);
  if (r == 0)
    out.kind = ResonanceKind::Resonant;
  else if (out.phase_mismatch >= kPi - antiphase_delta)
    out.kind = ResonanceKind::Antiphase;
  else
    out.kind = ResonanceKind::Generic;
  return out;
}

CVector eigenvector_profile(Complex lambda, const RingParams& p, double tol) {
  p.validate();
  const double res =
      std::abs(char_poly_eval(lambda, p)) / std::pow(std::max(1.0, std::abs(lambda)), p.n_osc);
  if (!(res <= tol))
    throw std::invalid_argument("eigenvector_profile: lambda is not a root of the characteristic polynomial");
  CVector b(p.n_osc);
  Complex f(1.0, 0.0);
  for (int j = 0; j < p.n_osc; ++j) {
    b[j] = f;
    f *= lambda;
  }
  return b;
}

AdjointPair adjoint_pair(Complex lambda, const RingParams& p) {
  p.validate();
  const int n = p.n_osc;
  const int ell = p.shortcut_from;
  const Complex lb = std::conj(lambda);
  const Complex lam_n = cpow_int(lambda, n);

  AdjointPair out;
  out.kappa = 2.0 * cpow_int(lambda, ell - 1) *
              (static_cast<double>(ell - 1) + static_cast<double>(n - ell + 1) * lam_n);
  if (std::abs(out.kappa) < 1e-12 * (1.0 + std::abs(lam_n) * n))
    throw NumericalError("adjoint_pair: degenerate normalization (kappa ~ 0)");

  // u_j = conj(lambda)^{l-j} for j = 1..l-1, conj(lambda)^{N+l-j} for j = l..N.
  Eigen::VectorXcd u(n);
  for (int j = 1; j <= n; ++j) u[j - 1] = cpow_int(lb, j < ell ? ell - j : n + ell - j);

  const Complex e0(0.0, 1.0), e1(1.0, 0.0);
  out.v.resize(2 * n);
  out.w.resize(2 * n);
  Complex bj(1.0, 0.0);
  const Complex inv_kappa_bar = 1.0 / std::conj(out.kappa);
  for (int j = 0; j < n; ++j) {
    out.v[2 * j] = bj * e0;
    out.v[2 * j + 1] = bj * e1;
    out.w[2 * j] = inv_kappa_bar * u[j] * e0;
    out.w[2 * j + 1] = inv_kappa_bar * u[j] * e1;
    bj *= lambda;
  }
  return out;
}

Complex cubic_inner_product(Complex lambda, const RingParams& p) {
  p.validate();
  const int n = p.n_osc;
  const int ell = p.shortcut_from;
  const double mod2 = std::norm(lambda);
  double sum_head = 0.0, sum_tail = 0.0;
  double pw = 1.0;
  for (int j = 1; j <= n; ++j) {
    (j < ell ? sum_head : sum_tail) += pw;
    pw *= mod2;
  }
  const Complex lam_n = cpow_int(lambda, n);
  const Complex denom = static_cast<double>(ell - 1) + static_cast<double>(n - ell + 1) * lam_n;
  if (std::abs(denom) < 1e-12 * n) throw NumericalError("cubic_inner_product: degenerate denominator");
  return -8.0 * (sum_head + lam_n * sum_tail) / denom;
}

double first_lyapunov(Complex lambda, const RingParams& p) {
  const double omega0 = p.beta + lambda.imag();
  if (std::abs(omega0) < 1e-12)
    throw NumericalError("first_lyapunov: onset frequency vanishes (resonance-degenerate)");
  return cubic_inner_product(lambda, p).real() / (2.0 * omega0 * omega0);
}

double inhom_ring_lyapunov(int n_osc, double s) {
  if (n_osc < 2) throw std::invalid_argument("inhom_ring_lyapunov: need at least 2 nodes");
  if (!(s >= 0.0)) throw std::invalid_argument("inhom_ring_lyapunov: s must be nonnegative");
  if (s == 0.0) return -8.0;  // continuous limit of the homogeneous ring
  // -8 (1-(1+s)^2) / (N (1-(1+s)^{2/N})), written with expm1 for stability
  // near s = 0.
  const double num = 8.0 * s * (s + 2.0);
  const double den = -static_cast<double>(n_osc) * std::expm1((2.0 / n_osc) * std::log1p(s));
  return num / den;
}

std::vector<HopfBranch> hopf_sequence(const RingParams& p) {
  const std::vector<Complex> lambdas = mode_eigenvalues(p);
  std::vector<HopfBranch> out;
  out.reserve(lambdas.size());
  for (int k = 0; k < static_cast<int>(lambdas.size()); ++k) {
    HopfBranch b;
    b.index_k = k;
    b.eigenvalue = lambdas[k];
    b.alpha_crit = -lambdas[k].real();
    b.omega_onset = p.beta + lambdas[k].imag();
    b.profile = eigenvector_profile(lambdas[k], p);
    b.lyapunov_l1 = first_lyapunov(lambdas[k], p);
    b.resonance = resonance_class(p.n_osc, p.shortcut_from, k);
    out.push_back(std::move(b));
  }
  std::stable_sort(out.begin(), out.end(), [](const HopfBranch& a, const HopfBranch& b) {
    if (a.alpha_crit != b.alpha_crit) return a.alpha_crit < b.alpha_crit;
    return a.index_k < b.index_k;
  });
  return out;
}

}  // namespace slring
