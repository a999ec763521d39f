#include "slring/ring.hpp"

#include <cmath>

namespace slring {

void RingParams::validate() const {
  if (n_osc < 3) throw std::invalid_argument("ring: need at least 3 oscillators, got " + std::to_string(n_osc));
  if (shortcut_from < 1 || shortcut_from > n_osc - 1)
    throw std::invalid_argument("ring: shortcut source must lie in [1, N-1], got " + std::to_string(shortcut_from));
  if (!(shortcut_strength >= 0.0) || !std::isfinite(shortcut_strength))
    throw std::invalid_argument("ring: shortcut strength must be finite and nonnegative");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("ring: beta must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("ring: alpha must be finite");
}

void InhomRingParams::validate() const {
  if (n_reduced < 2) throw std::invalid_argument("inhom ring: need at least 2 nodes, got " + std::to_string(n_reduced));
  if (!(strength > 0.0) || !std::isfinite(strength))
    throw std::invalid_argument("inhom ring: strength must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("inhom ring: beta must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("inhom ring: alpha must be finite");
}

namespace {

void check_length(Eigen::Index got, int want, const char* who) {
  if (got != want)
    throw std::invalid_argument(std::string(who) + ": state length " + std::to_string(got) +
                                " does not match node count " + std::to_string(want));
}

}  // namespace

CVector rhs_full(const CVector& z, const RingParams& p) {
  p.validate();
  check_length(z.size(), p.n_osc, "rhs_full");
  const int n = p.n_osc;
  const Complex mu = p.mu();
  CVector dz(n);
  for (int j = 0; j < n; ++j) dz[j] = (mu - std::norm(z[j])) * z[j];
  for (int j = 0; j + 1 < n; ++j) dz[j] += z[j + 1];
  dz[n - 1] += z[0] + p.shortcut_strength * z[p.shortcut_from - 1];
  return dz;
}

CVector rhs_truncated_large_s(const CVector& z, const RingParams& p) {
  p.validate();
  check_length(z.size(), p.n_osc, "rhs_truncated_large_s");
  CVector dz = rhs_full(z, p);
  dz[p.n_osc - 1] -= z[0];
  return dz;
}

CVector rhs_inhom(const CVector& z, const InhomRingParams& p) {
  p.validate();
  check_length(z.size(), p.n_reduced, "rhs_inhom");
  const int n = p.n_reduced;
  const Complex mu = p.mu();
  CVector dz(n);
  for (int j = 0; j < n; ++j) dz[j] = (mu - std::norm(z[j])) * z[j];
  for (int j = 0; j + 1 < n; ++j) dz[j] += z[j + 1];
  dz[n - 1] += p.strength * z[0];
  return dz;
}

RVector to_real(const CVector& z) {
  RVector x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

CVector to_complex(const RVector& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("to_complex: odd-length real state");
  CVector z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = Complex(x[2 * j], x[2 * j + 1]);
  return z;
}

RVector rhs_full_real(const RVector& x, const RingParams& p) {
  return to_real(rhs_full(to_complex(x), p));
}

double large_s_scale(const RingParams& p) {
  p.validate();
  if (p.shortcut_strength <= 0.0)
    throw std::invalid_argument("large_s_transform: singular for s = 0");
  const double n = static_cast<double>(p.n_osc - p.shortcut_from + 1);
  return std::pow(p.shortcut_strength, -1.0 / n);
}

CVector large_s_transform(const CVector& z, const RingParams& p) {
  const double scale = large_s_scale(p);
  check_length(z.size(), p.n_osc, "large_s_transform");
  CVector y(z.size());
  double f = 1.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    f *= scale;  // scale^{j+1} for 1-based node j+1
    y[j] = f * z[j];
  }
  return y;
}

CVector large_s_transform_inverse(const CVector& y, const RingParams& p) {
  const double scale = large_s_scale(p);
  check_length(y.size(), p.n_osc, "large_s_transform_inverse");
  CVector z(y.size());
  double f = 1.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    f *= scale;
    z[j] = y[j] / f;
  }
  return z;
}

}  // namespace slring
