#include "slring/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slring/matching.hpp"

namespace slring {

Complex char_poly_eval(Complex lambda, const RingParams& p) {
  // (lambda^(N-l+1) - s) * lambda^(l-1) - 1: two-term Horner on the trinomial.
  const int m = p.shortcut_from - 1;
  return (cpow_int(lambda, p.n_osc - m) - p.shortcut_strength) * cpow_int(lambda, m) - 1.0;
}

Complex char_poly_derivative(Complex lambda, const RingParams& p) {
  const int n = p.n_osc;
  const int m = p.shortcut_from - 1;
  Complex d = static_cast<double>(n) * cpow_int(lambda, n - 1);
  if (m >= 1) d -= p.shortcut_strength * static_cast<double>(m) * cpow_int(lambda, m - 1);
  return d;
}

const char* root_class_name(RootClass c) {
  switch (c) {
    case RootClass::UnitCircleModulated: return "unit-circle-modulated";
    case RootClass::InnerCircle: return "inner-circle";
    case RootClass::OuterCircle: return "outer-circle";
    case RootClass::LeadingReal: return "leading-real";
  }
  return "?";
}

std::vector<Complex> LargeSRoots::all() const {
  std::vector<Complex> out = inner;
  out.insert(out.end(), outer.begin(), outer.end());
  return out;
}

namespace {

double scaled_residual(Complex lambda, Complex chi, int degree) {
  return std::abs(chi) / std::pow(std::max(1.0, std::abs(lambda)), degree);
}

/// Aberth-Ehrlich simultaneous iteration on the trinomial. Initial points sit
/// on a circle of radius max(1, s^{1/(N-l+1)}); for s = 0 they are already the
/// roots. One restart with rotated angles before giving up.
std::vector<Complex> aberth_roots(const RingParams& p, double tol) {
  const int n = p.n_osc;
  const double radius =
      std::max(1.0, std::pow(std::max(p.shortcut_strength, 1e-300), 1.0 / (n - p.shortcut_from + 1)));

  auto run = [&](double angle_offset, std::vector<Complex>& r) -> bool {
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * kPi * k / n + angle_offset;
      r[k] = radius * Complex(std::cos(a), std::sin(a));
    }
    for (int iter = 0; iter < 220; ++iter) {
      double worst_move = 0.0;
      for (int i = 0; i < n; ++i) {
        const Complex chi = char_poly_eval(r[i], p);
        const Complex dchi = char_poly_derivative(r[i], p);
        if (std::abs(chi) == 0.0) continue;
        const Complex newton = chi / dchi;
        Complex repulsion(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          Complex diff = r[i] - r[j];
          if (std::abs(diff) < 1e-290) diff = Complex(1e-290, 0.0);
          repulsion += 1.0 / diff;
        }
        const Complex denom = 1.0 - newton * repulsion;
        const Complex w = std::abs(denom) < 1e-290 ? newton : newton / denom;
        r[i] -= w;
        worst_move = std::max(worst_move, std::abs(w) / (1.0 + std::abs(r[i])));
      }
      if (worst_move < 1e-15) break;
    }
    // Per-root Newton polish, then the residual gate.
    for (int i = 0; i < n; ++i) {
      for (int it = 0; it < 4; ++it) {
        const Complex chi = char_poly_eval(r[i], p);
        if (scaled_residual(r[i], chi, n) <= 0.1 * tol) break;
        r[i] -= chi / char_poly_derivative(r[i], p);
      }
      if (scaled_residual(r[i], char_poly_eval(r[i], p), n) > tol) return false;
    }
    return true;
  };

  std::vector<Complex> r(n);
  if (run(0.0, r)) return r;
  if (run(0.17 / n, r)) return r;

  std::ostringstream msg;
  msg << "root finder failed to converge for N=" << n << " l=" << p.shortcut_from << " s=" << p.shortcut_strength
      << "; worst estimate " << r[0].real() << (r[0].imag() < 0 ? "-" : "+") << std::abs(r[0].imag()) << "i";
  throw NumericalError(msg.str());
}

double min_pairwise_gap(const std::vector<Complex>& pts) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) g = std::min(g, std::abs(pts[i] - pts[j]));
  return g;
}

}  // namespace

double leading_real_eigenvalue(const RingParams& p) {
  p.validate();
  const double s = p.shortcut_strength;
  if (s == 0.0) return 1.0;
  auto chi = [&](double x) { return char_poly_eval(Complex(x, 0.0), p).real(); };
  double lo = 1.0, hi = s + 2.0;  // chi(1) = -s < 0, chi(s+2) > 0
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi(mid) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double d = char_poly_derivative(Complex(x, 0.0), p).real();
    if (d == 0.0) break;
    x -= chi(x) / d;
  }
  return x;
}

std::vector<Complex> mode_eigenvalues(const RingParams& p, double tol) {
  p.validate();
  const int n = p.n_osc;
  std::vector<Complex> labeled(n);
  for (int k = 0; k < n; ++k) labeled[k] = root_of_unity(n, k);
  if (p.shortcut_strength == 0.0) return labeled;

  // Continuation in s from the unperturbed circle, carrying labels through
  // optimal matching; steps shrink whenever roots move a large fraction of
  // the current minimum gap.
  double s_cur = 0.0;
  double step = std::min(p.shortcut_strength, 0.5);
  int guard = 0;
  while (s_cur < p.shortcut_strength) {
    if (++guard > 10000) throw NumericalError("mode labeling: continuation did not terminate");
    const double s_next = std::min(p.shortcut_strength, s_cur + step);
    RingParams q = p;
    q.shortcut_strength = s_next;
    const std::vector<Complex> roots = aberth_roots(q, tol);
    const std::vector<int> match = match_points(labeled, roots);
    const double gap = min_pairwise_gap(labeled);
    double worst_move = 0.0;
    for (int k = 0; k < n; ++k) worst_move = std::max(worst_move, std::abs(labeled[k] - roots[match[k]]));
    if (worst_move > 0.35 * gap && step > 1e-7 * (1.0 + p.shortcut_strength)) {
      step *= 0.5;
      continue;
    }
    std::vector<Complex> next(n);
    for (int k = 0; k < n; ++k) next[k] = roots[match[k]];
    labeled.swap(next);
    s_cur = s_next;
    step *= 1.6;
  }
  return labeled;
}

SpectrumResult spectrum_exact(const RingParams& p, double tol) {
  p.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("spectrum_exact: tol must be positive");
  const int n = p.n_osc;
  const double s = p.shortcut_strength;
  const int ell = p.shortcut_from;

  const std::vector<Complex> labeled = mode_eigenvalues(p, tol);

  SpectrumResult out;
  out.eigenvalues = labeled;
  out.mode_labels.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (labeled[a].real() != labeled[b].real()) return labeled[a].real() < labeled[b].real();
    return labeled[a].imag() < labeled[b].imag();
  });
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[i] = labeled[order[i]];
    out.mode_labels[i] = order[i];
  }

  out.residuals.resize(n);
  for (int i = 0; i < n; ++i)
    out.residuals[i] = scaled_residual(out.eigenvalues[i], char_poly_eval(out.eigenvalues[i], p), n);

  // Classes: the positive real root of maximal real part is singled out; the
  // rest are either weak modulations of the unit circle (s <= 1) or assigned
  // to the closer of the two large-s radii.
  const double rho0 = leading_real_eigenvalue(p);
  int lead = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(out.eigenvalues[i] - rho0);
    if (d < best) {
      best = d;
      lead = i;
    }
  }
  if (best > 1e-6 * std::max(1.0, rho0))
    throw NumericalError("spectrum_exact: no computed root matches the leading real eigenvalue");

  out.classes.assign(n, RootClass::UnitCircleModulated);
  if (s > 1.0) {
    const double r_out = std::pow(s, 1.0 / (n - ell + 1));
    const double r_in = ell >= 2 ? std::pow(s, -1.0 / (ell - 1)) : 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = std::abs(out.eigenvalues[i]);
      const bool inner = ell >= 2 && std::abs(m - r_in) / r_in < std::abs(m - r_out) / r_out;
      out.classes[i] = inner ? RootClass::InnerCircle : RootClass::OuterCircle;
    }
  }
  out.classes[lead] = RootClass::LeadingReal;
  out.leading_index = lead;
  return out;
}

std::vector<Complex> spectrum_small_s(const RingParams& p) {
  p.validate();
  const int n = p.n_osc;
  std::vector<Complex> out(n);
  for (int k = 0; k < n; ++k) {
    const Complex g = root_of_unity(n, k);
    out[k] = g + (p.shortcut_strength / n) * cpow_int(g, p.shortcut_from);
  }
  return out;
}

LargeSRoots spectrum_large_s_leading(const RingParams& p) {
  p.validate();
  if (!(p.shortcut_strength > 1.0))
    throw OutOfRegimeError("spectrum_large_s: requires s > 1");
  if (p.shortcut_from < 2)
    throw std::invalid_argument("spectrum_large_s: requires a genuine shortcut (l >= 2)");
  const int n = p.n_osc;
  const int ell = p.shortcut_from;
  const double tau = 1.0 / p.shortcut_strength;
  LargeSRoots out;
  const int n_in = ell - 1;
  const Complex phase = std::exp(Complex(0.0, kPi / n_in));
  const double r_in = std::pow(tau, 1.0 / n_in);
  for (int k = 0; k < n_in; ++k) out.inner.push_back(r_in * phase * root_of_unity(n_in, k));
  const int n_out = n - ell + 1;
  const double r_out = std::pow(tau, -1.0 / n_out);
  for (int k = 0; k < n_out; ++k) out.outer.push_back(r_out * root_of_unity(n_out, k));
  return out;
}

LargeSRoots spectrum_large_s(const RingParams& p) {
  LargeSRoots out = spectrum_large_s_leading(p);
  const int n = p.n_osc;
  const int ell = p.shortcut_from;
  const double tau = 1.0 / p.shortcut_strength;
  for (Complex& lam : out.inner) lam += cpow_int(lam, n - ell + 2) * tau / static_cast<double>(ell - 1);
  // One Newton step off the outer circle: chi(lam0) = -1 there, so the
  // first-order correction is exactly +1/chi'(lam0).
  for (Complex& lam : out.outer) lam += 1.0 / char_poly_derivative(lam, p);
  return out;
}

ReducedSpectrum spectrum_reduced(const RingParams& p) {
  p.validate();
  if (!(p.shortcut_strength > 0.0))
    throw std::invalid_argument("spectrum_reduced: degenerate for s = 0");
  if (p.shortcut_from < 2)
    throw std::invalid_argument("spectrum_reduced: requires a genuine shortcut (l >= 2)");
  ReducedSpectrum out;
  out.zero_multiplicity = p.shortcut_from - 1;
  const int n = p.n_osc - p.shortcut_from + 1;
  const double r = std::pow(p.shortcut_strength, 1.0 / n);
  for (int k = 0; k < n; ++k) out.nonzero.push_back(r * root_of_unity(n, k));
  return out;
}

RMatrix coupling_matrix(const RingParams& p) {
  p.validate();
  const int n = p.n_osc;
  RMatrix g = RMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) g(j, j + 1) = 1.0;
  g(n - 1, 0) += 1.0;
  g(n - 1, p.shortcut_from - 1) += p.shortcut_strength;
  return g;
}

RMatrix reduced_coupling_matrix(const RingParams& p) {
  RMatrix g = coupling_matrix(p);
  g(p.n_osc - 1, 0) -= 1.0;
  return g;
}

}  // namespace slring
