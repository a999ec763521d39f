#include "slring/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slring {

RotatingWaveSystem rotating_wave_system(const RingParams& p) {
  p.validate();
  RotatingWaveSystem sys;
  sys.n = p.n_osc;
  sys.mu = p.mu();
  sys.tail_links = {{0, 1.0}};
  if (p.shortcut_strength != 0.0) sys.tail_links.push_back({p.shortcut_from - 1, p.shortcut_strength});
  return sys;
}

RotatingWaveSystem rotating_wave_system(const InhomRingParams& p) {
  p.validate();
  RotatingWaveSystem sys;
  sys.n = p.n_reduced;
  sys.mu = p.mu();
  sys.tail_links = {{0, p.strength}};
  return sys;
}

CVector RotatingWaveSystem::residual_vector(const CVector& v, double omega) const {
  if (v.size() != n) throw std::invalid_argument("rotating wave: profile length mismatch");
  const Complex c = mu - Complex(0.0, omega);
  CVector f(n);
  for (int j = 0; j < n; ++j) f[j] = (c - std::norm(v[j])) * v[j];
  for (int j = 0; j + 1 < n; ++j) f[j] += v[j + 1];
  for (const auto& [col, w] : tail_links) f[n - 1] += w * v[col];
  return f;
}

double RotatingWaveSystem::residual_norm(const CVector& v, double omega) const {
  return residual_vector(v, omega).cwiseAbs().maxCoeff();
}

double RelativeEquilibrium::mean_square_amplitude() const {
  return profile.squaredNorm() / static_cast<double>(profile.size());
}

namespace {

void apply_gauge(CVector& v) {
  const Complex v1 = v[0];
  if (std::abs(v1) == 0.0) return;
  v *= std::conj(v1) / std::abs(v1);
}

/// Extended real Jacobian: 2n+1 rows (interleaved Re/Im equations plus the
/// phase row) by 2n+1 columns (interleaved Re/Im unknowns plus omega).
RMatrix newton_matrix(const RotatingWaveSystem& sys, const CVector& v, double omega) {
  const int n = sys.n;
  RMatrix jac = RMatrix::Zero(2 * n + 1, 2 * n + 1);
  const Complex cdiag = sys.mu - Complex(0.0, omega);
  for (int j = 0; j < n; ++j) {
    const Complex c = cdiag - 2.0 * std::norm(v[j]);  // d/dv
    const Complex d = -v[j] * v[j];                   // d/dvbar
    jac(2 * j, 2 * j) = c.real() + d.real();
    jac(2 * j, 2 * j + 1) = -c.imag() + d.imag();
    jac(2 * j + 1, 2 * j) = c.imag() + d.imag();
    jac(2 * j + 1, 2 * j + 1) = c.real() - d.real();
    // d/d omega of -i omega v_j
    jac(2 * j, 2 * n) = v[j].imag();
    jac(2 * j + 1, 2 * n) = -v[j].real();
  }
  for (int j = 0; j + 1 < n; ++j) {
    jac(2 * j, 2 * (j + 1)) += 1.0;
    jac(2 * j + 1, 2 * (j + 1) + 1) += 1.0;
  }
  for (const auto& [col, w] : sys.tail_links) {
    jac(2 * (n - 1), 2 * col) += w;
    jac(2 * (n - 1) + 1, 2 * col + 1) += w;
  }
  jac(2 * n, 1) = 1.0;  // phase condition Im(v_1) = 0
  return jac;
}

double full_residual(const RotatingWaveSystem& sys, const CVector& v, double omega) {
  return std::max(sys.residual_norm(v, omega), std::abs(v[0].imag()));
}

}  // namespace

std::optional<RelativeEquilibrium> try_solve_rotating_wave(const RotatingWaveSystem& sys,
                                                           const RelativeEquilibrium& guess,
                                                           const NewtonOptions& opts) {
  if (guess.profile.size() != sys.n) throw std::invalid_argument("rotating wave: guess length mismatch");
  if (!guess.profile.allFinite() || !std::isfinite(guess.omega))
    throw std::invalid_argument("rotating wave: guess must be finite");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("rotating wave: tol must be positive");

  const int n = sys.n;
  CVector v = guess.profile;
  double omega = guess.omega;
  const double seed_norm = v.cwiseAbs().maxCoeff();
  if (seed_norm == 0.0) return std::nullopt;  // zero state: extended system is singular
  double res = full_residual(sys, v, omega);

  for (int it = 0; it < opts.max_iterations; ++it) {
    if (res <= opts.tol) break;
    const CVector f = sys.residual_vector(v, omega);
    RVector rhs(2 * n + 1);
    for (int j = 0; j < n; ++j) {
      rhs[2 * j] = -f[j].real();
      rhs[2 * j + 1] = -f[j].imag();
    }
    rhs[2 * n] = -v[0].imag();

    const RMatrix jac = newton_matrix(sys, v, omega);
    Eigen::PartialPivLU<RMatrix> lu(jac);
    const RVector dx = lu.solve(rhs);
    if (!dx.allFinite()) return std::nullopt;  // singular system (bifurcation point)

    // Damped update; reject steps that slash the profile norm so the
    // trivial solution cannot capture the iteration.
    const double cur_norm = v.cwiseAbs().maxCoeff();
    double scale = 1.0;
    bool accepted = false;
    CVector v_new;
    double omega_new = omega;
    for (int h = 0; h <= opts.max_step_halvings; ++h) {
      v_new = v;
      for (int j = 0; j < n; ++j) v_new[j] += scale * Complex(dx[2 * j], dx[2 * j + 1]);
      omega_new = omega + scale * dx[2 * n];
      const double res_new = full_residual(sys, v_new, omega_new);
      if ((res_new < res || res <= 1e-14) && v_new.cwiseAbs().maxCoeff() > 0.4 * cur_norm) {
        accepted = true;
        res = res_new;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) return std::nullopt;
    v = v_new;
    omega = omega_new;
  }

  if (!(res <= opts.tol)) return std::nullopt;
  if (v.cwiseAbs().maxCoeff() < 0.3 * seed_norm) return std::nullopt;  // collapsed to zero

  apply_gauge(v);
  RelativeEquilibrium out;
  out.profile = v;
  out.omega = omega;
  out.residual = full_residual(sys, v, omega);
  out.branch_k = guess.branch_k;
  return out;
}

namespace {

RelativeEquilibrium solve_or_throw(const RotatingWaveSystem& sys, const RelativeEquilibrium& guess,
                                   double tol) {
  NewtonOptions opts;
  opts.tol = tol;
  auto r = try_solve_rotating_wave(sys, guess, opts);
  if (!r) {
    std::ostringstream msg;
    msg << "rotating-wave Newton iteration failed (residual target " << tol
        << "); seed omega = " << guess.omega;
    throw NumericalError(msg.str());
  }
  return *r;
}

}  // namespace

RelativeEquilibrium solve_relative_equilibrium(const RingParams& p, const RelativeEquilibrium& guess,
                                               double tol) {
  return solve_or_throw(rotating_wave_system(p), guess, tol);
}

RelativeEquilibrium solve_relative_equilibrium(const InhomRingParams& p, const RelativeEquilibrium& guess,
                                               double tol) {
  return solve_or_throw(rotating_wave_system(p), guess, tol);
}

RelativeEquilibrium plane_wave_s0(const RingParams& p, int k) {
  p.validate();
  if (p.shortcut_strength != 0.0)
    throw std::invalid_argument("plane_wave_s0: exact plane waves require s = 0");
  if (k < 0 || k >= p.n_osc) throw std::invalid_argument("plane_wave_s0: bad wavenumber");
  const double theta = 2.0 * kPi * k / p.n_osc;
  const double amp_sq = p.alpha + std::cos(theta);
  if (!(amp_sq > 0.0))
    throw std::invalid_argument("plane_wave_s0: branch not born (alpha + cos(theta) <= 0)");
  const double a = std::sqrt(amp_sq);
  const Complex gamma = root_of_unity(p.n_osc, k);
  RelativeEquilibrium out;
  out.profile.resize(p.n_osc);
  Complex f(1.0, 0.0);
  for (int j = 0; j < p.n_osc; ++j) {
    out.profile[j] = a * f;
    f *= gamma;
  }
  out.omega = p.beta + std::sin(theta);
  out.branch_k = k;
  out.residual = rotating_wave_system(p).residual_norm(out.profile, out.omega);
  return out;
}

SmallSOrbit orbit_small_s(const RingParams& p, int k, double eps) {
  p.validate();
  if (k < 0 || k >= p.n_osc) throw std::invalid_argument("orbit_small_s: bad wavenumber");
  (void)eps;  // the frequency and profile are eps-independent at this order
  const int n = p.n_osc;
  const double s = p.shortcut_strength;
  const Complex gamma = root_of_unity(n, k);
  const Complex gamma_ell = cpow_int(gamma, p.shortcut_from);
  const Complex gamma_ell_m1 = cpow_int(gamma, p.shortcut_from - 1);

  SmallSOrbit out;
  out.omega = p.beta + gamma.imag() + (s / n) * gamma_ell.imag();
  out.alpha_onset = -(gamma.real() + (s / n) * gamma_ell.real());
  out.profile.resize(n);
  Complex f(1.0, 0.0);
  for (int j = 0; j < n; ++j) {
    out.profile[j] = f * (1.0 + s * (static_cast<double>(j) / n) * gamma_ell_m1);
    f *= gamma;
  }
  return out;
}

LargeSProfile orbit_large_s(const InhomRingParams& p, int k, double eps) {
  p.validate();
  const int n = p.n_reduced;
  if (k < 0 || k >= n) throw std::invalid_argument("orbit_large_s: bad wavenumber");
  const double s = p.strength;
  const double log_s = std::log(s);
  // (s^{2/n} - 1)/(s^2 - 1) has a removable singularity at s = 1.
  const double ratio = std::abs(s - 1.0) < 1e-12
                           ? 1.0 / n
                           : std::expm1((2.0 / n) * log_s) / std::expm1(2.0 * log_s);
  LargeSProfile out;
  out.n = n;
  out.v1_sq0 = n * ratio;
  out.v0_sq.resize(n);
  for (int j = 0; j < n; ++j) out.v0_sq[j] = out.v1_sq0 * std::exp((2.0 * j / n) * log_s);
  const double theta = 2.0 * kPi * k / n;
  const double r = std::pow(s, 1.0 / n);
  out.omega0 = p.beta + r * std::sin(theta);
  out.alpha0 = -r * std::cos(theta);
  out.alpha = out.alpha0 + eps;
  return out;
}

namespace {

RelativeEquilibrium tangent_seed(Complex lambda, int n, double beta, double amplitude, int k) {
  RelativeEquilibrium seed;
  seed.profile.resize(n);
  Complex f(1.0, 0.0);
  for (int j = 0; j < n; ++j) {
    seed.profile[j] = amplitude * f;
    f *= lambda;
  }
  seed.omega = beta + lambda.imag();
  seed.branch_k = k;
  return seed;
}

}  // namespace

RelativeEquilibrium seed_from_branch(const RingParams& p, int k, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("seed_from_branch: eps must be positive");
  const Complex lambda = mode_eigenvalues(p)[k];
  // Amplitude from the cubic normal form: |u|^2 = -2 eps / Re<w,C>, profile
  // scale 2|u|. Reduces to sqrt(eps) on the unperturbed ring.
  double amplitude = std::sqrt(eps);
  const double cr = cubic_inner_product(lambda, p).real();
  if (cr < 0.0) amplitude = 2.0 * std::sqrt(-2.0 * eps / cr);
  return tangent_seed(lambda, p.n_osc, p.beta, amplitude, k);
}

RelativeEquilibrium seed_from_branch(const InhomRingParams& p, int k, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("seed_from_branch: eps must be positive");
  const LargeSProfile prof = orbit_large_s(p, k);
  const Complex lambda = std::pow(p.strength, 1.0 / p.n_reduced) * root_of_unity(p.n_reduced, k);
  return tangent_seed(lambda, p.n_reduced, p.beta, std::sqrt(eps * prof.v1_sq0), k);
}

ContinuationRun continue_branch(const RingParams& p, int branch_k, double alpha_begin, double alpha_end,
                                double step) {
  p.validate();
  if (!(step > 0.0)) throw std::invalid_argument("continue_branch: step must be positive");
  BranchContinuator cont(p, branch_k);
  if (alpha_begin <= cont.alpha_crit())
    throw std::invalid_argument("continue_branch: range must start above the branch onset");

  ContinuationRun run;
  const double dir = alpha_end >= alpha_begin ? 1.0 : -1.0;
  const int n_steps = static_cast<int>(std::floor(std::abs(alpha_end - alpha_begin) / step + 1e-9)) + 1;
  try {
    for (int i = 0; i < n_steps; ++i) run.orbits.push_back(cont.at(alpha_begin + dir * i * step));
    if (std::abs(alpha_begin + dir * (n_steps - 1) * step - alpha_end) > 1e-12)
      run.orbits.push_back(cont.at(alpha_end));
    run.completed = true;
  } catch (const NumericalError& err) {
    if (run.orbits.empty()) throw NumericalError(std::string("continue_branch: first point failed: ") + err.what());
    run.completed = false;
    run.stop_reason = err.what();
  }
  return run;
}

BranchContinuator::BranchContinuator(const RingParams& p, int branch_k)
    : BranchContinuator(p, branch_k, mode_eigenvalues(p)[branch_k]) {}

BranchContinuator::BranchContinuator(const RingParams& p, int branch_k, Complex lambda)
    : base_(p), k_(branch_k), lambda_(lambda), alpha_crit_(-lambda.real()) {
  if (branch_k < 0 || branch_k >= p.n_osc) throw std::invalid_argument("BranchContinuator: bad branch index");
  const double eps0 = 1e-3;
  const RingParams q = base_.with_alpha(alpha_crit_ + eps0);
  RelativeEquilibrium seed = seed_from_branch(q, k_, eps0);
  auto first = try_solve_rotating_wave(rotating_wave_system(q), seed);
  if (!first) throw NumericalError("BranchContinuator: failed to solve the near-onset orbit");
  first->branch_k = k_;
  cache_.emplace(alpha_crit_ + eps0, std::move(*first));
}

RelativeEquilibrium BranchContinuator::at(double alpha) {
  if (alpha <= alpha_crit_)
    throw std::invalid_argument("BranchContinuator: branch exists only above its onset");
  const auto hit = cache_.find(alpha);
  if (hit != cache_.end()) return hit->second;

  // Start from the cached orbit closest in alpha.
  auto nearest = cache_.begin();
  for (auto it = cache_.begin(); it != cache_.end(); ++it)
    if (std::abs(it->first - alpha) < std::abs(nearest->first - alpha)) nearest = it;
  double a = nearest->first;
  RelativeEquilibrium cur = nearest->second;

  int guard = 0;
  while (std::abs(a - alpha) > 0.0) {
    if (++guard > 100000) throw NumericalError("BranchContinuator: continuation did not terminate");
    const double dist_onset = a - alpha_crit_;
    double step = std::copysign(std::min(std::abs(alpha - a), std::max(0.5 * dist_onset, 0.02)), alpha - a);
    bool advanced = false;
    while (!advanced) {
      const double a_next = a + step;
      cur.branch_k = k_;
      const auto next =
          try_solve_rotating_wave(rotating_wave_system(base_.with_alpha(a_next)), cur);
      if (next) {
        cur = *next;
        cur.branch_k = k_;
        a = a_next;
        cache_.emplace(a, cur);
        advanced = true;
      } else {
        step *= 0.5;
        if (std::abs(step) < 1e-9) {
          std::ostringstream msg;
          msg << "BranchContinuator: continuation stalled at alpha = " << a
              << " (fold or loss of existence) for branch k = " << k_;
          throw NumericalError(msg.str());
        }
      }
    }
  }
  return cur;
}

}  // namespace slring
