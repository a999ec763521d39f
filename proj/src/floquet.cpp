#include "slring/floquet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace slring {

namespace {

/// 2x2 real representation of multiplication by c.
Eigen::Matrix2d mul_block(Complex c) {
  Eigen::Matrix2d m;
  m << c.real(), -c.imag(), c.imag(), c.real();
  return m;
}

/// 2x2 real representation of x -> d * conj(x).
Eigen::Matrix2d conj_block(Complex d) {
  Eigen::Matrix2d m;
  m << d.real(), d.imag(), d.imag(), -d.real();
  return m;
}

RMatrix exact_jacobian_impl(const RotatingWaveSystem& sys, const RelativeEquilibrium& orbit) {
  if (orbit.profile.size() != sys.n) throw std::invalid_argument("exact_jacobian: profile length mismatch");
  const double stale = sys.residual_norm(orbit.profile, orbit.omega);
  if (!(stale <= 1e-7))
    throw NumericalError("exact_jacobian: stale orbit (defining-equation residual " + std::to_string(stale) + ")");
  const int n = sys.n;
  RMatrix a = RMatrix::Zero(2 * n, 2 * n);
  const Complex cdiag = sys.mu - Complex(0.0, orbit.omega);
  for (int j = 0; j < n; ++j) {
    const Complex c = cdiag - 2.0 * std::norm(orbit.profile[j]);
    const Complex d = -orbit.profile[j] * orbit.profile[j];
    a.block<2, 2>(2 * j, 2 * j) = mul_block(c) + conj_block(d);
  }
  for (int j = 0; j + 1 < n; ++j) a.block<2, 2>(2 * j, 2 * (j + 1)) += Eigen::Matrix2d::Identity();
  for (const auto& [col, w] : sys.tail_links)
    a.block<2, 2>(2 * (n - 1), 2 * col) += w * Eigen::Matrix2d::Identity();
  return a;
}

}  // namespace

const char* floquet_method_name(FloquetMethod m) {
  switch (m) {
    case FloquetMethod::ApproxSmallS: return "approx-small-s";
    case FloquetMethod::ApproxLargeS: return "approx-large-s";
    case FloquetMethod::ExactJacobian: return "exact-jacobian";
    case FloquetMethod::Monodromy: return "monodromy";
  }
  return "?";
}

RMatrix approx_matrix_small_s(const RingParams& p, int k, double eps) {
  p.validate();
  if (k < 0 || k >= p.n_osc) throw std::invalid_argument("approx_matrix_small_s: bad wavenumber");
  const int n = p.n_osc;
  const double s = p.shortcut_strength;
  const Complex lam0 = root_of_unity(n, k);
  const Complex lam0_ell = cpow_int(lam0, p.shortcut_from);
  const Complex lam_t = lam0 + (s / n) * lam0_ell;

  Eigen::Matrix2d eps_block = Eigen::Matrix2d::Zero();
  eps_block(0, 0) = 2.0 * eps;

  RMatrix a = RMatrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    a.block<2, 2>(2 * j, 2 * j) = -(mul_block(lam_t) + eps_block);
    const int jn = (j + 1) % n;
    a.block<2, 2>(2 * j, 2 * jn) += mul_block(lam_t);
  }
  const Eigen::Matrix2d shortcut = s * mul_block(lam0_ell);
  a.block<2, 2>(2 * (n - 1), 2 * (p.shortcut_from - 1)) += shortcut;
  a.block<2, 2>(2 * (n - 1), 0) -= shortcut;
  return a;
}

RMatrix approx_matrix_large_s(const InhomRingParams& p, int k, double eps) {
  p.validate();
  const int n = p.n_reduced;
  if (k < 0 || k >= n) throw std::invalid_argument("approx_matrix_large_s: bad wavenumber");
  const LargeSProfile prof = orbit_large_s(p, k);
  const Complex q = std::pow(p.strength, 1.0 / n) * root_of_unity(n, k);
  const Eigen::Matrix2d mq = mul_block(q);

  RMatrix a = RMatrix::Zero(2 * n, 2 * n);
  Eigen::Matrix2d shape = Eigen::Matrix2d::Zero();
  for (int j = 0; j < n; ++j) {
    const double vsq = prof.v0_sq[j];
    shape(0, 0) = 3.0 * vsq - 1.0;
    shape(1, 1) = vsq - 1.0;
    a.block<2, 2>(2 * j, 2 * j) = -(mq + eps * shape);
    const int jn = (j + 1) % n;
    a.block<2, 2>(2 * j, 2 * jn) += mq + eps * (vsq - 1.0) * Eigen::Matrix2d::Identity();
  }
  return a;
}

RMatrix exact_jacobian(const RelativeEquilibrium& orbit, const RingParams& p) {
  return exact_jacobian_impl(rotating_wave_system(p), orbit);
}

RMatrix exact_jacobian(const RelativeEquilibrium& orbit, const InhomRingParams& p) {
  return exact_jacobian_impl(rotating_wave_system(p), orbit);
}

StabilityAssessment assess_matrix(const RMatrix& a, FloquetMethod method, const AssessOptions& opts) {
  Eigen::EigenSolver<RMatrix> solver(a, opts.validate_pairs);
  if (solver.info() != Eigen::Success) throw NumericalError("assess_matrix: eigensolver did not converge");

  const Eigen::Index m = a.rows();
  if (opts.validate_pairs) {
    const double norm_a = a.cwiseAbs().maxCoeff() * static_cast<double>(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::VectorXcd x = solver.eigenvectors().col(i);
      const double resid = (a * x - solver.eigenvalues()[i] * x).cwiseAbs().maxCoeff();
      if (resid > 1e-8 * std::max(norm_a, 1.0))
        throw NumericalError("assess_matrix: eigenpair residual check failed");
    }
  }

  StabilityAssessment out;
  out.method = method;
  out.exponents.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::sort(out.exponents.begin(), out.exponents.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  int trivial = 0;
  for (int i = 1; i < static_cast<int>(m); ++i)
    if (std::abs(out.exponents[i]) < std::abs(out.exponents[trivial])) trivial = i;
  out.trivial_index = trivial;
  out.trivial_abs = std::abs(out.exponents[trivial]);
  if ((method == FloquetMethod::ExactJacobian || method == FloquetMethod::Monodromy) &&
      out.trivial_abs > opts.zero_tol)
    throw NumericalError("assess_matrix: no trivial exponent within zero_tol (got " +
                         std::to_string(out.trivial_abs) + ")");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(m); ++i)
    if (i != trivial) worst = std::max(worst, out.exponents[i].real());
  out.max_nontrivial_re = worst;
  out.stable = worst < -opts.margin_tol;
  return out;
}

StabilityAssessment assess_orbit(const RelativeEquilibrium& orbit, const RingParams& p,
                                 const AssessOptions& opts) {
  return assess_matrix(exact_jacobian(orbit, p), FloquetMethod::ExactJacobian, opts);
}

StabilityAssessment assess_orbit(const RelativeEquilibrium& orbit, const InhomRingParams& p,
                                 const AssessOptions& opts) {
  return assess_matrix(exact_jacobian(orbit, p), FloquetMethod::ExactJacobian, opts);
}

std::vector<Complex> monodromy_multipliers(const RelativeEquilibrium& orbit, const RingParams& p,
                                           const IntegratorOptions& opts) {
  p.validate();
  const int n = p.n_osc;
  const RotatingWaveSystem sys = rotating_wave_system(p);
  if (sys.residual_norm(orbit.profile, orbit.omega) > 1e-7)
    throw NumericalError("monodromy_multipliers: stale orbit");
  if (orbit.omega == 0.0) throw std::invalid_argument("monodromy_multipliers: zero frequency");
  const double period = 2.0 * kPi / std::abs(orbit.omega);

  // Variational flow in the lab frame: columns of the fundamental matrix
  // evolve under dz_j' = (mu - 2|z_j|^2) dz_j - z_j(t)^2 conj(dz_j) + links,
  // with z(t) = e^{i omega t} v. Complexify: track (dz, conj dz) pairs as
  // independent complex states; the fundamental matrix stays real in the
  // interleaved real basis, which is what gets integrated here.
  const int dim = 2 * n;
  CVector y0(dim * dim);
  y0.setZero();
  for (int c = 0; c < dim; ++c) y0[c * dim + c] = 1.0;

  const Complex mu = p.mu();
  const double omega = orbit.omega;
  const CVector v = orbit.profile;
  auto rhs = [&](double t, const CVector& y) {
    // y holds dim x dim real entries column-major (stored in the real parts);
    // build J(t) and multiply. Imaginary parts stay zero.
    RMatrix jt = RMatrix::Zero(dim, dim);
    const Complex rot = std::exp(Complex(0.0, 2.0 * omega * t));
    for (int j = 0; j < n; ++j) {
      const Complex c = mu - 2.0 * std::norm(v[j]);
      const Complex d = -v[j] * v[j] * rot;
      jt.block<2, 2>(2 * j, 2 * j) = mul_block(c) + conj_block(d);
    }
    for (int j = 0; j + 1 < n; ++j) jt.block<2, 2>(2 * j, 2 * (j + 1)) += Eigen::Matrix2d::Identity();
    for (const auto& [col, w] : sys.tail_links)
      jt.block<2, 2>(2 * (n - 1), 2 * col) += w * Eigen::Matrix2d::Identity();

    RMatrix ym(dim, dim);
    for (int c = 0; c < dim; ++c)
      for (int r = 0; r < dim; ++r) ym(r, c) = y[c * dim + r].real();
    const RMatrix dy = jt * ym;
    CVector out(dim * dim);
    for (int c = 0; c < dim; ++c)
      for (int r = 0; r < dim; ++r) out[c * dim + r] = dy(r, c);
    return out;
  };

  IntegratorOptions iopts = opts;
  iopts.stride = 1 << 20;  // only endpoints are needed
  const SimulationTrace trace = integrate_ode(rhs, y0, period, iopts, p.beta);
  RMatrix mono(dim, dim);
  const CVector& yT = trace.states.back();
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) mono(r, c) = yT[c * dim + r].real();

  Eigen::EigenSolver<RMatrix> solver(mono, false);
  if (solver.info() != Eigen::Success) throw NumericalError("monodromy_multipliers: eigensolver failed");
  std::vector<Complex> rho(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  std::sort(rho.begin(), rho.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return rho;
}

double eckhaus_line_s0(double alpha) {
  return 0.75 * alpha + std::sqrt(alpha * alpha / 16.0 + 0.5);
}

const char* threshold_status_name(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Stabilizes: return "stabilizes";
    case ThresholdStatus::StableFromOnset: return "stable-from-onset";
    case ThresholdStatus::NeverStabilizes: return "never-stabilizes";
    case ThresholdStatus::ContinuationFailed: return "continuation-failed";
  }
  return "?";
}

namespace {

class MarginEvaluator {
 public:
  MarginEvaluator(const RingParams& p, int k, Complex lambda, FloquetMethod method)
      : p_(p), k_(k), lambda_(lambda), method_(method) {
    if (method == FloquetMethod::ExactJacobian || method == FloquetMethod::Monodromy)
      cont_.emplace(p, k, lambda);
  }

  double operator()(double alpha) {
    switch (method_) {
      case FloquetMethod::ExactJacobian: {
        const RelativeEquilibrium orbit = cont_->at(alpha);
        AssessOptions opts;
        opts.validate_pairs = false;
        return assess_orbit(orbit, p_.with_alpha(alpha), opts).max_nontrivial_re;
      }
      case FloquetMethod::ApproxSmallS: {
        const double eps = alpha + lambda_.real();
        AssessOptions opts;
        opts.validate_pairs = false;
        return assess_matrix(approx_matrix_small_s(p_, k_, eps), method_, opts).max_nontrivial_re;
      }
      default:
        throw std::invalid_argument("stabilization_threshold: unsupported method");
    }
  }

  RelativeEquilibrium orbit_at(double alpha) {
    if (cont_) return cont_->at(alpha);
    // Approximate methods do not track the orbit; fall back to a Newton
    // solve for the reported amplitude/frequency columns.
    BranchContinuator c(p_, k_, lambda_);
    return c.at(alpha);
  }

 private:
  RingParams p_;
  int k_;
  Complex lambda_;
  FloquetMethod method_;
  std::optional<BranchContinuator> cont_;
};

}  // namespace

EckhausPoint stabilization_threshold(const RingParams& p, int k, const ThresholdOptions& topts) {
  p.validate();
  const std::vector<Complex> lambdas = mode_eigenvalues(p);
  if (k < 0 || k >= static_cast<int>(lambdas.size()))
    throw std::invalid_argument("stabilization_threshold: bad branch index");
  const Complex lambda = lambdas[k];

  EckhausPoint out;
  out.branch_k = k;
  out.method = topts.method;
  out.alpha_crit = -lambda.real();
  out.omega_onset = p.beta + lambda.imag();

  const double lo = out.alpha_crit + topts.alpha_lo_offset;
  if (!(topts.alpha_hi > lo)) throw std::invalid_argument("stabilization_threshold: invalid bracket");

  MarginEvaluator margin(p, k, lambda, topts.method);
  try {
    double a_prev = lo;
    double f_prev = margin(lo);
    if (f_prev < 0.0) {
      // Stable at the first probe: the branch is stable from onset; all
      // exponents vanish at the bifurcation itself, so the stabilization
      // point is the onset.
      out.status = ThresholdStatus::StableFromOnset;
      out.alpha_star = out.alpha_crit;
      out.omega_star = out.omega_onset;
      out.amplitude_at_star = 0.0;
      return out;
    }
    // March upward until the margin changes sign.
    double a_hi = 0.0, f_hi = 0.0;
    bool bracketed = false;
    for (double a = lo + topts.scan_step; a <= topts.alpha_hi + 1e-12; a += topts.scan_step) {
      const double fa = margin(std::min(a, topts.alpha_hi));
      if (fa < 0.0) {
        a_hi = std::min(a, topts.alpha_hi);
        f_hi = fa;
        bracketed = true;
        break;
      }
      a_prev = std::min(a, topts.alpha_hi);
      f_prev = fa;
      if (a_prev >= topts.alpha_hi) break;
    }
    if (!bracketed) {
      out.status = ThresholdStatus::NeverStabilizes;
      return out;
    }
    // Illinois refinement until the margin itself is within tolerance.
    double a1 = a_prev, f1 = f_prev, a2 = a_hi, f2 = f_hi;
    double a_star = a2, f_star = f2;
    for (int it = 0; it < 120; ++it) {
      double mid = a2 - f2 * (a2 - a1) / (f2 - f1);
      if (!(mid > a1 && mid < a2)) mid = 0.5 * (a1 + a2);
      const double fm = margin(mid);
      if (std::abs(fm) < std::abs(f_star)) {
        a_star = mid;
        f_star = fm;
      }
      if (std::abs(fm) <= topts.re_tol) break;
      if (fm > 0.0) {
        a1 = mid;
        f1 = fm;
        f2 *= 0.5;  // Illinois trick keeps the secant moving
      } else {
        a2 = mid;
        f2 = fm;
        f1 *= 0.5;
      }
    }
    if (std::abs(f_star) > topts.re_tol)
      throw NumericalError("stabilization_threshold: refinement did not reach the margin tolerance");
    out.status = ThresholdStatus::Stabilizes;
    out.alpha_star = a_star;
    const RelativeEquilibrium orbit = margin.orbit_at(a_star);
    out.omega_star = orbit.omega;
    out.amplitude_at_star = orbit.mean_square_amplitude();
  } catch (const std::exception& err) {
    out.status = ThresholdStatus::ContinuationFailed;
    out.note = err.what();
  }
  return out;
}

namespace {

/// Bounded-width task fanout; results land by index so the output order is
/// deterministic regardless of scheduling.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<EckhausPoint> modulated_eckhaus_table(const RingParams& p, const std::vector<int>& branches,
                                                  const ThresholdOptions& opts) {
  std::vector<EckhausPoint> rows(branches.size());
  parallel_for(static_cast<int>(branches.size()), [&](int i) {
    try {
      rows[i] = stabilization_threshold(p, branches[i], opts);
    } catch (const std::exception& err) {
      rows[i].branch_k = branches[i];
      rows[i].status = ThresholdStatus::ContinuationFailed;
      rows[i].note = err.what();
    }
  });
  std::sort(rows.begin(), rows.end(),
            [](const EckhausPoint& a, const EckhausPoint& b) { return a.branch_k < b.branch_k; });
  return rows;
}

std::vector<BranchScan> stability_scan(const RingParams& p, int samples_per_branch, double span_factor) {
  p.validate();
  if (samples_per_branch < 1) throw std::invalid_argument("stability_scan: need at least one sample");
  const SpectrumResult spec = spectrum_exact(p);
  const int n = p.n_osc;

  // Root class per mode label.
  std::vector<RootClass> cls(n);
  std::vector<Complex> lambda(n);
  for (int i = 0; i < n; ++i) {
    cls[spec.mode_labels[i]] = spec.classes[i];
    lambda[spec.mode_labels[i]] = spec.eigenvalues[i];
  }

  std::vector<BranchScan> scans(n);
  parallel_for(n, [&](int k) {
    BranchScan& scan = scans[k];
    scan.branch_k = k;
    scan.root_class = cls[k];
    scan.alpha_crit = -lambda[k].real();
    scan.omega_onset = p.beta + lambda[k].imag();
    const double lo = scan.alpha_crit + 0.02;
    const double hi = std::max(span_factor * std::abs(scan.alpha_crit), scan.alpha_crit + 0.5);
    std::optional<BranchContinuator> cont;
    try {
      cont.emplace(p, k, lambda[k]);
    } catch (const std::exception&) {
      cont.reset();
    }
    bool dead = !cont.has_value();
    for (int i = 0; i < samples_per_branch; ++i) {
      ScanSample sample;
      sample.alpha = samples_per_branch == 1 ? lo : lo + (hi - lo) * i / (samples_per_branch - 1);
      if (!dead) {
        try {
          const RelativeEquilibrium orbit = cont->at(sample.alpha);
          AssessOptions aopts;
          aopts.validate_pairs = false;
          const StabilityAssessment sa = assess_orbit(orbit, p.with_alpha(sample.alpha), aopts);
          sample.exists = true;
          sample.stable = sa.stable;
          sample.max_nontrivial_re = sa.max_nontrivial_re;
          sample.omega = orbit.omega;
          sample.amplitude_sq = orbit.mean_square_amplitude();
        } catch (const std::exception&) {
          dead = true;  // fold or continuation failure: later samples do not exist
        }
      }
      scan.samples.push_back(sample);
    }
  });
  return scans;
}

}  // namespace slring
