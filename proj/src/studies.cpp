#include "slring/studies.hpp"

#include <cmath>
#include <sstream>

#include "slring/matching.hpp"

namespace slring {

namespace {

RingParams desk_ring(double s, double alpha = 0.0, double beta = 2.5) {
  RingParams p;
  p.n_osc = 20;
  p.shortcut_from = 6;
  p.shortcut_strength = s;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

StudyResult make_order_result(std::string name, const std::vector<double>& h, const std::vector<double>& err,
                              double threshold) {
  StudyResult r;
  r.name = std::move(name);
  r.value = fitted_order(h, err);
  r.threshold = threshold;
  r.higher_is_better = true;
  r.pass = r.value >= threshold;
  std::ostringstream d;
  d << "errors:";
  for (double e : err) d << " " << e;
  r.detail = d.str();
  return r;
}

}  // namespace

StudyResult study_spectrum_small_s_order() {
  const std::vector<double> grid = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  std::vector<double> err;
  for (double s : grid) {
    const RingParams p = desk_ring(s);
    const std::vector<Complex> exact = mode_eigenvalues(p);
    const std::vector<Complex> approx = spectrum_small_s(p);
    double worst = 0.0;
    for (int k = 0; k < p.n_osc; ++k) worst = std::max(worst, std::abs(exact[k] - approx[k]));
    err.push_back(worst);
  }
  return make_order_result("spectrum-small-s-order", grid, err, 1.9);
}

StudyResult study_spectrum_large_s_order() {
  const std::vector<double> grid = {10.0, 31.622776601683793, 100.0, 316.22776601683796, 1000.0};
  std::vector<double> tau, err;
  for (double s : grid) {
    const RingParams p = desk_ring(s);
    const std::vector<Complex> exact = spectrum_exact(p).eigenvalues;
    err.push_back(max_matching_distance(spectrum_large_s(p).all(), exact));
    tau.push_back(1.0 / s);
  }
  return make_order_result("spectrum-large-s-order", tau, err, 1.9);
}

StudyResult study_spectrum_large_s_correction_gain() {
  const RingParams p = desk_ring(50.0);
  const std::vector<Complex> exact = spectrum_exact(p).eigenvalues;
  const double err_leading = max_matching_distance(spectrum_large_s_leading(p).all(), exact);
  const double err_corrected = max_matching_distance(spectrum_large_s(p).all(), exact);
  StudyResult r;
  r.name = "spectrum-large-s-correction-gain";
  r.value = err_leading / std::max(err_corrected, 1e-300);
  r.threshold = 5.0;
  r.higher_is_better = true;
  r.pass = r.value >= r.threshold;
  std::ostringstream d;
  d << "leading " << err_leading << " corrected " << err_corrected;
  r.detail = d.str();
  return r;
}

StudyResult study_orbit_small_s_order() {
  const int k = 1;
  const std::vector<double> grid = {0.04, 0.02, 0.01, 0.005, 0.0025};
  std::vector<double> err;
  for (double h : grid) {
    const RingParams p0 = desk_ring(h);
    const Complex lambda = mode_eigenvalues(p0)[k];
    const RingParams p = p0.with_alpha(-lambda.real() + h);  // eps = h above onset
    const RelativeEquilibrium orbit = solve_relative_equilibrium(p, seed_from_branch(p, k, h), 1e-13);
    const SmallSOrbit asym = orbit_small_s(p, k, h);
    // Normalize both profiles to their first component before comparing.
    const CVector vn = orbit.profile / orbit.profile[0];
    double worst = std::abs(orbit.omega - asym.omega);
    for (int j = 0; j < p.n_osc; ++j) worst = std::max(worst, std::abs(vn[j] - asym.profile[j]));
    err.push_back(worst);
  }
  return make_order_result("orbit-small-s-order", grid, err, 1.9);
}

StudyResult study_orbit_large_s_profile() {
  InhomRingParams q;
  q.n_reduced = 15;
  q.beta = 2.5;
  double worst = 0.0;
  std::ostringstream detail;
  for (double s : {2.0, 5.0, 10.0}) {
    q.strength = s;
    const LargeSProfile prof = orbit_large_s(q, 0);
    // a(eps) = |v_1(eps)|^2 / eps is analytic in eps; Neville extrapolation
    // over a geometric grid recovers its limit to ~1e-12 in double.
    const int m_pts = 7;
    std::vector<double> eps_grid(m_pts), val(m_pts);
    for (int m = 0; m < m_pts; ++m) {
      const double eps = 1.6e-2 / static_cast<double>(1 << m);
      const InhomRingParams qa = q.with_alpha(prof.alpha0 + eps);
      const RelativeEquilibrium orbit = solve_relative_equilibrium(qa, seed_from_branch(qa, 0, eps), 1e-13);
      eps_grid[m] = eps;
      val[m] = std::norm(orbit.profile[0]) / eps;
    }
    for (int r = 1; r < m_pts; ++r)
      for (int i = 0; i < m_pts - r; ++i)
        val[i] = val[i + 1] + (val[i + 1] - val[i]) / (eps_grid[i] / eps_grid[i + r] - 1.0);
    const double diff = std::abs(val[0] - prof.v1_sq0);
    worst = std::max(worst, diff);
    detail << "s=" << s << " diff=" << diff << "  ";
  }
  StudyResult r;
  r.name = "orbit-large-s-profile";
  r.value = worst;
  r.threshold = 1e-10;
  r.higher_is_better = false;
  r.pass = worst <= r.threshold;
  r.detail = detail.str();
  return r;
}

StudyResult study_floquet_eig_order() {
  const int k = 1;
  const std::vector<double> grid = {0.04, 0.02, 0.01, 0.005};
  std::vector<double> err;
  for (double h : grid) {
    const RingParams p0 = desk_ring(h);
    const Complex lambda = mode_eigenvalues(p0)[k];
    const RingParams p = p0.with_alpha(-lambda.real() + h);
    const RelativeEquilibrium orbit = solve_relative_equilibrium(p, seed_from_branch(p, k, h), 1e-13);
    AssessOptions opts;
    opts.validate_pairs = false;
    const StabilityAssessment exact = assess_orbit(orbit, p, opts);
    const StabilityAssessment approx =
        assess_matrix(approx_matrix_small_s(p, k, h), FloquetMethod::ApproxSmallS, opts);
    err.push_back(max_matching_distance(exact.exponents, approx.exponents));
  }
  return make_order_result("floquet-approx-eig-order", grid, err, 1.9);
}

StudyResult study_floquet_verdict_agreement() {
  int agree = 0, total = 0;
  AssessOptions opts;
  opts.validate_pairs = false;
  for (double s : {0.0, 0.05, 0.1}) {
    const RingParams p0 = desk_ring(s);
    const std::vector<Complex> lambdas = mode_eigenvalues(p0);
    for (int k = 0; k < p0.n_osc; ++k) {
      BranchContinuator cont(p0, k, lambdas[k]);
      for (double eps : {0.01, 0.02, 0.05}) {
        const double alpha = -lambdas[k].real() + eps;
        const RelativeEquilibrium orbit = cont.at(alpha);
        const bool exact = assess_orbit(orbit, p0.with_alpha(alpha), opts).stable;
        const bool approx =
            assess_matrix(approx_matrix_small_s(p0, k, eps), FloquetMethod::ApproxSmallS, opts).stable;
        ++total;
        if (exact == approx) ++agree;
      }
    }
  }
  StudyResult r;
  r.name = "floquet-verdict-agreement";
  r.value = static_cast<double>(agree) / total;
  r.threshold = 0.95;
  r.higher_is_better = true;
  r.pass = r.value >= r.threshold;
  r.detail = std::to_string(agree) + "/" + std::to_string(total) + " cells agree";
  return r;
}

StudyResult study_monodromy_consistency() {
  struct Pick {
    double s;
    int k;
    double eps;
  };
  const std::vector<Pick> picks = {{0.0, 0, 0.05}, {0.0, 1, 0.05}, {0.0, 2, 0.1},  {0.0, 19, 0.05},
                                   {0.1, 0, 0.05}, {0.1, 1, 0.03}, {0.1, 3, 0.05}, {0.1, 17, 0.05},
                                   {5.0, 0, 0.05}, {5.0, 1, 0.05}};
  IntegratorOptions iopts;
  iopts.rtol = 1e-11;
  iopts.atol = 1e-13;
  AssessOptions aopts;
  aopts.validate_pairs = false;
  double worst = 0.0;
  for (const Pick& pick : picks) {
    const RingParams p0 = desk_ring(pick.s);
    const Complex lambda = mode_eigenvalues(p0)[pick.k];
    const RingParams p = p0.with_alpha(-lambda.real() + pick.eps);
    const RelativeEquilibrium orbit =
        solve_relative_equilibrium(p, seed_from_branch(p, pick.k, pick.eps), 1e-13);
    const StabilityAssessment sa = assess_orbit(orbit, p, aopts);
    const std::vector<Complex> rho = monodromy_multipliers(orbit, p, iopts);
    const double period = 2.0 * kPi / std::abs(orbit.omega);
    std::vector<Complex> predicted;
    predicted.reserve(sa.exponents.size());
    for (const Complex& lam : sa.exponents) predicted.push_back(std::exp(period * lam));
    worst = std::max(worst, max_matching_distance(predicted, rho));
  }
  StudyResult r;
  r.name = "monodromy-consistency";
  r.value = worst;
  r.threshold = 1e-5;
  r.higher_is_better = false;
  r.pass = worst <= r.threshold;
  r.detail = "max |exp(T lambda) - rho| over 10 orbits";
  return r;
}

std::vector<StudyResult> run_all_studies() {
  return {study_spectrum_small_s_order(),
          study_spectrum_large_s_order(),
          study_spectrum_large_s_correction_gain(),
          study_orbit_small_s_order(),
          study_orbit_large_s_profile(),
          study_floquet_eig_order(),
          study_floquet_verdict_agreement(),
          study_monodromy_consistency()};
}

std::vector<StudyResult> run_studies(const std::string& name) {
  if (name.empty() || name == "all") return run_all_studies();
  static const std::pair<const char*, StudyResult (*)()> registry[] = {
      {"spectrum-small-s-order", study_spectrum_small_s_order},
      {"spectrum-large-s-order", study_spectrum_large_s_order},
      {"spectrum-large-s-correction-gain", study_spectrum_large_s_correction_gain},
      {"orbit-small-s-order", study_orbit_small_s_order},
      {"orbit-large-s-profile", study_orbit_large_s_profile},
      {"floquet-approx-eig-order", study_floquet_eig_order},
      {"floquet-verdict-agreement", study_floquet_verdict_agreement},
      {"monodromy-consistency", study_monodromy_consistency},
  };
  for (const auto& [key, fn] : registry)
    if (name == key) return {fn()};
  throw std::invalid_argument("unknown study: " + name);
}

}  // namespace slring
