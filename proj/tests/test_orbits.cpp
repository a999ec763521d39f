#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "slring/matching.hpp"
#include "slring/orbits.hpp"

using namespace slring;

namespace {

RingParams make(int n, int ell, double s, double alpha = 0.0, double beta = 2.5) {
  RingParams p;
  p.n_osc = n;
  p.shortcut_from = ell;
  p.shortcut_strength = s;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

InhomRingParams make_inhom(int n, double s, double alpha = 0.0, double beta = 2.5) {
  InhomRingParams q;
  q.n_reduced = n;
  q.strength = s;
  q.alpha = alpha;
  q.beta = beta;
  return q;
}

double defect(const RingParams& p, const RelativeEquilibrium& orbit) {
  return rotating_wave_system(p).residual_norm(orbit.profile, orbit.omega);
}

}  // namespace

TEST_CASE("plane waves of the unperturbed ring") {
  const RingParams p = make(20, 6, 0.0, 0.5);
  const RelativeEquilibrium w = plane_wave_s0(p, 0);
  CHECK(w.omega == doctest::Approx(2.5));
  for (int j = 0; j < 20; ++j) CHECK(std::abs(w.profile[j]) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(w.residual < 1e-14);
  // amplitude identity |Z|^2/N = alpha + cos(theta_k)
  const RelativeEquilibrium w3 = plane_wave_s0(p, 3);
  CHECK(w3.mean_square_amplitude() ==
        doctest::Approx(0.5 + std::cos(2.0 * kPi * 3 / 20)).epsilon(1e-13));
  // not-yet-born branch is rejected
  CHECK_THROWS_AS(plane_wave_s0(p, 8), std::invalid_argument);  // cos < -alpha
  CHECK_THROWS_AS(plane_wave_s0(make(20, 6, 0.1, 0.5), 0), std::invalid_argument);  // s != 0
}

TEST_CASE("newton solver fixes exact solutions and the gauge") {
  const RingParams p = make(20, 6, 0.0, 0.3);
  for (int k : {0, 2, 17}) {
    const RelativeEquilibrium w = plane_wave_s0(p, k);
    const RelativeEquilibrium r = solve_relative_equilibrium(p, w, 1e-13);
    CHECK(r.residual < 1e-13);
    CHECK((r.profile - w.profile).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(r.omega - w.omega) < 1e-13);
    CHECK(std::abs(r.profile[0].imag()) < 1e-13);
    CHECK(r.profile[0].real() >= 0.0);
  }
}

TEST_CASE("small-s expansion values") {
  const RingParams p = make(20, 6, 0.1);
  const SmallSOrbit o = orbit_small_s(p, 1, 0.0);
  CHECK(o.omega == doctest::Approx(2.8137722769564232).epsilon(1e-12));
  CHECK(o.profile[0] == Complex(1.0, 0.0));  // v_1 = 1 for all (k, s)
  // s = 0 reduces to the plane-wave profile exactly
  const SmallSOrbit o0 = orbit_small_s(make(20, 6, 0.0), 5, 0.0);
  for (int j = 0; j < 20; ++j) CHECK(std::abs(o0.profile[j] - cpow_int(root_of_unity(20, 5), j)) < 1e-15);
}

TEST_CASE("newton oracle confirms the small-s expansion at second order") {
  const int k = 1;
  std::vector<double> grid = {0.04, 0.02, 0.01, 0.005}, err;
  for (double h : grid) {
    const RingParams p0 = make(20, 6, h);
    const Complex lambda = mode_eigenvalues(p0)[k];
    const RingParams p = p0.with_alpha(-lambda.real() + h);
    const RelativeEquilibrium orbit = solve_relative_equilibrium(p, seed_from_branch(p, k, h), 1e-13);
    CHECK(defect(p, orbit) < 1e-12);
    const SmallSOrbit asym = orbit_small_s(p, k, h);
    const CVector vn = orbit.profile / orbit.profile[0];
    double worst = std::abs(orbit.omega - asym.omega);
    for (int j = 0; j < 20; ++j) worst = std::max(worst, std::abs(vn[j] - asym.profile[j]));
    err.push_back(worst);
  }
  CHECK(fitted_order(grid, err) >= 1.9);
}

TEST_CASE("expansion scale factors through the Newton oracle") {
  // r10 = 0: at s = 0 the scaled first component is exactly 1 for any eps
  // (the plane wave), so v_1 carries no eps-slope at all.
  for (double eps : {0.04, 0.01}) {
    const RingParams p = make(20, 6, 0.0, -std::cos(2.0 * kPi * 2 / 20) + eps);
    const RelativeEquilibrium w = solve_relative_equilibrium(p, plane_wave_s0(p, 2), 1e-13);
    CHECK(std::abs(std::abs(w.profile[0]) / std::sqrt(eps) - 1.0) < 1e-12);
  }

  // The s-slope of v_1, however, does not vanish in general: the oracle
  // measures r01 = -Re(gamma^(l-1)) [(l-1)(l-2) + (N-l+1)(N+l-2)] / (2 N^2),
  // which is zero only when the two inputs to the last node are in
  // quadrature. Branch ratios v_j / v_1 are unaffected at first order.
  auto measured_r01 = [&](int k) {
    const double eps = 1e-6;
    auto v1 = [&](double s) {
      const RingParams p0 = make(20, 6, s);
      const Complex lambda = mode_eigenvalues(p0)[k];
      const RingParams p = p0.with_alpha(-lambda.real() + eps);
      return solve_relative_equilibrium(p, seed_from_branch(p, k, eps), 1e-13).profile[0].real() /
             std::sqrt(eps);
    };
    const double a1 = (v1(0.005) - 1.0) / 0.005, a2 = (v1(0.0025) - 1.0) / 0.0025;
    return 2.0 * a2 - a1;
  };
  auto predicted_r01 = [&](int k) {
    const double kappa = 0.5 * (5.0 * 4.0 + 15.0 * 24.0) / (20.0 * 20.0);
    return -kappa * cpow_int(root_of_unity(20, k), 5).real();
  };
  CHECK(std::abs(measured_r01(1)) < 1e-3);  // quadrature mode
  CHECK(measured_r01(2) == doctest::Approx(predicted_r01(2)).epsilon(1e-3));
  CHECK(measured_r01(4) == doctest::Approx(predicted_r01(4)).epsilon(1e-3));

  // frequency is locally eps-independent: d omega / d eps ~ 0 at onset
  const int k = 2;
  const RingParams p0 = make(20, 6, 0.05);
  const Complex lambda = mode_eigenvalues(p0)[k];
  const double a0 = -lambda.real();
  auto omega_at = [&](double eps) {
    const RingParams p = p0.with_alpha(a0 + eps);
    return solve_relative_equilibrium(p, seed_from_branch(p, k, eps), 1e-13).omega;
  };
  const double slope = (omega_at(0.02) - omega_at(0.01)) / 0.01;
  CHECK(std::abs(slope) < 0.1);  // O(eps + s), not O(1)
}

TEST_CASE("large-s reduced-ring profile") {
  const InhomRingParams q = make_inhom(15, 5.0);
  const LargeSProfile prof = orbit_large_s(q, 0);
  CHECK(prof.v1_sq0 == doctest::Approx(0.14959736970580342).epsilon(1e-12));
  CHECK(prof.alpha0 == doctest::Approx(-std::pow(5.0, 1.0 / 15.0)).epsilon(1e-12));
  CHECK(prof.omega0 == doctest::Approx(2.5));
  // telescoping sum: total mean-square mass is exactly n
  CHECK(prof.v0_sq.sum() == doctest::Approx(15.0).epsilon(1e-12));
  // strictly increasing toward the driven node for s > 1
  for (int j = 0; j + 1 < 15; ++j) CHECK(prof.v0_sq[j] < prof.v0_sq[j + 1]);
  // s -> 1 limit is the homogeneous ring
  const LargeSProfile flat = orbit_large_s(make_inhom(15, 1.0), 0);
  for (int j = 0; j < 15; ++j) CHECK(flat.v0_sq[j] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(orbit_large_s(make_inhom(15, 1.0 + 1e-13), 0).v1_sq0 == doctest::Approx(1.0).epsilon(1e-9));

  // other strengths against independent arithmetic
  CHECK(orbit_large_s(make_inhom(15, 2.0), 0).v1_sq0 ==
        doctest::Approx(0.48412489847312980).epsilon(1e-12));
  CHECK(orbit_large_s(make_inhom(15, 10.0), 0).v1_sq0 ==
        doctest::Approx(0.054447938011897822).epsilon(1e-12));
}

TEST_CASE("reduced-ring newton waves match the leading-order profile") {
  const InhomRingParams q0 = make_inhom(15, 5.0);
  const LargeSProfile prof = orbit_large_s(q0, 0);
  const double eps = 1e-3;
  const InhomRingParams q = q0.with_alpha(prof.alpha0 + eps);
  const RelativeEquilibrium orbit = solve_relative_equilibrium(q, seed_from_branch(q, 0, eps), 1e-13);
  CHECK(orbit.residual < 1e-13);
  // per-node moduli agree with the expansion to O(eps)
  for (int j = 0; j < 15; ++j)
    CHECK(std::norm(orbit.profile[j]) / eps ==
          doctest::Approx(prof.v0_sq[j]).epsilon(0.05));
  CHECK(std::abs(orbit.omega - prof.omega0) < 0.05);
}

TEST_CASE("branch continuation against the closed-form amplitude at s = 0") {
  const RingParams p = make(20, 6, 0.0);
  const int k = 2;
  const double theta = 2.0 * kPi * k / 20.0;
  const ContinuationRun run = continue_branch(p, k, -std::cos(theta) + 0.05, 1.0, 0.05);
  CHECK(run.completed);
  REQUIRE(run.orbits.size() >= 10);
  for (const RelativeEquilibrium& orbit : run.orbits) {
    // recover alpha from the defining equations: alpha = |v|^2 - Re(v_{j+1}/v_j)
    const double alpha_rec =
        std::norm(orbit.profile[0]) - (orbit.profile[1] / orbit.profile[0]).real();
    CHECK(orbit.mean_square_amplitude() ==
          doctest::Approx(alpha_rec + std::cos(theta)).epsilon(1e-9));
    CHECK(defect(p.with_alpha(alpha_rec), orbit) < 1e-10);
  }
}

TEST_CASE("continuation is step-independent after convergence") {
  const RingParams p = make(20, 6, 0.1);
  BranchContinuator fine(p, 1), coarse(p, 1);
  const double target = fine.alpha_crit() + 0.8;
  // force different paths by querying intermediate points on one of them
  for (double a = fine.alpha_crit() + 0.05; a < target; a += 0.013) fine.at(a);
  const RelativeEquilibrium a = fine.at(target);
  const RelativeEquilibrium b = coarse.at(target);
  CHECK((a.profile - b.profile).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs(a.omega - b.omega) < 1e-10);
}

TEST_CASE("desk-scale continuation run across a long branch") {
  // N=100 ring: branch k=4 continues from just above onset to alpha = 2
  RingParams p = make(100, 26, 0.1);
  const Complex lambda = mode_eigenvalues(p)[4];
  const ContinuationRun run = continue_branch(p, 4, -lambda.real() + 0.01, 2.0, 0.05);
  CHECK(run.completed);
  CHECK(run.orbits.size() >= 40);
  for (const RelativeEquilibrium& orbit : run.orbits) CHECK(orbit.residual < 1e-10);
}

TEST_CASE("solver failure modes") {
  const RingParams p = make(20, 6, 0.0, 0.3);
  RelativeEquilibrium silly;
  silly.profile = CVector::Zero(20);
  silly.omega = 2.5;
  // a zero guess has a singular extended system
  CHECK_THROWS_AS(solve_relative_equilibrium(p, silly, 1e-12), NumericalError);
  RelativeEquilibrium wrong_len;
  wrong_len.profile = CVector::Ones(7);
  CHECK_THROWS_AS(solve_relative_equilibrium(p, wrong_len, 1e-12), std::invalid_argument);
}
