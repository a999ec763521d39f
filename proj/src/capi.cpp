#include "slring.h"

#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "slring/floquet.hpp"
#include "slring/studies.hpp"

using namespace slring;

namespace {

thread_local std::string g_last_error;

slr_status fail(slr_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
slr_status guarded(Fn&& fn) {
  try {
    fn();
    return SLR_OK;
  } catch (const std::invalid_argument& e) {
    return fail(SLR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const OutOfRegimeError& e) {
    return fail(SLR_ERR_OUT_OF_REGIME, e.what());
  } catch (const NumericalError& e) {
    return fail(SLR_ERR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(SLR_ERR_INTERNAL, e.what());
  }
}

}  // namespace

struct slr_ring {
  RingParams params;
};
struct slr_spectrum {
  SpectrumResult result;
};
struct slr_branches {
  std::vector<HopfBranch> rows;
};
struct slr_eckhaus {
  std::vector<EckhausPoint> rows;
};
struct slr_scan {
  struct Row {
    int k;
    RootClass cls;
    ScanSample sample;
  };
  std::vector<Row> rows;
};
struct slr_orbit {
  RelativeEquilibrium orbit;
  RingParams params;
};
struct slr_trace {
  SimulationTrace trace;
  RingParams params;
};
struct slr_studies {
  std::vector<StudyResult> rows;
};

extern "C" {

const char* slr_status_name(slr_status status) {
  switch (status) {
    case SLR_OK: return "ok";
    case SLR_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SLR_ERR_NUMERICAL: return "numerical-failure";
    case SLR_ERR_OUT_OF_REGIME: return "out-of-regime";
    case SLR_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* slr_last_error(void) { return g_last_error.c_str(); }

slr_status slr_ring_create(int n_osc, int shortcut_from, double shortcut_strength, double alpha,
                           double beta, slr_ring** out) {
  if (!out) return fail(SLR_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  return guarded([&] {
    RingParams p;
    p.n_osc = n_osc;
    p.shortcut_from = shortcut_from;
    p.shortcut_strength = shortcut_strength;
    p.alpha = alpha;
    p.beta = beta;
    p.validate();
    *out = new slr_ring{p};
  });
}

void slr_ring_destroy(slr_ring* ring) { delete ring; }

int slr_ring_size(const slr_ring* ring) { return ring ? ring->params.n_osc : 0; }

slr_status slr_zero_stability(const slr_ring* ring, int* stable, double* margin) {
  if (!ring) return fail(SLR_ERR_INVALID_ARGUMENT, "null ring");
  return guarded([&] {
    const ZeroStability z = is_zero_stable(ring->params);
    if (stable) *stable = z.stable ? 1 : 0;
    if (margin) *margin = z.margin;
  });
}

slr_status slr_leading_real_eigenvalue(const slr_ring* ring, double* value) {
  if (!ring || !value) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *value = leading_real_eigenvalue(ring->params); });
}

slr_status slr_spectrum_compute(const slr_ring* ring, double tol, slr_spectrum** out) {
  if (!ring || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new slr_spectrum{spectrum_exact(ring->params, tol)}; });
}

int slr_spectrum_count(const slr_spectrum* spectrum) {
  return spectrum ? static_cast<int>(spectrum->result.eigenvalues.size()) : 0;
}

slr_status slr_spectrum_root(const slr_spectrum* spectrum, int index, int* mode_k, double* re, double* im,
                             double* residual, slr_root_class* cls) {
  if (!spectrum || index < 0 || index >= slr_spectrum_count(spectrum))
    return fail(SLR_ERR_INVALID_ARGUMENT, "bad spectrum index");
  const SpectrumResult& r = spectrum->result;
  if (mode_k) *mode_k = r.mode_labels[index];
  if (re) *re = r.eigenvalues[index].real();
  if (im) *im = r.eigenvalues[index].imag();
  if (residual) *residual = r.residuals[index];
  if (cls) *cls = static_cast<slr_root_class>(r.classes[index]);
  return SLR_OK;
}

void slr_spectrum_destroy(slr_spectrum* spectrum) { delete spectrum; }

slr_status slr_branches_compute(const slr_ring* ring, slr_branches** out) {
  if (!ring || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new slr_branches{hopf_sequence(ring->params)}; });
}

int slr_branches_count(const slr_branches* branches) {
  return branches ? static_cast<int>(branches->rows.size()) : 0;
}

slr_status slr_branches_row(const slr_branches* branches, int index, int* k, double* alpha_crit,
                            double* omega_onset, double* lyapunov_l1, slr_resonance_kind* kind,
                            double* phase_mismatch) {
  if (!branches || index < 0 || index >= slr_branches_count(branches))
    return fail(SLR_ERR_INVALID_ARGUMENT, "bad branch index");
  const HopfBranch& b = branches->rows[index];
  if (k) *k = b.index_k;
  if (alpha_crit) *alpha_crit = b.alpha_crit;
  if (omega_onset) *omega_onset = b.omega_onset;
  if (lyapunov_l1) *lyapunov_l1 = b.lyapunov_l1;
  if (kind) *kind = static_cast<slr_resonance_kind>(b.resonance.kind);
  if (phase_mismatch) *phase_mismatch = b.resonance.phase_mismatch;
  return SLR_OK;
}

void slr_branches_destroy(slr_branches* branches) { delete branches; }

slr_status slr_eckhaus_compute(const slr_ring* ring, slr_floquet_method method, double alpha_max,
                               slr_eckhaus** out) {
  if (!ring || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    ThresholdOptions opts;
    opts.method =
        method == SLR_FLOQUET_APPROX_SMALL_S ? FloquetMethod::ApproxSmallS : FloquetMethod::ExactJacobian;
    if (alpha_max > 0.0) opts.alpha_hi = alpha_max;
    std::vector<int> ks(ring->params.n_osc);
    for (int k = 0; k < ring->params.n_osc; ++k) ks[k] = k;
    *out = new slr_eckhaus{modulated_eckhaus_table(ring->params, ks, opts)};
  });
}

int slr_eckhaus_count(const slr_eckhaus* table) { return table ? static_cast<int>(table->rows.size()) : 0; }

slr_status slr_eckhaus_row(const slr_eckhaus* table, int index, int* k, slr_threshold_status* status,
                           double* alpha_crit, double* omega_onset, double* alpha_star, double* omega_star,
                           double* amplitude_at_star) {
  if (!table || index < 0 || index >= slr_eckhaus_count(table))
    return fail(SLR_ERR_INVALID_ARGUMENT, "bad table index");
  const EckhausPoint& r = table->rows[index];
  if (k) *k = r.branch_k;
  if (status) *status = static_cast<slr_threshold_status>(r.status);
  if (alpha_crit) *alpha_crit = r.alpha_crit;
  if (omega_onset) *omega_onset = r.omega_onset;
  if (alpha_star) *alpha_star = r.alpha_star;
  if (omega_star) *omega_star = r.omega_star;
  if (amplitude_at_star) *amplitude_at_star = r.amplitude_at_star;
  return SLR_OK;
}

void slr_eckhaus_destroy(slr_eckhaus* table) { delete table; }

slr_status slr_scan_compute(const slr_ring* ring, int samples_per_branch, double span_factor,
                            slr_scan** out) {
  if (!ring || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::vector<BranchScan> scans = stability_scan(ring->params, samples_per_branch, span_factor);
    auto* handle = new slr_scan;
    for (const BranchScan& scan : scans)
      for (const ScanSample& sample : scan.samples)
        handle->rows.push_back({scan.branch_k, scan.root_class, sample});
    *out = handle;
  });
}

int slr_scan_count(const slr_scan* scan) { return scan ? static_cast<int>(scan->rows.size()) : 0; }

slr_status slr_scan_row(const slr_scan* scan, int index, int* k, slr_root_class* cls, double* alpha,
                        double* omega, double* amplitude_sq, int* exists, int* stable) {
  if (!scan || index < 0 || index >= slr_scan_count(scan))
    return fail(SLR_ERR_INVALID_ARGUMENT, "bad scan index");
  const slr_scan::Row& r = scan->rows[index];
  if (k) *k = r.k;
  if (cls) *cls = static_cast<slr_root_class>(r.cls);
  if (alpha) *alpha = r.sample.alpha;
  if (omega) *omega = r.sample.omega;
  if (amplitude_sq) *amplitude_sq = r.sample.amplitude_sq;
  if (exists) *exists = r.sample.exists ? 1 : 0;
  if (stable) *stable = r.sample.stable ? 1 : 0;
  return SLR_OK;
}

void slr_scan_destroy(slr_scan* scan) { delete scan; }

slr_status slr_orbit_solve_branch(const slr_ring* ring, int branch_k, slr_orbit** out) {
  if (!ring || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    BranchContinuator cont(ring->params, branch_k);
    *out = new slr_orbit{cont.at(ring->params.alpha), ring->params};
  });
}

slr_status slr_orbit_frequency(const slr_orbit* orbit, double* omega) {
  if (!orbit || !omega) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *omega = orbit->orbit.omega;
  return SLR_OK;
}

slr_status slr_orbit_residual(const slr_orbit* orbit, double* residual) {
  if (!orbit || !residual) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *residual = orbit->orbit.residual;
  return SLR_OK;
}

slr_status slr_orbit_profile(const slr_orbit* orbit, double* re, double* im, size_t cap) {
  if (!orbit || !re || !im) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  const CVector& v = orbit->orbit.profile;
  if (cap < static_cast<size_t>(v.size())) return fail(SLR_ERR_INVALID_ARGUMENT, "profile buffer too small");
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    re[j] = v[j].real();
    im[j] = v[j].imag();
  }
  return SLR_OK;
}

slr_status slr_orbit_stability(const slr_ring* ring, const slr_orbit* orbit, int* stable,
                               double* max_nontrivial_re) {
  if (!ring || !orbit) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const StabilityAssessment sa = assess_orbit(orbit->orbit, orbit->params);
    if (stable) *stable = sa.stable ? 1 : 0;
    if (max_nontrivial_re) *max_nontrivial_re = sa.max_nontrivial_re;
  });
}

void slr_orbit_destroy(slr_orbit* orbit) { delete orbit; }

void slr_sim_options_default(slr_sim_options* opts) {
  if (!opts) return;
  opts->rtol = 1e-9;
  opts->atol = 1e-12;
  opts->stride = 1;
  opts->noise = 0.0;
  opts->seed = 1;
}

namespace {

IntegratorOptions to_integrator_options(const slr_sim_options* opts) {
  IntegratorOptions io;
  if (opts) {
    io.rtol = opts->rtol;
    io.atol = opts->atol;
    io.stride = opts->stride;
  }
  return io;
}

}  // namespace

slr_status slr_simulate(const slr_ring* ring, const double* z0, double t_final,
                        const slr_sim_options* opts, slr_trace** out) {
  if (!ring || !z0 || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    CVector state(ring->params.n_osc);
    for (int j = 0; j < ring->params.n_osc; ++j) state[j] = Complex(z0[2 * j], z0[2 * j + 1]);
    *out = new slr_trace{integrate(SystemKind::Full, state, ring->params, t_final,
                                   to_integrator_options(opts)),
                         ring->params};
  });
}

slr_status slr_simulate_branch_seed(const slr_ring* ring, int branch_k, double eps, double t_final,
                                    const slr_sim_options* opts, slr_trace** out) {
  if (!ring || !out) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    BranchContinuator cont(ring->params, branch_k);
    const double alpha = cont.alpha_crit() + eps;
    const RelativeEquilibrium orbit = cont.at(alpha);
    CVector state = orbit.profile;
    const double noise = opts ? opts->noise : 0.0;
    if (noise != 0.0) {
      std::mt19937_64 rng(opts ? opts->seed : 1);
      const double peak = state.cwiseAbs().maxCoeff();
      for (int j = 0; j < state.size(); ++j) {
        const double u1 = std::uniform_real_distribution<double>(1e-12, 1.0)(rng);
        const double u2 = std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        state[j] += noise * peak * r * Complex(std::cos(u2), std::sin(u2));
      }
    }
    const RingParams at_alpha = ring->params.with_alpha(alpha);
    *out = new slr_trace{integrate(SystemKind::Full, state, at_alpha, t_final, to_integrator_options(opts)),
                         at_alpha};
  });
}

int slr_trace_count(const slr_trace* trace) {
  return trace ? static_cast<int>(trace->trace.times.size()) : 0;
}

int slr_trace_width(const slr_trace* trace) {
  if (!trace || trace->trace.states.empty()) return 0;
  return static_cast<int>(trace->trace.states.front().size());
}

slr_status slr_trace_row(const slr_trace* trace, int index, double* t, double* z_interleaved, size_t cap) {
  if (!trace || index < 0 || index >= slr_trace_count(trace))
    return fail(SLR_ERR_INVALID_ARGUMENT, "bad trace index");
  const CVector& z = trace->trace.states[index];
  if (z_interleaved) {
    if (cap < 2 * static_cast<size_t>(z.size())) return fail(SLR_ERR_INVALID_ARGUMENT, "buffer too small");
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      z_interleaved[2 * j] = z[j].real();
      z_interleaved[2 * j + 1] = z[j].imag();
    }
  }
  if (t) *t = trace->trace.times[index];
  return SLR_OK;
}

slr_status slr_trace_write_csv(const slr_trace* trace, const char* path) {
  if (!trace || !path) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument(std::string("cannot open for writing: ") + path);
    write_trace_csv(os, trace->trace);
  });
}

slr_status slr_trace_measure(const slr_trace* trace, double transient, double* frequency,
                             double* amplitudes, size_t cap, int* converged) {
  if (!trace) return fail(SLR_ERR_INVALID_ARGUMENT, "null trace");
  return guarded([&] {
    const MeasuredOrbit m = measure_orbit(trace->trace, transient);
    if (frequency) *frequency = m.frequency;
    if (converged) *converged = m.converged ? 1 : 0;
    if (amplitudes) {
      if (cap < static_cast<size_t>(m.amplitude_profile.size()))
        throw std::invalid_argument("amplitude buffer too small");
      for (Eigen::Index j = 0; j < m.amplitude_profile.size(); ++j) amplitudes[j] = m.amplitude_profile[j];
    }
  });
}

void slr_trace_destroy(slr_trace* trace) { delete trace; }

slr_status slr_default_transient(const slr_ring* ring, double* transient) {
  if (!ring || !transient) return fail(SLR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *transient = default_transient(ring->params); });
}

slr_status slr_studies_run(const char* name_or_all, slr_studies** out) {
  if (!out) return fail(SLR_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  return guarded([&] { *out = new slr_studies{run_studies(name_or_all ? name_or_all : "all")}; });
}

int slr_studies_count(const slr_studies* studies) {
  return studies ? static_cast<int>(studies->rows.size()) : 0;
}

slr_status slr_studies_row(const slr_studies* studies, int index, const char** name, double* value,
                           double* threshold, int* pass) {
  if (!studies || index < 0 || index >= slr_studies_count(studies))
    return fail(SLR_ERR_INVALID_ARGUMENT, "bad study index");
  const StudyResult& r = studies->rows[index];
  if (name) *name = r.name.c_str();
  if (value) *value = r.value;
  if (threshold) *threshold = r.threshold;
  if (pass) *pass = r.pass ? 1 : 0;
  return SLR_OK;
}

void slr_studies_destroy(slr_studies* studies) { delete studies; }

}  // extern "C"
