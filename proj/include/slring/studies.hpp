#pragma once

#include <string>
#include <vector>

#include "slring/floquet.hpp"

namespace slring {

/// One asymptotics-versus-oracle validation study. `value` is a fitted
/// convergence order for the order studies and a direct metric (ratio,
/// fraction, max error) otherwise; `pass` compares it against `threshold`
/// in the direction given by `higher_is_better`.
struct StudyResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool higher_is_better = true;
  bool pass = false;
  std::string detail;
};

StudyResult study_spectrum_small_s_order();
StudyResult study_spectrum_large_s_order();
StudyResult study_spectrum_large_s_correction_gain();
StudyResult study_orbit_small_s_order();
StudyResult study_orbit_large_s_profile();
StudyResult study_floquet_eig_order();
StudyResult study_floquet_verdict_agreement();
StudyResult study_monodromy_consistency();

std::vector<StudyResult> run_all_studies();
/// Empty name or "all" runs everything; otherwise the named study only.
std::vector<StudyResult> run_studies(const std::string& name);

}  // namespace slring
