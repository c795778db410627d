#pragma once

#include "harmonica/ends.hpp"

namespace harmonica {

// Worst residuals over seeded random samples; every bound that the suite
// checks is recorded next to the measured value.
struct IdentityStats {
  int n_samples = 0;
  double worst_eq_g = 0.0;        // |<(2Re g, 2Im g, |g|^2-1), phi>| / |phi|
  double worst_klotz_rel = 0.0;   // | |lambda|^2+|eta|^2 - |phi|^2 | rel
  double min_chain_slack = 0.0;   // min over the two Beltrami chain gaps
  double worst_area_rel = 0.0;    // Re(conj(lambda) eta) vs half sqrt(...)
  double max_gauss_curv = 0.0;    // max K (should stay <= 0)
  double worst_sigma_rel = 0.0;   // sigma2 vs 4 mean^2 - 2K
  double worst_w1_rel = 0.0;      // W.1 reconstruction
  double worst_orth = 0.0;        // <N, Re phi>, <N, Im phi> / |phi|
  double worst_dist_rel = 0.0;    // frame distortion vs closed form
  double worst_mu_rot = 0.0;      // | |mu| - |mu_alt_rotation| |
  double worst_mu_vs_closed = 0.0; // |mu| from frame vs branch-free formula

  bool pass(double scale = 1.0) const;
};

IdentityStats run_identity_suite(const Family& fam, int n_samples,
                                 uint64_t seed);

struct QcEndSummary {
  EndId end;
  QcIndices indices;
};

struct SuiteTimings {
  double identities_ms = 0, ends_ms = 0, curvature_ms = 0;
};

struct VerificationReport {
  FamilySpec spec;
  bool family_valid = true;

  ImmersionCheck immersion;
  bool ran_identities = false;
  IdentityStats identities;

  bool ran_ends = false;
  std::vector<EndReport> end_reports;
  std::vector<QcEndSummary> qc;
  std::vector<FluxResult> fluxes;      // per generator
  std::vector<Vec3> period_vectors;    // real periods per generator
  bool periods_ok = true;
  double torus_b = 0.0;

  bool ran_curvature = false;
  bool ftc = false;
  RealIntegral tc{};
  bool tc_available = false;
  std::string tc_failure;
  bool degree_available = false;
  int degree = 0;
  double degree_residual = 0.0;
  int jorge_meeks_residual = 0;
  bool jorge_meeks_available = false;

  SuiteTimings timings;

  bool pass() const;
  nlohmann::json to_json() const;
};

struct SuiteSelection {
  bool identities = false;
  bool ends = false;
  bool curvature = false;
  static SuiteSelection all() { return {true, true, true}; }
};

VerificationReport run_verification(const Family& fam,
                                    const SuiteSelection& suites,
                                    const QuadratureConfig& cfg,
                                    int identity_samples = 10000,
                                    uint64_t seed = 0);

}  // namespace harmonica
