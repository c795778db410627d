#include "harmonica/report.hpp"

#include <chrono>
#include <cmath>
#include <mutex>

namespace harmonica {

namespace {

double rel_err(double a, double b) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

bool IdentityStats::pass(double) const {
  return worst_eq_g < 1e-9 && worst_klotz_rel < 1e-10 &&
         min_chain_slack >= -1e-9 && worst_area_rel < 1e-10 &&
         max_gauss_curv <= 1e-12 && worst_sigma_rel < 1e-9 &&
         worst_w1_rel < 1e-9;
}

IdentityStats run_identity_suite(const Family& fam, int n_samples,
                                 uint64_t seed) {
  const WeierstrassData& wd = fam.wd();
  IdentityStats st;
  st.n_samples = n_samples;
  st.min_chain_slack = std::numeric_limits<double>::infinity();
  st.max_gauss_curv = -std::numeric_limits<double>::infinity();

  std::vector<SurfacePoint> pts(n_samples);
  Rng rng(seed ^ 0x5eed0000u);
  for (auto& P : pts) P = fam.sample(rng);

  std::mutex mtx;
  int chunk = 256;
  int n_chunks = (n_samples + chunk - 1) / chunk;
  parallel_for(n_chunks, [&](int ci) {
    IdentityStats local = st;
    for (int s = ci * chunk; s < std::min((ci + 1) * chunk, n_samples); ++s) {
      const SurfacePoint& P = pts[s];
      CTriple phi = wd.phi(P);
      double klotz = klotz_of(phi);
      double norm_phi = std::sqrt(klotz);
      Complex h = hopf_coefficient(phi);
      double abs_h = std::abs(h);

      GaussFrame fr = frame(wd, P);

      // identity (g): <(2 Re g, 2 Im g, |g|^2-1), phi> = 0, evaluated in the
      // rotated frame so g stays finite
      {
        CTriple phir = fr.rotated ? fr.rotation.apply(phi) : phi;
        Complex g = fr.g_rot;
        Complex resid = 2.0 * g.real() * phir[0] + 2.0 * g.imag() * phir[1] +
                        (std::norm(g) - 1.0) * phir[2];
        local.worst_eq_g =
            std::max(local.worst_eq_g, std::abs(resid) / norm_phi);
      }
      // Klotz splitting |lambda|^2 + |eta|^2 = |phi|^2
      local.worst_klotz_rel = std::max(
          local.worst_klotz_rel,
          rel_err(std::norm(fr.lambda) + std::norm(fr.eta), klotz));
      // area identity Re(conj(lambda) eta) = sqrt(|phi|^4 - |H|^2) / 2
      double s2 = (klotz - abs_h) * (klotz + abs_h);
      local.worst_area_rel =
          std::max(local.worst_area_rel,
                   rel_err(std::real(std::conj(fr.lambda) * fr.eta),
                           0.5 * std::sqrt(s2)));
      // Beltrami chain |mu| <= |H|/|phi|^2 <= 2|mu|/(1+|mu|^2)
      double mu_cf = beltrami_magnitude(wd, P);
      double ratio = abs_h / klotz;
      local.min_chain_slack = std::min(
          {local.min_chain_slack, ratio - mu_cf,
           2.0 * mu_cf / (1.0 + mu_cf * mu_cf) - ratio, 1.0 - ratio});
      local.worst_mu_vs_closed =
          std::max(local.worst_mu_vs_closed, std::abs(std::abs(fr.mu) - mu_cf));
      // distortion: frame value vs the closed form
      local.worst_dist_rel = std::max(
          local.worst_dist_rel, rel_err(fr.distortion, klotz / std::sqrt(s2)));
      // rotation invariance of |mu|
      {
        Mat3 alt = std::abs(fr.N.z) > 0.9
                       ? Mat3::rot_x(fr.N.z > 0 ? -kPi / 2 : kPi / 2)
                       : Mat3::rot_z(0.7);
        GaussFrame fr2 = frame_with_rotation(wd, P, alt);
        local.worst_mu_rot = std::max(
            local.worst_mu_rot, std::abs(std::abs(fr2.mu) - std::abs(fr.mu)));
      }
      // W.1 reconstruction
      {
        CTriple back = w1_reconstruct(fr);
        double err = 0;
        for (int j = 0; j < 3; ++j) err += std::norm(back[j] - phi[j]);
        local.worst_w1_rel =
            std::max(local.worst_w1_rel, std::sqrt(err) / norm_phi);
      }
      // orthogonality of the normal
      {
        Vec3 re{phi[0].real(), phi[1].real(), phi[2].real()};
        Vec3 im{phi[0].imag(), phi[1].imag(), phi[2].imag()};
        local.worst_orth =
            std::max({local.worst_orth, std::abs(fr.N.dot(re)) / norm_phi,
                      std::abs(fr.N.dot(im)) / norm_phi});
      }
      // curvature identities
      if (wd.has_derivative()) {
        CurvatureSample cs = curvature(wd, P);
        local.max_gauss_curv = std::max(local.max_gauss_curv, cs.K);
        local.worst_sigma_rel = std::max(
            local.worst_sigma_rel,
            rel_err(cs.sigma2, 4.0 * cs.mean * cs.mean - 2.0 * cs.K));
      }
    }
    std::lock_guard<std::mutex> lock(mtx);
    st.worst_eq_g = std::max(st.worst_eq_g, local.worst_eq_g);
    st.worst_klotz_rel = std::max(st.worst_klotz_rel, local.worst_klotz_rel);
    st.min_chain_slack = std::min(st.min_chain_slack, local.min_chain_slack);
    st.worst_area_rel = std::max(st.worst_area_rel, local.worst_area_rel);
    st.max_gauss_curv = std::max(st.max_gauss_curv, local.max_gauss_curv);
    st.worst_sigma_rel = std::max(st.worst_sigma_rel, local.worst_sigma_rel);
    st.worst_w1_rel = std::max(st.worst_w1_rel, local.worst_w1_rel);
    st.worst_orth = std::max(st.worst_orth, local.worst_orth);
    st.worst_dist_rel = std::max(st.worst_dist_rel, local.worst_dist_rel);
    st.worst_mu_rot = std::max(st.worst_mu_rot, local.worst_mu_rot);
    st.worst_mu_vs_closed =
        std::max(st.worst_mu_vs_closed, local.worst_mu_vs_closed);
  });
  return st;
}

bool VerificationReport::pass() const {
  if (!family_valid || !immersion.pass) return false;
  if (ran_identities && !identities.pass()) return false;
  if (ran_ends && !periods_ok) return false;
  return true;
}

namespace {

nlohmann::json vec_json(const Vec3& v) {
  return nlohmann::json::array({v.x, v.y, v.z});
}

nlohmann::json num_tol(double value, double tol) {
  return {{"value", value}, {"tol", tol}};
}

const char* end_type_name(EndType t) {
  switch (t) {
    case EndType::Catenoidal: return "catenoidal";
    case EndType::Planar: return "planar";
    case EndType::NotFTC: return "not-ftc";
  }
  return "?";
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["family"] = family_to_json(spec);
  j["family_valid"] = family_valid;
  j["pass"] = pass();

  j["immersion"] = {{"pass", immersion.pass},
                    {"min_margin", num_tol(immersion.min_margin, 1e-9)},
                    {"witness", {{"z", format_complex(immersion.witness.z)}}}};
  if (immersion.witness.w)
    j["immersion"]["witness"]["w"] = format_complex(*immersion.witness.w);

  if (ran_identities) {
    j["identities"] = {
        {"n_samples", identities.n_samples},
        {"pass", identities.pass()},
        {"eq_g", num_tol(identities.worst_eq_g, 1e-9)},
        {"klotz_split_rel", num_tol(identities.worst_klotz_rel, 1e-10)},
        {"chain_slack_min", num_tol(identities.min_chain_slack, -1e-9)},
        {"area_identity_rel", num_tol(identities.worst_area_rel, 1e-10)},
        {"max_gauss_curvature", num_tol(identities.max_gauss_curv, 1e-12)},
        {"sigma2_rel", num_tol(identities.worst_sigma_rel, 1e-9)},
        {"w1_reconstruction_rel", num_tol(identities.worst_w1_rel, 1e-9)},
        {"normal_orthogonality", num_tol(identities.worst_orth, 1e-10)},
        {"distortion_rel", num_tol(identities.worst_dist_rel, 1e-9)},
        {"mu_rotation_invariance", num_tol(identities.worst_mu_rot, 1e-9)},
    };
  }

  if (ran_ends) {
    auto ends_json = nlohmann::json::array();
    for (const auto& er : end_reports) {
      nlohmann::json e;
      e["end"] = er.id.label();
      e["pole_orders"] = {er.orders.n[0], er.orders.n[1], er.orders.n[2]};
      e["weight"] = er.orders.weight;
      e["ftc"] = er.ftc;
      e["type"] = end_type_name(er.type);
      e["limit_normal"] = {{"converged", er.normal.converged},
                           {"direction", vec_json(er.normal.direction)},
                           {"spread", num_tol(er.normal.spread, 1e-3)}};
      if (er.type == EndType::Catenoidal) {
        e["axis"] = {er.axis_a1, er.axis_a2, 1.0};
        e["log_growth"] = er.log_growth;
      }
      if (er.type == EndType::Planar) e["riemann_type"] = er.riemann_type;
      e["phi3_residue"] = format_complex(er.phi3_residue);
      e["flux_contribution"] = vec_json(er.flux_contribution);
      e["growth_remainder_max"] = er.growth_remainder_max;
      e["growth_trend_slope"] = num_tol(er.growth_trend_slope, 1e-3);
      ends_json.push_back(e);
    }
    j["ends"] = ends_json;

    auto qc_json = nlohmann::json::array();
    for (const auto& q : qc) {
      qc_json.push_back({{"end", q.end.label()},
                         {"shell_sup_ratio", q.indices.shell_sup_ratio},
                         {"shell_sup_mu", q.indices.shell_sup_mu},
                         {"sup_ratio", q.indices.sup_ratio},
                         {"i_upper", q.indices.i_upper},
                         {"i_lower", q.indices.i_lower},
                         {"chain_ok", q.indices.chain_ok}});
    }
    j["qc_indices"] = qc_json;

    auto flux_json = nlohmann::json::array();
    for (const auto& f : fluxes)
      flux_json.push_back(
          {{"vector", vec_json(f.v)}, {"vertical", f.vertical}});
    j["flux"] = flux_json;

    auto periods_json = nlohmann::json::array();
    for (const auto& p : period_vectors)
      periods_json.push_back(num_tol(p.norm_inf(), 1e-8));
    j["real_periods"] = periods_json;
    j["periods_ok"] = periods_ok;
    if (spec.kind == FamilySpec::Kind::Torus) j["torus_b"] = torus_b;
  }

  if (ran_curvature) {
    j["ftc"] = ftc;
    if (tc_available) {
      j["total_curvature"] = {{"value", tc.value},
                              {"error_estimate", tc.error},
                              {"per_minus_4pi", tc.value / (-4 * kPi)}};
      if (degree_available)
        j["gauss_degree"] = {{"degree", degree},
                             {"residual", num_tol(degree_residual, 0.05)}};
      if (jorge_meeks_available)
        j["jorge_meeks_residual"] = jorge_meeks_residual;
    } else if (!tc_failure.empty()) {
      j["total_curvature"] = {{"failure", tc_failure}};
    } else {
      j["total_curvature"] = {{"skipped", "data is not algebraic"}};
    }
  }

  j["timings_ms"] = {{"identities", timings.identities_ms},
                     {"ends", timings.ends_ms},
                     {"curvature", timings.curvature_ms}};
  return j;
}

VerificationReport run_verification(const Family& fam,
                                    const SuiteSelection& suites,
                                    const QuadratureConfig& cfg,
                                    int identity_samples, uint64_t seed) {
  VerificationReport rep;
  rep.spec = fam.spec;
  rep.torus_b = fam.torus_b;

  switch (fam.spec.kind) {
    case FamilySpec::Kind::Rotational:
      rep.family_valid = rotational_valid(fam.spec.b);
      break;
    case FamilySpec::Kind::Catenoid:
      rep.family_valid = omega_member(fam.spec.alpha, fam.spec.beta);
      break;
    case FamilySpec::Kind::Flujo:
      rep.family_valid = flujo_valid(fam.spec.flujo_b, fam.spec.flujo_c);
      break;
    default:
      break;
  }

  rep.immersion = verify_immersion(fam.wd(), fam.verify_grid(100, 100));

  if (suites.identities && rep.immersion.pass) {
    auto t0 = std::chrono::steady_clock::now();
    rep.ran_identities = true;
    rep.identities = run_identity_suite(fam, identity_samples, seed);
    rep.timings.identities_ms = ms_since(t0);
  }

  if (suites.ends && rep.immersion.pass) {
    auto t0 = std::chrono::steady_clock::now();
    rep.ran_ends = true;
    if (fam.algebraic)
      for (const auto& end : fam.ends)
        rep.end_reports.push_back(analyze_end(fam, end, cfg));
    for (const auto& end : fam.ends) {
      QcEndSummary q;
      q.end = end;
      q.indices = qc_indices(fam.wd(), fam.end_shells(end).shells);
      rep.qc.push_back(q);
    }
    for (const auto& gamma : fam.generators)
      rep.fluxes.push_back(flux(fam.wd(), gamma, cfg));
    if (!fam.generators.empty()) {
      rep.period_vectors = real_periods(fam.wd(), fam.generators, cfg, 1e-3);
      for (const auto& p : rep.period_vectors)
        if (p.norm_inf() > 1e-8) rep.periods_ok = false;
    }
    rep.timings.ends_ms = ms_since(t0);
  }

  if (suites.curvature && rep.immersion.pass) {
    auto t0 = std::chrono::steady_clock::now();
    rep.ran_curvature = true;
    rep.ftc = fam.algebraic;
    for (const auto& er : rep.end_reports)
      if (!er.ftc) rep.ftc = false;
    if (!suites.ends && fam.algebraic) {
      rep.ftc = true;
      for (const auto& end : fam.ends)
        if (!ftc_criterion(fam.wd(), end, cfg).ftc) rep.ftc = false;
    }
    if (fam.algebraic) {
      try {
        rep.tc = total_curvature(fam.wd(), fam.regions, cfg);
        rep.tc_available = true;
        double deg = rep.tc.value / (-4.0 * kPi);
        rep.degree = static_cast<int>(std::lround(deg));
        rep.degree_residual = std::abs(deg - rep.degree);
        rep.degree_available = rep.degree_residual <= 0.05;
        if (rep.degree_available && rep.ftc) {
          std::vector<int> weights;
          for (const auto& end : fam.ends)
            weights.push_back(pole_orders(fam.wd(), end, cfg).weight);
          rep.jorge_meeks_residual =
              jorge_meeks_check(fam.genus, weights, rep.degree);
          rep.jorge_meeks_available = true;
        }
      } catch (const Error& e) {
        rep.tc_available = false;
        rep.tc_failure = e.what();
      }
    }
    rep.timings.curvature_ms = ms_since(t0);
  }
  return rep;
}

}  // namespace harmonica
