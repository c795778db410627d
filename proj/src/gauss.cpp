#include "harmonica/gauss.hpp"

#include <cmath>

#include "harmonica/util.hpp"

namespace harmonica {

namespace {

Vec3 normal_or_fail(const CTriple& phi) {
  Vec3 v = normal_vector(phi);
  double k = klotz_of(phi);
  if (v.norm() <= 1e-14 * k)
    fail(Errc::DegeneratePoint, "vanishing normal (immersion margin ~ 0)");
  return v.normalized();
}

// stereographic projection from the north pole, cancellation-safe near it
Complex stereo(const Vec3& n, bool* infinite) {
  if (infinite) *infinite = false;
  double denom;
  if (n.z > 0) {
    double t = n.x * n.x + n.y * n.y;  // = (1-n3)(1+n3)
    if (t < 1e-300) {
      if (infinite) *infinite = true;
      return {};
    }
    denom = t / (1.0 + n.z);
  } else {
    denom = 1.0 - n.z;
  }
  return Complex(n.x, n.y) / denom;
}

// central finite difference of the rotated complex Gauss map
Complex dz_gauss(const WeierstrassData& wd, const SurfacePoint& P,
                 const Mat3& rot, bool conj_derivative) {
  double scale = wd.domain.clearance(P.z);
  if (!std::isfinite(scale) || scale > 1.0) scale = 1.0;
  double h = 1e-6 * std::max(scale, 1e-3) * std::max(1.0, std::abs(P.z));
  auto g_at = [&](Complex dz) {
    SurfacePoint Q(P.z + dz);
    if (wd.domain.is_curve()) Q.w = wd.domain.branch_near(Q.z, *P.w);
    Vec3 n = rot.apply(normal_or_fail(wd.phi(Q)));
    return stereo(n, nullptr);
  };
  Complex du = (g_at({h, 0}) - g_at({-h, 0})) / (2.0 * h);
  Complex dv = (g_at({0, h}) - g_at({0, -h})) / (2.0 * h);
  // d_z = (d_u - i d_v)/2,  d_zbar = (d_u + i d_v)/2
  return conj_derivative ? 0.5 * (du + kI * dv) : 0.5 * (du - kI * dv);
}

GaussFrame build_frame(const WeierstrassData& wd, const SurfacePoint& P,
                       const Mat3* forced_rotation) {
  CTriple phi = eval_phi(wd, P);
  GaussFrame fr;
  fr.N = normal_or_fail(phi);
  fr.g = stereo(fr.N, &fr.g_infinite);

  fr.rotation = Mat3::identity();
  fr.rotated = false;
  if (forced_rotation) {
    fr.rotation = *forced_rotation;
    fr.rotated = true;
  } else if (std::abs(fr.N.z) > 0.9) {
    fr.rotation = Mat3::rot_y(fr.N.z > 0 ? kPi / 2 : -kPi / 2);
    fr.rotated = true;
  }

  CTriple phir = fr.rotated ? fr.rotation.apply(phi) : phi;
  Vec3 nr = fr.rotated ? fr.rotation.apply(fr.N) : fr.N;
  fr.g_rot = stereo(nr, nullptr);

  double ag = std::abs(fr.g_rot);
  if (ag < 1e-12)
    fail(Errc::DegeneratePoint, "rotated Gauss map at a pole of the chart");
  fr.lambda = phir[2] * (1.0 + ag * ag) / (2.0 * ag);

  Complex h = hopf_coefficient(phi);  // rotation invariant
  Complex eta = std::sqrt(fr.lambda * fr.lambda - h);
  if (std::real(eta * std::conj(fr.lambda)) < 0) eta = -eta;
  fr.eta = eta;

  double denom = 2.0 * std::real(std::conj(fr.lambda) * fr.eta);
  if (denom <= 0)
    fail(Errc::DegeneratePoint, "area form vanished in frame()");
  fr.distortion = (std::norm(fr.lambda) + std::norm(fr.eta)) / denom;

  // full Beltrami value: magnitude from (lambda, eta), phase from d_z g
  Complex ratio = -fr.g_rot * (fr.lambda - fr.eta) /
                  (std::conj(fr.g_rot) * (fr.lambda + fr.eta));
  Complex gz = dz_gauss(wd, P, fr.rotation, false);
  if (std::abs(gz) > 1e-300)
    fr.mu = ratio * std::conj(gz) / gz;
  else
    fr.mu = ratio;  // phase unresolved at a branch point of g
  return fr;
}

}  // namespace

Vec3 gauss_map(const WeierstrassData& wd, const SurfacePoint& P) {
  return normal_or_fail(eval_phi(wd, P));
}

Complex complex_gauss(const WeierstrassData& wd, const SurfacePoint& P,
                      bool* infinite) {
  return stereo(gauss_map(wd, P), infinite);
}

GaussFrame frame(const WeierstrassData& wd, const SurfacePoint& P) {
  return build_frame(wd, P, nullptr);
}

GaussFrame frame_with_rotation(const WeierstrassData& wd,
                               const SurfacePoint& P, const Mat3& rotation) {
  return build_frame(wd, P, &rotation);
}

double beltrami_magnitude(const WeierstrassData& wd, const SurfacePoint& P) {
  CTriple phi = eval_phi(wd, P);
  double k = klotz_of(phi);
  double h = std::abs(hopf_coefficient(phi));
  double s2 = (k - h) * (k + h);
  if (s2 <= 0) fail(Errc::DegeneratePoint, "margin vanished");
  double s = std::sqrt(s2);
  return std::sqrt((k - s) / (k + s));
}

double distortion(const WeierstrassData& wd, const SurfacePoint& P) {
  CTriple phi = eval_phi(wd, P);
  double k = klotz_of(phi);
  double h = std::abs(hopf_coefficient(phi));
  double s2 = (k - h) * (k + h);
  if (s2 <= 0) fail(Errc::DegeneratePoint, "margin vanished");
  return k / std::sqrt(s2);
}

CTriple w1_reconstruct(const GaussFrame& fr) {
  Complex g = fr.g_rot;
  double ag = std::abs(g);
  double re = std::real(g), im = std::imag(g);
  Complex lam = fr.lambda, eta = fr.eta;
  double c1 = (1.0 - ag * ag) / (ag * (1.0 + ag * ag));
  CTriple phir = {re * c1 * lam - kI * (im / ag) * eta,
                  im * c1 * lam + kI * (re / ag) * eta,
                  (2.0 * ag / (1.0 + ag * ag)) * lam};
  return fr.rotated ? fr.rotation.transposed().apply(phir) : phir;
}

QcIndices qc_indices(const WeierstrassData& wd,
                     const std::vector<std::vector<SurfacePoint>>& shells,
                     double chain_tol) {
  if (shells.empty()) fail(Errc::EmptySampler, "no shells");
  QcIndices out;
  for (const auto& shell : shells) {
    if (shell.empty()) fail(Errc::EmptySampler, "empty shell");
    double sup_ratio = 0, sup_mu = 0;
    for (const auto& P : shell) {
      CTriple phi = wd.phi(P);
      double k = klotz_of(phi);
      double h = std::abs(hopf_coefficient(phi));
      sup_ratio = std::max(sup_ratio, h / k);
      double s2 = (k - h) * (k + h);
      double mu = s2 <= 0 ? 1.0
                          : std::sqrt((k - std::sqrt(s2)) / (k + std::sqrt(s2)));
      sup_mu = std::max(sup_mu, mu);
    }
    out.shell_sup_ratio.push_back(sup_ratio);
    out.shell_sup_mu.push_back(sup_mu);
    out.sup_ratio = std::max(out.sup_ratio, sup_ratio);
  }
  out.i_upper = out.shell_sup_ratio.back();
  out.i_lower = out.shell_sup_mu.back();
  double upper_bound = 2.0 * out.i_lower / (1.0 + out.i_lower * out.i_lower);
  out.chain_ok = out.i_lower <= out.i_upper + chain_tol &&
                 out.i_upper <= upper_bound + chain_tol;
  return out;
}

}  // namespace harmonica
