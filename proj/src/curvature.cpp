#include "harmonica/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "harmonica/util.hpp"

namespace harmonica {

namespace {

CTriple phi_derivative(const WeierstrassData& wd, const SurfacePoint& P) {
  if (wd.has_derivative()) return wd.phi_prime(P);
  if (wd.domain.is_curve())
    fail(Errc::DerivativeUnavailable,
         "no analytic derivative for curve data");
  double radius = std::min(0.1, 0.5 * wd.domain.clearance(P.z));
  if (!(radius > 0) || !std::isfinite(radius))
    fail(Errc::DerivativeUnavailable, "no room for a Cauchy disk");
  QuadratureConfig cfg;
  CTriple d;
  for (int j = 0; j < 3; ++j)
    d[j] = cauchy_derivative(
        [&](Complex z) { return wd.phi(SurfacePoint(z))[j]; }, P.z, radius,
        cfg);
  return d;
}

struct CurvaturePieces {
  double K, mean, sigma2, area_density;
};

CurvaturePieces pieces(const CTriple& phi, const CTriple& dphi) {
  Vec3 v = normal_vector(phi);
  double vn = v.norm();
  double k = klotz_of(phi);
  if (vn <= 1e-14 * k)
    fail(Errc::DegeneratePoint, "vanishing normal in curvature()");
  Vec3 n = v / vn;
  // |phi ^ conj phi| = 2 |X_u x X_v| = sqrt(|phi|^4 - |H|^2)
  double wedge2 = 4.0 * vn * vn;
  Complex h = hopf_coefficient(phi);
  Complex n_dphi = dot(n, dphi);
  double K = -4.0 * std::norm(n_dphi) / wedge2;
  // Re(conj(h) phi') paired with N
  double mean_num = std::real(std::conj(h) * n_dphi);
  double mean = -2.0 * mean_num / wedge2;
  double sigma2 =
      8.0 / wedge2 * (2.0 * mean_num * mean_num / wedge2 + std::norm(n_dphi));
  return {K, mean, sigma2, vn};
}

}  // namespace

CurvatureSample curvature(const WeierstrassData& wd, const SurfacePoint& P) {
  CTriple phi = eval_phi(wd, P);
  CTriple dphi = phi_derivative(wd, P);
  auto c = pieces(phi, dphi);
  return {c.K, c.mean, c.sigma2, c.area_density};
}

double curvature_density(const WeierstrassData& wd, const SurfacePoint& P) {
  auto c = pieces(wd.phi(P), phi_derivative(wd, P));
  return c.K * c.area_density;
}

double bending_density(const WeierstrassData& wd, const SurfacePoint& P) {
  auto c = pieces(wd.phi(P), phi_derivative(wd, P));
  return c.sigma2 * c.area_density;
}

RealIntegral total_curvature(const WeierstrassData& wd,
                             const SurfaceRegions& regions,
                             const QuadratureConfig& cfg) {
  return integrate_surface(
      [&](const SurfacePoint& P) { return curvature_density(wd, P); },
      wd.domain, regions, cfg);
}

RealIntegral bending_energy(const WeierstrassData& wd,
                            const SurfaceRegions& regions,
                            const QuadratureConfig& cfg) {
  return integrate_surface(
      [&](const SurfacePoint& P) { return bending_density(wd, P); }, wd.domain,
      regions, cfg);
}

DegreeResult gauss_degree(const WeierstrassData& wd,
                          const SurfaceRegions& regions,
                          const QuadratureConfig& cfg) {
  DegreeResult out;
  out.integral = total_curvature(wd, regions, cfg);
  double deg = out.integral.value / (-4.0 * kPi);
  out.degree = static_cast<int>(std::lround(deg));
  out.residual = std::abs(deg - out.degree);
  if (out.residual > 0.05)
    fail(Errc::NonIntegerDegree,
         "curvature integral / -4pi = " + std::to_string(deg));
  return out;
}

int jorge_meeks_check(int genus, const std::vector<int>& weights, int degree) {
  int sum = 0;
  for (int w : weights) sum += w + 1;
  return 2 * degree - (2 * genus - 2 + sum);
}

int count_normal_preimages(const WeierstrassData& wd,
                           const std::vector<SurfacePoint>& seeds,
                           const Vec3& target) {
  // local objective |N(z) - target|^2, refined by Nelder-Mead from every
  // promising seed, then clustered
  auto objective = [&](Complex z) -> double {
    SurfacePoint P(z);
    if (wd.domain.is_curve() || !wd.domain.contains(z, 1e-9)) return 4.0;
    Vec3 v = normal_vector(wd.phi(P));
    double vn = v.norm();
    if (vn <= 0) return 4.0;
    Vec3 d = v / vn - target;
    return d.dot(d);
  };
  std::vector<Complex> found;
  for (const auto& seed : seeds) {
    if (objective(seed.z) > 0.5) continue;
    // Nelder-Mead on (x,y)
    double h = 0.1 * std::max(0.05, std::abs(seed.z));
    std::array<Complex, 3> simplex = {seed.z, seed.z + h, seed.z + kI * h};
    std::array<double, 3> f;
    for (int i = 0; i < 3; ++i) f[i] = objective(simplex[i]);
    for (int it = 0; it < 200; ++it) {
      // order
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (f[j] < f[i]) {
            std::swap(f[i], f[j]);
            std::swap(simplex[i], simplex[j]);
          }
      if (f[0] < 1e-18) break;
      Complex centroid = 0.5 * (simplex[0] + simplex[1]);
      Complex refl = centroid + (centroid - simplex[2]);
      double fr = objective(refl);
      if (fr < f[0]) {
        Complex exp_pt = centroid + 2.0 * (centroid - simplex[2]);
        double fe = objective(exp_pt);
        simplex[2] = fe < fr ? exp_pt : refl;
        f[2] = std::min(fe, fr);
      } else if (fr < f[1]) {
        simplex[2] = refl;
        f[2] = fr;
      } else {
        Complex con = centroid + 0.5 * (simplex[2] - centroid);
        double fc = objective(con);
        if (fc < f[2]) {
          simplex[2] = con;
          f[2] = fc;
        } else {
          simplex[1] = simplex[0] + 0.5 * (simplex[1] - simplex[0]);
          simplex[2] = simplex[0] + 0.5 * (simplex[2] - simplex[0]);
          f[1] = objective(simplex[1]);
          f[2] = objective(simplex[2]);
        }
      }
    }
    if (f[0] < 1e-16) {
      Complex root = simplex[0];
      bool fresh = true;
      for (const auto& r : found)
        if (std::abs(r - root) < 1e-4 * (1.0 + std::abs(root))) fresh = false;
      if (fresh) found.push_back(root);
    }
  }
  return static_cast<int>(found.size());
}

}  // namespace harmonica
