#include "harmonica/weierstrass.hpp"

#include <algorithm>
#include <cmath>

#include "harmonica/util.hpp"

namespace harmonica {

CTriple eval_phi(const WeierstrassData& wd, const SurfacePoint& P) {
  wd.domain.check_point(P);
  return wd.phi(P);
}

Complex hopf(const WeierstrassData& wd, const SurfacePoint& P) {
  return hopf_coefficient(eval_phi(wd, P));
}

double klotz_density(const WeierstrassData& wd, const SurfacePoint& P) {
  return klotz_of(eval_phi(wd, P));
}

double immersion_margin(const WeierstrassData& wd, const SurfacePoint& P) {
  CTriple phi = eval_phi(wd, P);
  return klotz_of(phi) - std::abs(hopf_coefficient(phi));
}

namespace {

// sampled verification window: the normalized margin of a valid immersion
// may still decay toward an end, so refinement stays inside the hull of the
// sample set instead of chasing boundary asymptotics
struct RefineWindow {
  double abs_lo = 0, abs_hi = 0;      // |z| range
  double min_clearance = 0;           // distance to punctures
};

// normalized margin as a refinement objective; large outside the window
double margin_objective(const WeierstrassData& wd, const SurfacePoint& ref,
                        const RefineWindow& win, Complex z) {
  if (!wd.domain.contains(z, 1e-12)) return 2.0;
  if (std::abs(z) < win.abs_lo || std::abs(z) > win.abs_hi) return 2.0;
  if (wd.domain.clearance(z) < win.min_clearance) return 2.0;
  SurfacePoint P(z);
  if (wd.domain.is_curve()) P.w = wd.domain.branch_near(z, *ref.w);
  CTriple phi = wd.phi(P);
  double k = klotz_of(phi);
  if (!(k > 0) || !std::isfinite(k)) return 2.0;
  double m = (k - std::abs(hopf_coefficient(phi))) / k;
  return std::isfinite(m) ? m : 2.0;
}

// Nelder-Mead descent of the normalized margin from a grid minimizer; the
// sampled minimum of a touching zero scales like the grid spacing squared,
// so the verdict at eps_imm needs the polish.
double refine_margin_min(const WeierstrassData& wd, const SurfacePoint& seed,
                         const RefineWindow& win, SurfacePoint* witness) {
  double h = 0.05 * std::max(0.05, std::abs(seed.z));
  std::array<Complex, 3> s = {seed.z, seed.z + h, seed.z + kI * h};
  std::array<double, 3> f;
  for (int i = 0; i < 3; ++i) f[i] = margin_objective(wd, seed, win, s[i]);
  for (int it = 0; it < 300; ++it) {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (f[j] < f[i]) {
          std::swap(f[i], f[j]);
          std::swap(s[i], s[j]);
        }
    if (std::abs(s[1] - s[0]) + std::abs(s[2] - s[0]) <
        1e-13 * (1.0 + std::abs(s[0])))
      break;
    Complex centroid = 0.5 * (s[0] + s[1]);
    Complex refl = centroid + (centroid - s[2]);
    double fr = margin_objective(wd, seed, win, refl);
    if (fr < f[0]) {
      Complex ex = centroid + 2.0 * (centroid - s[2]);
      double fe = margin_objective(wd, seed, win, ex);
      s[2] = fe < fr ? ex : refl;
      f[2] = std::min(fe, fr);
    } else if (fr < f[1]) {
      s[2] = refl;
      f[2] = fr;
    } else {
      Complex con = centroid + 0.5 * (s[2] - centroid);
      double fc = margin_objective(wd, seed, win, con);
      if (fc < f[2]) {
        s[2] = con;
        f[2] = fc;
      } else {
        s[1] = s[0] + 0.5 * (s[1] - s[0]);
        s[2] = s[0] + 0.5 * (s[2] - s[0]);
        f[1] = margin_objective(wd, seed, win, s[1]);
        f[2] = margin_objective(wd, seed, win, s[2]);
      }
    }
  }
  if (witness) {
    witness->z = s[0];
    if (wd.domain.is_curve())
      witness->w = wd.domain.branch_near(s[0], *seed.w);
  }
  return f[0];
}

}  // namespace

ImmersionCheck verify_immersion(const WeierstrassData& wd,
                                const std::vector<SurfacePoint>& samples,
                                double eps_imm) {
  if (samples.empty()) fail(Errc::EmptySampler, "no sample points");
  RefineWindow win;
  win.abs_lo = std::numeric_limits<double>::infinity();
  win.min_clearance = std::numeric_limits<double>::infinity();
  for (const auto& P : samples) {
    win.abs_lo = std::min(win.abs_lo, std::abs(P.z));
    win.abs_hi = std::max(win.abs_hi, std::abs(P.z));
    win.min_clearance = std::min(win.min_clearance, wd.domain.clearance(P.z));
  }
  win.abs_lo *= 0.9;
  win.abs_hi *= 1.1;
  win.min_clearance *= 0.9;
  if (!std::isfinite(win.min_clearance)) win.min_clearance = 0.0;
  std::vector<std::pair<double, const SurfacePoint*>> ranked;
  ranked.reserve(samples.size());
  for (const auto& P : samples) {
    CTriple phi = wd.phi(P);
    double k = klotz_of(phi);
    double m = k > 0 ? (k - std::abs(hopf_coefficient(phi))) / k : 0.0;
    ranked.emplace_back(m, &P);
  }
  std::partial_sort(ranked.begin(), ranked.begin() + std::min<size_t>(4, ranked.size()),
                    ranked.end());
  ImmersionCheck out;
  out.min_margin = ranked.front().first;
  out.witness = *ranked.front().second;
  for (size_t c = 0; c < std::min<size_t>(4, ranked.size()); ++c) {
    SurfacePoint w;
    double m = refine_margin_min(wd, *ranked[c].second, win, &w);
    if (m < out.min_margin) {
      out.min_margin = m;
      out.witness = w;
    }
  }
  out.pass = out.min_margin > eps_imm;
  return out;
}

std::vector<Vec3> real_periods(const WeierstrassData& wd,
                               const std::vector<PathSpec>& generators,
                               const QuadratureConfig& cfg, double clearance) {
  std::vector<Vec3> out;
  out.reserve(generators.size());
  for (const auto& gamma : generators) {
    if (!gamma.closed) fail(Errc::OpenPath, "period generator must be closed");
    for (const auto& P : gamma.pts)
      if (wd.domain.clearance(P.z) < clearance)
        fail(Errc::PointOutsideDomain, "contour too close to a puncture");
    Vec3 period;
    for (int j = 0; j < 3; ++j) {
      auto r = integrate_contour(
          [&](const SurfacePoint& P) { return wd.phi(P)[j]; }, gamma,
          wd.domain, cfg);
      (&period.x)[j] = r.value.real();
    }
    out.push_back(period);
  }
  return out;
}

Vec3 evaluate_immersion(const Immersion& imm, const SurfacePoint& P,
                        const PathSpec& path, const QuadratureConfig& cfg) {
  if (path.pts.size() < 2)
    fail(Errc::PathEndpointMismatch, "integration path needs >= 2 vertices");
  if (std::abs(path.pts.front().z - imm.basepoint.z) > 1e-12)
    fail(Errc::PathEndpointMismatch, "path must start at the basepoint");
  if (std::abs(path.pts.back().z - P.z) > 1e-12)
    fail(Errc::PathEndpointMismatch, "path must end at the target point");
  Vec3 x = imm.base_value;
  for (int j = 0; j < 3; ++j) {
    auto r = integrate_contour(
        [&](const SurfacePoint& Q) { return imm.wd.phi(Q)[j]; }, path,
        imm.wd.domain, cfg);
    (&x.x)[j] += r.value.real();
  }
  return x;
}

Vec3 evaluate_immersion_direct(const Immersion& imm, const SurfacePoint& P,
                               const QuadratureConfig& cfg) {
  if (imm.has_closed_form()) return imm.closed_form(P);
  const Domain& dom = imm.wd.domain;
  PathSpec path;
  path.pts.push_back(imm.basepoint);
  if (dom.is_curve()) {
    double a = dom.curve.a;
    Complex waypoint{0.0, 0.6};
    // identical tails: a path with the flip loop prepended differs from the
    // straight one by exactly one turn around the branch point at z = a
    auto build = [&](bool flip) {
      PathSpec p;
      p.pts.push_back(imm.basepoint);
      if (flip) {
        double r = 0.4 * std::min(a, 1.0 / a - a);
        extend_path(dom, p, Complex{a, r});
        for (int k = 1; k <= 12; ++k)
          extend_path(dom, p, a + std::polar(r, kPi / 2 + 2 * kPi * k / 12.0));
      }
      if (std::abs(P.z - waypoint) > 1e-9 &&
          std::abs(imm.basepoint.z - waypoint) > 1e-9)
        extend_path(dom, p, waypoint);
      extend_path(dom, p, P.z);
      return p;
    };
    path = build(false);
    Complex w_target = P.w.value_or(*path.pts.back().w);
    if (std::abs(*path.pts.back().w - w_target) >
        std::abs(*path.pts.back().w + w_target)) {
      path = build(true);
      if (std::abs(*path.pts.back().w - w_target) >
          std::abs(*path.pts.back().w + w_target))
        fail(Errc::BranchMismatch, "could not reach the requested sheet");
    }
  } else {
    extend_path(dom, path, P.z);
  }
  Vec3 x = imm.base_value;
  for (int j = 0; j < 3; ++j) {
    auto r = integrate_contour(
        [&](const SurfacePoint& Q) { return imm.wd.phi(Q)[j]; }, path,
        imm.wd.domain, cfg);
    (&x.x)[j] += r.value.real();
  }
  return x;
}

}  // namespace harmonica
