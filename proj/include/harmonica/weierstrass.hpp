#pragma once

#include <functional>
#include <map>
#include <optional>

#include "harmonica/quadrature.hpp"

namespace harmonica {

// Laurent data of the three 1-form components at one end, in the local
// coordinate of the end's chart (see EndId).
struct LaurentData {
  std::map<int, CTriple> coeffs;  // k -> coefficient triple
  int k_min = -6;
  int k_max = 2;
};

struct EndKey {
  int chart;
  double px, py;
  bool operator<(const EndKey& o) const {
    if (chart != o.chart) return chart < o.chart;
    if (px != o.px) return px < o.px;
    return py < o.py;
  }
};
inline EndKey end_key(const EndId& e) {
  return {static_cast<int>(e.chart), e.p.real(), e.p.imag()};
}

struct WeierstrassData {
  Domain domain;
  std::function<CTriple(const SurfacePoint&)> phi;
  std::function<CTriple(const SurfacePoint&)> phi_prime;  // may be empty
  std::map<EndKey, LaurentData> laurent;

  bool has_derivative() const { return static_cast<bool>(phi_prime); }
  const LaurentData* laurent_at(const EndId& e) const {
    auto it = laurent.find(end_key(e));
    return it == laurent.end() ? nullptr : &it->second;
  }
};

CTriple eval_phi(const WeierstrassData& wd, const SurfacePoint& P);
Complex hopf(const WeierstrassData& wd, const SurfacePoint& P);
double klotz_density(const WeierstrassData& wd, const SurfacePoint& P);

// |phi|^2 - |H|; nonnegative, zero exactly at non-immersed points.
double immersion_margin(const WeierstrassData& wd, const SurfacePoint& P);

struct ImmersionCheck {
  bool pass = false;
  double min_margin = 0.0;  // normalized by |phi|^2
  SurfacePoint witness;
};

// eps_imm applies to the margin normalized by the Klotz density.
ImmersionCheck verify_immersion(const WeierstrassData& wd,
                                const std::vector<SurfacePoint>& samples,
                                double eps_imm = 1e-9);

// Re of the contour integrals of Phi over each closed generator.
std::vector<Vec3> real_periods(const WeierstrassData& wd,
                               const std::vector<PathSpec>& generators,
                               const QuadratureConfig& cfg,
                               double clearance = 1e-3);

struct Immersion {
  WeierstrassData wd;
  SurfacePoint basepoint;
  Vec3 base_value{};
  std::function<Vec3(const SurfacePoint&)> closed_form;  // optional

  bool has_closed_form() const { return static_cast<bool>(closed_form); }
};

// base_value + Re integral of Phi along `path` (which must run from the
// basepoint to P).
Vec3 evaluate_immersion(const Immersion& imm, const SurfacePoint& P,
                        const PathSpec& path, const QuadratureConfig& cfg);

// Integrates along the straight-line (branch-continued) path basepoint -> P.
Vec3 evaluate_immersion_direct(const Immersion& imm, const SurfacePoint& P,
                               const QuadratureConfig& cfg);

}  // namespace harmonica
