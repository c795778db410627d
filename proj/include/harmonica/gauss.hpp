#pragma once

#include "harmonica/weierstrass.hpp"

namespace harmonica {

// Pointwise Gauss-map frame. lambda, eta, mu live in the rotated frame
// (rotation = identity when |g| is already in the equatorial band).
struct GaussFrame {
  Vec3 N{};
  Complex g{};
  bool g_infinite = false;
  Complex lambda{}, eta{}, mu{};
  double distortion = 1.0;
  Mat3 rotation;
  bool rotated = false;
  Complex g_rot{};  // complex Gauss map of the rotated data
};

Vec3 gauss_map(const WeierstrassData& wd, const SurfacePoint& P);

// Stereographic projection of the normal from the north pole; infinite flag
// set when N = (0,0,1).
Complex complex_gauss(const WeierstrassData& wd, const SurfacePoint& P,
                      bool* infinite = nullptr);

GaussFrame frame(const WeierstrassData& wd, const SurfacePoint& P);

// Same as frame() but with a caller-chosen admissible rotation (for the
// rotation-invariance checks).
GaussFrame frame_with_rotation(const WeierstrassData& wd,
                               const SurfacePoint& P, const Mat3& rotation);

// Branch-free |mu| = sqrt((|phi|^2 - s)/(|phi|^2 + s)), s = sqrt(|phi|^4-|H|^2).
double beltrami_magnitude(const WeierstrassData& wd, const SurfacePoint& P);

// |phi|^2 / sqrt(|phi|^4 - |H|^2).
double distortion(const WeierstrassData& wd, const SurfacePoint& P);

// Rebuilds the rotated phi triple from (g_rot, lambda, eta) and undoes the
// rotation; equals eval_phi up to roundoff.
CTriple w1_reconstruct(const GaussFrame& fr);

struct QcIndices {
  std::vector<double> shell_sup_ratio;  // sup |H|/|phi|^2 per shell
  std::vector<double> shell_sup_mu;     // sup |mu| per shell
  double sup_ratio = 0.0;               // over all shells
  double i_upper = 0.0;                 // deepest-shell sup of the ratio
  double i_lower = 0.0;                 // deepest-shell sup of |mu|
  bool chain_ok = false;                // i_lower <= i_upper <= 2 i_lower/(1+i_lower^2)
};

// Shells must shrink into one end; suprema are sampled, not certified.
QcIndices qc_indices(const WeierstrassData& wd,
                     const std::vector<std::vector<SurfacePoint>>& shells,
                     double chain_tol = 1e-3);

}  // namespace harmonica
