#pragma once

#include "harmonica/gauss.hpp"

namespace harmonica {

struct CurvatureSample {
  double K = 0.0;          // Gauss curvature (never positive)
  double mean = 0.0;       // mean curvature w.r.t. the gauss_map normal
  double sigma2 = 0.0;     // |second fundamental form|^2
  double area_density = 0.0;  // dS coefficient of du dv in the chart
};

// Needs phi' (analytic evaluator or cauchy_derivative fallback for
// puncture-free neighborhoods).
CurvatureSample curvature(const WeierstrassData& wd, const SurfacePoint& P);

// K * dS as a density per du dv (chart-invariant numerator K, chart density).
double curvature_density(const WeierstrassData& wd, const SurfacePoint& P);
double bending_density(const WeierstrassData& wd, const SurfacePoint& P);

// Integral of K dS over the regions (raises TailNotDecaying when an end does
// not decay).
RealIntegral total_curvature(const WeierstrassData& wd,
                             const SurfaceRegions& regions,
                             const QuadratureConfig& cfg);

// Integral of |sigma|^2 dS; diverges (TailNotDecaying) exactly for non-FTC
// ends.
RealIntegral bending_energy(const WeierstrassData& wd,
                            const SurfaceRegions& regions,
                            const QuadratureConfig& cfg);

struct DegreeResult {
  int degree = 0;
  double residual = 0.0;  // |tc/(-4 pi) - degree|
  RealIntegral integral;
};

// Degree of the Gauss map from the curvature integral; NonIntegerDegree when
// the residual exceeds 0.05.
DegreeResult gauss_degree(const WeierstrassData& wd,
                          const SurfaceRegions& regions,
                          const QuadratureConfig& cfg);

// 2 deg - (2 genus - 2 + sum (I+1)); zero iff consistent.
int jorge_meeks_check(int genus, const std::vector<int>& weights, int degree);

// Counts solutions of N(z) = target over a sample region by grid search and
// Nelder-Mead refinement (cross-check for gauss_degree).
int count_normal_preimages(const WeierstrassData& wd,
                           const std::vector<SurfacePoint>& seeds,
                           const Vec3& target);

}  // namespace harmonica
