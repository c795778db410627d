#pragma once

#include "harmonica/catalog.hpp"

namespace harmonica {

struct PoleOrders {
  std::array<int, 3> n{0, 0, 0};  // pole orders of the three 1-forms
  int weight = 0;                 // max - 1
};

// Laurent metadata when available, contour extraction otherwise.
PoleOrders pole_orders(const WeierstrassData& wd, const EndId& end,
                       const QuadratureConfig& cfg = {});

struct LimitNormalReport {
  bool converged = false;
  Vec3 direction{};
  double spread = 0.0;  // max angular deviation on the deepest shell
};

LimitNormalReport limit_normal(const WeierstrassData& wd, const EndId& end);

struct FtcCheck {
  bool ftc = false;
  Mat3 rotation;                      // sends the limit normal to (0,0,1)
  bool normal_converged = false;
  Vec3 normal{};
  std::array<int, 3> rotated_orders{0, 0, 0};
  Complex lead_ratio{};               // (R Phi)_2 / (R Phi)_1 at the end
  int weight = 0;
  std::string reason;
};

FtcCheck ftc_criterion(const WeierstrassData& wd, const EndId& end,
                       const QuadratureConfig& cfg = {});

enum class EndType { Catenoidal, Planar, NotFTC };

struct EndReport {
  EndId id;
  PoleOrders orders;
  bool ftc = false;
  Mat3 rotation;
  EndType type = EndType::NotFTC;
  LimitNormalReport normal;
  // catenoidal data (normalized frame)
  double axis_a1 = 0.0, axis_a2 = 0.0;
  int log_growth = 0;  // sign of X3 along the end in the original frame
  // planar data
  bool riemann_type = false;
  Complex phi3_residue{};   // rotated frame, local coordinate
  Vec3 flux_contribution{};  // 2 pi Re(residue triple), original frame
  // expansion remainder diagnostics along 8 rays
  double growth_remainder_max = 0.0;
  double growth_trend_slope = 0.0;
};

// Full end diagnostic; needs the immersion for the expansion checks. Returns
// a NotFTC report for ends without the FTC structure.
EndReport analyze_end(const Family& fam, const EndId& end,
                      const QuadratureConfig& cfg = {});

// analyze_end with the FTC precondition enforced (throws NotFTCEnd).
EndReport classify_end(const Family& fam, const EndId& end,
                       const QuadratureConfig& cfg = {});

struct FluxResult {
  Vec3 v{};
  bool vertical = false;  // first two components below 1e-8
};

// (Im of the contour integrals of Phi_1..3); generator must be closed.
FluxResult flux(const WeierstrassData& wd, const PathSpec& generator,
                const QuadratureConfig& cfg = {});

}  // namespace harmonica
