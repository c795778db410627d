#include "harmonica/ends.hpp"

#include <algorithm>
#include <cmath>

namespace harmonica {

namespace {

constexpr int kNoOrder = -100;  // component vanishes to working precision

double default_radius(const WeierstrassData& wd, const EndId& end) {
  switch (end.chart) {
    case EndId::Chart::AtPoint: {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& p : wd.domain.punctures)
        if (std::abs(p - end.p) > 1e-12) d = std::min(d, std::abs(p - end.p));
      d = std::min(d, std::max(std::abs(end.p), 0.5));
      return std::min(0.5, 0.45 * d);
    }
    case EndId::Chart::AtInfinity: {
      double m = 1.0;
      for (const auto& p : wd.domain.punctures)
        m = std::max(m, std::abs(p));
      return 0.45 / m;
    }
    default:
      return 0.35 / (1.0 + wd.domain.curve.a);
  }
}

LaurentData laurent_for(const WeierstrassData& wd, const EndId& end,
                        const QuadratureConfig& cfg) {
  if (const LaurentData* d = wd.laurent_at(end)) return *d;
  // contour extraction in the end's local coordinate
  LaurentData d;
  double radius = default_radius(wd, end);
  auto pull = [&](int j) {
    return [&wd, &end, j](Complex t) -> Complex {
      switch (end.chart) {
        case EndId::Chart::AtPoint:
          return wd.phi(SurfacePoint(end.p + t))[j];
        case EndId::Chart::AtInfinity:
          return -wd.phi(SurfacePoint(1.0 / t))[j] / (t * t);
        default: {
          bool near_zero = end.chart == EndId::Chart::CurveZero;
          const CurveEquation& cv = wd.domain.curve;
          return wd.phi(SurfacePoint(cv.z_of_u(t, near_zero), 1.0 / t))[j] *
                 cv.dz_du(t, near_zero);
        }
      }
    };
  };
  QuadratureConfig tight = cfg;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-12;
  for (int j = 0; j < 3; ++j) {
    auto c =
        laurent_coefficients(pull(j), Complex{}, d.k_min, d.k_max, radius, tight);
    for (auto& [k, v] : c) {
      if (d.coeffs.find(k) == d.coeffs.end()) d.coeffs[k] = CTriple{};
      d.coeffs[k][j] = v;
    }
  }
  return d;
}

std::array<int, 3> orders_of(const LaurentData& d, double* scale_out = nullptr) {
  double scale = 0;
  for (const auto& [k, v] : d.coeffs)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(v[j]));
  if (scale_out) *scale_out = scale;
  std::array<int, 3> ord{kNoOrder, kNoOrder, kNoOrder};
  double floor = 1e-8 * scale;
  for (int j = 0; j < 3; ++j)
    for (const auto& [k, v] : d.coeffs)
      if (std::abs(v[j]) > floor) {
        ord[j] = -k;  // first significant exponent
        break;        // map iterates k ascending
      }
  return ord;
}

Complex coeff(const LaurentData& d, int k, int j) {
  auto it = d.coeffs.find(k);
  return it == d.coeffs.end() ? Complex{} : it->second[j];
}

LaurentData rotate_series(const LaurentData& d, const Mat3& rot) {
  LaurentData r = d;
  for (auto& [k, v] : r.coeffs) v = rot.apply(v);
  return r;
}

SurfacePoint end_point(const WeierstrassData& wd, const EndId& end, Complex t) {
  switch (end.chart) {
    case EndId::Chart::AtPoint:
      return SurfacePoint(end.p + t);
    case EndId::Chart::AtInfinity:
      return SurfacePoint(1.0 / t);
    default: {
      bool near_zero = end.chart == EndId::Chart::CurveZero;
      return SurfacePoint(wd.domain.curve.z_of_u(t, near_zero), 1.0 / t);
    }
  }
}

}  // namespace

PoleOrders pole_orders(const WeierstrassData& wd, const EndId& end,
                       const QuadratureConfig& cfg) {
  LaurentData d = laurent_for(wd, end, cfg);
  PoleOrders out;
  out.n = orders_of(d);
  int top = std::max({out.n[0], out.n[1], out.n[2]});
  if (top == kNoOrder)
    fail(Errc::OrderOutOfRange, "all components vanish at " + end.label());
  if (top >= -d.k_min)
    fail(Errc::OrderOutOfRange,
         "pole order reaches the extraction window; extend k_range");
  out.weight = top - 1;
  return out;
}

LimitNormalReport limit_normal(const WeierstrassData& wd, const EndId& end) {
  LimitNormalReport out;
  const int n_shells = 4, n_angles = 32;
  Vec3 prev_mean{};
  for (int s = 0; s < n_shells; ++s) {
    double r = std::pow(10.0, -1.0 - s);  // 1e-1 .. 1e-4
    if (end.chart == EndId::Chart::CurveZero ||
        end.chart == EndId::Chart::CurveInfinity)
      r *= 2.0;  // u-coordinate shells
    Vec3 sum{};
    std::vector<Vec3> ns;
    ns.reserve(n_angles);
    for (int j = 0; j < n_angles; ++j) {
      SurfacePoint P =
          end_point(wd, end, std::polar(r, 2 * kPi * (j + 0.13) / n_angles));
      Vec3 n = gauss_map(wd, P);
      ns.push_back(n);
      sum += n;
    }
    double norm = sum.norm();
    if (norm < 1e-9) {
      out.converged = false;
      out.spread = kPi;
      return out;
    }
    Vec3 mean = sum / norm;
    double spread = 0;
    for (const auto& n : ns)
      spread = std::max(
          spread, std::acos(std::clamp(n.dot(mean), -1.0, 1.0)));
    out.direction = mean;
    out.spread = spread;
    if (s == n_shells - 1) {
      double drift =
          std::acos(std::clamp(mean.dot(prev_mean), -1.0, 1.0));
      out.converged = spread < 1e-3 && drift < 1e-3;
    }
    prev_mean = mean;
  }
  return out;
}

FtcCheck ftc_criterion(const WeierstrassData& wd, const EndId& end,
                       const QuadratureConfig& cfg) {
  FtcCheck out;
  PoleOrders po = pole_orders(wd, end, cfg);
  out.weight = po.weight;
  if (po.weight < 1) {
    out.reason = "weight " + std::to_string(po.weight) + " < 1";
    return out;
  }
  LimitNormalReport ln = limit_normal(wd, end);
  out.normal_converged = ln.converged;
  out.normal = ln.direction;
  if (!ln.converged) {
    out.reason = "limit normal diverges (spread " + std::to_string(ln.spread) +
                 "); Gauss map has no continuous extension";
    return out;
  }
  LaurentData series = laurent_for(wd, end, cfg);
  // sharpen the sampled normal with the leading Laurent coefficients: the
  // limit tangent plane is spanned by Re and Im of the top-order triple
  {
    int top = po.weight + 1;
    CTriple c = {coeff(series, -top, 0), coeff(series, -top, 1),
                 coeff(series, -top, 2)};
    Vec3 re{c[0].real(), c[1].real(), c[2].real()};
    Vec3 im{c[0].imag(), c[1].imag(), c[2].imag()};
    Vec3 cross = re.cross(im);
    double scale = re.norm() * im.norm();
    if (cross.norm() > 1e-8 * scale) {
      Vec3 exact = cross.normalized();
      double align = exact.dot(ln.direction);
      if (std::abs(align) > 0.99)
        out.normal = align > 0 ? exact : exact * -1.0;
    }
  }
  out.rotation = Mat3::rotation_to_north(out.normal);
  LaurentData rot = rotate_series(series, out.rotation);
  out.rotated_orders = orders_of(rot);
  int top = po.weight + 1;
  if (!(out.rotated_orders[0] == top && out.rotated_orders[1] == top &&
        out.rotated_orders[2] < top)) {
    out.reason = "rotated pole orders do not split as (I+1, I+1, <)";
    return out;
  }
  Complex lead1 = coeff(rot, -top, 0), lead2 = coeff(rot, -top, 1);
  out.lead_ratio = lead2 / lead1;
  if (std::abs(out.lead_ratio.imag()) <= 1e-6 * (1.0 + std::abs(out.lead_ratio))) {
    out.reason = "leading coefficient ratio is real";
    return out;
  }
  out.ftc = true;
  return out;
}

namespace {

// integrates Phi along the local-coordinate ray t0 -> t1 into the end
// (pullback integrand; avoids integrating steep poles in the z-chart)
Vec3 integrate_end_ray(const WeierstrassData& wd, const EndId& end, Complex t0,
                       Complex t1, const QuadratureConfig& cfg) {
  Vec3 delta{};
  for (int j = 0; j < 3; ++j) {
    auto f = [&](double s) -> Complex {
      Complex t = t0 + s * (t1 - t0);
      switch (end.chart) {
        case EndId::Chart::AtPoint:
          return wd.phi(SurfacePoint(end.p + t))[j] * (t1 - t0);
        case EndId::Chart::AtInfinity:
          return -wd.phi(SurfacePoint(1.0 / t))[j] / (t * t) * (t1 - t0);
        default: {
          bool nz = end.chart == EndId::Chart::CurveZero;
          const CurveEquation& cv = wd.domain.curve;
          return wd.phi(SurfacePoint(cv.z_of_u(t, nz), 1.0 / t))[j] *
                 cv.dz_du(t, nz) * (t1 - t0);
        }
      }
      return Complex{};
    };
    auto r = integrate_complex(f, 0.0, 1.0, cfg);
    (&delta.x)[j] = r.value.real();
  }
  return delta;
}

// X at the end-chart point t, anchored at |t| = t_anchor on the same ray
Vec3 end_ray_value(const Family& fam, const EndId& end, Complex t,
                   double t_anchor, const QuadratureConfig& cfg) {
  const Immersion& imm = fam.immersion;
  if (imm.has_closed_form())
    return imm.closed_form(end_point(imm.wd, end, t));
  Complex t0 = t / std::abs(t) * t_anchor;
  SurfacePoint P0 = end_point(imm.wd, end, t0);
  Vec3 x0 = evaluate_immersion_direct(imm, P0, cfg);
  return x0 + integrate_end_ray(imm.wd, end, t0, t, cfg);
}

double theil_sen_slope(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  std::vector<double> slopes;
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j)
      if (std::abs(xs[j] - xs[i]) > 1e-12)
        slopes.push_back((ys[j] - ys[i]) / (xs[j] - xs[i]));
  if (slopes.empty()) return 0.0;
  std::nth_element(slopes.begin(), slopes.begin() + slopes.size() / 2,
                   slopes.end());
  return slopes[slopes.size() / 2];
}

}  // namespace

EndReport analyze_end(const Family& fam, const EndId& end,
                      const QuadratureConfig& cfg) {
  const WeierstrassData& wd = fam.wd();
  EndReport rep;
  rep.id = end;
  rep.orders = pole_orders(wd, end, cfg);
  LaurentData series = laurent_for(wd, end, cfg);

  // flux contribution and original-frame residue of Phi_3
  CTriple res = {coeff(series, -1, 0), coeff(series, -1, 1),
                 coeff(series, -1, 2)};
  rep.flux_contribution =
      2 * kPi * Vec3{res[0].real(), res[1].real(), res[2].real()};

  FtcCheck fc = ftc_criterion(wd, end, cfg);
  rep.ftc = fc.ftc;
  rep.rotation = fc.rotation;
  rep.normal = limit_normal(wd, end);
  if (!fc.ftc) {
    rep.type = EndType::NotFTC;
    return rep;
  }

  LaurentData rot = rotate_series(series, fc.rotation);
  double scale = 0;
  orders_of(rot, &scale);
  rep.phi3_residue = coeff(rot, -1, 2);
  bool catenoidal = std::abs(rep.phi3_residue) > 1e-8 * scale;
  rep.type = catenoidal ? EndType::Catenoidal : EndType::Planar;
  if (!catenoidal)
    rep.riemann_type = std::abs(coeff(rot, 0, 2)) > 1e-8 * scale;
  if (std::abs(res[2]) > 1e-8 * scale)
    rep.log_growth = res[2].real() > 0 ? -1 : 1;  // X3 ~ Re(res log t)

  if (rep.orders.weight != 1) return rep;  // expansions assume weight one

  // normalization: T in GL(2,R) sending the leading pair to (1, i)
  Complex p = coeff(rot, -2, 0), q = coeff(rot, -2, 1);
  double det = p.real() * q.imag() - p.imag() * q.real();
  double T[2][2] = {{q.imag() / det, -p.imag() / det},
                    {-q.real() / det, p.real() / det}};
  auto apply_t = [&](double x, double y) {
    return std::array<double, 2>{T[0][0] * x + T[0][1] * y,
                                 T[1][0] * x + T[1][1] * y};
  };
  double rho3 = rep.phi3_residue.real();
  double s3 = catenoidal ? -1.0 / rho3 : 1.0;
  if (catenoidal) {
    Complex c1 = T[0][0] * coeff(rot, -1, 0) + T[0][1] * coeff(rot, -1, 1);
    Complex c2 = T[1][0] * coeff(rot, -1, 0) + T[1][1] * coeff(rot, -1, 1);
    rep.axis_a1 = -c1.real();
    rep.axis_a2 = -c2.real();
  }

  // remainder boundedness along 8 rays into the end
  const int n_rays = 8, n_depth = 9;
  double t_anchor = end.chart == EndId::Chart::CurveZero ||
                            end.chart == EndId::Chart::CurveInfinity
                        ? 0.15
                        : std::min(0.1, default_radius(wd, end));
  double rem_max = 0;
  for (int ray = 0; ray < n_rays; ++ray) {
    std::vector<double> mags(n_depth), heights(n_depth);
    std::vector<std::array<double, 2>> planars(n_depth);
    for (int d = 0; d < n_depth; ++d) {
      double mag = t_anchor * std::pow(10.0, -0.5 * (d + 1));
      Complex t = std::polar(mag, 2 * kPi * (ray + 0.3) / n_rays);
      Vec3 xr = fc.rotation.apply(end_ray_value(fam, end, t, t_anchor, cfg));
      mags[d] = mag;
      planars[d] = apply_t(xr.x, xr.y);
      heights[d] = s3 * xr.z;
    }
    // reference height from the two deepest samples, extrapolating away the
    // linear term of the height expansion
    auto richardson = [&](auto value) {
      double m1 = mags[n_depth - 2], m2 = mags[n_depth - 1];
      double v1 = value(n_depth - 2), v2 = value(n_depth - 1);
      return (v2 * m1 - v1 * m2) / (m1 - m2);
    };
    double ref = catenoidal
                     ? richardson([&](int d) {
                         return heights[d] + std::log(mags[d]);
                       })
                     : richardson([&](int d) { return heights[d]; });
    std::vector<double> xs, ys;
    for (int d = 0; d < n_depth; ++d) {
      double r;
      if (catenoidal) {
        double u = heights[d] - ref;
        r = std::abs(std::exp(u) -
                     std::hypot(planars[d][0] - rep.axis_a1 * u,
                                planars[d][1] - rep.axis_a2 * u));
      } else {
        r = std::hypot(planars[d][0], planars[d][1]) *
            std::abs(heights[d] - ref);
      }
      rem_max = std::max(rem_max, r);
      if (d >= n_depth / 2) {  // deepest half feeds the trend estimate
        xs.push_back(-std::log(mags[d]));
        ys.push_back(r);
      }
    }
    double slope = std::abs(theil_sen_slope(xs, ys));
    rep.growth_trend_slope = std::max(rep.growth_trend_slope, slope);
  }
  rep.growth_remainder_max = rem_max;
  return rep;
}

EndReport classify_end(const Family& fam, const EndId& end,
                       const QuadratureConfig& cfg) {
  EndReport rep = analyze_end(fam, end, cfg);
  if (rep.type == EndType::NotFTC)
    fail(Errc::NotFTCEnd, end.label() + ": end has no FTC structure");
  return rep;
}

FluxResult flux(const WeierstrassData& wd, const PathSpec& generator,
                const QuadratureConfig& cfg) {
  if (!generator.closed) fail(Errc::OpenPath, "flux needs a closed generator");
  FluxResult out;
  for (int j = 0; j < 3; ++j) {
    auto r = integrate_contour(
        [&](const SurfacePoint& P) { return wd.phi(P)[j]; }, generator,
        wd.domain, cfg);
    (&out.v.x)[j] = r.value.imag();
  }
  out.vertical = std::abs(out.v.x) < 1e-8 && std::abs(out.v.y) < 1e-8;
  return out;
}

}  // namespace harmonica
