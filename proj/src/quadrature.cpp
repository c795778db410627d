#include "harmonica/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "harmonica/error.hpp"

namespace harmonica {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0))
    fail(Errc::InvalidParameters, "quadrature tolerances must be positive");
  if (max_subdivisions < 16)
    fail(Errc::InvalidParameters, "max_subdivisions must be at least 16");
  if (!(tail_radius_growth > 1))
    fail(Errc::InvalidParameters, "tail_radius_growth must exceed 1");
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (Kronrod nodes include the
// Gauss-7 nodes at the odd indices).
constexpr double kXgk[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kWgk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr double kWg[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
  double a, b;
  Complex value;
  double error;
};

Panel gk15(const std::function<Complex(double)>& f, double a, double b) {
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  Complex sk{}, sg{};
  for (int i = 0; i < 15; ++i) {
    Complex fv = f(c + h * kXgk[i]);
    sk += kWgk[i] * fv;
    if (i % 2 == 1) sg += kWg[i / 2] * fv;
  }
  Panel p{a, b, h * sk, 0.0};
  double diff = std::abs(h * (sk - sg));
  // standard QUADPACK-style error sharpening
  p.error = diff < 1e-30 ? diff : std::min(diff, std::pow(200.0 * diff, 1.5));
  return p;
}

IntegralResult adaptive_gk(const std::function<Complex(double)>& f, double a,
                           double b, const QuadratureConfig& cfg) {
  if (a == b) return {Complex{}, 0.0};
  std::vector<Panel> heap{gk15(f, a, b)};
  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  int evals = 1;
  while (true) {
    Complex total{};
    double err = 0;
    for (const auto& p : heap) {
      total += p.value;
      err += p.error;
    }
    double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (err <= tol) return {total, err};
    if (evals >= cfg.max_subdivisions)
      fail(Errc::NonConvergent,
           "contour panel budget exhausted, err=" + std::to_string(err));
    std::pop_heap(heap.begin(), heap.end(), worse);
    Panel top = heap.back();
    heap.pop_back();
    double mid = 0.5 * (top.a + top.b);
    heap.push_back(gk15(f, top.a, mid));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(gk15(f, mid, top.b));
    std::push_heap(heap.begin(), heap.end(), worse);
    evals += 2;
  }
}

}  // namespace

IntegralResult integrate_complex(const std::function<Complex(double)>& f,
                                 double a, double b,
                                 const QuadratureConfig& cfg) {
  return adaptive_gk(f, a, b, cfg);
}

RealIntegral integrate_real(const std::function<double(double)>& f, double a,
                            double b, const QuadratureConfig& cfg) {
  auto r = adaptive_gk([&](double t) { return Complex(f(t), 0.0); }, a, b, cfg);
  return {r.value.real(), r.error};
}

double integrate_improper(const std::function<double(double)>& f, double p,
                          double q, bool singular_p, bool singular_q,
                          const QuadratureConfig& cfg) {
  // inverse-square-root endpoints are first removed by the substitution
  // x = p + s^2 (the integrand becomes even-analytic in s); the smooth
  // integral then goes through the tanh-sinh rule
  if (singular_p && singular_q) {
    double mid = 0.5 * (p + q);
    QuadratureConfig half = cfg;
    half.abs_tol = 0.5 * cfg.abs_tol;
    return integrate_improper(f, p, mid, true, false, half) +
           integrate_improper(f, mid, q, false, true, half);
  }
  if (singular_p || singular_q) {
    double sign = singular_p ? 1.0 : -1.0;
    double base = singular_p ? p : q;
    double len = std::sqrt(std::abs(q - p));
    auto raw = [&](double s) { return 2.0 * s * f(base + sign * s * s); };
    // below s_cut the shifted abscissa is absorbed into the endpoint, so the
    // (smooth, even) integrand is continued by its quadratic jet instead
    double s_cut = 1e-4 * len;
    double g1 = raw(s_cut), g2 = raw(s_cut * std::sqrt(2.0));
    double c2 = (g2 - g1) / (s_cut * s_cut);
    double c0 = g1 - c2 * s_cut * s_cut;
    bool extend = std::isfinite(c0) && std::isfinite(c2);
    auto g = [&](double s) {
      if (extend && s < s_cut) return c0 + c2 * s * s;
      return raw(s);
    };
    return integrate_improper(g, 0.0, len, false, false, cfg);
  }
  // tanh-sinh: x = c + h tanh((pi/2) sinh t), doubling the level until two
  // consecutive levels agree.
  double c = 0.5 * (p + q), h = 0.5 * (q - p);
  auto g = [&](double t) {
    double s = std::sinh(t);
    double x = std::tanh(0.5 * kPi * s);
    double wgt = 0.5 * kPi * std::cosh(t) / std::pow(std::cosh(0.5 * kPi * s), 2);
    double xx = std::clamp(c + h * x, std::min(p, q), std::max(p, q));
    double fv = f(xx);
    if (!std::isfinite(fv)) return 0.0;
    return fv * wgt;
  };
  const double t_max = 6.5;
  double step = 0.5;
  double sum = 0;
  for (double t = -t_max; t <= t_max + 1e-12; t += step) sum += g(t);
  double prev = sum * step * h;
  for (int level = 1; level < 12; ++level) {
    // midpoints of the current grid halve the step
    double mid = 0;
    for (double t = -t_max + 0.5 * step; t < t_max; t += step) mid += g(t);
    step *= 0.5;
    double cur = 0.5 * prev + mid * step * h;
    double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(cur));
    if (level >= 3 && std::abs(cur - prev) < tol) return cur;
    if (level == 11) {
      if (!std::isfinite(cur)) fail(Errc::NonConvergent, "tanh-sinh diverged");
      return cur;  // budget reached; error of order the final increment
    }
    prev = cur;
  }
  return prev;
}

IntegralResult integrate_contour(
    const std::function<Complex(const SurfacePoint&)>& f, const PathSpec& path,
    const Domain& dom, const QuadratureConfig& cfg) {
  if (path.pts.size() < 2) fail(Errc::OpenPath, "path needs >= 2 vertices");
  Complex total{};
  double err = 0;
  size_t nseg = path.pts.size() - (path.closed ? 0 : 1);
  QuadratureConfig seg_cfg = cfg;
  seg_cfg.abs_tol = cfg.abs_tol / static_cast<double>(nseg);
  for (size_t i = 0; i < nseg; ++i) {
    const SurfacePoint& a = path.pts[i];
    const SurfacePoint& b = path.pts[(i + 1) % path.pts.size()];
    Complex dz = b.z - a.z;
    auto seg = [&](double t) -> Complex {
      SurfacePoint P(a.z + t * dz);
      if (dom.is_curve()) {
        Complex w_pred =
            (1.0 - t) * a.w.value_or(dom.curve.w_ref(a.z)) +
            t * b.w.value_or(dom.curve.w_ref(b.z));
        P.w = dom.branch_near(P.z, w_pred);
      }
      return f(P) * dz;
    };
    auto r = adaptive_gk(seg, 0.0, 1.0, seg_cfg);
    total += r.value;
    err += r.error;
  }
  return {total, err};
}

Complex cauchy_derivative(const std::function<Complex(Complex)>& f, Complex z0,
                          double radius, const QuadratureConfig& cfg) {
  // (1/2 pi i) contour integral of f/(z-z0)^2; trapezoid on the circle with
  // node doubling (spectrally accurate for holomorphic f).
  auto eval = [&](int n) {
    Complex sum{};
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * kPi * j / n;
      Complex e = std::polar(1.0, th);
      // f(z0 + r e) / (r e)^2 * d z, dz = i r e dth
      sum += f(z0 + radius * e) / e;
    }
    return sum / (static_cast<double>(n) * radius);
  };
  Complex prev = eval(16);
  for (int n = 32; n <= 4096; n *= 2) {
    Complex cur = eval(n);
    if (std::abs(cur - prev) <=
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(cur)))
      return cur;
    prev = cur;
  }
  fail(Errc::NonConvergent, "cauchy_derivative did not stabilize");
}

std::map<int, Complex> laurent_coefficients(
    const std::function<Complex(Complex)>& f, Complex p, int k_min, int k_max,
    double radius, const QuadratureConfig& cfg) {
  auto eval = [&](int n) {
    std::vector<Complex> vals(n);
    for (int j = 0; j < n; ++j)
      vals[j] = f(p + std::polar(radius, 2.0 * kPi * j / n));
    std::map<int, Complex> c;
    for (int k = k_min; k <= k_max; ++k) {
      Complex sum{};
      for (int j = 0; j < n; ++j) {
        double th = 2.0 * kPi * j / n;
        sum += vals[j] * std::polar(1.0, -k * th);
      }
      c[k] = sum / (static_cast<double>(n) * std::pow(radius, k));
    }
    return c;
  };
  int n = 64;
  while (n < 8 * (std::abs(k_min) + std::abs(k_max) + 1)) n *= 2;
  auto prev = eval(n);
  for (n *= 2; n <= 1 << 14; n *= 2) {
    auto cur = eval(n);
    double scale = 0, diff = 0;
    for (auto& [k, v] : cur) {
      scale = std::max(scale, std::abs(v));
      diff = std::max(diff, std::abs(v - prev[k]));
    }
    if (diff <= std::max(cfg.abs_tol, cfg.rel_tol * std::max(scale, 1.0)))
      return cur;
    prev = cur;
  }
  fail(Errc::NonConvergent, "laurent_coefficients did not stabilize");
}

// ---- surface quadrature ----------------------------------------------------

double bump_weight(const SurfaceRegions::Bump& b, Complex z) {
  double r = std::abs(z - b.center);
  if (r <= b.r_flat) return 1.0;
  if (r >= b.r_cut) return 0.0;
  auto sigma = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
  double t = (b.r_cut - r) / (b.r_cut - b.r_flat);
  return sigma(t) / (sigma(t) + sigma(1.0 - t));
}

namespace {

// sheet: 0 plain point, +1/-1 one branch, 2 the sum over both branches
// (smooth across the cuts, where the single-branch sections jump)
double eval_density(const std::function<double(const SurfacePoint&)>& density,
                    const Domain& dom, Complex z, int sheet) {
  if (!dom.is_curve() || sheet == 0) return density(SurfacePoint(z));
  Complex w = dom.curve.w_ref(z);
  if (sheet == 2)
    return density(SurfacePoint(z, w)) + density(SurfacePoint(z, -w));
  return density(SurfacePoint(z, static_cast<double>(sheet) * w));
}

// weight of the region complement of all bumps (for log-polar bulk regions)
double complement_weight(const SurfaceRegions& regions, Complex z) {
  double w = 1.0;
  for (const auto& b : regions.bumps) w -= bump_weight(b, z);
  return w;
}

struct SlabIntegrand {
  const std::function<double(const SurfacePoint&)>& density;
  const Domain& dom;
  const SurfaceRegions& regions;
  const LogPolarRegion& reg;
  bool apply_complement;

  double theta_integral(double rho, const QuadratureConfig& cfg) const {
    double m = std::exp(rho);
    auto f = [&](double th) {
      Complex z = reg.center + std::polar(m, th);
      double wgt = apply_complement ? complement_weight(regions, z) : 1.0;
      if (wgt == 0.0) return 0.0;
      return eval_density(density, dom, z, reg.sheet) * wgt;
    };
    auto r = integrate_real(f, 0.0, 2.0 * kPi, cfg);
    return r.value * m * m;  // log-polar jacobian |z-c|^2
  }
};

RealIntegral integrate_logpolar(
    const std::function<double(const SurfacePoint&)>& density,
    const Domain& dom, const SurfaceRegions& regions, const LogPolarRegion& reg,
    bool apply_complement, const QuadratureConfig& cfg) {
  SlabIntegrand itg{density, dom, regions, reg, apply_complement};
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol * 1e-2;
  inner.rel_tol = std::min(cfg.rel_tol, 1e-7);

  auto slab = [&](double r0, double r1) {
    auto f = [&](double rho) { return itg.theta_integral(rho, inner); };
    return integrate_real(f, r0, r1, inner);
  };

  const double slab_width = 0.5;
  RealIntegral total{};
  // core range
  for (double r0 = reg.rho0; r0 < reg.rho1 - 1e-12; r0 += slab_width) {
    auto s = slab(r0, std::min(r0 + slab_width, reg.rho1));
    total.value += s.value;
    total.error += s.error;
  }
  // geometric tails
  for (int dir = 0; dir < 2; ++dir) {
    bool out = dir == 1;
    if (out ? !reg.tail_out : !reg.tail_in) continue;
    double edge = out ? reg.rho1 : reg.rho0;
    double prev_mag = -1;
    int flat_streak = 0;
    for (int k = 0; k < 400; ++k) {
      double r0 = out ? edge + k * slab_width : edge - (k + 1) * slab_width;
      RealIntegral s;
      try {
        s = slab(r0, r0 + slab_width);
      } catch (const Error& e) {
        // a Klotz-degenerate direction inside a tail slab means the density
        // has stopped decaying toward this end
        if (e.code() == Errc::DegeneratePoint)
          fail(Errc::TailNotDecaying,
               std::string("degenerate density in the tail: ") + e.what());
        throw;
      }
      total.value += s.value;
      total.error += s.error;
      double mag = std::abs(s.value);
      if (mag < cfg.abs_tol) break;
      if (prev_mag >= 0) {
        double q = mag / std::max(prev_mag, 1e-300);
        if (q < 0.9) {
          flat_streak = 0;
          double tail = mag * q / (1.0 - q);
          if (tail < cfg.abs_tol && k >= 1) {
            total.error += tail;
            break;
          }
        } else if (++flat_streak >= 4) {
          fail(Errc::TailNotDecaying,
               "slab integrals not decaying at rho=" + std::to_string(r0) +
                   " (|I|=" + std::to_string(mag) + ")");
        }
      }
      prev_mag = mag;
      if (k == 399)
        fail(Errc::TailNotDecaying, "tail budget exhausted");
    }
  }
  total.value *= reg.weight;
  total.error *= std::abs(reg.weight);
  return total;
}

RealIntegral integrate_cusp_patch(
    const std::function<double(const SurfacePoint&)>& density,
    const Domain& dom, const SurfaceRegions& regions, const CuspPatchRegion& reg,
    const QuadratureConfig& cfg) {
  // polar around the cusp; tanh-sinh in r handles the r^{-1/2} density
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol * 1e-2;
  auto radial = [&](double th) {
    auto f = [&](double r) {
      Complex z = reg.center + std::polar(r, th);
      double wgt = 1.0;
      for (const auto& b : regions.bumps)
        if (std::abs(b.center - reg.center) < 1e-14)
          wgt = bump_weight(b, z);
      return eval_density(density, dom, z, reg.sheet) * wgt * r;
    };
    return integrate_improper(f, 0.0, reg.radius, true, false, inner);
  };
  auto r = integrate_real(radial, 0.0, 2.0 * kPi, inner);
  return {r.value, r.error};
}

}  // namespace

RealIntegral integrate_surface(
    const std::function<double(const SurfacePoint&)>& density,
    const Domain& dom, const SurfaceRegions& regions,
    const QuadratureConfig& cfg) {
  RealIntegral total{};
  bool complement = !regions.bumps.empty();
  for (const auto& reg : regions.logpolar) {
    auto r = integrate_logpolar(density, dom, regions, reg, complement, cfg);
    total.value += r.value;
    total.error += r.error;
  }
  for (const auto& reg : regions.cusps) {
    auto r = integrate_cusp_patch(density, dom, regions, reg, cfg);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  double fa = f(lo), fb = f(hi);
  if (fa == 0) return lo;
  if (fb == 0) return hi;
  if (fa * fb > 0)
    fail(Errc::RootNotBracketed, "no sign change on [" + std::to_string(lo) +
                                     "," + std::to_string(hi) + "]");
  // bisection with secant acceleration
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    double m = 0.5 * (a + b);
    double s = (std::abs(fb - fa) > 1e-300) ? a - fa * (b - a) / (fb - fa) : m;
    double x = (s > a + 0.1 * (b - a) && s < b - 0.1 * (b - a)) ? s : m;
    double fx = f(x);
    if (fx == 0) return x;
    if (fa * fx < 0) {
      b = x;
      fb = fx;
    } else {
      a = x;
      fa = fx;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace harmonica
