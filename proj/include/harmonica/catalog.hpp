#pragma once

#include <string>

#include "harmonica/curvature.hpp"
#include "harmonica/util.hpp"

// nlohmann/json (vendored single header)
#include "json.hpp"

namespace harmonica {

struct FamilySpec {
  enum class Kind {
    Plane,
    HarmonicGraph,
    HelicoidY1,
    HelicoidY2,
    Rotational,
    Horn,
    Catenoid,
    Flujo,
    Torus,
    NonQCExampleY,
    RemarkContraExample,
  };
  Kind kind = Kind::Plane;

  Complex b{};                        // Rotational
  double r1 = 0.0, r2 = 0.0;          // Horn, Catenoid
  Complex alpha{}, beta{};            // Catenoid
  double flujo_b = 4.0, flujo_c = 0.0;
  double a = 0.5;                     // Torus
  std::vector<Complex> graph_poly;    // HarmonicGraph: f(z) = sum c_k z^k

  std::string name() const;
  static FamilySpec plane();
  static FamilySpec harmonic_graph(std::vector<Complex> poly);
  static FamilySpec helicoid_y1();
  static FamilySpec helicoid_y2();
  static FamilySpec rotational(Complex b);
  static FamilySpec horn(double r1, double r2);
  static FamilySpec catenoid(Complex alpha, Complex beta, double r1 = 0,
                             double r2 = 0);
  static FamilySpec flujo(double b, double c);
  static FamilySpec torus(double a);
  static FamilySpec non_qc_example();
  static FamilySpec remark_contra();
};

FamilySpec family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const FamilySpec& spec);

// ---- validity predicates -------------------------------------------------

// b outside the closed negative real ray; equivalent to positivity of
// 2x^4 + (1-|1-4b|)x^2 + 2|b|^2 on x > 0.
bool rotational_valid(Complex b);

// (alpha,beta) in Omega: |alpha| > |beta| and not (Re alpha >= 0 and
// |Im alpha| <= |beta|).
bool omega_member(Complex alpha, Complex beta);

// b > 3 and c < 2.
bool flujo_valid(double b, double c);

// Determinant of the polar injectivity system:
// -Re(alpha) + 1/m^2 + (m^2/4)(|alpha|^2 - |beta|^2).
double catenoid_injectivity_margin(Complex alpha, Complex beta, double m);

Vec3 catenoid_closed_form(Complex alpha, Complex beta, double r1, double r2,
                          double m, double t);

// ---- torus period problem -------------------------------------------------

struct TorusPeriodDiagnostics {
  double b = 0.0;
  double gamma1_residual = 0.0;   // |Re period of Phi_2 over gamma1| at b
  double gamma2_real_period = 0.0;
  double ratio_candidate_a = 0.0; // -2 I1/I2,  I1 = int 1/|w|, I2 = int 1/(z|w|)
  double ratio_candidate_b = 0.0; // -2 I2/I1
  double matched_ratio = 0.0;     // candidate agreeing with the root
};

// Unique b in (-2,0) with vanishing real gamma1-period of Phi_2; bracketed
// root finding on the contour period, cross-checked against the cut-integral
// ratio.
double torus_period_b(double a, const QuadratureConfig& cfg,
                      TorusPeriodDiagnostics* diag = nullptr);

// ---- assembled families ----------------------------------------------------

struct EndShells {
  EndId end;
  std::vector<std::vector<SurfacePoint>> shells;  // shrinking into the end
};

struct Family {
  FamilySpec spec;
  Immersion immersion;
  int genus = 0;
  std::vector<EndId> ends;
  std::vector<PathSpec> generators;   // homology basis (may be empty)
  SurfaceRegions regions;             // surface-integral decomposition
  bool algebraic = true;

  const WeierstrassData& wd() const { return immersion.wd; }

  // Seeded random point in the family's sampling region (identity suites).
  SurfacePoint sample(Rng& rng) const;
  // Deterministic verification grid (log-polar / cartesian, both sheets).
  std::vector<SurfacePoint> verify_grid(int n_rho, int n_theta) const;
  // Shrinking end-neighborhood shells for qc_indices.
  EndShells end_shells(const EndId& end, int n_shells = 6,
                       int per_shell = 64) const;
  double torus_b = 0.0;  // resolved period parameter (Torus only)
};

// Validity gate + construction. When allow_invalid is set, geometrically
// invalid parameters (failed immersion predicate) still produce data so that
// verify_immersion can exhibit a witness; structurally invalid parameters
// (a outside (0,1), |alpha| = |beta|, duplicate punctures) always throw.
Family make_family(const FamilySpec& spec, const QuadratureConfig& cfg,
                   bool allow_invalid = false);

// Torus data with an explicit b (period solver bypassed); test hook for
// period-violation diagnostics.
Family make_torus_with_b(double a, double b, const QuadratureConfig& cfg);

}  // namespace harmonica
