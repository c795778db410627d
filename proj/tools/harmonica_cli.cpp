// harmonica: harmonic-immersion toolkit CLI.
// Subcommands: generate (meshes), verify (check suites), periods (torus
// period solver), report (full JSON report).

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "harmonica/mesh.hpp"
#include "harmonica/report.hpp"

using namespace harmonica;

namespace {

constexpr int kExitSuiteFailure = 1;
constexpr int kExitInvalidParameters = 2;
constexpr int kExitQuadratureFailure = 3;
constexpr int kExitIo = 4;

struct FamilyOptions {
  std::string family;
  std::string spec_file;
  std::string b, alpha, beta;
  double r1 = 0, r2 = 0;
  double flujo_b = 4, flujo_c = 0;
  double a = 0.5;
  std::string poly;
};

void add_family_flags(CLI::App* cmd, FamilyOptions& fo) {
  cmd->add_option("--family", fo.family,
                  "plane|graph|helicoid-y1|helicoid-y2|rotational|horn|"
                  "catenoid|flujo|torus|nonqc-y|contra");
  cmd->add_option("--spec", fo.spec_file, "JSON family spec file");
  cmd->add_option("--b", fo.b, "rotational parameter b (complex, a+bi)");
  cmd->add_option("--alpha", fo.alpha, "catenoid alpha (complex)");
  cmd->add_option("--beta", fo.beta, "catenoid beta (complex)");
  cmd->add_option("--r1", fo.r1, "log coefficient r1");
  cmd->add_option("--r2", fo.r2, "log coefficient r2");
  cmd->add_option("--flujo-b", fo.flujo_b, "flujo parameter b (> 3)");
  cmd->add_option("--flujo-c", fo.flujo_c, "flujo parameter c (< 2)");
  cmd->add_option("--a", fo.a, "torus modulus a in (0,1)");
  cmd->add_option("--poly", fo.poly,
                  "graph polynomial coefficients c0,c1,... (complex)");
}

FamilySpec resolve_spec(const FamilyOptions& fo) {
  if (!fo.spec_file.empty()) {
    std::ifstream is(fo.spec_file);
    if (!is) fail(Errc::IoError, "cannot open spec file " + fo.spec_file);
    nlohmann::json j;
    is >> j;
    return family_from_json(j);
  }
  nlohmann::json j;
  j["family"] = fo.family;
  nlohmann::json params;
  if (!fo.b.empty()) params["b"] = fo.b;
  if (!fo.alpha.empty()) params["alpha"] = fo.alpha;
  if (!fo.beta.empty()) params["beta"] = fo.beta;
  params["r1"] = fo.r1;
  params["r2"] = fo.r2;
  if (fo.family == "flujo") {
    params["b"] = fo.flujo_b;
    params["c"] = fo.flujo_c;
  }
  if (fo.family == "torus") params["a"] = fo.a;
  if (fo.family == "graph" && !fo.poly.empty()) {
    auto arr = nlohmann::json::array();
    std::string cur;
    for (char ch : fo.poly + ",") {
      if (ch == ',') {
        if (!cur.empty()) arr.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    params["poly"] = arr;
  }
  j["params"] = params;
  return family_from_json(j);
}

MeshGrid parse_grid(const std::string& text, double rho0, double rho1) {
  MeshGrid g;
  g.rho0 = rho0;
  g.rho1 = rho1;
  if (!text.empty()) {
    auto x = text.find('x');
    if (x == std::string::npos)
      fail(Errc::InvalidParameters, "grid must look like 128x128");
    g.n_rho = std::atoi(text.substr(0, x).c_str());
    g.n_theta = std::atoi(text.substr(x + 1).c_str());
    if (g.n_rho < 2 || g.n_theta < 3)
      fail(Errc::InvalidParameters, "grid too small");
  }
  return g;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::InvalidParameters:
    case Errc::PointOutsideDomain:
      return kExitInvalidParameters;
    case Errc::IoError:
      return kExitIo;
    default:
      return kExitQuadratureFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonica: harmonic immersions of Riemann surfaces in R^3"};
  app.require_subcommand(1);
  app.fallthrough();

  QuadratureConfig cfg;
  uint64_t seed = 0;
  bool json_out = false;
  app.add_option("--tol-abs", cfg.abs_tol, "absolute quadrature tolerance");
  app.add_option("--tol-rel", cfg.rel_tol, "relative quadrature tolerance");
  app.add_option("--max-subdivisions", cfg.max_subdivisions,
                 "adaptive panel budget");
  app.add_option("--tail-growth", cfg.tail_radius_growth,
                 "tail radius growth factor");
  app.add_option("--seed", seed, "sampling seed (default 0)");
  app.add_flag("--json", json_out, "machine-readable stdout");

  // generate
  auto* gen = app.add_subcommand("generate", "sample a mesh and write it");
  FamilyOptions gen_fo;
  add_family_flags(gen, gen_fo);
  std::string grid_text, out_path = "out.obj", format;
  double rho0 = -2.5, rho1 = 2.5;
  gen->add_option("--grid", grid_text, "grid size NxM (default 128x128)");
  gen->add_option("--rho-min", rho0, "log-polar inner exponent");
  gen->add_option("--rho-max", rho1, "log-polar outer exponent");
  gen->add_option("--out", out_path, "output file (.obj/.ply/.csv)");
  gen->add_option("--format", format, "obj|ply|csv (default from extension)");

  // verify
  auto* ver = app.add_subcommand("verify", "run verification suites");
  FamilyOptions ver_fo;
  add_family_flags(ver, ver_fo);
  std::string suite = "all";
  int n_samples = 10000;
  ver->add_option("--suite", suite, "identities|ends|curvature|all");
  ver->add_option("--samples", n_samples, "identity-suite sample count");

  // periods
  auto* per = app.add_subcommand("periods", "torus period solver b(a)");
  double per_a = 0.5;
  std::string sweep;
  per->add_option("--a", per_a, "torus modulus in (0,1)");
  per->add_option("--sweep", sweep, "a-grid lo:hi:count");

  // report
  auto* repc = app.add_subcommand("report", "full verification report (JSON)");
  FamilyOptions rep_fo;
  add_family_flags(repc, rep_fo);
  std::string rep_out;
  int rep_samples = 10000;
  repc->add_option("--out", rep_out, "write the report to a file");
  repc->add_option("--samples", rep_samples, "identity-suite sample count");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.validate();
    if (*gen) {
      FamilySpec spec = resolve_spec(gen_fo);
      Family fam = make_family(spec, cfg);
      MeshGrid grid = parse_grid(grid_text, rho0, rho1);
      SurfaceMesh mesh = sample_mesh(fam, grid, cfg);
      std::string fmt = format;
      if (fmt.empty()) {
        auto dot = out_path.rfind('.');
        fmt = dot == std::string::npos ? "obj" : out_path.substr(dot + 1);
      }
      if (fmt == "obj")
        export_obj(mesh, out_path);
      else if (fmt == "ply")
        export_ply(mesh, out_path);
      else if (fmt == "csv")
        export_csv(mesh, out_path);
      else
        fail(Errc::InvalidParameters, "unknown format " + fmt);
      if (json_out)
        std::cout << nlohmann::json{{"out", out_path},
                                    {"vertices", mesh.vertices.size()},
                                    {"faces", mesh.faces.size()}}
                  << "\n";
      else
        std::cout << "wrote " << out_path << " (" << mesh.vertices.size()
                  << " vertices, " << mesh.faces.size() << " faces)\n";
      return 0;
    }

    if (*ver || *repc) {
      FamilySpec spec = resolve_spec(*ver ? ver_fo : rep_fo);
      SuiteSelection suites;
      if (*repc || suite == "all")
        suites = SuiteSelection::all();
      else if (suite == "identities")
        suites.identities = true;
      else if (suite == "ends")
        suites.ends = true;
      else if (suite == "curvature")
        suites.curvature = true;
      else
        fail(Errc::InvalidParameters, "unknown suite " + suite);

      Family fam = make_family(spec, cfg, /*allow_invalid=*/true);
      VerificationReport rep = run_verification(
          fam, suites, cfg, *repc ? rep_samples : n_samples, seed);
      nlohmann::json j = rep.to_json();
      if (*repc && !rep_out.empty()) {
        std::ofstream os(rep_out);
        if (!os) fail(Errc::IoError, "cannot open " + rep_out);
        os << j.dump(2) << "\n";
      }
      std::cout << j.dump(json_out ? -1 : 2) << "\n";
      return rep.pass() ? 0 : kExitSuiteFailure;
    }

    if (*per) {
      std::vector<double> as;
      if (!sweep.empty()) {
        double lo, hi;
        int count;
        if (std::sscanf(sweep.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
            count < 1)
          fail(Errc::InvalidParameters, "sweep must look like 0.1:0.9:9");
        for (int i = 0; i < count; ++i)
          as.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
      } else {
        as.push_back(per_a);
      }
      auto rows = nlohmann::json::array();
      bool mono_up = true, mono_down = true;
      double prev_b = 0;
      for (size_t i = 0; i < as.size(); ++i) {
        double a = as[i];
        if (!(0 < a && a < 1))
          fail(Errc::InvalidParameters, "a must lie in (0,1)");
        TorusPeriodDiagnostics diag;
        torus_period_b(a, cfg, &diag);
        rows.push_back({{"a", a},
                        {"b", diag.b},
                        {"gamma1_residual", diag.gamma1_residual},
                        {"gamma2_real_period", diag.gamma2_real_period},
                        {"ratio_-2I1/I2", diag.ratio_candidate_a},
                        {"ratio_-2I2/I1", diag.ratio_candidate_b},
                        {"matched_ratio", diag.matched_ratio}});
        if (i > 0) {
          if (diag.b <= prev_b) mono_up = false;
          if (diag.b >= prev_b) mono_down = false;
        }
        prev_b = diag.b;
      }
      std::string trend =
          mono_up ? "increasing" : (mono_down ? "decreasing" : "none");
      if (json_out) {
        nlohmann::json j{{"rows", rows}};
        if (as.size() > 1) j["monotone_trend"] = trend;
        std::cout << j << "\n";
      } else {
        std::printf("%8s %14s %14s %14s %14s %14s\n", "a", "b(a)", "g1-resid",
                    "g2-re-period", "-2I1/I2", "-2I2/I1");
        for (const auto& r : rows)
          std::printf("%8.4f %14.10f %14.3e %14.3e %14.10f %14.10f\n",
                      r["a"].get<double>(), r["b"].get<double>(),
                      r["gamma1_residual"].get<double>(),
                      r["gamma2_real_period"].get<double>(),
                      r["ratio_-2I1/I2"].get<double>(),
                      r["ratio_-2I2/I1"].get<double>());
        if (as.size() > 1) std::printf("monotone trend: %s\n", trend.c_str());
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitQuadratureFailure;
  }
  return 0;
}
