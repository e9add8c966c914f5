#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnfuse/bounds.hpp"
#include "cnfuse/families.hpp"
#include "cnfuse/fusion.hpp"
#include "cnfuse/geometry.hpp"
#include "cnfuse/io.hpp"
#include "cnfuse/verify.hpp"

namespace {

using namespace cnfuse;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitParams = 3;
constexpr int kExitNotPd = 4;
constexpr int kExitViolation = 5;

struct RunConfig {
  std::string p1_path;
  std::string p2_path;
  std::string rule = "dual";
  std::string family = "common_noise";
  std::string criterion = "trace";
  std::optional<double> mu;
  std::optional<double> omega;
  std::optional<double> lambda;
  std::optional<double> w;
  long samples = 1000;
  std::uint64_t seed = 42;
  std::string out_dir;
};

SymMatrix example_p1() {
  Matrix a(2, 2);
  a << 9, 3, 3, 4;
  return SymMatrix(a);
}

SymMatrix example_p2() {
  Matrix a(2, 2);
  a << 4, -3, -3, 9;
  return SymMatrix(a);
}

fs::path resolve_out_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("CNFUSE_OUT_DIR")) return env;
  return fs::current_path();
}

std::pair<SymMatrix, SymMatrix> load_inputs(const RunConfig& cfg) {
  SymMatrix p1 =
      cfg.p1_path.empty() ? example_p1() : read_matrix_file(cfg.p1_path);
  SymMatrix p2 =
      cfg.p2_path.empty() ? example_p2() : read_matrix_file(cfg.p2_path);
  if (p1.dim() != p2.dim()) {
    throw std::invalid_argument("P1 and P2 must have the same dimension");
  }
  if (min_eigenvalue(p1) <= 0.0 || min_eigenvalue(p2) <= 0.0) {
    throw std::domain_error("input matrices must be positive definite");
  }
  return {std::move(p1), std::move(p2)};
}

BoundRule parse_rule(const std::string& rule) {
  if (rule == "dual") return BoundRule::kDual;
  if (rule == "ci") return BoundRule::kCi;
  if (rule == "ici") return BoundRule::kIci;
  throw std::invalid_argument("unknown rule: " + rule);
}

BoundParams params_from_config(const RunConfig& cfg) {
  BoundParams bp;
  bp.mu = cfg.mu.value_or(1.0);
  bp.omega = cfg.omega.value_or(0.5);
  bp.lam = cfg.lambda.value_or(1.0);
  bp.w = cfg.w.value_or(weight_from_lambda(bp.lam));
  return bp;
}

void print_matrix(std::ostream& out, const std::string& name,
                  const Matrix& a) {
  out << name << " (" << a.rows() << "x" << a.cols() << "):\n";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out << (j ? " " : "  ") << format_double(a(i, j));
    }
    out << "\n";
  }
}

int cmd_bounds(const RunConfig& cfg) {
  const auto [p1, p2] = load_inputs(cfg);
  const BoundParams bp = params_from_config(cfg);
  const SymMatrix m = bound_for_rule(p1, p2, parse_rule(cfg.rule), bp);

  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  write_matrix_file(dir / "bound.json", m, "bound_" + cfg.rule);

  std::ofstream report(dir / "bound_report.txt");
  report << "rule: " << cfg.rule << "\n";
  if (cfg.rule == "ci") {
    report << "lambda: " << format_double(bp.lam) << "\n";
  } else {
    report << "mu: " << format_double(bp.mu) << "\n";
    report << "omega: " << format_double(bp.omega) << "\n";
  }
  report << "dim: " << m.dim() << "\n";
  report << "min_eigenvalue: " << format_double(min_eigenvalue(m)) << "\n";
  report << "spectral_norm: " << format_double(spectral_norm(m)) << "\n";
  std::cout << "wrote " << (dir / "bound.json").string() << "\n";
  return kExitOk;
}

int cmd_fuse(const RunConfig& cfg) {
  const auto [p1, p2] = load_inputs(cfg);
  const BoundRule rule = parse_rule(cfg.rule);
  const bool explicit_params =
      cfg.mu || cfg.omega || cfg.lambda || cfg.w;

  FusionResult result;
  if (explicit_params) {
    const BoundParams bp = params_from_config(cfg);
    const SymMatrix m = bound_for_rule(p1, p2, rule, bp);
    result.weight =
        cfg.w ? ci_weights(p1, p2, *cfg.w) : weight_from_bound(m);
    result.fused_bound = fused_bound(result.weight, m);
    result.fused_lower = fused_lower(result.weight, p1, p2);
    result.params = bp;
    result.criterion_value = cfg.criterion == "det"
                                 ? result.fused_bound.m().determinant()
                                 : result.fused_bound.m().trace();
  } else {
    const Criterion crit =
        cfg.criterion == "det" ? Criterion::kDet : Criterion::kTrace;
    result = optimize_bound(p1, p2, rule, crit);
  }

  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  std::ofstream out(dir / "fusion_result.txt");
  out << "rule: " << cfg.rule << "\n";
  out << "criterion: " << cfg.criterion << "\n";
  out << "criterion_value: " << format_double(result.criterion_value) << "\n";
  if (cfg.rule == "ci") {
    out << "lambda: " << format_double(result.params.lam) << "\n";
    out << "w: " << format_double(result.params.w) << "\n";
  } else {
    out << "mu: " << format_double(result.params.mu) << "\n";
    out << "omega: " << format_double(result.params.omega) << "\n";
  }
  out << "regularity_defect: "
      << format_double(result.weight.regularity_defect()) << "\n";
  print_matrix(out, "W1", result.weight.W1);
  print_matrix(out, "W2", result.weight.W2);
  print_matrix(out, "fused_bound", result.fused_bound.m());
  if (result.fused_lower) {
    print_matrix(out, "fused_lower", result.fused_lower->m());
  }
  std::cout << "wrote " << (dir / "fusion_result.txt").string() << "\n";
  return kExitOk;
}

std::vector<CorrelationFamily> families_from_config(const RunConfig& cfg) {
  if (cfg.family == "rank1") return {CorrelationFamily::kCommonNoiseRank1};
  if (cfg.family == "omega") return {CorrelationFamily::kCommonNoiseOmega};
  if (cfg.family == "ci_general") return {CorrelationFamily::kCiGeneral};
  if (cfg.family == "ici") return {CorrelationFamily::kIci};
  if (cfg.family == "common_noise") {
    return {CorrelationFamily::kCommonNoiseRank1,
            CorrelationFamily::kCommonNoiseOmega};
  }
  throw std::invalid_argument("unknown family: " + cfg.family);
}

const char* family_name(CorrelationFamily f) {
  switch (f) {
    case CorrelationFamily::kCommonNoiseRank1: return "rank1";
    case CorrelationFamily::kCommonNoiseOmega: return "omega";
    case CorrelationFamily::kCiGeneral: return "ci_general";
    case CorrelationFamily::kIci: return "ici";
  }
  return "?";
}

int cmd_verify(const RunConfig& cfg) {
  const auto [p1, p2] = load_inputs(cfg);
  const BoundRule rule = parse_rule(cfg.rule);
  const std::vector<CorrelationFamily> families = families_from_config(cfg);

  // Parameter grid: explicit parameters if given, else the default sweep.
  std::vector<BoundParams> grid;
  if (cfg.mu || cfg.omega || cfg.lambda) {
    grid.push_back(params_from_config(cfg));
  } else if (rule == BoundRule::kCi) {
    for (double lam : {1.0 / 3.0, 1.0, 3.0}) {
      BoundParams bp;
      bp.lam = lam;
      grid.push_back(bp);
    }
  } else {
    for (double mu : {0.1, 1.0 / 3.0, 1.0, 3.0, 10.0}) {
      for (double om : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        BoundParams bp;
        bp.mu = mu;
        bp.omega = om;
        grid.push_back(bp);
      }
    }
  }

  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  std::ofstream report(dir / "verify_report.txt");
  bool violation = false;
  for (const BoundParams& bp : grid) {
    const SymMatrix m = bound_for_rule(p1, p2, rule, bp);
    const double scale = spectral_norm(m);
    for (CorrelationFamily fam : families) {
      const VerifyReport r =
          verify_upper(m, family_sampler(fam, p1, p2), cfg.samples, cfg.seed);
      const bool bad = r.violated(scale);
      violation = violation || bad;
      report << "rule=" << cfg.rule << " family=" << family_name(fam);
      if (rule == BoundRule::kCi) {
        report << " lambda=" << format_double(bp.lam);
      } else {
        report << " mu=" << format_double(bp.mu)
               << " omega=" << format_double(bp.omega);
      }
      report << " samples=" << r.n_samples
             << " min_margin=" << format_double(r.min_margin)
             << " worst_sample=" << r.worst_sample
             << (bad ? " VIOLATION" : " ok") << "\n";
    }
  }
  std::cout << "wrote " << (dir / "verify_report.txt").string() << "\n";
  return violation ? kExitViolation : kExitOk;
}

int cmd_figures(const RunConfig& cfg) {
  const auto [p1, p2] = load_inputs(cfg);
  if (p1.dim() != 2) {
    throw std::invalid_argument("figures: 2x2 inputs required");
  }
  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  constexpr int kPts = 256;
  const auto ell = [&](const SymMatrix& s, const std::string& label) {
    return ellipse_boundary(s, kPts, label);
  };

  // Fig. 1: individual ellipses, four maximal rank-1 members (segments)
  // and their ideal fusions.
  {
    std::vector<EllipsePolyline> polys{ell(p1, "P1"), ell(p2, "P2")};
    const double pi = std::numbers::pi;
    const std::vector<std::pair<double, std::string>> phis{
        {-pi / 4, "-pi4"}, {0.0, "0"}, {pi / 4, "pi4"}, {pi / 2, "pi2"}};
    for (const auto& [phi, tag] : phis) {
      Vector x(2);
      x << std::cos(phi), std::sin(phi);
      const AdmissibleX ax = sample_rank1(p1, p2, x);
      polys.push_back(ell(ax.X, "X_phi_" + tag));
      const FusionResult ideal = ideal_fusion(joint_from_x(p1, p2, ax));
      polys.push_back(ell(ideal.fused_bound, "ideal_phi_" + tag));
    }
    write_polylines_csv(dir / "fig1.csv", polys);
  }

  // Fig. 2: Omega-family members; the ellipses coincide with the ideal
  // fusions, so only the members are emitted.
  {
    std::vector<EllipsePolyline> polys{ell(p1, "P1"), ell(p2, "P2")};
    const OmegaFactorization fac = omega_factorization(p1, p2);
    for (double om : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      Matrix omega(1, 1);
      omega << om;
      polys.push_back(
          ell(sample_omega(fac, omega).X, "X_omega_" + format_double(om)));
    }
    write_polylines_csv(dir / "fig2.csv", polys);
  }

  // Fig. 3: ideally fused upper bounds over the (mu, omega) grid.
  {
    std::vector<EllipsePolyline> polys{ell(p1, "P1"), ell(p2, "P2")};
    for (double om : {0.0, 0.5, 1.0}) {
      const SymMatrix b = b_matrix(p1, p2, om);
      for (double mu : {1.0 / 3.0, 1.0, 3.0}) {
        const SymMatrix m = dual_upper_bound(p1, p2, mu, b);
        const FusionWeight w = weight_from_bound(m);
        polys.push_back(ell(fused_bound(w, m),
                            "Mf_mu_" + format_double(mu) + "_omega_" +
                                format_double(om)));
      }
    }
    write_polylines_csv(dir / "fig3.csv", polys);
  }

  // Fig. 4: fused admissible sets, fused bound families and the fused
  // lower bound, for the CI weight (w = 1/2) and the plain average weight.
  {
    std::vector<EllipsePolyline> polys;
    const Eigen::Index n = 2;
    const std::vector<std::pair<std::string, FusionWeight>> weights{
        {"wci", ci_weights(p1, p2, 0.5)},
        {"avg", FusionWeight::identity_h(0.5 * Matrix::Identity(n, n),
                                         0.5 * Matrix::Identity(n, n))}};
    const int set_samples = static_cast<int>(std::min<long>(cfg.samples, 200));
    for (const auto& [wtag, w] : weights) {
      int idx = 0;
      for (CorrelationFamily fam : {CorrelationFamily::kCommonNoiseRank1,
                                    CorrelationFamily::kCommonNoiseOmega,
                                    CorrelationFamily::kCiGeneral}) {
        for (const SymMatrix& kf :
             fused_set_samples(p1, p2, w, fam, set_samples, cfg.seed)) {
          polys.push_back(ell(kf, "set_" + wtag + "_" +
                                      std::string(family_name(fam)) + "_" +
                                      std::to_string(idx++)));
        }
      }
      for (double mu : {1.0 / 3.0, 1.0, 3.0}) {
        const SymMatrix m = dual_upper_bound(p1, p2, mu, b_matrix(p1, p2, 0.5));
        polys.push_back(
            ell(fused_bound(w, m), "fused_dual_" + wtag + "_mu_" +
                                       format_double(mu)));
        const SymMatrix mci = ci_upper_bound(p1, p2, mu);
        polys.push_back(
            ell(fused_bound(w, mci), "fused_ci_" + wtag + "_lambda_" +
                                         format_double(mu)));
      }
      polys.push_back(ell(fused_lower(w, p1, p2), "lower_" + wtag));
    }
    write_polylines_csv(dir / "fig4.csv", polys);
  }

  std::cout << "wrote figure data to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusion of two estimates under unknown common-noise "
               "correlation: Loewner bounds, fusion weights and figure data"};
  app.require_subcommand(1);

  RunConfig cfg;
  const auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--p1", cfg.p1_path, "Path to the P1 matrix file (JSON)");
    sub->add_option("--p2", cfg.p2_path, "Path to the P2 matrix file (JSON)");
    sub->add_option("--rule", cfg.rule, "Bound family: dual, ci or ici");
    sub->add_option("--mu", cfg.mu, "Scale parameter mu (> 0)");
    sub->add_option("--omega", cfg.omega, "Mixing parameter omega in [0, 1]");
    sub->add_option("--lambda", cfg.lambda, "CI parameter lambda (> 0)");
    sub->add_option("--w", cfg.w, "CI weight w in (0, 1)");
    sub->add_option("--criterion", cfg.criterion,
                    "Optimality criterion: trace or det");
    sub->add_option("--samples", cfg.samples, "Monte-Carlo sample count");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--out", cfg.out_dir,
                    "Output directory (default: $CNFUSE_OUT_DIR or cwd)");
  };

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "Compute a joint upper bound matrix");
  add_common(bounds_cmd);
  CLI::App* fuse_cmd =
      app.add_subcommand("fuse", "Compute fusion weight and fused bounds");
  add_common(fuse_cmd);
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Monte-Carlo dominance verification of bounds");
  add_common(verify_cmd);
  verify_cmd->add_option(
      "--family", cfg.family,
      "Sampled family: rank1, omega, common_noise, ci_general or ici");
  CLI::App* figures_cmd =
      app.add_subcommand("figures", "Emit ellipse polyline CSV files");
  add_common(figures_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitParams;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(cfg);
    if (fuse_cmd->parsed()) return cmd_fuse(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (figures_cmd->parsed()) return cmd_figures(cfg);
  } catch (const MatrixFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParams;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotPd;
  }
  return kExitOk;
}
