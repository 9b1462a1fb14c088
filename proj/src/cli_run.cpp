#include "qfree/cli_run.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "qfree/csv_io.hpp"
#include "qfree/errors.hpp"
#include "qfree/product.hpp"
#include "qfree/spec_json.hpp"

namespace qfree {

namespace {

constexpr const char* kVersion = "qfree 1.0.0";

GridSpec parse_grid(const std::string& text) {
  GridSpec g{};
  char extra = 0;
  const int got = std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf,%d,%d%c", &g.xmin, &g.xmax, &g.ymin,
                              &g.ymax, &g.nx, &g.ny, &extra);
  if (got != 6) throw std::invalid_argument("grid must be xmin,xmax,ymin,ymax,nx,ny");
  return g;
}

std::uint64_t resolve_seed(const RunConfig& config) {
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("QFREE_SEED")) return std::strtoull(env, nullptr, 10);
  return 12345;
}

struct TheoryArtifacts {
  DensityGrid density;
  bool have_density = false;
};

DensityGrid theory_density(const EnsembleSpec& spec, const GridSpec& grid) {
  if (const auto law = reduce_to_elliptic(spec)) return density_field(*law, grid);
  if (const auto prod = reduce_to_product(spec)) return product_density_field(*prod, grid);
  throw std::invalid_argument(
      "density: spec must reduce to an elliptic law or a product of two elliptic laws");
}

ContourCurve theory_contour(const EnsembleSpec& spec, int phi_samples) {
  if (const auto law = reduce_to_elliptic(spec)) return ellipse_contour(*law, phi_samples);
  if (const auto prod = reduce_to_product(spec)) return product_contour(*prod, phi_samples);
  throw std::invalid_argument(
      "contour: spec must reduce to an elliptic law or a product of two elliptic laws");
}

int run_impl(const RunConfig& config, nlohmann::json& manifest, std::vector<std::string>& outputs) {
  const std::uint64_t seed = resolve_seed(config);
  manifest["seed"] = seed;

  const EnsembleSpec spec =
      config.spec_json.empty() ? EnsembleSpec() : parse_spec(config.spec_json);

  if (config.command == "density") {
    const DensityGrid grid = theory_density(spec, parse_grid(config.grid));
    const std::string path = config.out + ".density.csv";
    write_density_csv(grid, path);
    outputs.push_back(path);
    manifest["mass"] = grid.mass();
    manifest["max_imag_residual"] = grid.max_imag_residual;
    int invalid = 0;
    for (const auto v : grid.valid)
      if (!v) ++invalid;
    manifest["invalid_cells"] = invalid;
    return invalid == 0 ? kExitOk : kExitNoConvergence;
  }

  if (config.command == "contour") {
    const ContourCurve curve = theory_contour(spec, config.phi_samples);
    const std::string path = config.out + ".contour.csv";
    write_contour_csv(curve, path);
    outputs.push_back(path);
    for (const auto& wmsg : curve.warnings) manifest["warnings"].push_back(wmsg);
    bool lost = false;
    for (const auto& b : curve.branches) lost = lost || b.lost;
    return lost ? kExitNoConvergence : kExitOk;
  }

  if (config.command == "sample") {
    if (spec.empty()) throw std::invalid_argument("sample: --spec required");
    const SampleBatch batch = sample_batch(spec, config.n, config.reps, seed);
    const std::string path = config.out + ".eigenvalues.csv";
    write_eigenvalues_csv(batch, path);
    outputs.push_back(path);
    return kExitOk;
  }

  if (config.command == "compare") {
    if (spec.empty()) throw std::invalid_argument("compare: --spec required");
    const GridSpec grid = parse_grid(config.grid);
    const DensityGrid theory = theory_density(spec, grid);
    const ContourCurve contour = theory_contour(spec, config.phi_samples);
    const SampleBatch batch = sample_batch(spec, config.n, config.reps, seed);
    const ComparisonReport report = compare(theory, contour, batch);
    const std::string path = config.out + ".compare.json";
    write_text_file(path, comparison_to_json(report) + "\n");
    outputs.push_back(path);
    return kExitOk;
  }

  if (config.command == "greens") {
    if (spec.empty()) throw std::invalid_argument("greens: --spec required");
    if (!config.z) throw std::invalid_argument("greens: --z required");
    nlohmann::json j;
    const Complex z = *config.z;
    const Complex w = config.w.value_or(Complex(0, 0));
    j["z"] = {z.real(), z.imag()};
    j["w"] = {w.real(), w.imag()};
    if (const auto law = reduce_to_elliptic(spec)) {
      const GreensResult res = solve_quaternionic_greens(*law, Quaternion{z, w});
      j["G"] = {res.value.first.real(), res.value.first.imag()};
      j["Gamma"] = {res.value.second.real(), res.value.second.imag()};
      j["regime"] = res.regime == Regime::Interior ? "interior" : "exterior";
      j["residual"] = res.residual;
      j["iterations"] = res.iterations;
    } else if (const auto prod = reduce_to_product(spec)) {
      if (std::abs(w) != 0.0)
        throw std::invalid_argument("greens: products are evaluated at w = 0");
      const ProductPointSolution sol = multiplication_law_solve(*prod, z);
      j["G"] = {sol.g_ab.real(), sol.g_ab.imag()};
      j["Gamma"] = {sol.gamma_ab.real(), sol.gamma_ab.imag()};
      j["w_a"] = {sol.w_a.real(), sol.w_a.imag()};
      j["w_b"] = {sol.w_b.real(), sol.w_b.imag()};
      j["v_a"] = sol.v_a;
      j["v_b"] = sol.v_b;
      j["regime"] = sol.regime == Regime::Interior ? "interior" : "exterior";
      j["residual"] = sol.residual;
      j["iterations"] = sol.iterations;
    } else {
      throw std::invalid_argument("greens: unsupported spec");
    }
    const std::string path = config.out + ".greens.json";
    write_text_file(path, j.dump(2) + "\n");
    outputs.push_back(path);
    return kExitOk;
  }

  if (config.command == "moments") {
    if (spec.empty()) throw std::invalid_argument("moments: --spec required");
    if (config.words.empty()) throw std::invalid_argument("moments: --words required");
    nlohmann::json j;
    j["n"] = config.n;
    j["reps"] = config.reps;
    j["seed"] = seed;
    for (const auto& word : config.words) {
      const Complex m = mixed_moment(spec, word, config.n, config.reps, seed);
      j["moments"][word] = {m.real(), m.imag()};
    }
    const std::string path = config.out + ".moments.json";
    write_text_file(path, j.dump(2) + "\n");
    outputs.push_back(path);
    return kExitOk;
  }

  throw std::invalid_argument("unknown command \"" + config.command + "\"");
}

}  // namespace

int run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.threads > 0) omp_set_num_threads(config.threads);

  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = config.command;
  manifest["spec"] = config.spec_json;
  manifest["grid"] = config.grid;
  manifest["phi_samples"] = config.phi_samples;
  manifest["n"] = config.n;
  manifest["reps"] = config.reps;
  manifest["tol"] = config.tol;
  manifest["threads"] = config.threads;
  std::vector<std::string> outputs;

  int code = kExitOk;
  std::string error;
  try {
    code = run_impl(config, manifest, outputs);
  } catch (const NoConvergenceError& e) {
    error = e.what();
    code = kExitNoConvergence;
  } catch (const std::invalid_argument& e) {
    error = e.what();
    code = kExitUsage;
  } catch (const std::runtime_error& e) {
    error = e.what();
    code = kExitIo;
  }
  if (!error.empty()) {
    manifest["error"] = error;
    std::fprintf(stderr, "qfree: %s\n", error.c_str());
  }

  const auto t1 = std::chrono::steady_clock::now();
  manifest["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  manifest["outputs"] = outputs;
  manifest["exit_code"] = code;
  try {
    write_text_file(config.out + ".manifest.json", manifest.dump(2) + "\n");
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "qfree: %s\n", e.what());
    return kExitIo;
  }
  return code;
}

}  // namespace qfree
