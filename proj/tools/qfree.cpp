#include <CLI11.hpp>
#include <complex>
#include <cstdio>

#include "qfree/cli_run.hpp"

namespace {

bool parse_complex_flag(const std::string& text, std::complex<double>& out) {
  double re = 0, im = 0;
  char extra = 0;
  const int got = std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &extra);
  if (got != 2) return false;
  out = {re, im};
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of non-hermitian random matrix sums and products: "
               "theory densities, support contours and Monte Carlo checks"};
  app.require_subcommand(1);

  qfree::RunConfig config;
  std::string z_text, w_text;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", config.spec_json, "ensemble spec (JSON)");
    cmd->add_option("--out", config.out, "output path prefix")->capture_default_str();
    cmd->add_option("--threads", config.threads, "worker thread cap (default: all cores)");
    cmd->add_option("--tol", config.tol, "solver tolerance")->capture_default_str();
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&](const std::uint64_t& v) { seed_value = v; seed_given = true; },
           "RNG master seed (fallback: QFREE_SEED, then 12345)");
  };

  CLI::App* density = app.add_subcommand("density", "theory eigenvalue density on a grid");
  density->add_option("--grid", config.grid, "xmin,xmax,ymin,ymax,nx,ny")->required();
  add_common(density);

  CLI::App* contour = app.add_subcommand("contour", "support boundary samples");
  contour->add_option("--phi-samples", config.phi_samples, "angular resolution")
      ->capture_default_str();
  add_common(contour);

  CLI::App* sample = app.add_subcommand("sample", "Monte Carlo eigenvalue draws");
  sample->add_option("--n", config.n, "matrix size")->capture_default_str();
  sample->add_option("--reps", config.reps, "number of draws")->capture_default_str();
  add_common(sample);

  CLI::App* cmp = app.add_subcommand("compare", "theory vs Monte Carlo report");
  cmp->add_option("--grid", config.grid, "xmin,xmax,ymin,ymax,nx,ny")->required();
  cmp->add_option("--phi-samples", config.phi_samples, "angular resolution")
      ->capture_default_str();
  cmp->add_option("--n", config.n, "matrix size")->capture_default_str();
  cmp->add_option("--reps", config.reps, "number of draws")->capture_default_str();
  add_common(cmp);

  CLI::App* greens = app.add_subcommand("greens", "Green's function at one quaternionic point");
  greens->add_option("--z", z_text, "evaluation point, re,im")->required();
  greens->add_option("--w", w_text, "second quaternion component, re,im");
  add_common(greens);

  CLI::App* moments = app.add_subcommand("moments", "Monte Carlo mixed moments of words in X, X†");
  moments->add_option("--words", config.words,
                      "comma-free word list, e.g. --words XX* XXd (use * or d for the dagger)");
  moments->add_option("--n", config.n, "matrix size")->capture_default_str();
  moments->add_option("--reps", config.reps, "number of draws")->capture_default_str();
  add_common(moments);

  CLI11_PARSE(app, argc, argv);

  config.command = app.get_subcommands().front()->get_name();
  if (seed_given) config.seed = seed_value;
  if (!z_text.empty()) {
    std::complex<double> z;
    if (!parse_complex_flag(z_text, z)) {
      std::fprintf(stderr, "qfree: --z expects re,im\n");
      return qfree::kExitUsage;
    }
    config.z = z;
  }
  if (!w_text.empty()) {
    std::complex<double> w;
    if (!parse_complex_flag(w_text, w)) {
      std::fprintf(stderr, "qfree: --w expects re,im\n");
      return qfree::kExitUsage;
    }
    config.w = w;
  }
  return qfree::run(config);
}
