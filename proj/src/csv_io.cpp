#include "qfree/csv_io.hpp"

#include <cstdio>
#include <json.hpp>
#include <stdexcept>

namespace qfree {

namespace {

struct File {
  std::FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
  }
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

constexpr const char* kSchemaLine = "# qfree-csv v1\n";

}  // namespace

void write_density_csv(const DensityGrid& grid, const std::string& path) {
  File out(path);
  std::fputs(kSchemaLine, out.f);
  std::fputs("re,im,rho,valid\n", out.f);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t idx = grid.index(ix, iy);
      const double rho = grid.valid[idx] ? std::max(grid.values[idx], 0.0) : 0.0;
      std::fprintf(out.f, "%.17g,%.17g,%.17g,%d\n", grid.x_center(ix), grid.y_center(iy), rho,
                   int(grid.valid[idx]));
    }
}

void write_contour_csv(const ContourCurve& curve, const std::string& path) {
  File out(path);
  std::fputs(kSchemaLine, out.f);
  std::fputs("branch,phi,r,re,im\n", out.f);
  int branch_id = 0;
  for (const auto& branch : curve.branches) {
    for (const auto& s : branch.samples)
      std::fprintf(out.f, "%d,%.17g,%.17g,%.17g,%.17g\n", branch_id, s.phi, s.r, s.z.real(),
                   s.z.imag());
    ++branch_id;
  }
}

void write_eigenvalues_csv(const SampleBatch& batch, const std::string& path) {
  File out(path);
  std::fputs(kSchemaLine, out.f);
  std::fputs("rep,index,re,im\n", out.f);
  for (int rep = 0; rep < batch.reps; ++rep)
    for (int i = 0; i < batch.n; ++i) {
      const Complex& e = batch.eigs[std::size_t(rep) * batch.n + i];
      std::fprintf(out.f, "%d,%d,%.17g,%.17g\n", rep, i, e.real(), e.imag());
    }
}

std::string comparison_to_json(const ComparisonReport& report) {
  nlohmann::json j;
  j["coverage"] = report.coverage;
  j["l1_error"] = report.l1_error;
  j["mass_theory"] = report.mass_theory;
  j["mass_empirical"] = report.mass_empirical;
  j["n"] = report.n;
  j["reps"] = report.reps;
  j["seed"] = report.seed;
  return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  File out(path);
  if (std::fwrite(content.data(), 1, content.size(), out.f) != content.size())
    throw std::runtime_error("short write: " + path);
}

}  // namespace qfree
