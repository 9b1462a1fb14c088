#include "qfree/histogram.hpp"

#include <stdexcept>

namespace qfree {

DensityGrid histogram_density(std::span<const Complex> points, const GridSpec& grid) {
  if (grid.nx < 1 || grid.ny < 1 || !(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin))
    throw std::invalid_argument("histogram_density: bad grid");
  DensityGrid out = DensityGrid::zeros(grid);
  if (points.empty()) return out;
  const double dx = out.dx(), dy = out.dy();
  std::vector<std::int64_t> counts(out.values.size(), 0);
  for (const Complex& p : points) {
    const double fx = (p.real() - grid.xmin) / dx;
    const double fy = (p.imag() - grid.ymin) / dy;
    if (fx < 0.0 || fy < 0.0) continue;
    const int ix = int(fx), iy = int(fy);
    if (ix >= grid.nx || iy >= grid.ny) continue;
    ++counts[out.index(ix, iy)];
  }
  const double scale = 1.0 / (double(points.size()) * out.cell_area());
  for (std::size_t i = 0; i < counts.size(); ++i) out.values[i] = double(counts[i]) * scale;
  return out;
}

ComparisonReport compare(const DensityGrid& theory, const ContourCurve& contour,
                         const SampleBatch& batch, const CompareOptions& opts) {
  ComparisonReport report;
  report.n = batch.n;
  report.reps = batch.reps;
  report.seed = batch.seed;

  const GridSpec grid{theory.xmin, theory.xmax, theory.ymin, theory.ymax, theory.nx, theory.ny};
  const DensityGrid empirical = histogram_density(batch.eigs, grid);

  const ContourIndex support(contour);
  std::size_t covered = 0;
  for (const Complex& z : batch.eigs)
    if (support.covered(z, opts.dilation)) ++covered;
  report.coverage = batch.eigs.empty() ? 0.0 : double(covered) / double(batch.eigs.size());

  const double total_points = double(batch.eigs.size());
  double l1 = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < theory.values.size(); ++i) {
    if (!theory.valid[i]) continue;
    const double expected = std::max(theory.values[i], 0.0) * theory.cell_area() * total_points;
    if (expected < opts.min_expected_count) continue;
    l1 += std::abs(std::max(theory.values[i], 0.0) - empirical.values[i]);
    ++cells;
  }
  report.l1_error = cells > 0 ? l1 / cells : 0.0;
  report.cells_compared = cells;
  report.mass_theory = theory.mass();
  report.mass_empirical = empirical.mass();
  return report;
}

}  // namespace qfree
