#pragma once

#include <cstdint>
#include <span>

#include "qfree/contour.hpp"
#include "qfree/greens.hpp"
#include "qfree/sampling.hpp"

namespace qfree {

/// Normalized 2d histogram: sum over cells of value * cell_area equals the
/// fraction of points falling inside the grid bounds.
DensityGrid histogram_density(std::span<const Complex> points, const GridSpec& grid);

struct ComparisonReport {
  double coverage = 0.0;       // fraction of eigenvalues covered by the dilated support
  double l1_error = 0.0;       // mean |theory - empirical| over compared cells
  double mass_theory = 0.0;
  double mass_empirical = 0.0;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  int cells_compared = 0;
};

struct CompareOptions {
  double dilation = 0.05;          // absorbs finite-N edge smearing
  double min_expected_count = 20;  // cell filter for the L1 comparison
};

ComparisonReport compare(const DensityGrid& theory, const ContourCurve& contour,
                         const SampleBatch& batch, const CompareOptions& opts = {});

}  // namespace qfree
