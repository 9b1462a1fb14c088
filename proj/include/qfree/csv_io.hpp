#pragma once

#include <string>

#include "qfree/contour.hpp"
#include "qfree/greens.hpp"
#include "qfree/histogram.hpp"
#include "qfree/sampling.hpp"

namespace qfree {

/// All data files start with the schema line `# qfree-csv v1` and print
/// doubles with 17 significant digits so values round-trip exactly.

/// Header re,im,rho,valid; row-major over cells (y outer, x inner).  Negative
/// stencil noise is clipped to 0 on output.
void write_density_csv(const DensityGrid& grid, const std::string& path);

/// Header branch,phi,r,re,im.
void write_contour_csv(const ContourCurve& curve, const std::string& path);

/// Header rep,index,re,im.
void write_eigenvalues_csv(const SampleBatch& batch, const std::string& path);

std::string comparison_to_json(const ComparisonReport& report);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qfree
