#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfree/quaternion.hpp"

namespace qfree {

/// Parsed command-line request.  `run` validates, executes and writes the
/// declared outputs plus a manifest `<out>.manifest.json`.
struct RunConfig {
  std::string command;  // density | contour | sample | compare | greens | moments
  std::string spec_json;
  std::string grid;  // "xmin,xmax,ymin,ymax,nx,ny"
  int phi_samples = 720;
  int n = 128;
  int reps = 16;
  std::optional<std::uint64_t> seed;  // falls back to QFREE_SEED, then 12345
  double tol = 1e-10;
  std::string out = "out";
  int threads = 0;  // 0 = library default
  std::optional<Complex> z;
  std::optional<Complex> w;
  std::vector<std::string> words;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitIo = 3;

/// Executes the request; never throws (errors map to exit codes, messages go
/// to stderr).
int run(const RunConfig& config);

}  // namespace qfree
