// Timing comparison of the OpenMP kernels against their serial reference
// implementations.  The parallel and serial paths must produce bit-identical
// results; this tool checks that while it measures.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>

#include "qfree/greens.hpp"
#include "qfree/product.hpp"
#include "qfree/sampling.hpp"

using namespace qfree;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
  const auto t0 = Clock::now();
  f();
  return seconds(t0, Clock::now());
}

bool identical(const DensityGrid& a, const DensityGrid& b) {
  return a.values.size() == b.values.size() &&
         std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0 &&
         std::memcmp(a.valid.data(), b.valid.data(), a.valid.size()) == 0;
}

void report(const char* name, double serial, double parallel, bool match) {
  std::printf("%-28s serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n", name, serial,
              parallel, serial / parallel, match ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", omp_get_max_threads());

  {
    const EllipticLaw law{Complex(0, 0), 1.0, 0.4, 0.3};
    const GridSpec grid{-2.0, 2.0, -1.6, 1.6, 96, 80};
    DensityGrid par, ser;
    const double tp = timed([&] { par = density_field(law, grid); });
    const double ts = timed([&] { ser = density_field_serial(law, grid); });
    report("elliptic density 96x80", ts, tp, identical(par, ser));
  }

  {
    const ProductLaw p{EllipticLaw{Complex(1, 0), 1, 0, 0}, EllipticLaw{Complex(1, 0), 1, 0, 0}};
    const GridSpec grid{-1.2, 3.4, -2.0, 2.0, 72, 64};
    DensityGrid par, ser;
    const double tp = timed([&] { par = product_density_field(p, grid); });
    const double ts = timed([&] { ser = product_density_field_serial(p, grid); });
    report("product density 72x64", ts, tp, identical(par, ser));
  }

  {
    const EnsembleSpec spec = EnsembleSpec::ginibre();
    SampleBatch par, ser;
    const double tp = timed([&] { par = sample_batch(spec, 128, 24, 2024); });
    const double ts = timed([&] { ser = sample_batch_serial(spec, 128, 24, 2024); });
    const bool match = par.eigs.size() == ser.eigs.size() &&
                       std::memcmp(par.eigs.data(), ser.eigs.data(),
                                   par.eigs.size() * sizeof(Complex)) == 0;
    report("eigenvalues 128x24 reps", ts, tp, match);
  }

  return 0;
}
