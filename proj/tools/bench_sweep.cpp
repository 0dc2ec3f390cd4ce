// Times the serial residual sweep against the OpenMP kernel on the catalog
// oscillator. Both kernels evaluate the same Hamilton-equation residuals, so
// the reported worst values must match exactly.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "contactmech/catalog.hpp"
#include "contactmech/sweep.hpp"

using namespace contactmech;

namespace {

template <class F>
double timeMs(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int points = argc > 1 ? std::stoi(argv[1]) : 20000;
  int repeats = argc > 2 ? std::stoi(argv[2]) : 3;

  CatalogEntry entry = dampedOscillator();
  LagrangianStructure st(entry.lagrangian);
  const VectorFieldExpr& gamma = st.field();
  const ContactLagrangianSystem& sys = entry.lagrangian;
  auto pts = samplePoints(sys.dim(), points, -2.0, 2.0, 42);

  auto residual = [&](const std::vector<double>& pt) {
    Bindings b = sys.bind(pt);
    return st.lagrangeResiduals(gamma, b).maxAbs() / st.scaleAt(b);
  };

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP unavailable; parallel kernel falls back to serial\n");
#endif
  std::printf("points: %d, repeats: %d\n\n", points, repeats);
  std::printf("%-10s %12s %12s %14s\n", "kernel", "time [ms]", "worst", "evaluated");

  SweepResult serial, parallel;
  double tSerial = 1e300, tParallel = 1e300;
  for (int r = 0; r < repeats; ++r) {
    tSerial = std::min(tSerial, timeMs([&] { serial = sweepMaxSerial(pts, residual); }));
    tParallel = std::min(tParallel, timeMs([&] { parallel = sweepMaxParallel(pts, residual); }));
  }
  std::printf("%-10s %12.2f %12.3e %14ld\n", "serial", tSerial, serial.worst, serial.evaluated);
  std::printf("%-10s %12.2f %12.3e %14ld\n", "parallel", tParallel, parallel.worst,
              parallel.evaluated);
  std::printf("\nspeedup: %.2fx\n", tSerial / tParallel);

  bool match = serial.worst == parallel.worst && serial.worstIndex == parallel.worstIndex &&
               serial.evaluated == parallel.evaluated;
  std::printf("kernels agree: %s\n", match ? "yes" : "NO");
  return match ? 0 : 1;
}
