#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace contactmech {

/// Outcome of a max-reduce residual sweep. A functor may return NaN to mark a
/// point as skipped (for example on the H = 0 locus).
struct SweepResult {
  double worst = 0.0;
  long worstIndex = -1;
  long evaluated = 0;
  long skipped = 0;
};

/// Deterministic sample of `count` points uniform in [lo, hi]^dim.
inline std::vector<std::vector<double>> samplePoints(int dim, int count, double lo, double hi,
                                                     std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  auto uniform = [&]() { return (eng() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (auto& v : x) v = lo + (hi - lo) * uniform();
    out.push_back(std::move(x));
  }
  return out;
}

/// Serial reference sweep, kept alongside the parallel kernel for testing.
template <class F>
SweepResult sweepMaxSerial(const std::vector<std::vector<double>>& points, F&& f) {
  SweepResult res;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    double r = f(points[i]);
    if (std::isnan(r)) {
      ++res.skipped;
      continue;
    }
    ++res.evaluated;
    if (r > worst) {
      worst = r;
      res.worstIndex = static_cast<long>(i);
    }
  }
  if (res.evaluated > 0) res.worst = worst;
  return res;
}

/// OpenMP max-reduce over the same points. The reduction is order
/// independent (ties break to the lowest index), so the result matches the
/// serial kernel bit for bit; functors must be pure. Exceptions thrown by a
/// functor are rethrown for the lowest-index failing point.
template <class F>
SweepResult sweepMaxParallel(const std::vector<std::vector<double>>& points, F&& f) {
#ifndef _OPENMP
  return sweepMaxSerial(points, std::forward<F>(f));
#else
  SweepResult res;
  double worst = -std::numeric_limits<double>::infinity();
  long worstIndex = -1;
  long evaluated = 0, skipped = 0;
  std::exception_ptr error;
  long errorIndex = std::numeric_limits<long>::max();
  const long count = static_cast<long>(points.size());

#pragma omp parallel
  {
    double localWorst = -std::numeric_limits<double>::infinity();
    long localIndex = -1;
    long localEval = 0, localSkip = 0;
    std::exception_ptr localError;
    long localErrorIndex = std::numeric_limits<long>::max();

#pragma omp for schedule(static) nowait
    for (long i = 0; i < count; ++i) {
      if (localError) continue;
      try {
        double r = f(points[static_cast<std::size_t>(i)]);
        if (std::isnan(r)) {
          ++localSkip;
        } else {
          ++localEval;
          if (r > localWorst || (r == localWorst && i < localIndex)) {
            localWorst = r;
            localIndex = i;
          }
        }
      } catch (...) {
        localError = std::current_exception();
        localErrorIndex = i;
      }
    }

#pragma omp critical(contactmech_sweep_merge)
    {
      if (localError && localErrorIndex < errorIndex) {
        error = localError;
        errorIndex = localErrorIndex;
      }
      evaluated += localEval;
      skipped += localSkip;
      if (localIndex >= 0 &&
          (localWorst > worst || (localWorst == worst && localIndex < worstIndex))) {
        worst = localWorst;
        worstIndex = localIndex;
      }
    }
  }

  if (error) std::rethrow_exception(error);
  res.evaluated = evaluated;
  res.skipped = skipped;
  res.worstIndex = worstIndex;
  if (evaluated > 0) res.worst = worst;
  return res;
#endif
}

/// Default entry point: parallel when OpenMP is available.
template <class F>
SweepResult sweepMax(const std::vector<std::vector<double>>& points, F&& f) {
  return sweepMaxParallel(points, std::forward<F>(f));
}

}  // namespace contactmech
