#pragma once

// Compute kernels with an OpenMP implementation and a serial reference.
// Both variants perform the same floating-point operations in the same
// order per output entry, so their results are bitwise identical.

#include <cstddef>
#include <vector>

#include "rumin/linalg.hpp"

namespace rumin::kernels {

enum class Exec { Serial, Parallel };

/// Applies RUMIN_THREADS (if set) to the OpenMP runtime and pins Eigen to a
/// single thread so that results do not depend on the thread count.
void configure_threads();
int max_threads();

/// (B_t ⊗ I_dim)† · A · (B_s ⊗ I_dim) for a matrix A acting on
/// coframe ⊗ function space in coframe-major order. B_t and B_s are
/// coframe-level bases (typically sparse with few nonzeros per column).
Mat kron_sandwich(const Mat& a, const Mat& bt, const Mat& bs, Eigen::Index dim, Exec exec);

/// P ⊗ I_dim.
Mat kron_lift(const Mat& p, Eigen::Index dim, Exec exec);

/// Runs f(i) for i in [0, count) and stores the results by index, so the
/// output order never depends on scheduling.
template <class F>
auto sweep(std::size_t count, F&& f, Exec exec) -> std::vector<decltype(f(std::size_t{}))> {
  std::vector<decltype(f(std::size_t{}))> out(count);
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  const long long n = static_cast<long long>(count);
  // Larger blocks first keeps the dynamic schedule balanced.
#pragma omp parallel for schedule(dynamic, 1)
  for (long long r = 0; r < n; ++r) {
    const std::size_t i = static_cast<std::size_t>(n - 1 - r);
    out[i] = f(i);
  }
  return out;
}

}  // namespace rumin::kernels
