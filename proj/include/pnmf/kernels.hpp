#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace pnmf::kernels {

// Inner-loop primitives. Every ISA variant implements the same table; the
// scalar table is the reference that the vectorized ones are tested against.
//
// `multiplicative_update` and `elastic_column` are required to be bitwise
// identical across variants (no FMA, same operation order), because the
// permutation step branches on exact comparisons of their output. The
// remaining kernels may differ in rounding (reduction order, FMA).
struct KernelTable {
  const char* name;

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum (x[i] - y[i])^2
  double (*squared_distance)(const double* x, const double* y, std::size_t n);
  // f[i] *= num[i] / den[i] where den[i] > 0; f[i] unchanged otherwise
  void (*multiplicative_update)(double* f, const double* num, const double* den, std::size_t n);
  // Squared elastic distance of every sample to archetype u.
  // `wt` holds W transposed (k rows of n samples), out has n entries:
  //   out[i] = sum_{v != u} wt[v][i]^2 + (wt[u][i] - max_u)^2
  // accumulated in ascending v.
  void (*elastic_column)(const double* wt, std::size_t n, std::size_t k, std::size_t u,
                         double max_u, double* out);
};

const KernelTable& scalar();
/// AVX2+FMA table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2();

/// Table used by the library. Chosen once: the best supported variant, unless
/// the PNMF_KERNELS environment variable is "scalar" or "avx2".
const KernelTable& active();
/// Overrides the active table (tests and benchmarks). Not thread-safe with
/// respect to concurrent library calls.
void set_active(const KernelTable& table);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  return active().squared_distance(x.data(), y.data(), x.size());
}

}  // namespace pnmf::kernels
