#include "pnmf/kernels.hpp"

namespace pnmf::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double squared_distance_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void multiplicative_update_scalar(double* f, const double* num, const double* den,
                                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (den[i] > 0.0) f[i] = f[i] * (num[i] / den[i]);
  }
}

void elastic_column_scalar(const double* wt, std::size_t n, std::size_t k, std::size_t u,
                           double max_u, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t v = 0; v < k; ++v) {
      double t = wt[v * n + i];
      if (v == u) t -= max_u;
      acc += t * t;
    }
    out[i] = acc;
  }
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      "scalar",
      axpy_scalar,
      dot_scalar,
      squared_distance_scalar,
      multiplicative_update_scalar,
      elastic_column_scalar,
  };
  return table;
}

}  // namespace pnmf::kernels
