#pragma once

// Test-only reference computations. Deliberately naive and independent of
// the library's kernel paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "pnmf/matrix.hpp"

namespace oracle {

using pnmf::DenseMatrix;

inline DenseMatrix naive_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double acc = 0.0L;
      for (std::size_t l = 0; l < a.cols(); ++l)
        acc += static_cast<long double>(a(i, l)) * b(l, j);
      c(i, j) = static_cast<double>(acc);
    }
  return c;
}

inline double naive_frobenius(const DenseMatrix& x, const DenseMatrix& approx) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const long double d = static_cast<long double>(x(i, j)) - approx(i, j);
      acc += d * d;
    }
  return static_cast<double>(std::sqrt(acc));
}

// Leibniz expansion over all permutations; fine for k <= 7.
inline double leibniz_determinant(const std::vector<std::vector<double>>& m) {
  const std::size_t k = m.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  long double total = 0.0L;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) inversions += perm[i] > perm[j];
    long double term = inversions % 2 ? -1.0L : 1.0L;
    for (std::size_t i = 0; i < k; ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(total);
}

// Volume by materializing Z: each column the flattened, unit-norm outer
// product w_u h_u^T.
inline double explicit_volume(const DenseMatrix& w, const DenseMatrix& h) {
  const std::size_t k = w.cols(), n = w.rows(), p = h.cols();
  std::vector<std::vector<double>> z(k, std::vector<double>(n * p));
  for (std::size_t u = 0; u < k; ++u) {
    long double norm = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        const double v = w(i, u) * h(u, j);
        z[u][i * p + j] = v;
        norm += static_cast<long double>(v) * v;
      }
    const double s = static_cast<double>(std::sqrt(norm));
    for (double& v : z[u]) v /= s;
  }
  std::vector<std::vector<double>> gram(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      long double acc = 0.0L;
      for (std::size_t e = 0; e < n * p; ++e) acc += static_cast<long double>(z[a][e]) * z[b][e];
      gram[a][b] = static_cast<double>(acc);
    }
  return leibniz_determinant(gram);
}

// d_iu evaluated entry by entry from the definition.
inline double elastic_entry(const DenseMatrix& w, std::size_t i, std::size_t u) {
  double max_u = 0.0;
  for (std::size_t r = 0; r < w.rows(); ++r) max_u = std::max(max_u, w(r, u));
  long double acc = 0.0L;
  for (std::size_t v = 0; v < w.cols(); ++v) {
    const long double t = v == u ? w(i, v) - max_u : w(i, v);
    acc += t * t;
  }
  return static_cast<double>(std::sqrt(acc));
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                 double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

inline bool is_multiset_permutation(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// Smallest number of label disagreements over all relabelings (k <= 7).
inline std::size_t mismatches_up_to_relabel(const std::vector<std::size_t>& a,
                                            const std::vector<std::size_t>& b, std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = a.size();
  do {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < a.size(); ++i) bad += perm[a[i]] != b[i];
    best = std::min(best, bad);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle
